#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tmfkit/algebra/rings.hpp"

namespace tmfkit {

// Dense univariate polynomial, coefficients indexed by degree, no trailing zeros.
template <CoefficientRing R>
class Poly {
public:
    using coeff_type = element_t<R>;

    explicit Poly(R ring) : ring_(std::move(ring)) {}
    Poly(R ring, std::vector<coeff_type> coeffs) : ring_(std::move(ring)), c_(std::move(coeffs)) { normalize(); }

    static Poly constant(const R& ring, const coeff_type& a) { return Poly(ring, {a}); }
    static Poly monomial(const R& ring, const coeff_type& a, std::size_t deg)
    {
        std::vector<coeff_type> c(deg + 1, ring.zero());
        c[deg] = a;
        return Poly(ring, std::move(c));
    }
    static Poly x(const R& ring) { return monomial(ring, ring.one(), 1); }

    const R& ring() const { return ring_; }
    const std::vector<coeff_type>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    coeff_type coeff(std::size_t i) const { return i < c_.size() ? c_[i] : ring_.zero(); }
    coeff_type leading() const { return c_.empty() ? ring_.zero() : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == ring_.one(); }

    coeff_type operator()(const coeff_type& x) const
    {
        coeff_type r = ring_.zero();
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            r = r * x + *it;
        }
        return r;
    }

    Poly derivative() const
    {
        std::vector<coeff_type> d;
        for (std::size_t i = 1; i < c_.size(); ++i) {
            d.push_back(ring_.from_integer(Integer(i)) * c_[i]);
        }
        return Poly(ring_, std::move(d));
    }

    Poly scaled(const coeff_type& a) const
    {
        std::vector<coeff_type> d = c_;
        for (auto& x : d) {
            x = x * a;
        }
        return Poly(ring_, std::move(d));
    }

    friend Poly operator+(const Poly& f, const Poly& g)
    {
        std::vector<coeff_type> r(std::max(f.c_.size(), g.c_.size()), f.ring_.zero());
        for (std::size_t i = 0; i < f.c_.size(); ++i) {
            r[i] = f.c_[i];
        }
        for (std::size_t i = 0; i < g.c_.size(); ++i) {
            r[i] = r[i] + g.c_[i];
        }
        return Poly(f.ring_, std::move(r));
    }
    Poly operator-() const
    {
        std::vector<coeff_type> r = c_;
        for (auto& x : r) {
            x = -x;
        }
        return Poly(ring_, std::move(r));
    }
    friend Poly operator-(const Poly& f, const Poly& g) { return f + (-g); }
    friend Poly operator*(const Poly& f, const Poly& g)
    {
        if (f.c_.empty() || g.c_.empty()) {
            return Poly(f.ring_);
        }
        std::vector<coeff_type> r(f.c_.size() + g.c_.size() - 1, f.ring_.zero());
        for (std::size_t i = 0; i < f.c_.size(); ++i) {
            if (f.ring_.is_zero(f.c_[i])) {
                continue;
            }
            for (std::size_t j = 0; j < g.c_.size(); ++j) {
                r[i + j] = r[i + j] + f.c_[i] * g.c_[j];
            }
        }
        return Poly(f.ring_, std::move(r));
    }
    friend bool operator==(const Poly& f, const Poly& g) { return f.c_ == g.c_; }

    // Exact long division; requires the divisor's leading coefficient to divide
    // each intermediate leading coefficient. Returns nullopt otherwise.
    std::optional<std::pair<Poly, Poly>> try_divmod(const Poly& g) const
    {
        if (g.is_zero()) {
            return std::nullopt;
        }
        std::vector<coeff_type> rem = c_;
        const int dg = g.degree();
        std::vector<coeff_type> quo;
        if (degree() >= dg) {
            quo.assign(static_cast<std::size_t>(degree() - dg + 1), ring_.zero());
        }
        const coeff_type lead = g.leading();
        for (int i = degree(); i >= dg; --i) {
            const coeff_type top = rem[static_cast<std::size_t>(i)];
            if (ring_.is_zero(top)) {
                continue;
            }
            auto q = ring_.try_divide(top, lead);
            if (!q) {
                return std::nullopt;
            }
            quo[static_cast<std::size_t>(i - dg)] = *q;
            for (int j = 0; j <= dg; ++j) {
                auto& slot = rem[static_cast<std::size_t>(i - dg + j)];
                slot = slot - *q * g.c_[static_cast<std::size_t>(j)];
            }
        }
        return std::make_pair(Poly(ring_, std::move(quo)), Poly(ring_, std::move(rem)));
    }

    std::pair<Poly, Poly> divmod(const Poly& g) const
    {
        auto r = try_divmod(g);
        if (!r) {
            throw arithmetic_error("polynomial division by a divisor with non-invertible leading coefficient");
        }
        return *r;
    }

    Poly monic() const
    {
        if (c_.empty()) {
            return *this;
        }
        auto inv = ring_.try_inverse(leading());
        if (!inv) {
            throw arithmetic_error("leading coefficient not invertible");
        }
        return scaled(*inv);
    }

    std::string format(const std::string& var) const
    {
        if (c_.empty()) {
            return "0";
        }
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            const coeff_type& a = c_[static_cast<std::size_t>(i)];
            if (ring_.is_zero(a)) {
                continue;
            }
            std::string cs = ring_.format(a);
            const bool one = a == ring_.one();
            std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
            std::string term;
            if (i == 0) {
                term = cs;
            } else if (one) {
                term = mono;
            } else {
                const bool simple = cs.find_first_of(" +") == std::string::npos;
                term = (simple ? cs : "(" + cs + ")") + "*" + mono;
            }
            if (s.empty()) {
                s = term;
            } else if (term.size() > 1 && term[0] == '-' && term.find(' ') == std::string::npos) {
                s += " - " + term.substr(1);
            } else {
                s += " + " + term;
            }
        }
        return s;
    }

private:
    void normalize()
    {
        while (!c_.empty() && ring_.is_zero(c_.back())) {
            c_.pop_back();
        }
    }

    R ring_;
    std::vector<coeff_type> c_;
};

// R[var] as a coefficient ring in its own right.
template <CoefficientRing R>
class PolyRing {
public:
    using element_type = Poly<R>;

    PolyRing(R base, std::string var) : base_(std::move(base)), var_(std::move(var)) {}

    const R& base() const { return base_; }
    const std::string& variable() const { return var_; }

    Poly<R> zero() const { return Poly<R>(base_); }
    Poly<R> one() const { return Poly<R>::constant(base_, base_.one()); }
    Poly<R> from_integer(const Integer& n) const { return Poly<R>::constant(base_, base_.from_integer(n)); }
    Poly<R> from_base(const element_t<R>& a) const { return Poly<R>::constant(base_, a); }
    Poly<R> gen() const { return Poly<R>::x(base_); }
    bool is_zero(const Poly<R>& a) const { return a.is_zero(); }
    // Only constant units are recognized (exact for domains).
    std::optional<Poly<R>> try_inverse(const Poly<R>& a) const
    {
        if (a.degree() != 0) {
            return std::nullopt;
        }
        auto inv = base_.try_inverse(a.leading());
        if (!inv) {
            return std::nullopt;
        }
        return from_base(*inv);
    }
    std::optional<Poly<R>> try_divide(const Poly<R>& a, const Poly<R>& b) const
    {
        if (a.is_zero()) {
            return zero();
        }
        auto qr = a.try_divmod(b);
        if (!qr || !qr->second.is_zero()) {
            return std::nullopt;
        }
        return qr->first;
    }
    Integer characteristic() const { return base_.characteristic(); }
    bool is_field() const { return false; }
    std::string format(const Poly<R>& a) const { return a.format(var_); }
    json to_json(const Poly<R>& a) const
    {
        json arr = json::array();
        for (const auto& c : a.coeffs()) {
            arr.push_back(base_.to_json(c));
        }
        return arr;
    }
    Poly<R> from_json(const json& j, const std::string& path) const
    {
        if (!j.is_array()) {
            return from_base(base_.from_json(j, path));
        }
        std::vector<element_t<R>> c;
        for (std::size_t i = 0; i < j.size(); ++i) {
            c.push_back(base_.from_json(j[i], path + "/" + std::to_string(i)));
        }
        return Poly<R>(base_, std::move(c));
    }
    RingDescriptor descriptor() const { return polynomial_descriptor(base_.descriptor(), var_); }
    friend bool operator==(const PolyRing& a, const PolyRing& b) { return a.base_ == b.base_ && a.var_ == b.var_; }

private:
    R base_;
    std::string var_;
};

// Monic gcd over a field; gcd(0, 0) = 0.
template <CoefficientRing R>
Poly<R> poly_gcd(Poly<R> f, Poly<R> g)
{
    if (!(f.ring() == g.ring())) {
        throw input_error("poly_gcd: mismatched base rings");
    }
    if (!f.ring().is_field()) {
        throw input_error("poly_gcd: base ring is not a field");
    }
    while (!g.is_zero()) {
        Poly<R> r = f.divmod(g).second;
        f = std::move(g);
        g = std::move(r);
    }
    return f.monic();
}

// Minimal polynomial over F_p of an element of F_{p^2}.
inline Poly<ZmodRing> minimal_polynomial(const Fp2Field& field, const Fp2& a)
{
    const ZmodRing fp = ZmodRing::prime_field(field.p());
    if (a.in_prime_field()) {
        return Poly<ZmodRing>(fp, {-fp.from_integer(Integer(a.re())), fp.one()});
    }
    // (x - a)(x - a^p) = x^2 - (a + a^p) x + a^{p+1}
    const Fp2 conj = field.frobenius(a);
    const Fp2 tr = a + conj;
    const Fp2 nm = a * conj;
    ensure(tr.in_prime_field() && nm.in_prime_field(), "trace or norm left F_p");
    return Poly<ZmodRing>(fp, {Zmod{nm.re(), field.p()}, -Zmod{tr.re(), field.p()}, fp.one()});
}

template <CoefficientRing R>
Poly<R> poly_pow(const Poly<R>& f, std::uint64_t e)
{
    Poly<R> r = Poly<R>::constant(f.ring(), f.ring().one());
    Poly<R> b = f;
    while (e != 0) {
        if (e & 1U) {
            r = r * b;
        }
        e >>= 1U;
        if (e != 0) {
            b = b * b;
        }
    }
    return r;
}

static_assert(CoefficientRing<PolyRing<IntegerRing>>);

} // namespace tmfkit
