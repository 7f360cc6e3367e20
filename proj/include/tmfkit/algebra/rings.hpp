#pragma once

#include <concepts>
#include <numeric>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmfkit/algebra/descriptor.hpp"
#include "tmfkit/algebra/integer.hpp"

namespace tmfkit {

// A coefficient ring is a small value object that knows how to make and inspect
// its elements; the elements themselves carry +, -, * and ==.
template <class R>
concept CoefficientRing = requires(const R& r, const typename R::element_type& a, const Integer& n) {
    typename R::element_type;
    { r.zero() } -> std::convertible_to<typename R::element_type>;
    { r.one() } -> std::convertible_to<typename R::element_type>;
    { r.from_integer(n) } -> std::convertible_to<typename R::element_type>;
    { r.is_zero(a) } -> std::convertible_to<bool>;
    { r.try_inverse(a) } -> std::same_as<std::optional<typename R::element_type>>;
    { r.try_divide(a, a) } -> std::same_as<std::optional<typename R::element_type>>;
    { r.characteristic() } -> std::convertible_to<Integer>;
    { r.format(a) } -> std::convertible_to<std::string>;
    { r.descriptor() } -> std::convertible_to<RingDescriptor>;
    { a + a } -> std::convertible_to<typename R::element_type>;
    { a - a } -> std::convertible_to<typename R::element_type>;
    { a * a } -> std::convertible_to<typename R::element_type>;
    { -a } -> std::convertible_to<typename R::element_type>;
    { a == a } -> std::convertible_to<bool>;
};

template <class R>
using element_t = typename R::element_type;

template <class R>
element_t<R> power(const R& ring, element_t<R> base, std::uint64_t e)
{
    element_t<R> r = ring.one();
    while (e != 0) {
        if (e & 1U) {
            r = r * base;
        }
        e >>= 1U;
        if (e != 0) {
            base = base * base;
        }
    }
    return r;
}

// True when 1/k exists in the ring for every 1 <= k < n.
template <class R>
bool inverts_integers_below(const R& ring, int n)
{
    for (int k = 2; k < n; ++k) {
        if (!ring.try_divide(ring.one(), ring.from_integer(k))) {
            return false;
        }
    }
    return true;
}

class IntegerRing {
public:
    using element_type = Integer;

    Integer zero() const { return 0; }
    Integer one() const { return 1; }
    Integer from_integer(const Integer& n) const { return n; }
    bool is_zero(const Integer& a) const { return a == 0; }
    std::optional<Integer> try_inverse(const Integer& a) const
    {
        if (a == 1 || a == -1) {
            return a;
        }
        return std::nullopt;
    }
    std::optional<Integer> try_divide(const Integer& a, const Integer& b) const
    {
        if (b == 0) {
            return a == 0 ? std::optional<Integer>(0) : std::nullopt;
        }
        if (a % b != 0) {
            return std::nullopt;
        }
        return a / b;
    }
    Integer characteristic() const { return 0; }
    bool is_field() const { return false; }
    std::string format(const Integer& a) const { return a.str(); }
    json to_json(const Integer& a) const { return integer_to_json(a); }
    Integer from_json(const json& j, const std::string& path) const { return json_integer(j, path); }
    RingDescriptor descriptor() const { return integers_descriptor(); }
    friend bool operator==(const IntegerRing&, const IntegerRing&) { return true; }
};

class RationalField {
public:
    using element_type = Rational;

    Rational zero() const { return 0; }
    Rational one() const { return 1; }
    Rational from_integer(const Integer& n) const { return Rational(n); }
    bool is_zero(const Rational& a) const { return a == 0; }
    std::optional<Rational> try_inverse(const Rational& a) const
    {
        if (a == 0) {
            return std::nullopt;
        }
        return Rational(1) / a;
    }
    std::optional<Rational> try_divide(const Rational& a, const Rational& b) const
    {
        if (b == 0) {
            return a == 0 ? std::optional<Rational>(0) : std::nullopt;
        }
        return a / b;
    }
    Integer characteristic() const { return 0; }
    bool is_field() const { return true; }
    std::string format(const Rational& a) const { return to_string(a); }
    json to_json(const Rational& a) const { return rational_to_json(a); }
    Rational from_json(const json& j, const std::string& path) const { return json_rational(j, path); }
    RingDescriptor descriptor() const { return rationals_descriptor(); }
    friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

// Subrings of Q: Z[1/S] for a set of primes S, or Z localized at a prime p.
// Elements are rationals whose denominators are checked on entry.
class LocalizedIntegers {
public:
    using element_type = Rational;

    static LocalizedIntegers inverting(std::vector<Integer> primes)
    {
        LocalizedIntegers r;
        r.desc_ = inverted_descriptor(std::move(primes));
        return r;
    }
    static LocalizedIntegers at_prime(const Integer& p)
    {
        LocalizedIntegers r;
        r.desc_ = localized_descriptor(p);
        return r;
    }

    bool contains(const Rational& a) const { return allowed_unit(mp::denominator(a)); }

    Rational make(const Rational& a) const
    {
        if (!contains(a)) {
            throw arithmetic_error(to_string(a) + " is not in " + describe(desc_));
        }
        return a;
    }

    Rational zero() const { return 0; }
    Rational one() const { return 1; }
    Rational from_integer(const Integer& n) const { return Rational(n); }
    bool is_zero(const Rational& a) const { return a == 0; }
    std::optional<Rational> try_inverse(const Rational& a) const
    {
        if (a == 0 || !allowed_unit(mp::numerator(a))) {
            return std::nullopt;
        }
        return Rational(1) / a;
    }
    std::optional<Rational> try_divide(const Rational& a, const Rational& b) const
    {
        if (b == 0) {
            return a == 0 ? std::optional<Rational>(0) : std::nullopt;
        }
        Rational q = a / b;
        if (!contains(q)) {
            return std::nullopt;
        }
        return q;
    }
    Integer characteristic() const { return 0; }
    bool is_field() const { return false; }
    std::string format(const Rational& a) const { return to_string(a); }
    json to_json(const Rational& a) const { return rational_to_json(a); }
    Rational from_json(const json& j, const std::string& path) const
    {
        const Rational a = json_rational(j, path);
        if (!contains(a)) {
            json_fail(path, to_string(a) + " is not in " + describe(desc_));
        }
        return a;
    }
    RingDescriptor descriptor() const { return desc_; }
    friend bool operator==(const LocalizedIntegers& a, const LocalizedIntegers& b) { return a.desc_ == b.desc_; }

private:
    // Is n (nonzero) a unit of this ring?
    bool allowed_unit(Integer n) const
    {
        if (n < 0) {
            n = -n;
        }
        if (desc_.kind == RingDescriptor::Kind::IntegersLocalized) {
            return n % desc_.modulus != 0;
        }
        for (const auto& p : desc_.inverted) {
            while (n % p == 0) {
                n /= p;
            }
        }
        return n == 1;
    }

    RingDescriptor desc_ = localized_descriptor(3);
};

// Residue in [0, m); m < 2^63.
class Zmod {
public:
    Zmod() = default;
    Zmod(std::uint64_t v, std::uint64_t m) : v_(v), m_(m) {}

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return m_; }

    friend Zmod operator+(const Zmod& a, const Zmod& b)
    {
        std::uint64_t s = a.v_ + b.v_;
        if (s >= a.m_) {
            s -= a.m_;
        }
        return {s, a.m_};
    }
    friend Zmod operator-(const Zmod& a, const Zmod& b) { return {a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.m_ - b.v_, a.m_}; }
    friend Zmod operator*(const Zmod& a, const Zmod& b) { return {mulmod(a.v_, b.v_, a.m_), a.m_}; }
    Zmod operator-() const { return {v_ == 0 ? 0 : m_ - v_, m_}; }
    Zmod& operator+=(const Zmod& b) { return *this = *this + b; }
    Zmod& operator-=(const Zmod& b) { return *this = *this - b; }
    Zmod& operator*=(const Zmod& b) { return *this = *this * b; }
    friend bool operator==(const Zmod& a, const Zmod& b) { return a.v_ == b.v_; }

private:
    std::uint64_t v_ = 0;
    std::uint64_t m_ = 1;
};

// Z/m; a prime modulus gives the field F_p.
class ZmodRing {
public:
    using element_type = Zmod;

    explicit ZmodRing(std::uint64_t m, bool prime_field = false) : m_(m), prime_(prime_field)
    {
        if (m < 2 || m >= (std::uint64_t{1} << 63U)) {
            throw input_error("modulus must lie in [2, 2^63)");
        }
        if (prime_field && !is_prime(m)) {
            throw input_error("not prime: " + std::to_string(m));
        }
    }

    static ZmodRing prime_field(std::uint64_t p) { return ZmodRing(p, true); }

    std::uint64_t modulus() const { return m_; }
    bool is_prime_field() const { return prime_; }

    Zmod zero() const { return {0, m_}; }
    Zmod one() const { return {1, m_}; }
    Zmod from_integer(const Integer& n) const { return {static_cast<std::uint64_t>(mod_floor(n, m_)), m_}; }
    Zmod from_int(std::int64_t n) const
    {
        const auto mm = static_cast<std::int64_t>(m_);
        std::int64_t r = n % mm;
        if (r < 0) {
            r += mm;
        }
        return {static_cast<std::uint64_t>(r), m_};
    }
    bool is_zero(const Zmod& a) const { return a.value() == 0; }
    std::optional<Zmod> try_inverse(const Zmod& a) const
    {
        if (m_ == 1) {
            return zero();
        }
        const std::uint64_t inv = invmod(a.value(), m_);
        if (inv == 0) {
            return std::nullopt;
        }
        return Zmod{inv, m_};
    }
    // Some q with q * b = a, if one exists.
    std::optional<Zmod> try_divide(const Zmod& a, const Zmod& b) const
    {
        const std::uint64_t g = std::gcd(b.value(), m_);
        if (a.value() % g != 0) {
            return std::nullopt;
        }
        const std::uint64_t mg = m_ / g;
        if (mg == 1) {
            return zero();
        }
        const std::uint64_t inv = invmod((b.value() / g) % mg, mg);
        return Zmod{mulmod((a.value() / g) % mg, inv, mg), m_};
    }
    Integer characteristic() const { return Integer(m_); }
    bool is_field() const { return prime_; }
    std::string format(const Zmod& a) const { return std::to_string(a.value()); }
    json to_json(const Zmod& a) const { return json(a.value()); }
    Zmod from_json(const json& j, const std::string& path) const { return from_integer(json_integer(j, path)); }
    RingDescriptor descriptor() const
    {
        return prime_ ? prime_field_descriptor(Integer(m_)) : integers_mod_descriptor(Integer(m_));
    }
    friend bool operator==(const ZmodRing& a, const ZmodRing& b) { return a.m_ == b.m_ && a.prime_ == b.prime_; }

private:
    std::uint64_t m_;
    bool prime_;
};

// Element a + b*theta of F_p[theta]/(theta^2 + c1 theta + c0).
class Fp2 {
public:
    struct Modulus {
        std::uint64_t p = 2;
        std::uint64_t c0 = 1;
        std::uint64_t c1 = 1;
        friend bool operator==(const Modulus&, const Modulus&) = default;
    };

    Fp2() = default;
    Fp2(std::uint64_t a, std::uint64_t b, const Modulus& m) : a_(a), b_(b), m_(m) {}

    std::uint64_t re() const { return a_; }
    std::uint64_t im() const { return b_; }
    const Modulus& field() const { return m_; }
    bool in_prime_field() const { return b_ == 0; }

    friend Fp2 operator+(const Fp2& x, const Fp2& y)
    {
        const std::uint64_t p = x.m_.p;
        return {(x.a_ + y.a_) % p, (x.b_ + y.b_) % p, x.m_};
    }
    friend Fp2 operator-(const Fp2& x, const Fp2& y)
    {
        const std::uint64_t p = x.m_.p;
        return {(x.a_ + p - y.a_) % p, (x.b_ + p - y.b_) % p, x.m_};
    }
    friend Fp2 operator*(const Fp2& x, const Fp2& y)
    {
        const std::uint64_t p = x.m_.p;
        if (p < (std::uint64_t{1} << 20U)) {
            // All partial sums stay below 3 p^2 < 2^62: reduce once per component.
            const std::uint64_t bd = x.b_ * y.b_ % p;
            return {(x.a_ * y.a_ + bd * ((p - x.m_.c0) % p)) % p,
                    (x.a_ * y.b_ + x.b_ * y.a_ + bd * ((p - x.m_.c1) % p)) % p, x.m_};
        }
        const std::uint64_t ac = mulmod(x.a_, y.a_, p);
        const std::uint64_t bd = mulmod(x.b_, y.b_, p);
        const std::uint64_t cross = (mulmod(x.a_, y.b_, p) + mulmod(x.b_, y.a_, p)) % p;
        // theta^2 = -c1 theta - c0
        const std::uint64_t re = (ac + p - mulmod(bd, x.m_.c0, p)) % p;
        const std::uint64_t im = (cross + p - mulmod(bd, x.m_.c1, p)) % p;
        return {re, im, x.m_};
    }
    Fp2 operator-() const { return {(m_.p - a_) % m_.p, (m_.p - b_) % m_.p, m_}; }
    Fp2& operator+=(const Fp2& y) { return *this = *this + y; }
    Fp2& operator-=(const Fp2& y) { return *this = *this - y; }
    Fp2& operator*=(const Fp2& y) { return *this = *this * y; }
    friend bool operator==(const Fp2& x, const Fp2& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

    // Galois conjugate: theta -> -c1 - theta.
    Fp2 conjugate() const
    {
        const std::uint64_t p = m_.p;
        return {(a_ + p - mulmod(b_, m_.c1, p)) % p, (p - b_) % p, m_};
    }

private:
    std::uint64_t a_ = 0;
    std::uint64_t b_ = 0;
    Modulus m_{};
};

class Fp2Field {
public:
    using element_type = Fp2;

    explicit Fp2Field(const RingDescriptor& d)
    {
        if (d.kind != RingDescriptor::Kind::QuadExtField) {
            throw input_error("expected a QuadExtField descriptor");
        }
        m_ = {to_u64(d.modulus), to_u64(d.quad[0]), to_u64(d.quad[1])};
    }

    // The canonical model of F_{p^2}.
    static Fp2Field canonical(std::uint64_t p) { return Fp2Field(finite_field_make(Integer(p), 2)); }

    std::uint64_t p() const { return m_.p; }
    const Fp2::Modulus& modulus() const { return m_; }

    Fp2 zero() const { return {0, 0, m_}; }
    Fp2 one() const { return {1, 0, m_}; }
    Fp2 theta() const { return {0, 1, m_}; }
    Fp2 make(std::uint64_t a, std::uint64_t b) const { return {a % m_.p, b % m_.p, m_}; }
    Fp2 from_integer(const Integer& n) const { return {static_cast<std::uint64_t>(mod_floor(n, m_.p)), 0, m_}; }
    bool is_zero(const Fp2& a) const { return a.re() == 0 && a.im() == 0; }
    Fp2 norm(const Fp2& a) const { return a * a.conjugate(); }
    std::optional<Fp2> try_inverse(const Fp2& a) const
    {
        if (is_zero(a)) {
            return std::nullopt;
        }
        const Fp2 n = norm(a);
        const std::uint64_t ninv = invmod(n.re(), m_.p);
        return a.conjugate() * Fp2{ninv, 0, m_};
    }
    std::optional<Fp2> try_divide(const Fp2& a, const Fp2& b) const
    {
        if (is_zero(b)) {
            return is_zero(a) ? std::optional<Fp2>(zero()) : std::nullopt;
        }
        return a * *try_inverse(b);
    }
    Fp2 frobenius(const Fp2& a) const { return power(*this, a, m_.p); }
    Integer characteristic() const { return Integer(m_.p); }
    bool is_field() const { return true; }
    std::string format(const Fp2& a) const
    {
        if (a.im() == 0) {
            return std::to_string(a.re());
        }
        std::string s = a.im() == 1 ? "x" : std::to_string(a.im()) + "*x";
        if (a.re() != 0) {
            s += " + " + std::to_string(a.re());
        }
        return s;
    }
    json to_json(const Fp2& a) const { return json::array({a.re(), a.im()}); }
    Fp2 from_json(const json& j, const std::string& path) const
    {
        if (j.is_array()) {
            if (j.size() != 2) {
                json_fail(path, "expected [a, b] for a + b*x");
            }
            return {static_cast<std::uint64_t>(mod_floor(json_integer(j[0], path + "/0"), m_.p)),
                    static_cast<std::uint64_t>(mod_floor(json_integer(j[1], path + "/1"), m_.p)), m_};
        }
        return from_integer(json_integer(j, path));
    }
    RingDescriptor descriptor() const { return quad_ext_descriptor(Integer(m_.p), Integer(m_.c0), Integer(m_.c1)); }
    friend bool operator==(const Fp2Field& a, const Fp2Field& b) { return a.m_ == b.m_; }

    // All elements: F_p in residue order, then a + b*x ordered by (b, a).
    std::vector<Fp2> elements() const
    {
        std::vector<Fp2> out;
        out.reserve(m_.p * m_.p);
        for (std::uint64_t b = 0; b < m_.p; ++b) {
            for (std::uint64_t a = 0; a < m_.p; ++a) {
                out.push_back({a, b, m_});
            }
        }
        return out;
    }

private:
    Fp2::Modulus m_;
};

static_assert(CoefficientRing<IntegerRing>);
static_assert(CoefficientRing<RationalField>);
static_assert(CoefficientRing<LocalizedIntegers>);
static_assert(CoefficientRing<ZmodRing>);
static_assert(CoefficientRing<Fp2Field>);

} // namespace tmfkit
