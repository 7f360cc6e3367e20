#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "tmfkit/algebra/rings.hpp"

namespace tmfkit {

using Exponent = std::array<int, 3>;

namespace detail {

inline int total_degree(const Exponent& e) { return e[0] + e[1] + e[2]; }

// Number of monomials in nvars variables of total degree < d.
inline std::size_t monomials_below(int nvars, int d)
{
    if (d <= 0) {
        return 0;
    }
    const auto n = static_cast<std::size_t>(d);
    switch (nvars) {
    case 1: return n;
    case 2: return n * (n + 1) / 2;
    default: return n * (n + 1) * (n + 2) / 6;
    }
}

// Graded index: degree first, then lex with the first variable largest.
inline std::size_t monomial_index(int nvars, const Exponent& e)
{
    const int d = total_degree(e);
    switch (nvars) {
    case 1: return static_cast<std::size_t>(e[0]);
    case 2: return monomials_below(2, d) + static_cast<std::size_t>(e[1]);
    default: {
        const auto r = static_cast<std::size_t>(e[1] + e[2]);
        return monomials_below(3, d) + r * (r + 1) / 2 + static_cast<std::size_t>(e[2]);
    }
    }
}

inline std::vector<Exponent> monomial_table(int nvars, int n)
{
    std::vector<Exponent> out;
    out.reserve(monomials_below(nvars, n));
    for (int d = 0; d < n; ++d) {
        if (nvars == 1) {
            out.push_back({d, 0, 0});
        } else if (nvars == 2) {
            for (int j = 0; j <= d; ++j) {
                out.push_back({d - j, j, 0});
            }
        } else {
            for (int r = 0; r <= d; ++r) {
                for (int k = 0; k <= r; ++k) {
                    out.push_back({d - r, r - k, k});
                }
            }
        }
    }
    return out;
}

template <class E>
void add_product(E& acc, const E& a, const E& b)
{
    if constexpr (requires { acc += a * b; }) {
        acc += a * b;
    } else {
        acc = acc + a * b;
    }
}

inline std::vector<std::string> default_names(int nvars)
{
    if (nvars == 1) {
        return {"t"};
    }
    if (nvars == 2) {
        return {"x", "y"};
    }
    return {"x", "y", "z"};
}

} // namespace detail

// Truncated power series in 1-3 variables with total-degree truncation at N.
// A single-variable series may allow negative degrees (Laurent mode).
template <CoefficientRing R>
class Series {
public:
    using coeff_type = element_t<R>;

    Series(R ring, int nvars, int precision, int lowest = 0, std::vector<std::string> names = {})
        : ring_(std::move(ring)), nvars_(nvars), prec_(precision), low_(lowest), names_(std::move(names))
    {
        if (nvars < 1 || nvars > 3) {
            throw input_error("series need between 1 and 3 variables");
        }
        if (lowest != 0 && nvars != 1) {
            throw input_error("Laurent mode is single-variable only");
        }
        if (lowest > 0) {
            throw input_error("lowest allowed degree must be <= 0");
        }
        if (precision < lowest) {
            prec_ = lowest;
        }
        if (names_.empty()) {
            names_ = detail::default_names(nvars);
        }
        if (static_cast<int>(names_.size()) != nvars) {
            throw input_error("variable name count does not match the number of variables");
        }
        c_.assign(slots(prec_), ring_.zero());
    }

    static Series constant(const R& ring, int nvars, int precision, const coeff_type& a)
    {
        Series s(ring, nvars, precision);
        if (precision > 0) {
            s.c_[0] = a;
        }
        return s;
    }
    static Series one(const R& ring, int nvars, int precision) { return constant(ring, nvars, precision, ring.one()); }
    static Series variable(const R& ring, int nvars, int which, int precision)
    {
        Series s(ring, nvars, precision);
        Exponent e{0, 0, 0};
        e[static_cast<std::size_t>(which)] = 1;
        s.set(e, ring.one());
        return s;
    }
    // Univariate series from coefficients starting at degree 0.
    static Series from_coefficients(const R& ring, int precision, const std::vector<coeff_type>& cs)
    {
        Series s(ring, 1, precision);
        for (std::size_t i = 0; i < cs.size() && static_cast<int>(i) < precision; ++i) {
            s.c_[i] = cs[i];
        }
        return s;
    }

    const R& ring() const { return ring_; }
    int nvars() const { return nvars_; }
    int precision() const { return prec_; }
    int lowest_allowed() const { return low_; }
    const std::vector<std::string>& names() const { return names_; }
    Series& rename(std::vector<std::string> names)
    {
        if (static_cast<int>(names.size()) != nvars_) {
            throw input_error("variable name count does not match the number of variables");
        }
        names_ = std::move(names);
        return *this;
    }

    coeff_type coeff(const Exponent& e) const
    {
        const int d = detail::total_degree(e);
        if (d >= prec_ || d < low_) {
            return ring_.zero();
        }
        return c_[index(e)];
    }
    coeff_type operator[](int degree) const { return coeff({degree, 0, 0}); }

    void set(const Exponent& e, const coeff_type& a)
    {
        const int d = detail::total_degree(e);
        if (d < low_) {
            throw input_error("exponent below the lowest allowed degree");
        }
        if (d >= prec_) {
            return;
        }
        c_[index(e)] = a;
    }

    // Nonzero terms in graded order.
    std::vector<std::pair<Exponent, coeff_type>> terms() const
    {
        std::vector<std::pair<Exponent, coeff_type>> out;
        const auto table = exponents();
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!ring_.is_zero(c_[i])) {
                out.emplace_back(table[i], c_[i]);
            }
        }
        return out;
    }

    bool is_zero() const
    {
        return std::all_of(c_.begin(), c_.end(), [&](const coeff_type& a) { return ring_.is_zero(a); });
    }

    // Lowest total degree carrying a nonzero coefficient; precision() if none.
    int valuation() const
    {
        const auto table = exponents();
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!ring_.is_zero(c_[i])) {
                return detail::total_degree(table[i]);
            }
        }
        return prec_;
    }

    Series truncated(int n) const
    {
        if (n >= prec_) {
            return *this;
        }
        Series s(ring_, nvars_, n, low_, names_);
        std::copy_n(c_.begin(), s.c_.size(), s.c_.begin());
        return s;
    }

    // Same series with a lower bound on allowed degrees (Laurent mode).
    Series with_lowest(int lowest) const
    {
        if (lowest > low_) {
            throw input_error("cannot raise the lowest allowed degree");
        }
        Series s(ring_, nvars_, prec_, lowest, names_);
        for (int d = low_; d < prec_; ++d) {
            s.c_[static_cast<std::size_t>(d - lowest)] = c_[static_cast<std::size_t>(d - low_)];
        }
        return s;
    }

    // Homogeneous component of total degree d.
    Series homogeneous_part(int d) const
    {
        Series s(ring_, nvars_, prec_, low_, names_);
        const auto table = exponents();
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (detail::total_degree(table[i]) == d) {
                s.c_[i] = c_[i];
            }
        }
        return s;
    }

    Series scaled(const coeff_type& a) const
    {
        Series s = *this;
        for (auto& x : s.c_) {
            x = x * a;
        }
        return s;
    }

    Series operator-() const
    {
        Series s = *this;
        for (auto& x : s.c_) {
            x = -x;
        }
        return s;
    }

    friend Series operator+(const Series& a, const Series& b) { return a.combine(b, false); }
    friend Series operator-(const Series& a, const Series& b) { return a.combine(b, true); }

    friend Series operator*(const Series& a, const Series& b)
    {
        a.check_compatible(b);
        if (a.nvars_ == 1) {
            return mul_univariate(a, b);
        }
        return mul_multivariate(a, b);
    }

    Series& operator+=(const Series& b) { return *this = *this + b; }
    Series& operator-=(const Series& b) { return *this = *this - b; }
    Series& operator*=(const Series& b) { return *this = *this * b; }

    // Exact equality: same shape, same precision, same coefficients.
    friend bool operator==(const Series& a, const Series& b)
    {
        return a.nvars_ == b.nvars_ && a.prec_ == b.prec_ && a.ring_ == b.ring_ && a.coefficients_equal(b);
    }

    // Agreement on all monomials of total degree < n.
    bool agrees_with(const Series& b, int n) const
    {
        check_compatible(b);
        const int lo = std::min(low_, b.low_);
        for (int d = lo; d < n; ++d) {
            if (nvars_ == 1) {
                if (!(coeff({d, 0, 0}) == b.coeff({d, 0, 0}))) {
                    return false;
                }
            }
        }
        if (nvars_ == 1) {
            return true;
        }
        const auto table = detail::monomial_table(nvars_, n);
        for (const auto& e : table) {
            if (!(coeff(e) == b.coeff(e))) {
                return false;
            }
        }
        return true;
    }

    // First monomial (graded order) where the two differ below degree n.
    std::optional<Exponent> first_difference(const Series& b, int n) const
    {
        check_compatible(b);
        std::vector<Exponent> table;
        if (nvars_ == 1) {
            for (int d = std::min(low_, b.low_); d < n; ++d) {
                table.push_back({d, 0, 0});
            }
        } else {
            table = detail::monomial_table(nvars_, n);
        }
        for (const auto& e : table) {
            if (!(coeff(e) == b.coeff(e))) {
                return e;
            }
        }
        return std::nullopt;
    }

    Series derivative(int var = 0) const
    {
        Series s(ring_, nvars_, std::max(prec_ - 1, low_), low_, names_);
        const auto table = exponents();
        for (std::size_t i = 0; i < c_.size(); ++i) {
            const Exponent& e = table[i];
            const int k = e[static_cast<std::size_t>(var)];
            if (k == 0 || ring_.is_zero(c_[i])) {
                continue;
            }
            Exponent f = e;
            f[static_cast<std::size_t>(var)] -= 1;
            s.set(f, ring_.from_integer(Integer(k)) * c_[i]);
        }
        return s;
    }

    // Antiderivative in one variable; needs exact division by each new exponent.
    Series integral() const
    {
        require_univariate("integral");
        if (low_ < 0) {
            throw input_error("integral is not defined in Laurent mode");
        }
        Series s(ring_, 1, prec_ + 1, 0, names_);
        for (int d = 0; d < prec_; ++d) {
            const coeff_type& a = c_[static_cast<std::size_t>(d)];
            if (ring_.is_zero(a)) {
                continue;
            }
            auto q = ring_.try_divide(a, ring_.from_integer(Integer(d + 1)));
            if (!q) {
                throw arithmetic_error("integral: coefficient of t^" + std::to_string(d) + " not divisible by "
                                       + std::to_string(d + 1));
            }
            s.c_[static_cast<std::size_t>(d + 1)] = *q;
        }
        return s;
    }

    // Replace variable `var` by zero.
    Series at_zero(int var) const
    {
        Series s(ring_, nvars_, prec_, low_, names_);
        const auto table = exponents();
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (table[i][static_cast<std::size_t>(var)] == 0) {
                s.c_[i] = c_[i];
            }
        }
        return s;
    }

    // Same coefficients read in fewer variables (the dropped ones must not occur).
    Series restricted_to(int nvars) const
    {
        Series s(ring_, nvars, prec_, 0, detail::default_names(nvars));
        for (const auto& [e, a] : terms()) {
            for (int v = nvars; v < 3; ++v) {
                if (e[static_cast<std::size_t>(v)] != 0) {
                    throw input_error("restricted_to: series involves a dropped variable");
                }
            }
            s.set(e, a);
        }
        return s;
    }

    // Reorder variables: new variable i is old variable perm[i].
    Series permuted(const std::array<int, 3>& perm) const
    {
        Series s(ring_, nvars_, prec_, low_, names_);
        for (const auto& [e, a] : terms()) {
            Exponent f{0, 0, 0};
            for (int i = 0; i < nvars_; ++i) {
                f[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
            }
            s.set(f, a);
        }
        return s;
    }

    // Embed into more variables: variable i goes to slot map[i].
    Series embedded(int nvars, const std::array<int, 3>& map) const
    {
        Series s(ring_, nvars, prec_, 0, detail::default_names(nvars));
        for (const auto& [e, a] : terms()) {
            Exponent f{0, 0, 0};
            for (int i = 0; i < nvars_; ++i) {
                f[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])] += e[static_cast<std::size_t>(i)];
            }
            s.set(f, a);
        }
        return s;
    }

    std::string format() const
    {
        std::string out;
        for (const auto& [e, a] : terms()) {
            std::string mono;
            for (int v = 0; v < nvars_; ++v) {
                const int k = e[static_cast<std::size_t>(v)];
                if (k == 0) {
                    continue;
                }
                if (!mono.empty()) {
                    mono += "*";
                }
                mono += names_[static_cast<std::size_t>(v)];
                if (k != 1) {
                    mono += "^" + std::to_string(k);
                }
            }
            std::string cs = ring_.format(a);
            const bool simple = cs.find(' ') == std::string::npos;
            std::string term;
            if (mono.empty()) {
                term = cs;
            } else if (a == ring_.one()) {
                term = mono;
            } else if (a == -ring_.one() && simple) {
                term = "-" + mono;
            } else {
                term = (simple ? cs : "(" + cs + ")") + "*" + mono;
            }
            if (out.empty()) {
                out = term;
            } else if (simple && term[0] == '-') {
                out += " - " + term.substr(1);
            } else {
                out += " + " + term;
            }
        }
        if (out.empty()) {
            out = "0";
        }
        return out + " + O(" + std::to_string(prec_) + ")";
    }

    const std::vector<coeff_type>& raw() const { return c_; }
    std::vector<coeff_type>& raw() { return c_; }

    std::vector<Exponent> exponents() const
    {
        if (nvars_ == 1) {
            std::vector<Exponent> t;
            t.reserve(c_.size());
            for (int d = low_; d < prec_; ++d) {
                t.push_back({d, 0, 0});
            }
            return t;
        }
        return detail::monomial_table(nvars_, prec_);
    }

    void require_univariate(const char* what) const
    {
        if (nvars_ != 1) {
            throw input_error(std::string(what) + " requires a single-variable series");
        }
    }

    void check_compatible(const Series& b) const
    {
        if (nvars_ != b.nvars_) {
            throw input_error("series have different numbers of variables");
        }
        if (!(ring_ == b.ring_)) {
            throw input_error("series live over different rings");
        }
    }

private:
    std::size_t slots(int n) const
    {
        if (nvars_ == 1) {
            return static_cast<std::size_t>(std::max(n - low_, 0));
        }
        return detail::monomials_below(nvars_, n);
    }

    std::size_t index(const Exponent& e) const
    {
        if (nvars_ == 1) {
            return static_cast<std::size_t>(e[0] - low_);
        }
        return detail::monomial_index(nvars_, e);
    }

    bool coefficients_equal(const Series& b) const
    {
        const int lo = std::min(low_, b.low_);
        if (nvars_ == 1) {
            for (int d = lo; d < prec_; ++d) {
                if (!(coeff({d, 0, 0}) == b.coeff({d, 0, 0}))) {
                    return false;
                }
            }
            return true;
        }
        return c_ == b.c_;
    }

    Series combine(const Series& b, bool subtract) const
    {
        check_compatible(b);
        const int n = std::min(prec_, b.prec_);
        const int lo = std::min(low_, b.low_);
        Series s(ring_, nvars_, n, lo, names_);
        if (nvars_ == 1) {
            for (int d = lo; d < n; ++d) {
                const coeff_type x = coeff({d, 0, 0});
                const coeff_type y = b.coeff({d, 0, 0});
                s.c_[static_cast<std::size_t>(d - lo)] = subtract ? x - y : x + y;
            }
            return s;
        }
        for (std::size_t i = 0; i < s.c_.size(); ++i) {
            s.c_[i] = subtract ? c_[i] - b.c_[i] : c_[i] + b.c_[i];
        }
        return s;
    }

    static Series mul_univariate(const Series& a, const Series& b)
    {
        const int va = a.valuation();
        const int vb = b.valuation();
        // Known terms: a to degree < Na, b to < Nb; negative valuations cost precision.
        int n = std::min(a.prec_ + std::min(vb, 0), b.prec_ + std::min(va, 0));
        const int lo = a.low_ + b.low_;
        if (a.low_ == 0 && b.low_ == 0) {
            n = std::min(a.prec_, b.prec_);
        }
        Series s(a.ring_, 1, n, lo, a.names_);
        if (n <= lo) {
            return s;
        }
        for (int i = std::max(va, a.low_); i < a.prec_; ++i) {
            const coeff_type& x = a.c_[static_cast<std::size_t>(i - a.low_)];
            if (a.ring_.is_zero(x)) {
                continue;
            }
            const int jmax = n - i;
            for (int j = std::max(vb, b.low_); j < std::min(jmax, b.prec_); ++j) {
                const coeff_type& y = b.c_[static_cast<std::size_t>(j - b.low_)];
                detail::add_product(s.c_[static_cast<std::size_t>(i + j - lo)], x, y);
            }
        }
        return s;
    }

    static Series mul_multivariate(const Series& a, const Series& b)
    {
        const int n = std::min(a.prec_, b.prec_);
        Series s(a.ring_, a.nvars_, n, 0, a.names_);
        const auto table = detail::monomial_table(a.nvars_, n);
        if constexpr (std::is_same_v<coeff_type, Rational>) {
            // Clear denominators so the inner loop runs on integers.
            auto cleared = [&](const Series& x, Integer& den) {
                den = 1;
                for (std::size_t i = 0; i < table.size(); ++i) {
                    den = boost::multiprecision::lcm(den, denominator(x.c_[i]));
                }
                std::vector<Integer> nums(table.size());
                for (std::size_t i = 0; i < table.size(); ++i) {
                    nums[i] = numerator(x.c_[i]) * (den / denominator(x.c_[i]));
                }
                return nums;
            };
            Integer da;
            Integer db;
            const auto na = cleared(a, da);
            const auto nb = cleared(b, db);
            std::vector<Integer> acc(table.size());
            for (std::size_t i = 0; i < table.size(); ++i) {
                if (na[i].is_zero()) {
                    continue;
                }
                const Exponent& ei = table[i];
                const std::size_t limit = detail::monomials_below(a.nvars_, n - detail::total_degree(ei));
                for (std::size_t j = 0; j < limit; ++j) {
                    if (nb[j].is_zero()) {
                        continue;
                    }
                    const Exponent& ej = table[j];
                    const Exponent sum{ei[0] + ej[0], ei[1] + ej[1], ei[2] + ej[2]};
                    acc[detail::monomial_index(a.nvars_, sum)] += na[i] * nb[j];
                }
            }
            const Integer d = da * db;
            for (std::size_t i = 0; i < table.size(); ++i) {
                if (!acc[i].is_zero()) {
                    s.c_[i] = Rational(acc[i], d);
                }
            }
            return s;
        }
        for (std::size_t i = 0; i < table.size(); ++i) {
            const coeff_type& x = a.c_[i];
            if (a.ring_.is_zero(x)) {
                continue;
            }
            const Exponent& ei = table[i];
            const std::size_t limit = detail::monomials_below(a.nvars_, n - detail::total_degree(ei));
            for (std::size_t j = 0; j < limit; ++j) {
                const coeff_type& y = b.c_[j];
                if (b.ring_.is_zero(y)) {
                    continue;
                }
                const Exponent& ej = table[j];
                const Exponent sum{ei[0] + ej[0], ei[1] + ej[1], ei[2] + ej[2]};
                detail::add_product(s.c_[detail::monomial_index(a.nvars_, sum)], x, y);
            }
        }
        return s;
    }

    R ring_;
    int nvars_;
    int prec_;
    int low_;
    std::vector<std::string> names_;
    std::vector<coeff_type> c_;
};

namespace detail {

// Copy into a higher precision with unknown coefficients read as zero. Only for
// Newton corrections where the missing terms provably do not matter.
template <CoefficientRing R>
Series<R> zero_extended(const Series<R>& s, int m)
{
    Series<R> r(s.ring(), s.nvars(), m, s.lowest_allowed(), s.names());
    for (const auto& [e, a] : s.terms()) {
        r.set(e, a);
    }
    return r;
}

} // namespace detail

// Apply a ring map coefficientwise.
template <CoefficientRing R, CoefficientRing S, class Fn>
Series<S> map_coefficients(const Series<R>& s, const S& target, Fn&& fn)
{
    Series<S> r(target, s.nvars(), s.precision(), s.lowest_allowed(), s.names());
    for (const auto& [e, a] : s.terms()) {
        r.set(e, fn(a));
    }
    return r;
}

// f(g) for univariate f and g of positive valuation; precision min(N_f, N_g).
template <CoefficientRing R>
Series<R> compose(const Series<R>& f, const Series<R>& g)
{
    f.require_univariate("compose");
    if (f.lowest_allowed() < 0) {
        throw input_error("compose: outer series must not be Laurent");
    }
    const R& ring = f.ring();
    if (g.lowest_allowed() < 0 || g.valuation() < 1) {
        throw input_error("composition requires positive valuation");
    }
    const int n = std::min(f.precision(), g.precision());
    if (n <= 0) {
        return Series<R>(ring, g.nvars(), 0, 0, g.names());
    }
    Series<R> gg = g.truncated(n);
    Series<R> acc = Series<R>::constant(ring, g.nvars(), n, f[n - 1]);
    acc.rename(gg.names());
    for (int i = n - 2; i >= 0; --i) {
        acc = acc * gg;
        Exponent zero{0, 0, 0};
        acc.set(zero, acc.coeff(zero) + f[i]);
    }
    return acc;
}

// Substitute series args[i] for variable i of F. All args share a shape and have positive valuation.
template <CoefficientRing R>
Series<R> substitute(const Series<R>& F, const std::vector<Series<R>>& args)
{
    if (static_cast<int>(args.size()) != F.nvars()) {
        throw input_error("substitute: wrong number of arguments");
    }
    if (F.nvars() == 1) {
        return compose(F, args[0]);
    }
    const R& ring = F.ring();
    int n = F.precision();
    for (const auto& a : args) {
        if (a.valuation() < 1 || a.lowest_allowed() < 0) {
            throw input_error("composition requires positive valuation");
        }
        n = std::min(n, a.precision());
        a.check_compatible(args[0]);
    }
    const int k = args[0].nvars();
    // Horner in the first variable; inner sums are linear combinations of powers.
    std::vector<std::vector<Series<R>>> powers(args.size());
    for (std::size_t v = 1; v < args.size(); ++v) {
        powers[v].push_back(Series<R>::one(ring, k, n));
        for (int e = 1; e < n; ++e) {
            powers[v].push_back(powers[v].back() * args[v].truncated(n));
        }
    }
    const auto terms = F.terms();
    // Group coefficients by the exponent of the first variable.
    std::vector<Series<R>> inner(static_cast<std::size_t>(n), Series<R>(ring, k, n));
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (const auto& [e, a] : terms) {
        if (detail::total_degree(e) >= n) {
            continue;
        }
        Series<R> mono = powers[1][static_cast<std::size_t>(e[1])].scaled(a);
        if (args.size() == 3 && e[2] != 0) {
            mono = mono * powers[2][static_cast<std::size_t>(e[2])];
        }
        auto& slot = inner[static_cast<std::size_t>(e[0])];
        auto& sr = slot.raw();
        const auto& mr = mono.raw();
        for (std::size_t i = 0; i < sr.size(); ++i) {
            if (!ring.is_zero(mr[i])) {
                sr[i] = sr[i] + mr[i];
            }
        }
        used[static_cast<std::size_t>(e[0])] = true;
    }
    const Series<R> x = args[0].truncated(n);
    Series<R> acc(ring, k, n);
    for (int i = n - 1; i >= 0; --i) {
        if (!acc.is_zero()) {
            acc = acc * x;
        }
        if (used[static_cast<std::size_t>(i)]) {
            acc = acc + inner[static_cast<std::size_t>(i)];
        }
    }
    acc.rename(args[0].names());
    return acc;
}

// q with q*g = f. Precision drops by the valuation of g. For single-variable series the
// quotient may start at `lowest` (< 0 only in Laurent mode).
template <CoefficientRing R>
Series<R> divide_exact(const Series<R>& f, const Series<R>& g, int lowest = 0)
{
    f.check_compatible(g);
    const R& ring = f.ring();
    const int vg = g.valuation();
    if (vg >= g.precision()) {
        throw arithmetic_error("not divisible: divisor is zero to its precision");
    }
    if (f.nvars() == 1) {
        // q has relative precision at most that of g, which bites when val(f) < val(g).
        const int vf = std::min(f.valuation(), f.precision());
        const int n = std::min(f.precision() - vg, std::min(vf, vg) + g.precision() - 2 * vg);
        const int lo = std::min(lowest, f.lowest_allowed() - vg);
        if (lowest > 0) {
            throw input_error("lowest allowed degree must be <= 0");
        }
        Series<R> q(ring, 1, n, lowest, f.names());
        const element_t<R> lead = g[vg];
        // q_k = (f_{k+vg} - sum_{i<k} q_i g_{vg+k-i}) / g_vg
        const int start = std::min(f.valuation(), f.precision()) - vg;
        for (int k = lo; k < n; ++k) {
            element_t<R> acc = f[k + vg];
            for (int i = std::max(start, lowest); i < k; ++i) {
                const element_t<R> qi = q[i];
                if (!ring.is_zero(qi)) {
                    acc = acc - qi * g[vg + k - i];
                }
            }
            if (ring.is_zero(acc)) {
                continue;
            }
            if (k < lowest) {
                throw arithmetic_error("not divisible");
            }
            auto c = ring.try_divide(acc, lead);
            if (!c) {
                throw arithmetic_error("not divisible: coefficient of degree " + std::to_string(k + vg));
            }
            q.set({k, 0, 0}, *c);
        }
        return q;
    }
    // Multivariate: peel off one homogeneous degree at a time, dividing by the
    // lowest-degree form of g with lex-leading-term division.
    const int n = std::min(f.precision(), g.precision()) - vg;
    const Series<R> gv = g.homogeneous_part(vg);
    const auto gv_terms = gv.terms();
    const auto& [lead_e, lead_c] = gv_terms.front(); // graded order = lex-largest first within degree
    Series<R> q(ring, f.nvars(), n, 0, f.names());
    Series<R> rem = f;
    for (int d = 0; d < n; ++d) {
        auto part = rem.homogeneous_part(d + vg).terms();
        Series<R> qd(ring, f.nvars(), n + vg, 0, f.names());
        // Exact division of a homogeneous polynomial by gv.
        while (!part.empty()) {
            const auto& [e, a] = part.front();
            Exponent m{e[0] - lead_e[0], e[1] - lead_e[1], e[2] - lead_e[2]};
            if (m[0] < 0 || m[1] < 0 || m[2] < 0) {
                throw arithmetic_error("not divisible");
            }
            auto c = ring.try_divide(a, lead_c);
            if (!c) {
                throw arithmetic_error("not divisible");
            }
            qd.set(m, qd.coeff(m) + *c);
            // subtract c * m * gv from part
            std::vector<std::pair<Exponent, element_t<R>>> next;
            std::size_t i = 0;
            std::vector<std::pair<Exponent, element_t<R>>> sub;
            for (const auto& [ge, gc] : gv_terms) {
                sub.emplace_back(Exponent{ge[0] + m[0], ge[1] + m[1], ge[2] + m[2]}, *c * gc);
            }
            // merge in graded order (index order)
            auto idx = [&](const Exponent& x) { return detail::monomial_index(f.nvars(), x); };
            std::size_t j = 0;
            while (i < part.size() || j < sub.size()) {
                if (j == sub.size() || (i < part.size() && idx(part[i].first) < idx(sub[j].first))) {
                    next.push_back(part[i++]);
                } else if (i == part.size() || idx(sub[j].first) < idx(part[i].first)) {
                    next.emplace_back(sub[j].first, -sub[j].second);
                    ++j;
                } else {
                    element_t<R> v = part[i].second - sub[j].second;
                    if (!ring.is_zero(v)) {
                        next.emplace_back(part[i].first, v);
                    }
                    ++i;
                    ++j;
                }
            }
            part = std::move(next);
        }
        if (!qd.is_zero()) {
            q = q + qd.truncated(n);
            rem = rem - qd * g;
        }
    }
    return q;
}

// Compositional inverse of a univariate series with valuation 1 and unit linear coefficient.
template <CoefficientRing R>
Series<R> reverse(const Series<R>& f)
{
    f.require_univariate("reverse");
    const R& ring = f.ring();
    const int n = f.precision();
    if (f.lowest_allowed() < 0 || !ring.is_zero(f[0]) || n < 2) {
        throw input_error("reverse requires valuation exactly 1");
    }
    auto inv = ring.try_inverse(f[1]);
    if (!inv) {
        throw arithmetic_error("leading coefficient not invertible");
    }
    // Newton iteration g <- g - (f(g) - t) / f'(g), doubling the precision each round.
    // Only low-order terms of f' matter for the correction.
    auto padded = [](const Series<R>& s, int m) { return detail::zero_extended(s, m); };
    const Series<R> df = f.derivative();
    Series<R> g(ring, 1, 2, 0, f.names());
    g.set({1, 0, 0}, *inv);
    int m = 2;
    while (m < n) {
        m = std::min(2 * m, n);
        const Series<R> gm = padded(g, m);
        Series<R> err = compose(f.truncated(m), gm);
        err.set({1, 0, 0}, err[1] - ring.one());
        const Series<R> slope = compose(padded(df, m), gm);
        g = gm - divide_exact(err, slope);
    }
    return g.truncated(n);
}

} // namespace tmfkit
