#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmfkit/series/series.hpp"
#include "tmfkit/series/series_json.hpp"

namespace tmfkit {

// Thrown by validate(); names the axiom and the first monomial where it fails.
class fgl_axiom_error : public input_error {
public:
    fgl_axiom_error(std::string axiom, std::string monomial)
        : input_error(axiom + " axiom fails at " + monomial), axiom_(std::move(axiom)), monomial_(std::move(monomial))
    {
    }
    const std::string& axiom() const { return axiom_; }
    const std::string& monomial() const { return monomial_; }

private:
    std::string axiom_;
    std::string monomial_;
};

inline std::string format_monomial(const Exponent& e, const std::vector<std::string>& names)
{
    std::string s;
    for (std::size_t v = 0; v < names.size(); ++v) {
        if (e[v] == 0) {
            continue;
        }
        if (!s.empty()) {
            s += "*";
        }
        s += names[v];
        if (e[v] != 1) {
            s += "^" + std::to_string(e[v]);
        }
    }
    return s.empty() ? "1" : s;
}

// A two-variable series certified to satisfy the formal group law axioms below degree N.
template <CoefficientRing R>
class FormalGroupLaw {
public:
    const Series<R>& series() const { return f_; }
    const R& ring() const { return f_.ring(); }
    int precision() const { return f_.precision(); }
    int certified_precision() const { return f_.precision(); }

    // F(u, v) for two series of positive valuation with the same shape.
    Series<R> operator()(const Series<R>& u, const Series<R>& v) const { return substitute(f_, {u, v}); }

private:
    explicit FormalGroupLaw(Series<R> f) : f_(std::move(f)) {}

    template <CoefficientRing S>
    friend FormalGroupLaw<S> validate(const Series<S>& f, int n);

    Series<R> f_;
};

template <CoefficientRing R>
FormalGroupLaw<R> validate(const Series<R>& candidate, int n)
{
    if (candidate.nvars() != 2) {
        throw input_error("a formal group law is a series in two variables");
    }
    if (candidate.precision() < n) {
        throw input_error("series precision " + std::to_string(candidate.precision()) + " is below the requested "
                          + std::to_string(n));
    }
    if (n < 1) {
        throw input_error("precision must be positive");
    }
    const R& ring = candidate.ring();
    Series<R> f = candidate.truncated(n);
    f.rename({"x", "y"});
    const Series<R> x = Series<R>::variable(ring, 2, 0, n);
    const Series<R> y = Series<R>::variable(ring, 2, 1, n);
    if (auto bad = f.at_zero(1).first_difference(x, n)) {
        throw fgl_axiom_error("unit", format_monomial(*bad, {"x", "y"}));
    }
    if (auto bad = f.at_zero(0).first_difference(y, n)) {
        throw fgl_axiom_error("unit", format_monomial(*bad, {"x", "y"}));
    }
    if (auto bad = f.permuted({1, 0, 2}).first_difference(f, n)) {
        throw fgl_axiom_error("commutativity", format_monomial(*bad, {"x", "y"}));
    }
    const Series<R> X = Series<R>::variable(ring, 3, 0, n);
    const Series<R> Z = Series<R>::variable(ring, 3, 2, n);
    const Series<R> fxy = f.embedded(3, {0, 1, 2});
    const Series<R> fyz = f.embedded(3, {1, 2, 0});
    const Series<R> left = substitute(f, {fxy, Z});
    const Series<R> right = substitute(f, {X, fyz});
    if (auto bad = left.first_difference(right, n)) {
        throw fgl_axiom_error("associativity", format_monomial(*bad, {"x", "y", "z"}));
    }
    return FormalGroupLaw<R>(std::move(f));
}

template <CoefficientRing R>
FormalGroupLaw<R> additive_fgl(const R& ring, int n)
{
    return validate(Series<R>::variable(ring, 2, 0, n) + Series<R>::variable(ring, 2, 1, n), n);
}

// F(x, y) = x + y + xy
template <CoefficientRing R>
FormalGroupLaw<R> multiplicative_fgl(const R& ring, int n)
{
    const Series<R> x = Series<R>::variable(ring, 2, 0, n);
    const Series<R> y = Series<R>::variable(ring, 2, 1, n);
    return validate(x + y + x * y, n);
}

// i(t) with F(t, i(t)) = 0, normalized to start with -t.
template <CoefficientRing R>
Series<R> formal_inverse(const FormalGroupLaw<R>& F)
{
    const R& ring = F.ring();
    const int n = F.precision();
    const Series<R> fy = F.series().derivative(1);
    Series<R> i(ring, 1, std::min(n, 2));
    i.set({1, 0, 0}, -ring.one());
    int m = std::min(n, 2);
    while (m < n) {
        m = std::min(2 * m, n);
        const Series<R> im = detail::zero_extended(i, m);
        const Series<R> t = Series<R>::variable(ring, 1, 0, m);
        const Series<R> err = substitute(F.series().truncated(m), {t, im});
        const Series<R> slope = substitute(detail::zero_extended(fy, m), {t, im});
        i = im - divide_exact(err, slope);
    }
    return i;
}

// [n](t): [0] = 0, [1] = t, [n] = F(t, [n-1]), [-n] = [n](i(t)).
template <CoefficientRing R>
Series<R> n_series(const FormalGroupLaw<R>& F, long long n)
{
    const R& ring = F.ring();
    const int prec = F.precision();
    const Series<R> t = Series<R>::variable(ring, 1, 0, prec);
    if (n == 0) {
        return Series<R>(ring, 1, prec);
    }
    if (n < 0) {
        return compose(n_series(F, -n), formal_inverse(F));
    }
    // Double and add; F(a, b) = F(b, a) makes the order of summands irrelevant.
    Series<R> result = t;
    int top = 62;
    while (((n >> top) & 1LL) == 0) {
        --top;
    }
    for (int bit = top - 1; bit >= 0; --bit) {
        result = F(result, result);
        if ((n >> bit) & 1LL) {
            result = F(result, t);
        }
    }
    return result;
}

// Coefficient series of the invariant differential 1 / F_y(x, 0).
template <CoefficientRing R>
Series<R> invariant_differential(const FormalGroupLaw<R>& F)
{
    const Series<R> fy0 = F.series().derivative(1).at_zero(1).restricted_to(1);
    return divide_exact(Series<R>::one(F.ring(), 1, fy0.precision()), fy0);
}

// l(t) with l' = invariant differential and l(F(x, y)) = l(x) + l(y).
template <CoefficientRing R>
Series<R> logarithm(const FormalGroupLaw<R>& F)
{
    const R& ring = F.ring();
    const int n = F.precision();
    if (!inverts_integers_below(ring, n)) {
        throw arithmetic_error("logarithm requires rational coefficients");
    }
    const Series<R> l = invariant_differential(F).integral().truncated(n);
    const Series<R> lhs = compose(l, F.series());
    const Series<R> rhs = l.embedded(2, {0, 1, 2}) + l.embedded(2, {1, 0, 2});
    ensure(lhs.agrees_with(rhs, n), "logarithm does not linearize the formal group law");
    return l;
}

template <CoefficientRing R>
struct HomomorphismReport {
    bool is_hom = false;
    bool is_iso = false;
    element_t<R> differential_scalar;
    // eta_G(phi(t)) * phi'(t) == phi'(0) * eta_F(t)
    bool pullback_identity = false;
    std::optional<Exponent> first_failure;
};

template <CoefficientRing R>
HomomorphismReport<R> check_homomorphism(const Series<R>& phi, const FormalGroupLaw<R>& F, const FormalGroupLaw<R>& G)
{
    if (!(F.ring() == G.ring()) || !(phi.ring() == F.ring())) {
        throw input_error("check_homomorphism: mismatched rings");
    }
    if (F.precision() != G.precision() || phi.precision() < F.precision()) {
        throw input_error("check_homomorphism: mismatched precisions");
    }
    phi.require_univariate("check_homomorphism");
    const R& ring = F.ring();
    const int n = F.precision();
    const Series<R> p = phi.truncated(n);
    if (!ring.is_zero(p[0])) {
        throw input_error("check_homomorphism: phi must have positive valuation");
    }
    HomomorphismReport<R> rep{false, false, p[1], false, std::nullopt};
    const Series<R> lhs = compose(p, F.series());
    const Series<R> rhs = G(p.embedded(2, {0, 1, 2}), p.embedded(2, {1, 0, 2}));
    rep.first_failure = lhs.first_difference(rhs, n);
    rep.is_hom = !rep.first_failure.has_value();
    rep.is_iso = rep.is_hom && ring.try_inverse(rep.differential_scalar).has_value();
    const Series<R> eta_f = invariant_differential(F);
    const Series<R> eta_g = invariant_differential(G);
    const Series<R> pulled = compose(eta_g, p) * p.derivative();
    const Series<R> scaled = eta_f.scaled(rep.differential_scalar);
    rep.pullback_identity = pulled.agrees_with(scaled, std::min(pulled.precision(), scaled.precision()));
    return rep;
}

template <CoefficientRing R>
json to_json(const FormalGroupLaw<R>& F)
{
    json j = to_json(F.series());
    j["certified_precision"] = F.certified_precision();
    return j;
}

template <CoefficientRing R>
FormalGroupLaw<R> fgl_from_json(const R& ring, const json& j, const std::string& path = "")
{
    const Series<R> s = series_from_json(ring, j, path);
    int n = s.precision();
    if (j.contains("certified_precision")) {
        n = static_cast<int>(json_int64(j.at("certified_precision"), path + "/certified_precision"));
    }
    return validate(s, n);
}

} // namespace tmfkit
