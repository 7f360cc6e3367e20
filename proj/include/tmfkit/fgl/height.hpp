#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tmfkit/fgl/formal_group_law.hpp"

namespace tmfkit {

template <CoefficientRing R>
struct HeightProfile {
    enum class Kind { Finite, AtLeast, InfiniteWithinBound };

    std::uint64_t p = 0;
    Kind kind = Kind::Finite;
    int height = 0; // h when Finite, B + 1 when AtLeast, B when InfiniteWithinBound
    std::vector<element_t<R>> v; // v_1 .. v_h
    bool leading_is_unit = false;
    Series<R> p_series;
    std::string extraction = "leading coefficient of [p](t) in the given coordinate";

    std::string height_text() const
    {
        switch (kind) {
        case Kind::Finite:
            return std::to_string(height);
        case Kind::AtLeast:
            return "at least " + std::to_string(height);
        case Kind::InfiniteWithinBound:
            break;
        }
        return "infinite within bound";
    }
};

namespace detail {

// h with p^h = d, or -1.
inline int log_p_exact(long long d, std::uint64_t p)
{
    int h = 0;
    while (d > 1 && d % static_cast<long long>(p) == 0) {
        d /= static_cast<long long>(p);
        ++h;
    }
    return d == 1 ? h : -1;
}

inline long long pow_ll(std::uint64_t p, int e)
{
    long long r = 1;
    for (int i = 0; i < e; ++i) {
        r *= static_cast<long long>(p);
    }
    return r;
}

} // namespace detail

// Height from an already computed [p]-series over a ring of characteristic p.
template <CoefficientRing R>
HeightProfile<R> height_from_p_series(const Series<R>& ps, std::uint64_t p, int bound)
{
    const R& ring = ps.ring();
    HeightProfile<R> hp{p, HeightProfile<R>::Kind::Finite, 0, {}, false, ps, {}};
    hp.extraction = "leading coefficient of [p](t) in the given coordinate";
    const int d = ps.valuation();
    if (d >= ps.precision()) {
        hp.kind = HeightProfile<R>::Kind::InfiniteWithinBound;
        hp.height = bound;
        return hp;
    }
    const int h = detail::log_p_exact(d, p);
    if (h < 0) {
        throw consistency_error("not a formal group law over a field? internal inconsistency (leading degree "
                                + std::to_string(d) + " of [" + std::to_string(p) + "](t))");
    }
    if (h > bound) {
        hp.kind = HeightProfile<R>::Kind::AtLeast;
        hp.height = bound + 1;
        hp.v.assign(static_cast<std::size_t>(bound), ring.zero());
        return hp;
    }
    hp.height = h;
    hp.v.assign(static_cast<std::size_t>(h), ring.zero());
    if (h > 0) {
        hp.v.back() = ps[d];
    }
    hp.leading_is_unit = ring.try_inverse(ps[d]).has_value();
    return hp;
}

template <CoefficientRing R>
HeightProfile<R> height_profile(const FormalGroupLaw<R>& F, std::uint64_t p, int bound)
{
    require_prime(Integer(p));
    if (F.ring().characteristic() != Integer(p)) {
        throw input_error("height_profile requires a base ring of characteristic " + std::to_string(p));
    }
    if (bound < 0) {
        throw input_error("height bound must be non-negative");
    }
    const long long need = detail::pow_ll(p, bound);
    if (static_cast<long long>(F.precision()) <= need) {
        throw input_error("raise precision: need N > " + std::to_string(need) + ", have "
                          + std::to_string(F.precision()));
    }
    return height_from_p_series(n_series(F, static_cast<long long>(p)), p, bound);
}

template <CoefficientRing R>
json to_json(const HeightProfile<R>& hp)
{
    json v = json::array();
    for (const auto& a : hp.v) {
        v.push_back(hp.p_series.ring().to_json(a));
    }
    json j;
    j["p"] = hp.p;
    if (hp.kind == HeightProfile<R>::Kind::Finite) {
        j["height"] = hp.height;
    } else {
        j["height"] = hp.height_text();
    }
    j["v"] = v;
    return j;
}

// l(t) = sum_i t^(p^(n i)) / p^i over Q, truncated below N.
inline Series<RationalField> honda_logarithm(std::uint64_t p, int n, int N)
{
    const RationalField QQ;
    Series<RationalField> l(QQ, 1, N);
    long long deg = 1;
    Integer denom = 1;
    while (deg < N) {
        l.set({static_cast<int>(deg), 0, 0}, Rational(1) / Rational(denom));
        if (deg > N / detail::pow_ll(p, n)) {
            break;
        }
        deg *= detail::pow_ll(p, n);
        denom *= p;
    }
    return l;
}

inline Zmod reduce_p_integral(const Rational& a, const ZmodRing& fp)
{
    const Integer p = fp.characteristic();
    const Integer den = mp::denominator(a);
    if (den % p == 0) {
        throw consistency_error("coefficient " + to_string(a) + " is not " + p.str() + "-integral");
    }
    return fp.from_integer(mp::numerator(a)) * *fp.try_inverse(fp.from_integer(den));
}

// Height n law over F_p from the logarithm sum t^(p^(ni)) / p^i.
inline FormalGroupLaw<ZmodRing> honda_fgl(std::uint64_t p, int n, int N)
{
    require_prime(Integer(p));
    if (n < 1) {
        throw input_error("height must be positive");
    }
    if (n > 62 || static_cast<double>(N) <= std::pow(static_cast<double>(p), n)) {
        throw input_error("raise precision: need N > " + std::to_string(p) + "^" + std::to_string(n));
    }
    const Series<RationalField> l = honda_logarithm(p, n, N);
    const Series<RationalField> sum = l.embedded(2, {0, 1, 2}) + l.embedded(2, {1, 0, 2});
    const Series<RationalField> fq = compose(reverse(l), sum);
    const ZmodRing fp = ZmodRing::prime_field(p);
    Series<ZmodRing> f = map_coefficients(fq, fp, [&](const Rational& a) { return reduce_p_integral(a, fp); });
    f.rename({"x", "y"});
    FormalGroupLaw<ZmodRing> F = validate(f, N);
    const auto hp = height_profile(F, p, n);
    ensure(hp.kind == HeightProfile<ZmodRing>::Kind::Finite && hp.height == n,
           "Honda construction did not produce height " + std::to_string(n));
    return F;
}

} // namespace tmfkit
