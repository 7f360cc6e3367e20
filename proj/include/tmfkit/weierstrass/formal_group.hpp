#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tmfkit/fgl/formal_group_law.hpp"
#include "tmfkit/weierstrass/curve.hpp"

namespace tmfkit {

// w(z) = -1/y as a series in z = -x/y, solving
//   w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3
// one degree at a time. Only coefficients below n are produced.
template <CoefficientRing R>
std::vector<element_t<R>> w_coefficients(const WeierstrassCurve<R>& C, int n)
{
    const R& r = C.ring;
    const auto zero = r.zero();
    const auto sz = static_cast<std::size_t>(std::max(n, 0));
    std::vector<element_t<R>> w(sz, zero), w2(sz, zero), w3(sz, zero);
    for (int m = 3; m < n; ++m) {
        const auto um = static_cast<std::size_t>(m);
        // w2[m] needs w up to m - 3, w3[m] needs w2 up to m - 3.
        element_t<R> s2 = zero;
        for (int i = 3; i <= m - 3; ++i) {
            s2 = s2 + w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(m - i)];
        }
        w2[um] = s2;
        element_t<R> s3 = zero;
        for (int i = 3; i <= m - 6; ++i) {
            s3 = s3 + w[static_cast<std::size_t>(i)] * w2[static_cast<std::size_t>(m - i)];
        }
        w3[um] = s3;
        element_t<R> v = m == 3 ? r.one() : zero;
        v = v + C.a1 * w[um - 1] + C.a2 * w[um - 2] + C.a3 * w2[um] + C.a4 * w2[um - 1] + C.a6 * w3[um];
        w[um] = v;
    }
    return w;
}

template <CoefficientRing R>
Series<R> w_series(const WeierstrassCurve<R>& C, int n)
{
    Series<R> w = Series<R>::from_coefficients(C.ring, n, w_coefficients(C, n));
    w.rename({"z"});
    return w;
}

// The invariant differential dx / (2y + a1 x + a3) as a series in z, to precision n.
// With w = z^3 s(z) this is (2s + z s') / (s (2 - a1 z - a3 z^3 s)).
template <CoefficientRing R>
Series<R> omega_series(const WeierstrassCurve<R>& C, int n)
{
    const R& r = C.ring;
    // In characteristic 2 the divisor has valuation up to 3.
    const int m = n + 3;
    const auto w = w_coefficients(C, m + 3);
    std::vector<element_t<R>> sc(w.begin() + 3, w.end());
    const Series<R> s = Series<R>::from_coefficients(r, m, sc);
    const Series<R> z = Series<R>::variable(r, 1, 0, m);
    const Series<R> two = Series<R>::constant(r, 1, m, r.from_integer(2));
    const Series<R> num = two * s + z * detail::zero_extended(s.derivative(), m);
    const Series<R> z3 = z * z * z;
    const Series<R> den = s * (two - z.scaled(C.a1) - (z3 * s).scaled(C.a3));
    Series<R> om = divide_exact(num, den).truncated(n);
    om.rename({"z"});
    return om;
}

// A point of the formal group as the pair (z, w(z)) of series in one variable.
template <CoefficientRing R>
struct FormalPoint {
    Series<R> z;
    Series<R> w;
};

// The formal group of C evaluated on one-variable series: the chord construction
// applied to points (z, w) without forming the two-variable law.
template <CoefficientRing R>
class ChordLaw {
public:
    ChordLaw(WeierstrassCurve<R> C, int n) : C_(std::move(C)), n_(n), w_(w_coefficients(C_, n)) {}

    int precision() const { return n_; }
    const WeierstrassCurve<R>& curve() const { return C_; }

    FormalPoint<R> generic_point() const
    {
        const R& r = C_.ring;
        return {Series<R>::variable(r, 1, 0, n_), Series<R>::from_coefficients(r, n_, w_)};
    }

    // Sum of two points. Precision may drop by one when the points differ.
    FormalPoint<R> add(const FormalPoint<R>& P, const FormalPoint<R>& Q) const
    {
        const R& r = C_.ring;
        const Series<R> lambda = slope(P, Q);
        const Series<R> nu = P.w - lambda * P.z;
        const Series<R> l2 = lambda * lambda;
        const Series<R> num = lambda.scaled(C_.a1) + l2.scaled(C_.a3) + nu.scaled(C_.a2)
                              + (lambda * nu).scaled(r.from_integer(2) * C_.a4)
                              + (l2 * nu).scaled(r.from_integer(3) * C_.a6);
        const Series<R> den = Series<R>::one(r, 1, lambda.precision()) + lambda.scaled(C_.a2) + l2.scaled(C_.a4)
                              + (l2 * lambda).scaled(C_.a6);
        // Third root of the cubic in z cut out by the line w = lambda z + nu.
        const Series<R> z3 = -P.z - Q.z - divide_exact(num, den);
        const Series<R> w3 = lambda * z3 + nu;
        // Negation: (z, w) -> (z, w) / (a1 z + a3 w - 1).
        const Series<R> d = z3.scaled(C_.a1) + w3.scaled(C_.a3) - Series<R>::one(r, 1, z3.precision());
        return {divide_exact(z3, d), divide_exact(w3, d)};
    }

    FormalPoint<R> negate(const FormalPoint<R>& P) const
    {
        const Series<R> d = P.z.scaled(C_.a1) + P.w.scaled(C_.a3) - Series<R>::one(C_.ring, 1, P.z.precision());
        return {divide_exact(P.z, d), divide_exact(P.w, d)};
    }

    // [n](z) by double and add; the result has precision n_ - (number of additions) - 1 at worst.
    Series<R> multiply(long long n) const
    {
        if (n == 0) {
            return Series<R>(C_.ring, 1, n_);
        }
        const FormalPoint<R> base = n < 0 ? negate(generic_point()) : generic_point();
        const long long m = n < 0 ? -n : n;
        int top = 62;
        while (((m >> top) & 1LL) == 0) {
            --top;
        }
        FormalPoint<R> acc = base;
        for (int bit = top - 1; bit >= 0; --bit) {
            acc = add(acc, acc);
            if ((m >> bit) & 1LL) {
                acc = add(acc, base);
            }
        }
        return acc.z;
    }

private:
    // Slope of the line through P and Q in the (z, w) plane.
    Series<R> slope(const FormalPoint<R>& P, const FormalPoint<R>& Q) const
    {
        const R& r = C_.ring;
        const Series<R> diff = P.z - Q.z;
        if (diff.is_zero()) {
            // Tangent: -G_z / G_w for G = z^3 + a1 zw + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3 - w.
            const Series<R>& z = P.z;
            const Series<R>& w = P.w;
            const Series<R> zw = z * w;
            const Series<R> ww = w * w;
            const Series<R> gz = (z * z).scaled(r.from_integer(3)) + w.scaled(C_.a1)
                                 + zw.scaled(r.from_integer(2) * C_.a2) + ww.scaled(C_.a4);
            const Series<R> gw = z.scaled(C_.a1) + (z * z).scaled(C_.a2) + w.scaled(r.from_integer(2) * C_.a3)
                                 + zw.scaled(r.from_integer(2) * C_.a4) + ww.scaled(r.from_integer(3) * C_.a6)
                                 - Series<R>::one(r, 1, z.precision());
            return divide_exact(-gz, gw);
        }
        if (r.try_inverse(diff[1])) {
            return divide_exact(P.w - Q.w, diff);
        }
        // (w(u) - w(v)) / (u - v) = sum_k w_{k+1} h_k(u, v) with h_k = u h_{k-1} + v^k.
        const int n = std::min(P.z.precision(), Q.z.precision());
        Series<R> h = Series<R>::one(r, 1, n);
        Series<R> vk = Series<R>::one(r, 1, n);
        Series<R> lambda(r, 1, n);
        for (int k = 1; k + 1 < static_cast<int>(w_.size()) && k < n; ++k) {
            vk = vk * Q.z;
            h = P.z * h + vk;
            const auto& c = w_[static_cast<std::size_t>(k + 1)];
            if (!r.is_zero(c)) {
                lambda = lambda + h.scaled(c);
            }
        }
        return lambda;
    }

    WeierstrassCurve<R> C_;
    int n_;
    std::vector<element_t<R>> w_;
};

// [n](z) of the curve's formal group to precision n_prec, via the one-variable chord law.
template <CoefficientRing R>
Series<R> curve_n_series(const WeierstrassCurve<R>& C, long long n, int n_prec)
{
    int adds = 2;
    for (long long m = n < 0 ? -n : n; m > 0; m >>= 1) {
        adds += 2;
    }
    const ChordLaw<R> law(C, n_prec + adds);
    Series<R> s = law.multiply(n);
    ensure(s.precision() >= n_prec, "chord law lost more precision than budgeted");
    s = s.truncated(n_prec);
    s.rename({"z"});
    return s;
}

template <CoefficientRing R>
struct CurveFormalGroup {
    FormalGroupLaw<R> fgl;
    Series<R> w;
    Series<R> x; // Laurent, lowest degree -2
    Series<R> y; // Laurent, lowest degree -3
    Series<R> eta;
};

// The formal group law of C in the coordinate z = -x/y, certified to precision n.
template <CoefficientRing R>
CurveFormalGroup<R> formal_group(const WeierstrassCurve<R>& C, int n)
{
    if (n < 3) {
        throw input_error("formal_group: precision must be at least 3");
    }
    const R& r = C.ring;
    const int m = n + 2;
    const Series<R> w = w_series(C, m);
    const Series<R> z1 = Series<R>::variable(r, 2, 0, m);
    const Series<R> z2 = Series<R>::variable(r, 2, 1, m);
    const Series<R> w1 = compose(w, z1);
    const Series<R> w2 = compose(w, z2);
    Series<R> lambda(r, 2, m);
    try {
        lambda = divide_exact(w2 - w1, z2 - z1);
    } catch (const arithmetic_error& e) {
        throw arithmetic_error(std::string("formal_group: chord slope: ") + e.what());
    }
    const Series<R> nu = w1 - lambda * z1;
    const Series<R> l2 = lambda * lambda;
    const Series<R> num = lambda.scaled(C.a1) + l2.scaled(C.a3) + nu.scaled(C.a2)
                          + (lambda * nu).scaled(r.from_integer(2) * C.a4) + (l2 * nu).scaled(r.from_integer(3) * C.a6);
    const Series<R> den = Series<R>::one(r, 2, lambda.precision()) + lambda.scaled(C.a2) + l2.scaled(C.a4)
                          + (l2 * lambda).scaled(C.a6);
    const Series<R> z3 = -z1 - z2 - divide_exact(num, den);
    // i(z) = -z / (1 - a1 z - a3 w(z))
    const Series<R> z = Series<R>::variable(r, 1, 0, m);
    Series<R> i(r, 1, m);
    try {
        i = divide_exact(-z, Series<R>::one(r, 1, m) - z.scaled(C.a1) - w.scaled(C.a3));
    } catch (const arithmetic_error& e) {
        throw arithmetic_error(std::string("formal_group: inverse: ") + e.what());
    }
    Series<R> F = compose(i, z3).truncated(n);
    F.rename({"z1", "z2"});
    FormalGroupLaw<R> fgl = validate(F, n);
    const Series<R> one = Series<R>::one(r, 1, m);
    Series<R> x = divide_exact(z, w, -2);
    Series<R> y = divide_exact(-one, w, -3);
    Series<R> eta = invariant_differential(fgl);
    eta.rename({"z"});
    ensure(r.is_zero(eta[0] - r.one()), "invariant differential must start with 1");
    // Over rings where 2y + a1 x + a3 cannot be divided out the cross-check is skipped.
    std::optional<Series<R>> om;
    try {
        om = omega_series(C, eta.precision());
    } catch (const arithmetic_error&) {
    }
    if (om) {
        ensure(om->agrees_with(eta, eta.precision()), "invariant differential differs from dx/(2y + a1 x + a3)");
    }
    return {std::move(fgl), w.truncated(n), x, y, eta};
}

} // namespace tmfkit
