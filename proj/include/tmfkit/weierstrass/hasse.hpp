#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tmfkit/algebra/polynomial.hpp"
#include "tmfkit/fgl/height.hpp"
#include "tmfkit/weierstrass/formal_group.hpp"

namespace tmfkit {

enum class HasseRoute {
    PSeries,      // leading coefficient of [p](z) at degree p
    Differential, // coefficient of z^(p-1) in the invariant differential
};

template <CoefficientRing R>
struct HasseResult {
    element_t<R> v1;
    bool ordinary = false;
    // Coefficient of x^(p-1) in f^((p-1)/2) for the completed square y^2 = f(x); odd p only.
    std::optional<element_t<R>> deuring;
};

namespace detail {

// Coefficient of x^(p-1) in f^m, m = (p-1)/2, f = x^3 + f2 x^2 + f1 x + f0.
// Uses f g' = m f' g for g = f^m, stepping down from the top coefficient; the
// divisors k - 3m stay in [-(p+1)/2, -1] and are units mod p.
template <CoefficientRing R>
element_t<R> deuring_coefficient(const R& r, std::uint64_t p, const std::array<element_t<R>, 3>& f)
{
    const long long m = static_cast<long long>(p - 1) / 2;
    const long long top = 3 * m;
    const long long target = static_cast<long long>(p) - 1;
    std::vector<element_t<R>> g(static_cast<std::size_t>(top + 1), r.zero());
    g[static_cast<std::size_t>(top)] = r.one();
    for (long long j = top - 1; j >= target; --j) {
        // coefficient of x^(j+2): sum_i f_i g_{j+3-i} (j+3-i - m i) = 0
        element_t<R> acc = r.zero();
        for (long long i = 0; i < 3; ++i) {
            const long long idx = j + 3 - i;
            if (idx > top) {
                continue;
            }
            acc = acc + f[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(idx)]
                            * r.from_integer(Integer(idx - m * i));
        }
        const auto inv = r.try_inverse(r.from_integer(Integer(j - top)));
        ensure(inv.has_value(), "Deuring recurrence hit a non-unit divisor");
        g[static_cast<std::size_t>(j)] = -(acc * *inv);
    }
    return g[static_cast<std::size_t>(target)];
}

} // namespace detail

// Hasse invariant of a smooth curve over a finite field of characteristic p.
template <CoefficientRing R>
HasseResult<R> hasse_invariant(const WeierstrassCurve<R>& C, HasseRoute route = HasseRoute::PSeries)
{
    const R& r = C.ring;
    const Integer ch = r.characteristic();
    if (ch <= 1 || ch > Integer(1000000) || !is_prime(ch.convert_to<std::uint64_t>()) || !r.is_field()) {
        throw input_error("Hasse invariant requires a finite field of prime characteristic");
    }
    const auto inv = invariants(C);
    if (!r.try_inverse(inv.delta)) {
        throw input_error("Hasse invariant requires smooth curve");
    }
    const auto p = ch.convert_to<std::uint64_t>();
    HasseResult<R> res{r.zero(), false, std::nullopt};
    if (route == HasseRoute::PSeries) {
        const int n = static_cast<int>(p) + 2;
        const auto hp = height_from_p_series(curve_n_series(C, static_cast<long long>(p), n), p, 1);
        // [p](z) vanishing to degree p + 1 leaves no v_1 entry: v_1 = 0.
        res.v1 = hp.v.empty() ? r.zero() : hp.v.front();
    } else {
        res.v1 = omega_series(C, static_cast<int>(p))[static_cast<int>(p) - 1];
    }
    res.ordinary = !r.is_zero(res.v1);
    if (p % 2 == 1) {
        const auto i2 = *r.try_inverse(r.from_integer(2));
        const auto i4 = i2 * i2;
        const element_t<R> d = detail::deuring_coefficient(r, p, {inv.b6 * i4, inv.b4 * i2, inv.b2 * i4});
        ensure(r.is_zero(d) == r.is_zero(res.v1), "Hasse invariant and Deuring coefficient disagree on vanishing");
        res.deuring = d;
    }
    return res;
}

enum class JClass { Ordinary, Supersingular };

inline std::string jclass_name(JClass c) { return c == JClass::Ordinary ? "ordinary" : "supersingular"; }

struct JClassification {
    JClass cls;
    WeierstrassCurve<Fp2Field> witness;
};

// A curve over F_{p^2} with the given j-invariant.
inline WeierstrassCurve<Fp2Field> curve_with_j(const Fp2Field& F, const Fp2& j)
{
    const std::uint64_t p = F.p();
    const Fp2 z = F.zero();
    const Fp2 one = F.one();
    auto curve = [&](Fp2 a1, Fp2 a2, Fp2 a3, Fp2 a4, Fp2 a6) { return WeierstrassCurve<Fp2Field>{F, a1, a2, a3, a4, a6}; };
    if (p == 2) {
        if (F.is_zero(j)) {
            return curve(z, z, one, z, z);
        }
        return curve(one, z, z, z, *F.try_inverse(j));
    }
    if (p == 3) {
        if (F.is_zero(j)) {
            return curve(z, z, z, -one, z);
        }
        return curve(z, one, z, z, -*F.try_inverse(j));
    }
    if (F.is_zero(j)) {
        return curve(z, z, z, z, one);
    }
    const Fp2 k1728 = F.from_integer(1728);
    if (j == k1728) {
        return curve(z, z, z, one, z);
    }
    const Fp2 d = *F.try_inverse(j - k1728);
    return curve(one, z, z, -(F.from_integer(36) * d), -d);
}

// Classification of a j-value; nullopt stands for the point at infinity.
inline JClassification classify_j(const Fp2Field& F, const std::optional<Fp2>& j)
{
    if (!j) {
        WeierstrassCurve<Fp2Field> nodal{F, F.one(), F.zero(), F.zero(), F.zero(), F.zero()};
        const auto inv = invariants(nodal);
        ensure(inv.reduction == Reduction::Nodal, "nodal witness is not nodal");
        return {JClass::Ordinary, nodal};
    }
    WeierstrassCurve<Fp2Field> C = curve_with_j(F, *j);
    const auto inv = invariants(C);
    ensure(inv.j.kind == JInvariant<Fp2Field>::Kind::Value && inv.j.value == *j,
           "witness curve has the wrong j-invariant");
    const auto h = hasse_invariant(C, HasseRoute::Differential);
    return {h.ordinary ? JClass::Ordinary : JClass::Supersingular, C};
}

inline constexpr std::uint64_t kSupersingularCap = 101;

struct SupersingularReport {
    std::uint64_t p = 0;
    std::vector<Fp2> roots; // enumeration order
    Poly<ZmodRing> phi;
    int degree = 0;
    int epsilon = 0;
    Fp2Field field;
};

// All j in F_{p^2}: F_p in residue order, then a + b*theta by (b, a).
inline std::vector<Fp2> enumerate_fp2(const Fp2Field& F)
{
    const std::uint64_t p = F.p();
    std::vector<Fp2> out;
    out.reserve(static_cast<std::size_t>(p * p));
    for (std::uint64_t b = 0; b < p; ++b) {
        for (std::uint64_t a = 0; a < p; ++a) {
            out.push_back(F.make(a, b));
        }
    }
    return out;
}

inline SupersingularReport supersingular_polynomial(std::uint64_t p, std::uint64_t cap = kSupersingularCap)
{
    require_prime(Integer(p));
    if (p > cap) {
        throw input_error("desk-scale cap exceeded: p = " + std::to_string(p) + " > " + std::to_string(cap));
    }
    const Fp2Field F = Fp2Field::canonical(p);
    const ZmodRing fp = ZmodRing::prime_field(p);
    const PolyRing<ZmodRing> Fx(fp, "j");
    const auto all = enumerate_fp2(F);
    // Supersingularity is Frobenius invariant, so each conjugate pair is classified once.
    std::map<std::pair<std::uint64_t, std::uint64_t>, bool> seen;
    std::vector<Fp2> roots;
    for (const Fp2& j : all) {
        const Fp2 jc = F.frobenius(j);
        bool ss = false;
        if (auto it = seen.find({jc.re(), jc.im()}); it != seen.end()) {
            ss = it->second;
        } else {
            ss = classify_j(F, j).cls == JClass::Supersingular;
        }
        seen[{j.re(), j.im()}] = ss;
        if (ss) {
            roots.push_back(j);
        }
    }
    std::set<std::pair<std::uint64_t, std::uint64_t>> rootset;
    for (const Fp2& j : roots) {
        rootset.insert({j.re(), j.im()});
    }
    Poly<ZmodRing> phi = Fx.one();
    std::set<std::pair<std::uint64_t, std::uint64_t>> used;
    for (const Fp2& j : roots) {
        const Fp2 jc = F.frobenius(j);
        ensure(rootset.count({jc.re(), jc.im()}) == 1, "supersingular set is not Frobenius stable");
        if (used.count({j.re(), j.im()})) {
            continue;
        }
        used.insert({j.re(), j.im()});
        used.insert({jc.re(), jc.im()});
        phi = phi * minimal_polynomial(F, j);
    }
    ensure(phi.is_monic(), "Phi is not monic");
    ensure(phi.degree() == static_cast<int>(roots.size()), "Phi degree differs from the number of roots");
    const Poly<ZmodRing> g = poly_gcd(phi, phi.derivative());
    ensure(g.degree() == 0, "Phi is not separable");
    for (const Fp2& j : roots) {
        // Every root lies in F_{p^2}: j^(p^2) = j.
        ensure(F.frobenius(F.frobenius(j)) == j, "root outside F_{p^2}");
    }
    const int base = static_cast<int>((p - 1) / 12);
    const int eps = phi.degree() - base;
    ensure(eps >= 0 && eps <= 2, "degree of Phi violates floor((p-1)/12) + epsilon with epsilon in {0,1,2}");
    return {p, roots, phi, phi.degree(), eps, F};
}

inline json to_json(const SupersingularReport& rep)
{
    json roots = json::array();
    for (const Fp2& j : rep.roots) {
        roots.push_back(rep.field.to_json(j));
    }
    json coeffs = json::array();
    for (int i = 0; i <= rep.phi.degree(); ++i) {
        coeffs.push_back(rep.phi.coeff(static_cast<std::size_t>(i)).value());
    }
    json j;
    j["p"] = rep.p;
    j["supersingular_j_values"] = roots;
    j["Phi"] = rep.phi.format("j");
    j["Phi_coefficients"] = coeffs;
    j["degree"] = rep.degree;
    j["epsilon"] = rep.epsilon;
    j["field"] = to_json(rep.field.descriptor());
    return j;
}

} // namespace tmfkit
