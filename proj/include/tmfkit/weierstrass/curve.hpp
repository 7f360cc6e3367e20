#pragma once

#include <array>
#include <string>

#include "tmfkit/algebra/any_ring.hpp"

namespace tmfkit {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
template <CoefficientRing R>
struct WeierstrassCurve {
    using E = element_t<R>;

    R ring;
    E a1, a2, a3, a4, a6;

    static WeierstrassCurve make(const R& r, const std::array<Integer, 5>& a)
    {
        return {r, r.from_integer(a[0]), r.from_integer(a[1]), r.from_integer(a[2]), r.from_integer(a[3]),
                r.from_integer(a[4])};
    }
    std::array<E, 5> coefficients() const { return {a1, a2, a3, a4, a6}; }
    std::string format() const;
};

template <CoefficientRing R>
struct JInvariant {
    enum class Kind { Value, Pair, Undefined };
    explicit JInvariant(const element_t<R>& zero) : value(zero), num(zero), den(zero) {}

    Kind kind = Kind::Undefined;
    element_t<R> value; // c4^3 / Delta when Delta is a unit
    element_t<R> num;   // [c4^3 : Delta] otherwise
    element_t<R> den;
};

enum class Reduction { Smooth, Nodal, Cuspidal, NonUnitDiscriminant };

inline std::string reduction_name(Reduction r)
{
    switch (r) {
    case Reduction::Smooth:
        return "smooth";
    case Reduction::Nodal:
        return "nodal";
    case Reduction::Cuspidal:
        return "cuspidal";
    case Reduction::NonUnitDiscriminant:
        break;
    }
    return "non-unit discriminant";
}

template <CoefficientRing R>
struct CurveInvariants {
    using E = element_t<R>;
    E b2, b4, b6, b8, c4, c6, delta;
    JInvariant<R> j;
    Reduction reduction = Reduction::Smooth;
};

template <CoefficientRing R>
CurveInvariants<R> invariants(const WeierstrassCurve<R>& C)
{
    const R& r = C.ring;
    auto k = [&](long n) { return r.from_integer(Integer(n)); };
    const auto& [a1, a2, a3, a4, a6] = C.coefficients();
    const auto z = r.zero();
    CurveInvariants<R> inv{z, z, z, z, z, z, z, JInvariant<R>(z), Reduction::Smooth};
    inv.b2 = a1 * a1 + k(4) * a2;
    inv.b4 = k(2) * a4 + a1 * a3;
    inv.b6 = a3 * a3 + k(4) * a6;
    inv.b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    const auto& b2 = inv.b2;
    const auto& b4 = inv.b4;
    const auto& b6 = inv.b6;
    const auto& b8 = inv.b8;
    inv.c4 = b2 * b2 - k(24) * b4;
    inv.c6 = -(b2 * b2 * b2) + k(36) * b2 * b4 - k(216) * b6;
    inv.delta = -(b2 * b2 * b8) - k(8) * b4 * b4 * b4 - k(27) * b6 * b6 + k(9) * b2 * b4 * b6;
    ensure(inv.c4 * inv.c4 * inv.c4 - inv.c6 * inv.c6 == k(1728) * inv.delta, "c4^3 - c6^2 != 1728 Delta");
    ensure(k(4) * b8 == b2 * b6 - b4 * b4, "4 b8 != b2 b6 - b4^2");
    const auto c43 = inv.c4 * inv.c4 * inv.c4;
    if (auto dinv = r.try_inverse(inv.delta)) {
        inv.j.kind = JInvariant<R>::Kind::Value;
        inv.j.value = c43 * *dinv;
        inv.reduction = Reduction::Smooth;
    } else if (r.is_zero(c43) && r.is_zero(inv.delta)) {
        inv.j.kind = JInvariant<R>::Kind::Undefined;
        inv.reduction = Reduction::Cuspidal;
    } else {
        inv.j.kind = JInvariant<R>::Kind::Pair;
        inv.j.num = c43;
        inv.j.den = inv.delta;
        if (r.is_zero(inv.delta)) {
            inv.reduction = r.try_inverse(inv.c4) ? Reduction::Nodal : Reduction::Cuspidal;
        } else {
            inv.reduction = Reduction::NonUnitDiscriminant;
        }
    }
    if (r.is_zero(inv.delta) && r.is_zero(inv.c4)) {
        inv.reduction = Reduction::Cuspidal;
    }
    return inv;
}

// x = u^2 x' + r, y = u^3 y' + s u^2 x' + t
template <CoefficientRing R>
WeierstrassCurve<R> transform(const WeierstrassCurve<R>& C, const element_t<R>& u, const element_t<R>& r,
                              const element_t<R>& s, const element_t<R>& t)
{
    const R& ring = C.ring;
    const auto ui = ring.try_inverse(u);
    if (!ui) {
        throw input_error("transform: u is not a unit");
    }
    auto k = [&](long n) { return ring.from_integer(Integer(n)); };
    const auto& [a1, a2, a3, a4, a6] = C.coefficients();
    const auto u1 = *ui;
    const auto u2 = u1 * u1;
    const auto u3 = u2 * u1;
    const auto u4 = u2 * u2;
    const auto u6 = u3 * u3;
    WeierstrassCurve<R> D{ring, ring.zero(), ring.zero(), ring.zero(), ring.zero(), ring.zero()};
    D.a1 = u1 * (a1 + k(2) * s);
    D.a2 = u2 * (a2 - s * a1 + k(3) * r - s * s);
    D.a3 = u3 * (a3 + r * a1 + k(2) * t);
    D.a4 = u4 * (a4 - s * a3 + k(2) * r * a2 - (t + r * s) * a1 + k(3) * r * r - k(2) * s * t);
    D.a6 = u6 * (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1);
    return D;
}

template <CoefficientRing R>
std::string WeierstrassCurve<R>::format() const
{
    auto term = [&](const E& a, const std::string& mono, std::string& out) {
        if (ring.is_zero(a)) {
            return;
        }
        std::string cs = ring.format(a);
        std::string t = mono.empty() ? cs : (a == ring.one() ? mono : "(" + cs + ")*" + mono);
        out += " + " + t;
    };
    std::string lhs = "y^2";
    term(a1, "x*y", lhs);
    term(a3, "y", lhs);
    std::string rhs = "x^3";
    term(a2, "x^2", rhs);
    term(a4, "x", rhs);
    term(a6, "", rhs);
    return lhs + " = " + rhs;
}

template <CoefficientRing R>
json jinvariant_to_json(const R& r, const JInvariant<R>& j)
{
    switch (j.kind) {
    case JInvariant<R>::Kind::Value:
        return r.to_json(j.value);
    case JInvariant<R>::Kind::Pair:
        return json::array({r.to_json(j.num), r.to_json(j.den)});
    case JInvariant<R>::Kind::Undefined:
        break;
    }
    return "undefined";
}

template <CoefficientRing R>
json to_json(const CurveInvariants<R>& inv, const R& r)
{
    json j;
    j["b2"] = r.to_json(inv.b2);
    j["b4"] = r.to_json(inv.b4);
    j["b6"] = r.to_json(inv.b6);
    j["b8"] = r.to_json(inv.b8);
    j["c4"] = r.to_json(inv.c4);
    j["c6"] = r.to_json(inv.c6);
    j["Delta"] = r.to_json(inv.delta);
    j["j"] = jinvariant_to_json(r, inv.j);
    j["reduction"] = reduction_name(inv.reduction);
    return j;
}

template <CoefficientRing R>
json to_json(const WeierstrassCurve<R>& C)
{
    json a = json::array();
    for (const auto& x : C.coefficients()) {
        a.push_back(C.ring.to_json(x));
    }
    return {{"ring", to_json(C.ring.descriptor())}, {"a", a}};
}

template <CoefficientRing R>
WeierstrassCurve<R> curve_from_json(const R& r, const json& j, const std::string& path = "")
{
    const json& a = json_field(j, "a", path);
    if (!a.is_array() || a.size() != 5) {
        json_fail(path + "/a", "expected [a1, a2, a3, a4, a6]");
    }
    auto c = [&](std::size_t i) { return r.from_json(a[i], path + "/a/" + std::to_string(i)); };
    return {r, c(0), c(1), c(2), c(3), c(4)};
}

template <CoefficientRing R>
bool operator==(const WeierstrassCurve<R>& a, const WeierstrassCurve<R>& b)
{
    return a.ring == b.ring && a.coefficients() == b.coefficients();
}

} // namespace tmfkit
