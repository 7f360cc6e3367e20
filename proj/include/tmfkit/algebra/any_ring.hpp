#pragma once

#include <variant>

#include "tmfkit/algebra/polynomial.hpp"
#include "tmfkit/algebra/rings.hpp"

namespace tmfkit {

// Runtime choice of coefficient ring, used at the JSON / CLI boundary only.
using AnyRing = std::variant<IntegerRing, RationalField, LocalizedIntegers, ZmodRing, Fp2Field,
                             PolyRing<IntegerRing>, PolyRing<RationalField>, PolyRing<LocalizedIntegers>,
                             PolyRing<ZmodRing>, PolyRing<Fp2Field>>;

namespace detail {

inline AnyRing make_flat_ring(const RingDescriptor& d)
{
    using K = RingDescriptor::Kind;
    switch (d.kind) {
    case K::Integers: return IntegerRing{};
    case K::Rationals: return RationalField{};
    case K::IntegersMod: return ZmodRing(to_u64(d.modulus), false);
    case K::PrimeField: return ZmodRing(to_u64(d.modulus), true);
    case K::QuadExtField: return Fp2Field(d);
    case K::IntegersInverted: return LocalizedIntegers::inverting(d.inverted);
    case K::IntegersLocalized: return LocalizedIntegers::at_prime(d.modulus);
    case K::PolynomialRing: break;
    }
    throw input_error("nested polynomial rings are not supported");
}

} // namespace detail

inline AnyRing make_ring(const RingDescriptor& d)
{
    if (d.kind != RingDescriptor::Kind::PolynomialRing) {
        return detail::make_flat_ring(d);
    }
    return std::visit(
        [&](const auto& base) -> AnyRing {
            using B = std::decay_t<decltype(base)>;
            if constexpr (std::is_same_v<B, PolyRing<IntegerRing>> || std::is_same_v<B, PolyRing<RationalField>>
                          || std::is_same_v<B, PolyRing<LocalizedIntegers>> || std::is_same_v<B, PolyRing<ZmodRing>>
                          || std::is_same_v<B, PolyRing<Fp2Field>>) {
                throw input_error("nested polynomial rings are not supported");
            } else {
                return PolyRing<B>(base, d.variable);
            }
        },
        detail::make_flat_ring(*d.base));
}

} // namespace tmfkit
