#pragma once

#include <algorithm>
#include <array>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "tmfkit/algebra/integer.hpp"

namespace tmfkit {

using json = nlohmann::json;

// Error with a JSON-pointer style location, e.g. "/a/2: expected an integer".
[[noreturn]] inline void json_fail(const std::string& path, const std::string& msg)
{
    throw input_error((path.empty() ? std::string("/") : path) + ": " + msg);
}

inline const json& json_field(const json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object()) {
        json_fail(path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        json_fail(path + "/" + key, "missing field");
    }
    return *it;
}

inline Integer json_integer(const json& j, const std::string& path)
{
    if (j.is_number_integer()) {
        return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
    }
    if (j.is_string()) {
        try {
            return parse_integer(j.get<std::string>());
        } catch (const input_error&) {
            json_fail(path, "expected an integer");
        }
    }
    json_fail(path, "expected an integer");
}

inline Rational json_rational(const json& j, const std::string& path)
{
    if (j.is_number_integer()) {
        return Rational(json_integer(j, path));
    }
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const input_error&) {
            json_fail(path, "expected a rational number");
        }
    }
    json_fail(path, "expected a rational number");
}

inline std::int64_t json_int64(const json& j, const std::string& path)
{
    const Integer n = json_integer(j, path);
    if (!fits_i64(n)) {
        json_fail(path, "integer out of range");
    }
    return static_cast<std::int64_t>(n);
}

// Small integers as JSON numbers, big ones as decimal strings.
inline json integer_to_json(const Integer& n)
{
    if (fits_i64(n)) {
        return json(static_cast<std::int64_t>(n));
    }
    return json(n.str());
}

inline json rational_to_json(const Rational& q)
{
    if (mp::denominator(q) == 1) {
        return integer_to_json(mp::numerator(q));
    }
    return json(to_string(q));
}

struct RingDescriptor {
    enum class Kind {
        Integers,
        Rationals,
        IntegersMod,
        PrimeField,
        QuadExtField,
        PolynomialRing,
        IntegersInverted,
        IntegersLocalized,
    };

    Kind kind = Kind::Integers;
    Integer modulus = 0;                       // m for IntegersMod, p for fields and localization
    std::array<Integer, 2> quad{0, 0};         // x^2 + quad[1] x + quad[0]
    std::vector<Integer> inverted;             // primes made invertible
    std::shared_ptr<const RingDescriptor> base;
    std::string variable;

    friend bool operator==(const RingDescriptor& a, const RingDescriptor& b)
    {
        if (a.kind != b.kind || a.modulus != b.modulus || a.quad != b.quad || a.inverted != b.inverted
            || a.variable != b.variable) {
            return false;
        }
        if (!a.base || !b.base) {
            return !a.base && !b.base;
        }
        return *a.base == *b.base;
    }
};

inline std::string kind_name(RingDescriptor::Kind k)
{
    using K = RingDescriptor::Kind;
    switch (k) {
    case K::Integers: return "Integers";
    case K::Rationals: return "Rationals";
    case K::IntegersMod: return "IntegersMod";
    case K::PrimeField: return "PrimeField";
    case K::QuadExtField: return "QuadExtField";
    case K::PolynomialRing: return "PolynomialRing";
    case K::IntegersInverted: return "IntegersInverted";
    case K::IntegersLocalized: return "IntegersLocalized";
    }
    return "?";
}

inline std::string describe(const RingDescriptor& d)
{
    using K = RingDescriptor::Kind;
    switch (d.kind) {
    case K::Integers: return "Z";
    case K::Rationals: return "Q";
    case K::IntegersMod: return "Z/" + d.modulus.str();
    case K::PrimeField: return "F_" + d.modulus.str();
    case K::QuadExtField:
        return "F_" + d.modulus.str() + "[x]/(x^2+" + d.quad[1].str() + "x+" + d.quad[0].str() + ")";
    case K::PolynomialRing: return describe(*d.base) + "[" + d.variable + "]";
    case K::IntegersInverted: {
        std::string s = "Z[1/";
        for (std::size_t i = 0; i < d.inverted.size(); ++i) {
            s += (i ? "," : "") + d.inverted[i].str();
        }
        return s + "]";
    }
    case K::IntegersLocalized: return "Z_(" + d.modulus.str() + ")";
    }
    return "?";
}

inline json to_json(const RingDescriptor& d)
{
    using K = RingDescriptor::Kind;
    json j;
    j["kind"] = kind_name(d.kind);
    switch (d.kind) {
    case K::Integers:
    case K::Rationals: break;
    case K::IntegersMod: j["m"] = integer_to_json(d.modulus); break;
    case K::PrimeField:
    case K::IntegersLocalized: j["p"] = integer_to_json(d.modulus); break;
    case K::QuadExtField:
        j["p"] = integer_to_json(d.modulus);
        j["modulus"] = json::array({integer_to_json(d.quad[0]), integer_to_json(d.quad[1]), 1});
        break;
    case K::PolynomialRing:
        j["base"] = to_json(*d.base);
        j["variable"] = d.variable;
        break;
    case K::IntegersInverted: {
        json ps = json::array();
        for (const auto& p : d.inverted) {
            ps.push_back(integer_to_json(p));
        }
        j["primes"] = ps;
        break;
    }
    }
    return j;
}

inline RingDescriptor integers_descriptor() { return {}; }

inline RingDescriptor rationals_descriptor()
{
    RingDescriptor d;
    d.kind = RingDescriptor::Kind::Rationals;
    return d;
}

inline RingDescriptor integers_mod_descriptor(const Integer& m)
{
    if (m < 2) {
        throw input_error("IntegersMod modulus must be at least 2");
    }
    RingDescriptor d;
    d.kind = RingDescriptor::Kind::IntegersMod;
    d.modulus = m;
    return d;
}

inline RingDescriptor prime_field_descriptor(const Integer& p)
{
    require_prime(p);
    RingDescriptor d;
    d.kind = RingDescriptor::Kind::PrimeField;
    d.modulus = p;
    return d;
}

inline bool quadratic_has_root(const Integer& p, const Integer& c0, const Integer& c1)
{
    const std::uint64_t pp = to_u64(p);
    const std::uint64_t a0 = to_u64(c0);
    const std::uint64_t a1 = to_u64(c1);
    for (std::uint64_t x = 0; x < pp; ++x) {
        const std::uint64_t v = (mulmod(x, x, pp) + mulmod(a1, x, pp) + a0) % pp;
        if (v == 0) {
            return true;
        }
    }
    return false;
}

inline RingDescriptor quad_ext_descriptor(const Integer& p, const Integer& c0, const Integer& c1)
{
    require_prime(p);
    if (c0 < 0 || c0 >= p || c1 < 0 || c1 >= p) {
        throw input_error("QuadExtField modulus coefficients must be reduced residues");
    }
    if (quadratic_has_root(p, c0, c1)) {
        throw input_error("QuadExtField modulus is reducible over F_" + p.str());
    }
    RingDescriptor d;
    d.kind = RingDescriptor::Kind::QuadExtField;
    d.modulus = p;
    d.quad = {c0, c1};
    return d;
}

inline RingDescriptor polynomial_descriptor(const RingDescriptor& base, const std::string& var)
{
    if (base.kind == RingDescriptor::Kind::PolynomialRing) {
        throw input_error("nested polynomial rings are not supported");
    }
    if (var.empty()) {
        throw input_error("polynomial ring needs a variable name");
    }
    RingDescriptor d;
    d.kind = RingDescriptor::Kind::PolynomialRing;
    d.base = std::make_shared<const RingDescriptor>(base);
    d.variable = var;
    return d;
}

inline RingDescriptor inverted_descriptor(std::vector<Integer> primes)
{
    for (const auto& p : primes) {
        require_prime(p);
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    RingDescriptor d;
    d.kind = RingDescriptor::Kind::IntegersInverted;
    d.inverted = std::move(primes);
    return d;
}

inline RingDescriptor localized_descriptor(const Integer& p)
{
    require_prime(p);
    RingDescriptor d;
    d.kind = RingDescriptor::Kind::IntegersLocalized;
    d.modulus = p;
    return d;
}

// Lexicographically smallest monic irreducible x^2 + b x + c, scanning (b, c).
inline RingDescriptor finite_field_make(const Integer& p, int k)
{
    require_prime(p);
    if (k == 1) {
        return prime_field_descriptor(p);
    }
    if (k != 2) {
        throw input_error("unsupported extension degree");
    }
    for (Integer b = 0; b < p; ++b) {
        for (Integer c = 0; c < p; ++c) {
            if (!quadratic_has_root(p, c, b)) {
                return quad_ext_descriptor(p, c, b);
            }
        }
    }
    throw consistency_error("no irreducible quadratic found over F_" + p.str());
}

inline RingDescriptor descriptor_from_json(const json& j, const std::string& path = "")
{
    const json& kind = json_field(j, "kind", path);
    if (!kind.is_string()) {
        json_fail(path + "/kind", "expected a string");
    }
    const std::string k = kind.get<std::string>();
    try {
        if (k == "Integers") {
            return integers_descriptor();
        }
        if (k == "Rationals") {
            return rationals_descriptor();
        }
        if (k == "IntegersMod") {
            return integers_mod_descriptor(json_integer(json_field(j, "m", path), path + "/m"));
        }
        if (k == "PrimeField") {
            return prime_field_descriptor(json_integer(json_field(j, "p", path), path + "/p"));
        }
        if (k == "IntegersLocalized") {
            return localized_descriptor(json_integer(json_field(j, "p", path), path + "/p"));
        }
        if (k == "QuadExtField") {
            const Integer p = json_integer(json_field(j, "p", path), path + "/p");
            if (!j.contains("modulus")) {
                return finite_field_make(p, 2);
            }
            const json& m = j.at("modulus");
            if (!m.is_array() || m.size() != 3) {
                json_fail(path + "/modulus", "expected [c0, c1, 1]");
            }
            if (json_integer(m[2], path + "/modulus/2") != 1) {
                json_fail(path + "/modulus/2", "modulus must be monic");
            }
            return quad_ext_descriptor(p, json_integer(m[0], path + "/modulus/0"),
                                       json_integer(m[1], path + "/modulus/1"));
        }
        if (k == "PolynomialRing") {
            const json& var = json_field(j, "variable", path);
            if (!var.is_string()) {
                json_fail(path + "/variable", "expected a string");
            }
            return polynomial_descriptor(descriptor_from_json(json_field(j, "base", path), path + "/base"),
                                         var.get<std::string>());
        }
        if (k == "IntegersInverted") {
            const json& ps = json_field(j, "primes", path);
            if (!ps.is_array()) {
                json_fail(path + "/primes", "expected an array");
            }
            std::vector<Integer> primes;
            for (std::size_t i = 0; i < ps.size(); ++i) {
                primes.push_back(json_integer(ps[i], path + "/primes/" + std::to_string(i)));
            }
            return inverted_descriptor(std::move(primes));
        }
    } catch (const input_error& e) {
        const std::string msg = e.what();
        if (!msg.empty() && msg.front() == '/') {
            throw;
        }
        json_fail(path, msg);
    }
    json_fail(path + "/kind", "unknown ring kind '" + k + "'");
}

} // namespace tmfkit
