#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "tmfkit/errors.hpp"

namespace tmfkit {

namespace mp = boost::multiprecision;

using Integer = mp::number<mp::cpp_int_backend<>, mp::et_off>;
using Rational = mp::number<mp::rational_adaptor<mp::cpp_int_backend<>>, mp::et_off>;

// Trial division is only trusted up to this bound.
inline constexpr std::uint64_t prime_cap = 1000000;

inline bool is_prime(std::uint64_t n)
{
    if (n > prime_cap) {
        throw input_error("primality check above desk-scale cap " + std::to_string(prime_cap));
    }
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

inline std::uint64_t to_u64(const Integer& n)
{
    if (n < 0 || n > std::numeric_limits<std::uint64_t>::max()) {
        throw input_error("integer out of 64-bit range: " + n.str());
    }
    return static_cast<std::uint64_t>(n);
}

inline std::int64_t to_i64(const Integer& n)
{
    if (n < std::numeric_limits<std::int64_t>::min() || n > std::numeric_limits<std::int64_t>::max()) {
        throw input_error("integer out of 64-bit range: " + n.str());
    }
    return static_cast<std::int64_t>(n);
}

inline bool fits_i64(const Integer& n)
{
    return n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max();
}

inline void require_prime(const Integer& p)
{
    if (p < 2 || p > prime_cap || !is_prime(static_cast<std::uint64_t>(p))) {
        throw input_error("not prime: " + p.str());
    }
}

// Representative in [0, m).
inline Integer mod_floor(const Integer& a, const Integer& m)
{
    Integer r = a % m;
    if (r < 0) {
        r += m;
    }
    return r;
}

inline Integer ipow(Integer base, unsigned e)
{
    Integer r = 1;
    while (e != 0) {
        if (e & 1U) {
            r *= base;
        }
        base *= base;
        e >>= 1U;
    }
    return r;
}

inline int valuation(Integer n, const Integer& p)
{
    if (n == 0) {
        return std::numeric_limits<int>::max();
    }
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    if (m <= 0xffffffffULL) {
        return a * b % m; // residues below 2^32
    }
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    a %= m;
    while (e != 0) {
        if (e & 1U) {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1U;
    }
    return r;
}

// Inverse of a modulo m, or 0 when gcd(a, m) != 1.
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m)
{
    std::int64_t t = 0;
    std::int64_t nt = 1;
    std::uint64_t r = m;
    std::uint64_t nr = a % m;
    while (nr != 0) {
        std::uint64_t q = r / nr;
        std::int64_t tmp = t - static_cast<std::int64_t>(q) * nt;
        t = nt;
        nt = tmp;
        std::uint64_t rtmp = r - q * nr;
        r = nr;
        nr = rtmp;
    }
    if (r != 1) {
        return 0;
    }
    return t < 0 ? static_cast<std::uint64_t>(t + static_cast<std::int64_t>(m)) : static_cast<std::uint64_t>(t);
}

inline std::string to_string(const Integer& n) { return n.str(); }

inline std::string to_string(const Rational& q)
{
    const Integer num = mp::numerator(q);
    const Integer den = mp::denominator(q);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

inline Integer parse_integer(std::string_view s)
{
    std::string_view body = s;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        body.remove_prefix(1);
    }
    if (body.empty() || body.find_first_not_of("0123456789") != std::string_view::npos) {
        throw input_error("not an integer: '" + std::string(s) + "'");
    }
    return Integer(std::string(s));
}

inline Rational parse_rational(std::string_view s)
{
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(s));
    }
    const Integer num = parse_integer(s.substr(0, slash));
    const Integer den = parse_integer(s.substr(slash + 1));
    if (den == 0) {
        throw input_error("zero denominator in '" + std::string(s) + "'");
    }
    return Rational(num, den);
}

} // namespace tmfkit
