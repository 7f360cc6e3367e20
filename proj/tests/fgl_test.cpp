#include <gtest/gtest.h>

#include "support/print.hpp"
#include "support/random.hpp"
#include "tmfkit/fgl/formal_group_law.hpp"
#include "tmfkit/fgl/height.hpp"

using namespace tmfkit;
using tmfkit::testing::uniform;

namespace {

const IntegerRing ZZ;
const RationalField QQ;
const ZmodRing F3 = ZmodRing::prime_field(3);
const ZmodRing F5 = ZmodRing::prime_field(5);

template <CoefficientRing R>
Series<R> var2(const R& r, int which, int n)
{
    return Series<R>::variable(r, 2, which, n);
}

template <CoefficientRing R>
Series<R> t1(const R& r, int n)
{
    return Series<R>::variable(r, 1, 0, n);
}

// phi(F(phi^-1 x, phi^-1 y)) for phi = t + (small random higher terms).
template <CoefficientRing R>
FormalGroupLaw<R> conjugated(const FormalGroupLaw<R>& F, const Series<R>& phi)
{
    const Series<R> inv = reverse(phi);
    const Series<R> x = inv.embedded(2, {0, 1, 2});
    const Series<R> y = inv.embedded(2, {1, 0, 2});
    return validate(compose(phi, F(x, y)), F.precision());
}

Series<RationalField> random_coordinate(std::mt19937_64& g, int n)
{
    Series<RationalField> phi = t1(QQ, n);
    for (int d = 2; d < n; ++d) {
        if (uniform(g, 0, 2) != 0) {
            phi.set({d, 0, 0}, Rational(uniform(g, -4, 4), uniform(g, 1, 3)));
        }
    }
    return phi;
}

} // namespace

TEST(Validate, Examples)
{
    EXPECT_NO_THROW(validate(var2(ZZ, 0, 8) + var2(ZZ, 1, 8), 8));
    EXPECT_NO_THROW(validate(var2(ZZ, 0, 8) + var2(ZZ, 1, 8) + var2(ZZ, 0, 8) * var2(ZZ, 1, 8), 8));
    const auto x = var2(ZZ, 0, 8);
    try {
        validate(x + var2(ZZ, 1, 8) + x * x, 8);
        FAIL() << "expected unit axiom failure";
    } catch (const fgl_axiom_error& e) {
        EXPECT_EQ(e.axiom(), "unit");
        EXPECT_EQ(e.monomial(), "x^2");
        EXPECT_STREQ(e.what(), "unit axiom fails at x^2");
    }
}

TEST(Validate, CommutativityAndAssociativityFailures)
{
    const auto x = var2(ZZ, 0, 6);
    const auto y = var2(ZZ, 1, 6);
    try {
        validate(x + y + x * x * y, 6);
        FAIL();
    } catch (const fgl_axiom_error& e) {
        EXPECT_EQ(e.axiom(), "commutativity");
        EXPECT_EQ(e.monomial(), "x^2*y");
    }
    try {
        validate(x + y + (x * y).scaled(Integer(2)), 6); // associative
    } catch (...) {
        FAIL();
    }
    try {
        validate(x + y + x * x * y * y, 6);
        FAIL();
    } catch (const fgl_axiom_error& e) {
        EXPECT_EQ(e.axiom(), "associativity");
    }
}

TEST(NSeries, Examples)
{
    const auto add = additive_fgl(ZZ, 8);
    EXPECT_EQ(n_series(add, -1), -t1(ZZ, 8));
    const auto mult = multiplicative_fgl(ZZ, 8);
    const auto t = t1(ZZ, 8);
    EXPECT_EQ(n_series(mult, 2), t.scaled(Integer(2)) + t * t);
    EXPECT_EQ(n_series(mult, 0), Series<IntegerRing>(ZZ, 1, 8));
    const auto m3 = multiplicative_fgl(F3, 8);
    const auto s = t1(F3, 8);
    EXPECT_EQ(n_series(m3, 3), s * s * s);
}

TEST(NSeries, InverseOfMultiplicative)
{
    // i(t) = 1/(1+t) - 1 = -t + t^2 - t^3 + ...
    const auto mult = multiplicative_fgl(ZZ, 9);
    const auto i = n_series(mult, -1);
    for (int d = 1; d < 9; ++d) {
        EXPECT_EQ(i[d], Integer(d % 2 == 0 ? 1 : -1));
    }
}

TEST(NSeries, AdditiveAndMultiplicativeLaws)
{
    auto g = tmfkit::testing::rng(11);
    for (int trial = 0; trial < 6; ++trial) {
        const FormalGroupLaw<RationalField> F = conjugated(multiplicative_fgl(QQ, 8), random_coordinate(g, 8));
        const auto i = n_series(F, -1);
        EXPECT_TRUE(F(t1(QQ, 8), i).is_zero());
        const long long m = uniform(g, -3, 3);
        const long long n = uniform(g, -3, 3);
        const auto sm = n_series(F, m);
        const auto sn = n_series(F, n);
        EXPECT_EQ(n_series(F, m + n), F(sm, sn)) << m << " " << n;
        if (n != 0) {
            EXPECT_EQ(n_series(F, m * n), compose(sm, sn)) << m << " " << n;
        }
    }
}

TEST(InvariantDifferential, Examples)
{
    EXPECT_EQ(invariant_differential(additive_fgl(ZZ, 6)), Series<IntegerRing>::one(ZZ, 1, 5));
    const auto eta = invariant_differential(multiplicative_fgl(ZZ, 6));
    EXPECT_EQ(eta.precision(), 5);
    for (int d = 0; d < 5; ++d) {
        EXPECT_EQ(eta[d], Integer(d % 2 == 0 ? 1 : -1));
    }
}

TEST(Logarithm, Examples)
{
    EXPECT_EQ(logarithm(additive_fgl(QQ, 7)), t1(QQ, 7));
    const auto l = logarithm(multiplicative_fgl(QQ, 7));
    for (int d = 1; d < 7; ++d) {
        EXPECT_EQ(l[d], Rational(d % 2 == 1 ? 1 : -1, d));
    }
    try {
        logarithm(multiplicative_fgl(ZZ, 7));
        FAIL();
    } catch (const arithmetic_error& e) {
        EXPECT_STREQ(e.what(), "logarithm requires rational coefficients");
    }
}

TEST(Logarithm, RandomLawsLinearize)
{
    auto g = tmfkit::testing::rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const auto base = trial % 2 == 0 ? additive_fgl(QQ, 9) : multiplicative_fgl(QQ, 9);
        const auto F = conjugated(base, random_coordinate(g, 9));
        const auto l = logarithm(F);
        EXPECT_EQ(l[1], Rational(1));
        EXPECT_EQ(compose(l, F.series()), l.embedded(2, {0, 1, 2}) + l.embedded(2, {1, 0, 2}));
    }
}

TEST(Homomorphism, Examples)
{
    const auto F = multiplicative_fgl(ZZ, 7);
    const auto id = check_homomorphism(t1(ZZ, 7), F, F);
    EXPECT_TRUE(id.is_hom);
    EXPECT_TRUE(id.is_iso);
    EXPECT_EQ(id.differential_scalar, Integer(1));
    EXPECT_TRUE(id.pullback_identity);

    const auto G = multiplicative_fgl(F3, 7);
    const auto rep = check_homomorphism(n_series(G, 3), G, G);
    EXPECT_TRUE(rep.is_hom);
    EXPECT_FALSE(rep.is_iso);
    EXPECT_TRUE(rep.pullback_identity);

    const auto Z2 = LocalizedIntegers::inverting({2});
    const auto A = additive_fgl(Z2, 6);
    const auto two = check_homomorphism(t1(Z2, 6).scaled(Rational(2)), A, A);
    EXPECT_TRUE(two.is_hom);
    EXPECT_TRUE(two.is_iso);
    EXPECT_EQ(two.differential_scalar, Rational(2));

    const auto bad = check_homomorphism(t1(ZZ, 7) + t1(ZZ, 7) * t1(ZZ, 7), F, F);
    EXPECT_FALSE(bad.is_hom);
    EXPECT_THROW(check_homomorphism(t1(ZZ, 6), F, multiplicative_fgl(ZZ, 6)), input_error);
}

TEST(Homomorphism, PullbackOfDifferentials)
{
    auto g = tmfkit::testing::rng(13);
    for (int trial = 0; trial < 8; ++trial) {
        const auto F = conjugated(multiplicative_fgl(QQ, 8), random_coordinate(g, 8));
        const auto phi = n_series(F, uniform(g, 2, 4));
        const auto rep = check_homomorphism(phi, F, F);
        EXPECT_TRUE(rep.is_hom);
        EXPECT_TRUE(rep.pullback_identity);
        // Isomorphism F -> G by a change of coordinate.
        const auto psi = random_coordinate(g, 8);
        const auto G = conjugated(F, psi);
        const auto iso = check_homomorphism(psi, F, G);
        EXPECT_TRUE(iso.is_iso);
        EXPECT_TRUE(iso.pullback_identity);
    }
}

TEST(Height, Examples)
{
    const auto a = height_profile(additive_fgl(F5, 130), 5, 3);
    EXPECT_EQ(a.kind, HeightProfile<ZmodRing>::Kind::InfiniteWithinBound);
    EXPECT_EQ(to_json(a)["height"], "infinite within bound");

    const auto m = height_profile(multiplicative_fgl(F3, 10), 3, 2);
    EXPECT_EQ(m.kind, HeightProfile<ZmodRing>::Kind::Finite);
    EXPECT_EQ(m.height, 1);
    EXPECT_EQ(m.v.at(0), F3.one());
    EXPECT_TRUE(m.leading_is_unit);

    const auto h = height_profile(honda_fgl(3, 2, 12), 3, 2);
    EXPECT_EQ(h.height, 2);
    ASSERT_EQ(h.v.size(), 2U);
    EXPECT_EQ(h.v[0], F3.zero());
    EXPECT_EQ(h.v[1], F3.one());
    EXPECT_EQ(to_json(h), json::parse(R"({"p":3,"height":2,"v":[0,1]})"));
}

TEST(Height, Errors)
{
    try {
        height_profile(multiplicative_fgl(F3, 9), 3, 2);
        FAIL();
    } catch (const input_error& e) {
        EXPECT_NE(std::string(e.what()).find("raise precision"), std::string::npos);
    }
    EXPECT_THROW(height_profile(multiplicative_fgl(ZZ, 9), 3, 1), input_error);
    // [3](t) = 2t^2 over F_3 is not the [p]-series of any law; the extractor must refuse.
    Series<ZmodRing> fake(F3, 1, 6);
    fake.set({2, 0, 0}, F3.from_int(2));
    EXPECT_THROW(height_from_p_series(fake, 3, 2), consistency_error);
}

TEST(Height, AtLeastBeyondBound)
{
    const auto h = height_profile(honda_fgl(2, 2, 6), 2, 1);
    EXPECT_EQ(h.kind, HeightProfile<ZmodRing>::Kind::AtLeast);
    EXPECT_EQ(h.height_text(), "at least 2");
}

TEST(Honda, Examples)
{
    const auto h21 = honda_fgl(2, 1, 9);
    const auto p2 = n_series(h21, 2);
    EXPECT_EQ(p2.valuation(), 2);
    EXPECT_EQ(p2[2], ZmodRing::prime_field(2).one());
    EXPECT_EQ(height_profile(h21, 2, 3).height, 1);

    EXPECT_NO_THROW(honda_fgl(2, 3, 10));
    try {
        honda_fgl(2, 3, 8);
        FAIL();
    } catch (const input_error& e) {
        EXPECT_NE(std::string(e.what()).find("raise precision"), std::string::npos);
    }
}

TEST(Honda, HeightsAcrossPrimes)
{
    for (const auto& [p, n] : std::vector<std::pair<std::uint64_t, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {5, 1}}) {
        const int N = static_cast<int>(detail::pow_ll(p, n)) + 2;
        const auto hp = height_profile(honda_fgl(p, n, N), p, n);
        EXPECT_EQ(hp.height, n) << p;
        EXPECT_EQ(hp.v.back(), ZmodRing::prime_field(p).one()) << p;
    }
}

TEST(FglJson, RoundTrip)
{
    const auto F = honda_fgl(3, 1, 6);
    const json j = to_json(F);
    EXPECT_EQ(j["certified_precision"], 6);
    const auto G = fgl_from_json(F3, j);
    EXPECT_EQ(G.series(), F.series());
}
