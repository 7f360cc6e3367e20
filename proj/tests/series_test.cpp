#include <gtest/gtest.h>

#include "support/print.hpp"
#include "support/random.hpp"
#include "tmfkit/series/series.hpp"
#include "tmfkit/series/series_json.hpp"

using namespace tmfkit;
using tmfkit::testing::uniform;

namespace {

using QS = Series<RationalField>;
using ZS = Series<IntegerRing>;

const IntegerRing ZZ;
const RationalField QQ;

ZS zpoly(int n, std::vector<long> cs)
{
    std::vector<Integer> v(cs.begin(), cs.end());
    return ZS::from_coefficients(ZZ, n, v);
}

ZS random_series(std::mt19937_64& g, int nvars, int n, int min_val)
{
    ZS s(ZZ, nvars, n);
    for (const auto& e : detail::monomial_table(nvars, n)) {
        if (detail::total_degree(e) >= min_val && uniform(g, 0, 2) != 0) {
            s.set(e, Integer(uniform(g, -5, 5)));
        }
    }
    return s;
}

} // namespace

TEST(Compose, Examples)
{
    const ZS t = ZS::variable(ZZ, 1, 0, 7);
    const ZS f = t * t;
    const ZS g = zpoly(7, {0, 1, 0, 1});
    EXPECT_EQ(compose(f, g), zpoly(7, {0, 0, 1, 0, 2, 0, 1}));

    auto rng = tmfkit::testing::rng();
    const ZS h = random_series(rng, 1, 9, 0);
    EXPECT_EQ(compose(h, ZS::variable(ZZ, 1, 0, 9)), h);

    const ZS f2 = zpoly(8, {0, 1, 1});
    EXPECT_EQ(compose(f2, reverse(f2)), ZS::variable(ZZ, 1, 0, 8));
}

TEST(Compose, RejectsConstantTerm)
{
    const ZS f = zpoly(5, {0, 1, 1});
    try {
        compose(f, zpoly(5, {1, 1}));
        FAIL();
    } catch (const input_error& e) {
        EXPECT_NE(std::string(e.what()).find("composition requires positive valuation"), std::string::npos);
    }
}

TEST(Compose, MultivariateArgument)
{
    // f(t) = t^2 at g = x + y gives x^2 + 2xy + y^2
    const ZS f = zpoly(5, {0, 0, 1});
    const ZS g = ZS::variable(ZZ, 2, 0, 5) + ZS::variable(ZZ, 2, 1, 5);
    const ZS r = compose(f, g);
    EXPECT_EQ(r.coeff({2, 0, 0}), 1);
    EXPECT_EQ(r.coeff({1, 1, 0}), 2);
    EXPECT_EQ(r.coeff({0, 2, 0}), 1);
    EXPECT_EQ(r.terms().size(), 3U);
}

TEST(Compose, IsAssociative)
{
    auto g = tmfkit::testing::rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const ZS a = random_series(g, 1, 10, 0);
        const ZS b = random_series(g, 1, 10, 1);
        const ZS c = random_series(g, 1, 10, 1);
        EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
    }
}

TEST(Reverse, Examples)
{
    const ZS t = ZS::variable(ZZ, 1, 0, 6);
    EXPECT_EQ(reverse(t), t);
    EXPECT_EQ(reverse(zpoly(6, {0, 1, 1})), zpoly(6, {0, 1, -1, 2, -5, 14}));

    const ZmodRing f3 = ZmodRing::prime_field(3);
    const auto two_t = Series<ZmodRing>::variable(f3, 1, 0, 5).scaled(f3.from_int(2));
    EXPECT_EQ(reverse(two_t), two_t);
}

TEST(Reverse, NonUnitLeadingCoefficient)
{
    try {
        reverse(zpoly(5, {0, 2, 1}));
        FAIL();
    } catch (const arithmetic_error& e) {
        EXPECT_NE(std::string(e.what()).find("leading coefficient not invertible"), std::string::npos);
    }
}

TEST(Reverse, IsInvolutiveAndTwoSided)
{
    auto g = tmfkit::testing::rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        ZS f = random_series(g, 1, 12, 2);
        f.set({1, 0, 0}, Integer(uniform(g, 0, 1) ? 1 : -1));
        const ZS r = reverse(f);
        const ZS t = ZS::variable(ZZ, 1, 0, 12);
        EXPECT_EQ(compose(f, r), t);
        EXPECT_EQ(compose(r, f), t);
        EXPECT_EQ(reverse(r), f);
    }
}

TEST(DivideExact, Examples)
{
    const ZS x = ZS::variable(ZZ, 2, 0, 6);
    const ZS y = ZS::variable(ZZ, 2, 1, 6);
    const ZS q = divide_exact(x * x - y * y, x - y);
    EXPECT_TRUE(q.agrees_with(x + y, q.precision()));
    EXPECT_EQ(q.precision(), 5);

    EXPECT_EQ(divide_exact(ZS::one(ZZ, 1, 4), zpoly(4, {1, 1})), zpoly(4, {1, -1, 1, -1}));

    const ZS t = ZS::variable(ZZ, 1, 0, 6);
    try {
        divide_exact(t, t * t);
        FAIL();
    } catch (const arithmetic_error& e) {
        EXPECT_NE(std::string(e.what()).find("not divisible"), std::string::npos);
    }
}

TEST(DivideExact, LaurentMode)
{
    const ZS t = ZS::variable(ZZ, 1, 0, 6);
    const ZS q = divide_exact(t, t * t, -1);
    EXPECT_EQ(q.lowest_allowed(), -1);
    EXPECT_EQ(q[-1], 1);
    // t^2 (1 + O(t^4)) limits the quotient to t^-1 + O(t^3).
    EXPECT_EQ(q.precision(), 3);
}

TEST(DivideExact, InverseTimesDivisorRecoversDividend)
{
    auto g = tmfkit::testing::rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        const int nv = static_cast<int>(uniform(g, 1, 3));
        const ZS a = random_series(g, nv, 8, 0);
        ZS b = random_series(g, nv, 8, 0);
        b.set({0, 0, 0}, Integer(1));
        const ZS prod = a * b;
        const ZS q = divide_exact(prod, b);
        EXPECT_TRUE((q * b).agrees_with(prod, q.precision()));
        EXPECT_TRUE(q.agrees_with(a, q.precision()));
    }
}

TEST(DivideExact, HomogeneousLeadingForm)
{
    auto g = tmfkit::testing::rng(13);
    const ZS x = ZS::variable(ZZ, 2, 0, 9);
    const ZS y = ZS::variable(ZZ, 2, 1, 9);
    for (int trial = 0; trial < 30; ++trial) {
        const ZS a = random_series(g, 2, 9, 0);
        const ZS b = (y - x) * (ZS::one(ZZ, 2, 9) + random_series(g, 2, 9, 1));
        const ZS q = divide_exact(a * b, b);
        EXPECT_TRUE(q.agrees_with(a, q.precision()));
        EXPECT_EQ(q.precision(), 8);
    }
    EXPECT_THROW(divide_exact(x, y), arithmetic_error);
}

TEST(SeriesRing, AxiomsAtFixedPrecision)
{
    auto g = tmfkit::testing::rng(17);
    for (int nv = 1; nv <= 3; ++nv) {
        for (int trial = 0; trial < 20; ++trial) {
            const ZS a = random_series(g, nv, 7, 0);
            const ZS b = random_series(g, nv, 7, 0);
            const ZS c = random_series(g, nv, 7, 0);
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_EQ(a * b, b * a);
            EXPECT_TRUE((a - a).is_zero());
        }
    }
}

TEST(SeriesPrecision, ResultsNeverClaimMoreThanOperands)
{
    // Metamorphic check: redo each operation at higher input precision; the overlap must agree.
    auto g = tmfkit::testing::rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const ZS a_hi = random_series(g, 1, 14, 0);
        ZS b_hi = random_series(g, 1, 14, 1);
        b_hi.set({1, 0, 0}, Integer(1));
        ZS u_hi = random_series(g, 1, 14, 0);
        u_hi.set({0, 0, 0}, Integer(1));
        const int na = static_cast<int>(uniform(g, 3, 10));
        const int nb = static_cast<int>(uniform(g, 3, 10));
        const ZS a = a_hi.truncated(na);
        const ZS b = b_hi.truncated(nb);
        const ZS u = u_hi.truncated(nb);

        const ZS prod = a * b;
        EXPECT_LE(prod.precision(), std::min(na, nb));
        EXPECT_TRUE(prod.agrees_with(a_hi * b_hi, prod.precision()));

        const ZS comp = compose(a, b);
        EXPECT_LE(comp.precision(), std::min(na, nb));
        EXPECT_TRUE(comp.agrees_with(compose(a_hi, b_hi), comp.precision()));

        const ZS quo = divide_exact(a, u);
        EXPECT_TRUE(quo.agrees_with(divide_exact(a_hi, u_hi), quo.precision()));

        const ZS rev = reverse(b);
        EXPECT_TRUE(rev.agrees_with(reverse(b_hi), rev.precision()));

        const ZS sh = divide_exact(a * b * b, b * b);
        EXPECT_TRUE(sh.agrees_with(divide_exact(a_hi * b_hi * b_hi, b_hi * b_hi), sh.precision()));
    }
}

TEST(SeriesOps, LaurentMultivariateRejected)
{
    EXPECT_THROW(ZS(ZZ, 2, 5, -1), input_error);
}

TEST(SeriesOps, IntegralNeedsExactDivision)
{
    const ZS f = zpoly(5, {1, 1});
    EXPECT_THROW(f.integral(), arithmetic_error);
    const QS g = QS::from_coefficients(QQ, 4, {Rational(1), Rational(1), Rational(1)});
    const QS i = g.integral();
    EXPECT_EQ(i[3], Rational(1, 3));
    EXPECT_EQ(i.derivative().truncated(4), g);
}

TEST(SeriesOps, SubstituteMatchesCompose)
{
    auto g = tmfkit::testing::rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const ZS F = random_series(g, 2, 8, 1);
        const ZS u = random_series(g, 3, 8, 1);
        const ZS v = random_series(g, 3, 8, 1);
        const ZS got = substitute(F, {u, v});
        ZS expect(ZZ, 3, 8);
        for (const auto& [e, a] : F.terms()) {
            ZS m = ZS::constant(ZZ, 3, 8, a);
            for (int k = 0; k < e[0]; ++k) {
                m = m * u;
            }
            for (int k = 0; k < e[1]; ++k) {
                m = m * v;
            }
            expect = expect + m;
        }
        EXPECT_EQ(got, expect);
    }
}

TEST(SeriesJson, RoundTrip)
{
    auto g = tmfkit::testing::rng(37);
    for (int nv = 1; nv <= 3; ++nv) {
        const ZS a = random_series(g, nv, 6, 0);
        EXPECT_EQ(series_from_json(ZZ, to_json(a)), a);
    }
    const ZS t = ZS::variable(ZZ, 1, 0, 6);
    const ZS laurent = divide_exact(t + t * t, t * t, -1);
    const json j = to_json(laurent);
    EXPECT_EQ(j.at("lowest_allowed_degree"), -1);
    EXPECT_EQ(series_from_json(ZZ, j), laurent);

    const json bad = json::parse(R"({"vars": ["t"], "precision": 3, "terms": [{"exp": [5], "coeff": 1}]})");
    try {
        series_from_json(ZZ, bad);
        FAIL();
    } catch (const input_error& e) {
        EXPECT_NE(std::string(e.what()).find("/terms/0/exp"), std::string::npos);
    }
}

TEST(SeriesOps, FormatIsReadable)
{
    EXPECT_EQ(zpoly(4, {0, 1, -1, 2}).format(), "t - t^2 + 2*t^3 + O(4)");
}
