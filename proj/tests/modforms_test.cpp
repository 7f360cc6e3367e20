#include <gtest/gtest.h>

#include "support/print.hpp"
#include "support/random.hpp"
#include "tmfkit/modforms/modular_form.hpp"

using namespace tmfkit;
using tmfkit::testing::random_element;
using tmfkit::testing::uniform;

namespace {

const IntegerRing ZZ;

using MF = ModularForm<IntegerRing>;

MF c4() { return MF::monomial(ZZ, 1, 0, 0); }
MF c6() { return MF::monomial(ZZ, 0, 1, 0); }
MF delta() { return MF::monomial(ZZ, 0, 0, 1); }

// q * prod_{n >= 1} (1 - q^n)^24 to precision N, by repeated multiplication by (1 - q^n).
std::vector<Integer> eta_product(int N)
{
    std::vector<Integer> c(static_cast<std::size_t>(N), 0);
    if (N > 1) {
        c[1] = 1;
    }
    for (int n = 1; n < N; ++n) {
        for (int rep = 0; rep < 24; ++rep) {
            for (int d = N - 1; d >= n; --d) {
                c[static_cast<std::size_t>(d)] -= c[static_cast<std::size_t>(d - n)];
            }
        }
    }
    return c;
}

// Number of (a, b, c) with 4a + 6b + 12c = k and b <= 1, searching every triple up to k.
std::size_t brute_dimension(int k)
{
    std::size_t n = 0;
    for (int a = 0; a <= k; ++a) {
        for (int b = 0; b <= 1; ++b) {
            for (int c = 0; c <= k; ++c) {
                if (4 * a + 6 * b + 12 * c == k) {
                    ++n;
                }
            }
        }
    }
    return n;
}

template <CoefficientRing R>
ModularForm<R> random_form(const R& r, std::mt19937_64& g, int max_terms = 4)
{
    ModularForm<R> f(r);
    const int n = static_cast<int>(uniform(g, 1, max_terms));
    for (int i = 0; i < n; ++i) {
        f.add_raw({static_cast<int>(uniform(g, 0, 3)), static_cast<int>(uniform(g, 0, 3)),
                   static_cast<int>(uniform(g, 0, 2))},
                  random_element(r, g));
    }
    return f;
}

} // namespace

TEST(NormalForm, Examples)
{
    EXPECT_EQ(c4().format(), "c4");
    EXPECT_EQ(MF::monomial(ZZ, 0, 2, 0), c4().pow(3) - delta().scaled(Integer(1728)));
    EXPECT_EQ(MF::monomial(ZZ, 0, 2, 0).format(), "c4^3 - 1728*Delta");
    EXPECT_EQ(MF::monomial(ZZ, 0, 3, 0), c4().pow(3) * c6() - (delta() * c6()).scaled(Integer(1728)));
    EXPECT_EQ(c6() * c6(), MF::monomial(ZZ, 0, 2, 0));
    const auto f = normal_form(ZZ, {{{0, 2, 0}, Integer(1)}, {{3, 0, 0}, Integer(-1)}});
    EXPECT_EQ(f, delta().scaled(Integer(-1728)));
    const MF big = MF::monomial(ZZ, 1, 7, 2);
    for (const auto& [m, a] : big.terms()) {
        EXPECT_LE(m.b, 1);
        EXPECT_EQ(m.weight(), 4 + 42 + 24);
    }
    EXPECT_EQ(MF::monomial(ZZ, 1, 7, 2).weight(), 70);
    EXPECT_EQ((c4() + c6()).weight_text(), "mixed");
    EXPECT_EQ(MF(ZZ).weight_text(), "zero");
    EXPECT_THROW(MF::monomial(ZZ, -1, 0, 0), input_error);
}

TEST(NormalForm, RelationHoldsForRandomForms)
{
    auto g = tmfkit::testing::rng(21);
    const MF rel = c4().pow(3) - c6().pow(2) - delta().scaled(Integer(1728));
    EXPECT_TRUE(rel.is_zero());
    for (int t = 0; t < 1000; ++t) {
        const MF f = random_form(ZZ, g);
        EXPECT_TRUE((f * rel).is_zero());
        // (f * c6) * c6 agrees with f * (c4^3 - 1728 Delta).
        EXPECT_EQ((f * c6()) * c6(), f * (c4().pow(3) - delta().scaled(Integer(1728))));
    }
}

TEST(Basis, ExamplesAndDimensions)
{
    EXPECT_EQ(basis(0), (std::vector<FormMonomial>{{0, 0, 0}}));
    EXPECT_TRUE(basis(2).empty());
    EXPECT_EQ(basis(12), (std::vector<FormMonomial>{{3, 0, 0}, {0, 0, 1}}));
    EXPECT_TRUE(basis(-4).empty());
    for (int k = 0; k <= 48; ++k) {
        EXPECT_EQ(dimension(k), brute_dimension(k)) << k;
        const auto B = basis(k);
        EXPECT_TRUE(std::is_sorted(B.begin(), B.end(), basis_order));
        for (const auto& m : B) {
            EXPECT_EQ(m.weight(), k);
            EXPECT_LE(m.b, 1);
        }
    }
    // Classical dimension formula as a second check.
    for (int k = 0; k <= 200; k += 2) {
        const std::size_t classical = k == 2 ? 0 : (k % 12 == 2 ? k / 12 : k / 12 + 1);
        EXPECT_EQ(dimension(k), classical) << k;
    }
}

TEST(QExpansion, Examples)
{
    const auto e4 = q_expansion(c4(), 3);
    EXPECT_EQ(e4[0], 1);
    EXPECT_EQ(e4[1], 240);
    EXPECT_EQ(e4[2], 2160);
    EXPECT_EQ(e4.precision(), 3);
    const auto d = q_expansion(delta(), 5);
    EXPECT_EQ(d[0], 0);
    EXPECT_EQ(d[1], 1);
    EXPECT_EQ(d[2], -24);
    EXPECT_EQ(d[3], 252);
    EXPECT_EQ(d[4], -1472);
    const auto one = q_expansion(MF::constant(ZZ, Integer(1)), 7);
    EXPECT_EQ(one, Series<IntegerRing>::one(ZZ, 1, 7).rename({"q"}));
    EXPECT_THROW(q_expansion(c4(), 0), input_error);
    // c6 carries the sign of -E6.
    EXPECT_EQ(q_expansion(c6(), 2)[1], 504);
}

TEST(QExpansion, DeltaMatchesEtaProduct)
{
    for (int N : {1, 2, 10, 50, 80}) {
        const auto d = q_expansion(delta(), N);
        const auto eta = eta_product(N);
        for (int n = 0; n < N; ++n) {
            EXPECT_EQ(d[n], eta[static_cast<std::size_t>(n)]) << n;
        }
    }
}

TEST(QExpansion, RelationVanishesAndHomomorphism)
{
    const MF rel_raw = normal_form(ZZ, {{{3, 0, 0}, Integer(1)}, {{0, 2, 0}, Integer(-1)}, {{0, 0, 1}, Integer(-1728)}});
    EXPECT_TRUE(q_expansion(rel_raw, 40).is_zero());
    // The raw relation, expanded term by term without normalizing, also vanishes.
    const auto raw = q_expansion(c4().pow(3), 40) - q_expansion(c6(), 40) * q_expansion(c6(), 40)
                     - q_expansion(delta(), 40).scaled(Integer(1728));
    EXPECT_TRUE(raw.is_zero());

    auto g = tmfkit::testing::rng(22);
    for (int t = 0; t < 60; ++t) {
        const MF f = random_form(ZZ, g, 3);
        const MF h = random_form(ZZ, g, 3);
        EXPECT_EQ(q_expansion(f * h, 15), q_expansion(f, 15) * q_expansion(h, 15));
        EXPECT_EQ(q_expansion(f + h, 15), q_expansion(f, 15) + q_expansion(h, 15));
    }
}

TEST(QExpansion, OtherCoefficientRings)
{
    auto g = tmfkit::testing::rng(23);
    const ZmodRing F5 = ZmodRing::prime_field(5);
    const LocalizedIntegers Z3 = LocalizedIntegers::at_prime(3);
    const LocalizedIntegers Zhalf = LocalizedIntegers::inverting({2});
    for (int t = 0; t < 20; ++t) {
        const auto f = random_form(F5, g, 3);
        const auto h = random_form(F5, g, 3);
        EXPECT_EQ(q_expansion(f * h, 10), q_expansion(f, 10) * q_expansion(h, 10));
        const auto u = random_form(Z3, g, 2);
        const auto v = random_form(Zhalf, g, 2);
        EXPECT_EQ(q_expansion(u * u, 8), q_expansion(u, 8) * q_expansion(u, 8));
        EXPECT_EQ(q_expansion(v * v, 8), q_expansion(v, 8) * q_expansion(v, 8));
    }
    // Mod 5, E4 = 1 + 240 sum ... reduces to 1.
    EXPECT_EQ(q_expansion(ModularForm<ZmodRing>::monomial(F5, 1, 0, 0), 12), Series<ZmodRing>::one(F5, 1, 12).rename({"q"}));
}

TEST(JExpansion, Examples)
{
    const auto j = j_q_expansion(3);
    EXPECT_EQ(j.coeff({-1, 0, 0}), 1);
    EXPECT_EQ(j[0], 744);
    EXPECT_EQ(j[1], 196884);
    EXPECT_EQ(j.precision(), 2);
    for (int N : {1, 2, 5, 20}) {
        const auto jn = j_q_expansion(N);
        EXPECT_EQ(jn.coeff({-1, 0, 0}), 1);
        EXPECT_EQ(jn.valuation(), -1);
        if (N >= 2) {
            EXPECT_EQ(jn[0], 744) << N;
        }
    }
    EXPECT_EQ(j_q_expansion(5)[2], 21493760);
    EXPECT_EQ(j_q_expansion(5)[3], 864299970);
    EXPECT_THROW(j_q_expansion(0), input_error);
}

TEST(Injectivity, Examples)
{
    const auto r12 = qexp_injectivity_check(12, 3);
    EXPECT_TRUE(r12.not_yet_visible().empty());
    const auto r0 = qexp_injectivity_check(0, 1);
    EXPECT_TRUE(r0.not_yet_visible().empty());
    ASSERT_EQ(r0.weights.size(), 1U);
    const auto r24 = qexp_injectivity_check(24, 1);
    const auto nv = r24.not_yet_visible();
    EXPECT_NE(std::find(nv.begin(), nv.end(), 24), nv.end());
    // Independence of weight-k expansions is visible with dim M_k coefficients.
    const auto r48 = qexp_injectivity_check(48, 6);
    for (const auto& e : r48.weights) {
        EXPECT_TRUE(e.independent) << e.weight;
        EXPECT_EQ(*e.min_precision, static_cast<int>(e.dim)) << e.weight;
    }
    EXPECT_EQ(to_json(r12)["not_yet_visible"], json::array());
}

TEST(ModularFormJson, RoundTrip)
{
    auto g = tmfkit::testing::rng(24);
    for (int t = 0; t < 50; ++t) {
        const MF f = random_form(ZZ, g);
        EXPECT_EQ(modular_form_from_json(ZZ, to_json(f)), f);
    }
    const json bad = json::parse(R"({"terms": [{"a": 1, "coeff": "x"}]})");
    try {
        modular_form_from_json(ZZ, bad);
        FAIL() << "expected an input error";
    } catch (const input_error& e) {
        EXPECT_NE(std::string(e.what()).find("/terms/0/coeff"), std::string::npos) << e.what();
    }
    EXPECT_EQ(to_json(c4())["weight"], json(4));
}
