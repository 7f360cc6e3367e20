#include <gtest/gtest.h>

#include <set>

#include "support/random.hpp"
#include "tmfkit/tmf/chart_io.hpp"

using namespace tmfkit;

namespace {

const DescentChart& chart()
{
    static const DescentChart c;
    return c;
}

using MF = ModularForm<IntegerRing>;
const IntegerRing ZZ;

std::vector<std::string> gen_labels(const HomotopyGroupReport& r)
{
    std::vector<std::string> out;
    for (const auto& g : r.gens) {
        out.push_back(g.label);
    }
    return out;
}

// Torsion degrees of pi_* tmf localized at 3 in [0, 72), as tabulated in the literature.
const std::set<int> kKnownTorsionDegrees{3, 10, 13, 20, 27, 30, 37, 40};

// Leibniz oracle: d5 on alpha^e beta^j Delta^m from d5(Delta) = alpha beta^2 and d5(alpha) = d5(beta) = 0,
// inside F_3[alpha, beta, Delta^(+-1)] / alpha^2. Returns the coefficient on alpha^(e+1) beta^(j+2) Delta^(m-1).
int leibniz_d5(int e, int /*j*/, int m)
{
    if (e == 1) {
        return 0; // the target would contain alpha^2
    }
    // d5(Delta^m) = m Delta^(m-1) d5(Delta), valid for negative m via d5(Delta^-1) = -Delta^-2 d5(Delta).
    return mod3(m);
}

// Bernoulli numbers B_0..B_n from sum_{k<=n} C(n+1, k) B_k = 0.
std::vector<Rational> bernoulli(int n)
{
    std::vector<Rational> B(static_cast<std::size_t>(n + 1));
    B[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rational acc = 0;
        Integer binom = 1; // C(m+1, k)
        for (int k = 0; k < m; ++k) {
            acc += Rational(binom) * B[static_cast<std::size_t>(k)];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        B[static_cast<std::size_t>(m)] = -acc / Rational(m + 1);
    }
    return B;
}

int padic_valuation(Integer x, long long p)
{
    int v = 0;
    while (x != 0 && x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

} // namespace

TEST(CohMell, Examples)
{
    const ChartCell one = chart().cell(2, 0, 0);
    EXPECT_EQ(one.lattice.size(), 1U);
    EXPECT_EQ(one.labels(), std::vector<std::string>{"1"});
    const ChartCell a = chart().cell(2, 1, 2);
    EXPECT_TRUE(a.lattice.empty());
    ASSERT_TRUE(a.torsion);
    EXPECT_EQ(label(*a.torsion), "alpha");
    const ChartCell d = chart().cell(2, 1, -10);
    EXPECT_EQ(d.labels(), std::vector<std::string>{"(1)^v"});
    EXPECT_FALSE(d.torsion);
    // The dual lattice in weight -22 is spanned by 3 (c4^3)^v and (Delta)^v.
    EXPECT_EQ(chart().cell(2, 1, -22).labels(), (std::vector<std::string>{"3*(c4^3)^v", "(Delta)^v"}));
    EXPECT_TRUE(chart().cell(2, 1, -1).is_zero());
    EXPECT_TRUE(chart().cell(2, 0, -4).is_zero());
    EXPECT_EQ(label(*chart().cell(2, 5, 14).torsion), "alpha*beta^2");

    const auto cells = coh_mell(chart(), 12, -60, 60);
    EXPECT_FALSE(cells.empty());
    for (const auto& c : cells) {
        EXPECT_LE(c.s, 12);
        if (c.torsion) {
            EXPECT_EQ(c.torsion->s(), c.s);
            EXPECT_EQ(c.torsion->t(), c.t);
        }
    }
    EXPECT_THROW(coh_mell(chart(), 13, 0, 10), input_error);
    EXPECT_THROW(coh_mell(chart(), 4, -61, 0), input_error);
    EXPECT_THROW(coh_mell(chart(), 4, 0, 61), input_error);
}

TEST(DescentSS, FiveDifferentialExamples)
{
    const auto d = chart().differential_on_page(5, 0, 12);
    const auto labels = chart().cell(2, 0, 12).labels();
    ASSERT_EQ(labels, (std::vector<std::string>{"c4^3", "Delta"}));
    EXPECT_FALSE(d[0]); // d5(c4^3) = 0
    ASSERT_TRUE(d[1]);
    EXPECT_EQ(label(d[1]->target), "alpha*beta^2");
    EXPECT_EQ(d[1]->target.s(), 5);
    EXPECT_EQ(d[1]->target.t(), 14);
    EXPECT_FALSE(chart().differential_on_page(5, 0, 4)[0]); // d5(c4) = 0
    EXPECT_EQ(chart().e_infinity(0, 12).labels(), (std::vector<std::string>{"c4^3", "3*Delta"}));
    EXPECT_TRUE(chart().e_infinity(5, 14).is_zero());
    // d9(alpha Delta^2) = beta^5.
    const auto d9 = chart().differential_on_page(9, 1, 26);
    ASSERT_EQ(d9.size(), 1U);
    ASSERT_TRUE(d9[0]);
    EXPECT_EQ(label(d9[0]->target), "beta^5");
}

TEST(DescentSS, DifferentialsAreDerivations)
{
    for (int e = 0; e <= 1; ++e) {
        for (int j = 0; j <= 10; ++j) {
            for (int m = -12; m <= 12; ++m) {
                if (e == 0 && j == 0) {
                    continue; // zero line: checked through the free part below
                }
                const auto v = chart().d_torsion(5, {e, j, m});
                EXPECT_EQ(v ? v->coeff : 0, leibniz_d5(e, j, m)) << e << " " << j << " " << m;
                if (v) {
                    EXPECT_EQ(v->target, (TorsionClass{1, j + 2, m - 1}));
                }
            }
        }
    }
    for (int t = 0; t <= 60; t += 2) {
        const auto B = basis(t);
        const auto d = chart().d_free(5, 0, t);
        for (std::size_t i = 0; i < B.size(); ++i) {
            const int expect = B[i].a == 0 && B[i].b == 0 ? mod3(B[i].c) : 0;
            EXPECT_EQ(d[i].coeff, expect) << format_form_monomial(B[i]);
        }
    }
    // d9 is the derivation with d9(alpha Delta^2) = beta^5 and d9(beta) = d9(Delta^3) = 0 on E6:
    // alpha beta^j Delta^(3q+2) = (alpha Delta^2) beta^j (Delta^3)^q maps to beta^(j+5) Delta^(3q).
    for (int j = 0; j <= 6; ++j) {
        for (int q = -4; q <= 4; ++q) {
            const auto v = chart().d_torsion(9, {1, j, 3 * q + 2});
            ASSERT_TRUE(v);
            EXPECT_EQ(v->target, (TorsionClass{0, j + 5, 3 * q}));
            EXPECT_FALSE(chart().d_torsion(9, {1, j, 3 * q}));
            EXPECT_FALSE(chart().d_torsion(9, {0, j, 3 * q}));
        }
    }
}

TEST(DescentSS, DifferentialsSquareToZero)
{
    for (int r : {5, 9}) {
        const int dt = (r - 1) / 2;
        for (int s = 0; s <= 20; ++s) {
            for (int t = -70; t <= 70; ++t) {
                for (const auto& v : chart().differential_on_page(r, s, t)) {
                    if (!v) {
                        continue;
                    }
                    // The target is a torsion class; it must be a cycle on the same page.
                    const auto back = chart().differential_on_page(r, s + r, t + dt);
                    ASSERT_FALSE(back.empty());
                    EXPECT_FALSE(back.back()) << "d" << r << " d" << r << " != 0 at (" << s << ", " << t << ")";
                }
            }
        }
    }
}

TEST(DescentSS, VanishingLineAndDegreeLaws)
{
    for (int s = 9; s <= 40; ++s) {
        for (int t = -120; t <= 120; ++t) {
            EXPECT_TRUE(chart().e_infinity(s, t).is_zero()) << s << " " << t;
        }
    }
    for (int n = -20; n <= -1; ++n) {
        EXPECT_TRUE(chart().degree_cells(10, n, 40).empty()) << n;
    }
}

TEST(HomotopyGroups, Examples)
{
    const auto p3 = tmf_pi(3);
    EXPECT_EQ(p3.group_text(), "Z/3");
    EXPECT_EQ(gen_labels(p3), std::vector<std::string>{"alpha"});
    EXPECT_EQ(tmf_pi(10).group_text(), "Z/3");
    EXPECT_EQ(gen_labels(tmf_pi(10)), std::vector<std::string>{"beta"});
    const auto p27 = tmf_pi(27);
    ASSERT_EQ(p27.gens.size(), 1U);
    EXPECT_EQ(p27.gens[0].label, "x");
    EXPECT_EQ(p27.gens[0].detected_by, "alpha*Delta");
    EXPECT_EQ(p27.group_text(), "Z/3");
    const auto p24 = tmf_pi(24);
    EXPECT_EQ(gen_labels(p24), (std::vector<std::string>{"c4^3", "3*Delta"}));
    const auto m21 = tmf_pi(-21);
    EXPECT_EQ(m21.free_rank(), 1);
    EXPECT_TRUE(m21.torsion_orders().empty());
    EXPECT_EQ(m21.gens[0].provenance, Provenance::K1);
    EXPECT_EQ(tmf_pi(0).group_text(), "Z_(3)");
    EXPECT_EQ(tmf_pi(4).group_text(), "0");
    EXPECT_EQ(tmf_pi(20).group_text(), "Z_(3) + Z/3");
    EXPECT_EQ(gen_labels(tmf_pi(8)), std::vector<std::string>{"c4"});
    EXPECT_THROW(tmf_pi(81), input_error);
    EXPECT_THROW(tmf_pi(-81), input_error);
}

TEST(HomotopyGroups, PresentationMatchesEInfinityAcrossWindow)
{
    for (int n = -80; n <= 80; ++n) {
        const auto rep = tmf_pi(n); // throws consistency_error on disagreement
        int free_rank = 0;
        int tors = 0;
        for (const ChartCell* c : chart().degree_cells(10, n, 40)) {
            free_rank += static_cast<int>(c->lattice.size());
            tors += c->torsion ? 1 : 0;
        }
        EXPECT_EQ(rep.free_rank(), free_rank) << n;
        EXPECT_EQ(static_cast<int>(rep.torsion_orders().size()), tors) << n;
        for (const auto& g : rep.gens) {
            if (g.provenance == Provenance::DM) {
                EXPECT_GE(n, 0);
            } else {
                EXPECT_LT(n, -20);
            }
        }
        if (n >= 0 && n < 72) {
            EXPECT_EQ(!rep.torsion_orders().empty(), kKnownTorsionDegrees.count(n) == 1) << n;
        }
        if (n >= 0 && n % 2 == 0) {
            EXPECT_EQ(rep.free_rank(), static_cast<int>(dimension(n / 2))) << n;
        }
        // Free ranks are symmetric under n -> -n - 21 and torsion under n -> -n - 22.
        if (n >= 0 && -n - 21 >= -80) {
            EXPECT_EQ(rep.free_rank(), tmf_pi(-n - 21).free_rank()) << n;
        }
        if (n >= 0 && -n - 22 >= -80) {
            EXPECT_EQ(rep.torsion_orders().size(), tmf_pi(-n - 22).torsion_orders().size()) << n;
        }
    }
}

TEST(HomotopyGroups, SignIndependence)
{
    for (int d5 : {1, -1}) {
        for (int d9 : {1, -1}) {
            const DescentChart c(ChartWindow{}, DifferentialSigns{d5, d9});
            for (int n = -80; n <= 80; ++n) {
                const auto a = tmf_pi(c, n);
                const auto b = tmf_pi(n);
                EXPECT_EQ(a.group_text(), b.group_text()) << n;
                EXPECT_EQ(gen_labels(a), gen_labels(b)) << n;
            }
        }
    }
    EXPECT_THROW(DescentChart(ChartWindow{}, DifferentialSigns{2, 1}), consistency_error);
}

TEST(HomotopyGroups, RelationAudit)
{
    const DMTorsion alpha{1, 0, 0, 0};
    const DMTorsion beta{0, 1, 0, 0};
    const DMTorsion x{0, 0, 1, 0};
    auto pow = [](DMTorsion w, int n) {
        DMTorsion out{};
        for (int i = 0; i < n; ++i) {
            out = {out.e + w.e, out.j + w.j, out.k + w.k, out.q + w.q};
        }
        return dm_reduce(out);
    };
    EXPECT_FALSE(pow(beta, 5));
    EXPECT_TRUE(pow(beta, 4));
    EXPECT_FALSE(dm_multiply(alpha, alpha));
    EXPECT_FALSE(dm_multiply(alpha, *pow(beta, 2)));
    EXPECT_FALSE(dm_multiply(x, *pow(beta, 2)));
    EXPECT_EQ(dm_multiply(alpha, x), pow(beta, 3));
    // Products of basis classes land in the basis (or vanish), in the right degree.
    std::set<std::string> basis_labels;
    for (const auto& u : dm_torsion_units()) {
        basis_labels.insert(label(u));
    }
    for (const auto& a : dm_torsion_units()) {
        for (const auto& b : dm_torsion_units()) {
            const auto p = dm_multiply(a, b);
            if (p) {
                EXPECT_EQ(p->degree(), a.degree() + b.degree());
                EXPECT_EQ(basis_labels.count(label(*p)), 1U) << label(*p);
            }
        }
        // Every labelled class sits at degree 2t - s of its detecting class.
        EXPECT_EQ(detecting_class(a).degree(), a.degree()) << label(a);
        EXPECT_EQ(detecting_dual_class(a).degree(), -a.degree() - 22) << label(a);
    }
    // alpha beta^2 (degree 23) is the d5 target of Delta (degree 24).
    EXPECT_EQ((TorsionClass{1, 2, 0}).degree(), 24 - 1);
}

TEST(ModThree, ExamplesAndExactness)
{
    EXPECT_EQ(tmf_mod_p_pi(0).group_text(), "F_3");
    const auto m4 = tmf_mod_p_pi(4);
    ASSERT_EQ(m4.gens.size(), 1U);
    EXPECT_TRUE(m4.gens[0].from_tor);
    EXPECT_EQ(m4.gens[0].label, "tor(alpha)");
    EXPECT_EQ(tmf_mod_p_pi(1).group_text(), "0");
    EXPECT_THROW(tmf_mod_p_pi(-80), input_error); // needs pi_{-81}
    EXPECT_THROW(tmf_mod_p_pi(5, 5), input_error);
    for (int n = -79; n <= 80; ++n) {
        const auto a = tmf_pi(n);
        const auto b = tmf_pi(n - 1);
        const std::size_t expect = a.gens.size() + b.torsion_orders().size();
        EXPECT_EQ(static_cast<std::size_t>(tmf_mod_p_pi(n).dimension()), expect) << n;
    }
}

TEST(Duality, Examples)
{
    const auto d0 = duality_check(0);
    EXPECT_EQ(d0.matrix, (std::vector<std::vector<int>>{{1}}));
    EXPECT_TRUE(d0.is_iso);
    const auto d1 = duality_check(1);
    EXPECT_TRUE(d1.matrix.empty());
    EXPECT_TRUE(d1.right.empty());
    EXPECT_TRUE(d1.is_iso);
    const auto dm21 = duality_check(-21);
    EXPECT_EQ(dm21.matrix, (std::vector<std::vector<int>>{{1}}));
    EXPECT_TRUE(dm21.is_iso);
    EXPECT_EQ(dm21.left, std::vector<std::string>{"3*(1)^v"});
    EXPECT_THROW(duality_check(59), input_error);
    EXPECT_THROW(duality_check(-80), input_error);
    EXPECT_THROW(duality_check(0, 2), input_error);
}

TEST(Duality, PerfectAcrossWindowAndTransposeSymmetric)
{
    const auto [lo, hi] = duality_range(chart().window());
    EXPECT_EQ(lo, -79);
    EXPECT_EQ(hi, 58);
    for (int k = lo; k <= hi; ++k) {
        const auto d = duality_check(k);
        EXPECT_TRUE(d.is_iso) << k;
        const auto e = duality_check(-k - 21);
        ASSERT_EQ(e.matrix.size(), d.right.size()) << k;
        for (std::size_t i = 0; i < d.matrix.size(); ++i) {
            for (std::size_t j = 0; j < d.matrix[i].size(); ++j) {
                EXPECT_EQ(d.matrix[i][j], e.matrix[j][i]) << k;
            }
        }
    }
}

TEST(Lifts, Examples)
{
    const auto c4 = lifts_to_homotopy(MF::monomial(ZZ, 1, 0, 0));
    EXPECT_EQ(c4.verdict, "lifts");
    EXPECT_TRUE(c4.lifts);
    const auto d = lifts_to_homotopy(MF::monomial(ZZ, 0, 0, 1));
    EXPECT_EQ(d.verdict, "multiple-of-3^1 lifts");
    EXPECT_FALSE(d.lifts);
    EXPECT_EQ(d.e, 1);
    EXPECT_EQ(d.obstruction, "d5(Delta) = alpha*beta^2");
    EXPECT_EQ(lifts_to_homotopy(MF::monomial(ZZ, 0, 0, 1).scaled(Integer(3))).verdict, "lifts");
    EXPECT_EQ(lifts_to_homotopy(MF::monomial(ZZ, 0, 1, 0)).verdict, "lifts");
    EXPECT_EQ(lifts_to_homotopy(MF::monomial(ZZ, 0, 0, 3)).verdict, "lifts");
    EXPECT_EQ(lifts_to_homotopy(MF::monomial(ZZ, 0, 0, 2)).verdict, "multiple-of-3^1 lifts");
    EXPECT_EQ(lifts_to_homotopy(MF::monomial(ZZ, 1, 0, 1)).verdict, "lifts");
    EXPECT_FALSE(d.footnotes.empty());
    EXPECT_THROW(lifts_to_homotopy(MF::monomial(ZZ, 1, 0, 0) + MF::monomial(ZZ, 0, 1, 0)), input_error);
    const RationalField QQ;
    EXPECT_THROW(lifts_to_homotopy(ModularForm<RationalField>::constant(QQ, Rational(1, 3))), input_error);
    // 24 Delta lifts 3-locally; c4^3 + Delta does not.
    EXPECT_EQ(lifts_to_homotopy(MF::monomial(ZZ, 0, 0, 1).scaled(Integer(24))).verdict, "lifts");
    EXPECT_EQ(lifts_to_homotopy(MF::monomial(ZZ, 3, 0, 0) + MF::monomial(ZZ, 0, 0, 1)).e, 1);
}

TEST(Lifts, RandomFormsAgreeWithDeltaCoefficientRule)
{
    auto g = tmfkit::testing::rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 4 * static_cast<int>(tmfkit::testing::uniform(g, 0, 15));
        const auto B = basis(k);
        if (B.empty()) {
            continue;
        }
        std::vector<std::pair<FormMonomial, Integer>> terms;
        Integer delta_coeff = 0;
        for (const auto& m : B) {
            const Integer a(tmfkit::testing::uniform(g, -9, 9));
            terms.push_back({m, a});
            if (m.a == 0 && m.b == 0) {
                delta_coeff = a;
            }
        }
        const auto f = normal_form(ZZ, terms);
        if (f.is_zero()) {
            continue;
        }
        const int c = k / 12;
        const bool obstructed = k % 12 == 0 && c % 3 != 0 && delta_coeff % 3 != 0;
        EXPECT_EQ(lifts_to_homotopy(f).e, obstructed ? 1 : 0) << f.format();
    }
}

TEST(KOne, SphereExamplesAndBernoulliOracle)
{
    EXPECT_EQ(k1_sphere(3, 3).group_text(), "Z/3");
    EXPECT_EQ(k1_sphere(3, 11).group_text(), "Z/3^2");
    EXPECT_EQ(k1_sphere(3, 2).group_text(), "0");
    EXPECT_EQ(k1_sphere(3, 0).group_text(), "Z_3");
    EXPECT_EQ(k1_sphere(3, -1).group_text(), "Z_3");
    EXPECT_EQ(k1_sphere(5, 7).group_text(), "Z/5");
    EXPECT_EQ(k1_sphere(3, -13).group_text(), "Z/3^2");
    EXPECT_EQ(k1_sphere(3, -5).group_text(), "Z/3");
    try {
        k1_sphere(2, 1);
        FAIL();
    } catch (const input_error& e) {
        EXPECT_EQ(std::string(e.what()), "p = 2 is not supported: odd primes only");
    }
    EXPECT_THROW(k1_sphere(9, 1), input_error);
    // Image of J: in degree 4s - 1 the p-part of denom(B_2s / 4s).
    const auto B = bernoulli(44);
    for (long long p : {3, 5, 7}) {
        for (int k = 1; k <= 40; ++k) {
            const auto got = k1_sphere(p, k);
            int expect = 0;
            if ((k + 1) % 4 == 0) {
                const int s = (k + 1) / 4;
                const Rational q = B[static_cast<std::size_t>(2 * s)] / Rational(4 * s);
                expect = padic_valuation(boost::multiprecision::denominator(q), p);
            }
            EXPECT_EQ(got.exponent, expect) << p << " " << k;
            EXPECT_FALSE(got.free);
        }
    }
}

TEST(KOne, TmfAtTwo)
{
    EXPECT_EQ(k1_tmf_p2(3, 4, 8).group_text(), "0");
    const auto n1 = k1_tmf_p2(1, 3, 8);
    EXPECT_EQ(n1.group_text(), "(Z/2)^3");
    EXPECT_EQ(n1.basis, (std::vector<std::string>{"eta", "eta*(1/j)", "eta*(1/j)^2"}));
    const auto n8 = k1_tmf_p2(8, 2, 5);
    EXPECT_EQ(n8.group_text(), "Z_2^2 (mod 2^5)");
    EXPECT_EQ(n8.basis, (std::vector<std::string>{"b", "b*(1/j)"}));
    EXPECT_EQ(n8.folded, std::vector<std::string>{"v^2 = 2*b"});
    EXPECT_EQ(k1_tmf_p2(4, 1, 1).basis, std::vector<std::string>{"v"});
    EXPECT_EQ(k1_tmf_p2(-6, 1, 1).basis, std::vector<std::string>{"eta^2*b^-1"});
    for (int n = -40; n <= 40; ++n) {
        const int r = ((n % 8) + 8) % 8;
        EXPECT_EQ(k1_tmf_p2(n, 2, 3).pieces.empty(), r == 3 || r >= 5) << n;
    }
    EXPECT_THROW(k1_tmf_p2(1, 0, 1), input_error);
}

TEST(ChartOutput, JsonAndText)
{
    const auto j = chart_json(chart(), 5, {0, 30, 12});
    EXPECT_EQ(j["page"], 5);
    bool saw_delta = false;
    for (const auto& d : j["differentials"]) {
        if (d["source"]["label"] == "Delta") {
            saw_delta = true;
            EXPECT_EQ(d["target"]["s"], 5);
            EXPECT_EQ(d["target"]["t"], 14);
            EXPECT_EQ(d["target"]["label"], "alpha*beta^2");
        }
    }
    EXPECT_TRUE(saw_delta);
    for (const auto& e : j["entries"]) {
        EXPECT_TRUE(e.contains("s") && e.contains("t") && e.contains("free_rank") && e.contains("torsion")
                    && e.contains("gens"));
    }
    const auto inf = chart_json(chart(), 10, {24, 24, 12});
    ASSERT_EQ(inf["entries"].size(), 1U);
    EXPECT_EQ(inf["entries"][0]["gens"], json({"c4^3", "3*Delta"}));
    EXPECT_TRUE(inf["differentials"].empty());

    const std::string text = render_text(chart(), 10, {20, 27, 12});
    // Both classes at (n, s) = (24, 0) are stacked in one column.
    EXPECT_NE(text.find("c4^3"), std::string::npos);
    EXPECT_NE(text.find("3*Delta"), std::string::npos);
    EXPECT_NE(text.find("alpha*Delta"), std::string::npos);
    EXPECT_EQ(text, render_text(chart(), 10, {20, 27, 12}));
    EXPECT_THROW(parse_window("3-5", chart().window()), input_error);
    EXPECT_THROW(parse_window("5..3", chart().window()), input_error);
    EXPECT_THROW(parse_window("0..81", chart().window()), input_error);
    EXPECT_EQ(parse_window("-4..12", chart().window()).n_min, -4);
    EXPECT_THROW(stored_page(1), input_error);
}
