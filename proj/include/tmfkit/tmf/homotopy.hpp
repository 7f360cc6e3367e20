#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tmfkit/tmf/chart.hpp"

namespace tmfkit {

// pi_* Tmf[1/2] localized at 3, read off the DM/DC presentations.

// Torsion monomial alpha^e beta^j x^k Delta^(3q) of DM^*_*.
struct DMTorsion {
    int e = 0;
    int j = 0;
    int k = 0;
    int q = 0;

    int degree() const { return 3 * e + 10 * j + 27 * k + 72 * q; }
    friend auto operator<=>(const DMTorsion&, const DMTorsion&) = default;
};

inline std::string label(const DMTorsion& w)
{
    std::vector<std::string> parts;
    if (w.e) {
        parts.push_back(power_label("alpha", w.e));
    }
    if (w.k) {
        parts.push_back(power_label("x", w.k));
    }
    if (w.j) {
        parts.push_back(power_label("beta", w.j));
    }
    if (w.q) {
        parts.push_back(power_label("Delta", 3 * w.q));
    }
    std::string s;
    for (const auto& p : parts) {
        s += (s.empty() ? "" : "*") + p;
    }
    return s.empty() ? "1" : s;
}

// Additive basis of the torsion of DM^*_* with Delta^3 stripped.
inline const std::vector<DMTorsion>& dm_torsion_units()
{
    static const std::vector<DMTorsion> units{{1, 0, 0, 0}, {1, 1, 0, 0}, {0, 1, 0, 0}, {0, 2, 0, 0},
                                              {0, 3, 0, 0}, {0, 4, 0, 0}, {0, 0, 1, 0}, {0, 1, 1, 0}};
    return units;
}

// Normal form under 3a = 3b = 3x = 0, a^2 = x^2 = b^5 = ab^2 = xb^2 = 0, ax = b^3.
inline std::optional<DMTorsion> dm_reduce(DMTorsion w)
{
    while (w.e > 0 && w.k > 0) {
        --w.e;
        --w.k;
        w.j += 3;
    }
    if (w.e >= 2 || w.k >= 2 || w.j >= 5 || ((w.e || w.k) && w.j >= 2) || w.q < 0) {
        return std::nullopt;
    }
    return w;
}

inline std::optional<DMTorsion> dm_multiply(const DMTorsion& a, const DMTorsion& b)
{
    return dm_reduce({a.e + b.e, a.j + b.j, a.k + b.k, a.q + b.q});
}

// The E2 class detecting a DM torsion monomial.
inline TorsionClass detecting_class(const DMTorsion& w)
{
    if (w.k) {
        return {1, w.j, 3 * w.q + 1};
    }
    return {w.e, w.j, 3 * w.q};
}

// The E2 class detecting the dual (w)^v, which lives in degree -deg(w) - 22.
inline TorsionClass detecting_dual_class(const DMTorsion& w)
{
    if (w.e && w.j == 0) {
        return {1, 2, -2 - 3 * w.q};
    }
    if (w.e) {
        return {1, 1, -2 - 3 * w.q};
    }
    if (w.k && w.j == 0) {
        return {1, 2, -3 - 3 * w.q};
    }
    if (w.k) {
        return {1, 1, -3 - 3 * w.q};
    }
    return {0, 5 - w.j, -3 - 3 * w.q};
}

enum class Provenance { DM, DC, K1 };

inline std::string provenance_name(Provenance p)
{
    switch (p) {
    case Provenance::DM:
        return "DM";
    case Provenance::DC:
        return "DC";
    case Provenance::K1:
        return "K1";
    }
    return "?";
}

struct HomotopyGenerator {
    std::string label;
    int order = 0; // 0 for a free Z_(3) summand, else 3
    Provenance provenance = Provenance::DM;
    std::string detected_by;
    int s = 0; // filtration of the detecting class
    // Free summands: coordinates in the E2 basis at (s, t), i.e. monomials for DM, dual basis for DC.
    FormMonomial monomial;
    Integer scale = 1;
    // Torsion summands: the DM monomial (itself or the one it is dual to).
    std::optional<DMTorsion> torsion;
};

struct HomotopyGroupReport {
    int n = 0;
    std::vector<HomotopyGenerator> gens;

    int free_rank() const
    {
        return static_cast<int>(std::count_if(gens.begin(), gens.end(), [](const auto& g) { return g.order == 0; }));
    }
    std::vector<int> torsion_orders() const
    {
        std::vector<int> out;
        for (const auto& g : gens) {
            if (g.order) {
                out.push_back(g.order);
            }
        }
        return out;
    }
    std::string group_text() const
    {
        const int r = free_rank();
        const auto tors = torsion_orders();
        std::vector<std::string> parts;
        if (r == 1) {
            parts.push_back("Z_(3)");
        } else if (r > 1) {
            parts.push_back("Z_(3)^" + std::to_string(r));
        }
        if (tors.size() == 1) {
            parts.push_back("Z/3");
        } else if (tors.size() > 1) {
            parts.push_back("(Z/3)^" + std::to_string(tors.size()));
        }
        std::string s;
        for (const auto& p : parts) {
            s += (s.empty() ? "" : " + ") + p;
        }
        return s.empty() ? "0" : s;
    }
};

inline void require_in_window(const ChartWindow& w, int n)
{
    if (!w.contains_degree(n)) {
        throw input_error("degree " + std::to_string(n) + " outside the window [" + std::to_string(w.n_min) + ", "
                          + std::to_string(w.n_max) + "]");
    }
}

// Presentation route, no spectral sequence involved.
inline HomotopyGroupReport presentation_pi(int n)
{
    HomotopyGroupReport rep;
    rep.n = n;
    if (n >= 0) {
        if (n % 2 == 0) {
            for (const auto& m : basis(n / 2)) {
                HomotopyGenerator g;
                g.monomial = m;
                g.provenance = Provenance::DM;
                g.scale = is_pure_delta(m) && m.c % 3 != 0 ? 3 : 1;
                g.label = scaled_label(static_cast<long long>(g.scale), format_form_monomial(m));
                g.detected_by = g.label;
                rep.gens.push_back(g);
            }
        }
        for (const auto& u : dm_torsion_units()) {
            const int rest = n - u.degree();
            if (rest < 0 || rest % 72 != 0) {
                continue;
            }
            DMTorsion w = u;
            w.q = rest / 72;
            const TorsionClass d = detecting_class(w);
            HomotopyGenerator g;
            g.label = label(w);
            g.order = 3;
            g.provenance = Provenance::DM;
            g.detected_by = label(d);
            g.s = d.s();
            g.torsion = w;
            rep.gens.push_back(g);
        }
        return rep;
    }
    // K^1: Hom(M_k, 3Z_(3)) in degree -2k - 21, refined by (Delta^c)^v for 3 not dividing c.
    if ((-n - 21) >= 0 && (-n - 21) % 2 == 0) {
        for (const auto& m : basis((-n - 21) / 2)) {
            HomotopyGenerator g;
            g.monomial = m;
            g.s = 1;
            if (is_pure_delta(m) && m.c % 3 != 0) {
                g.label = dual_label(m);
                g.provenance = Provenance::DC;
            } else {
                g.scale = 3;
                g.label = "3*" + dual_label(m);
                g.provenance = Provenance::K1;
            }
            g.detected_by = g.label;
            rep.gens.push_back(g);
        }
    }
    for (const auto& u : dm_torsion_units()) {
        const int rest = -n - 22 - u.degree();
        if (rest < 0 || rest % 72 != 0) {
            continue;
        }
        DMTorsion w = u;
        w.q = rest / 72;
        const TorsionClass d = detecting_dual_class(w);
        HomotopyGenerator g;
        g.label = "(" + label(w) + ")^v";
        g.order = 3;
        g.provenance = Provenance::DC;
        g.detected_by = label(d);
        g.s = d.s();
        g.torsion = w;
        rep.gens.push_back(g);
    }
    return rep;
}

// Highest filtration examined when comparing with E_infinity.
inline constexpr int kVanishingCheckS = 40;

// pi_n with the E_infinity cross-check: every torsion generator is detected by a surviving
// class in the right filtration, and the free part matches the E_infinity lattices label by label.
inline HomotopyGroupReport tmf_pi(const DescentChart& chart, int n)
{
    require_in_window(chart.window(), n);
    HomotopyGroupReport rep = presentation_pi(n);
    std::vector<std::string> e_free;
    std::vector<std::string> e_tors;
    for (const ChartCell* c : chart.degree_cells(10, n, kVanishingCheckS)) {
        ensure(c->s <= 8, "E_infinity is nonzero above filtration 8 at (" + std::to_string(c->s) + ", "
                              + std::to_string(c->t) + ")");
        for (const auto& l : c->free_labels()) {
            e_free.push_back(l);
        }
        if (c->torsion) {
            e_tors.push_back(label(*c->torsion));
        }
    }
    std::vector<std::string> p_free;
    std::vector<std::string> p_tors;
    for (const auto& g : rep.gens) {
        (g.order ? p_tors : p_free).push_back(g.detected_by);
    }
    for (auto* v : {&e_free, &e_tors, &p_free, &p_tors}) {
        std::sort(v->begin(), v->end());
    }
    ensure(e_free == p_free, "free part of pi_" + std::to_string(n) + " disagrees with E_infinity");
    ensure(e_tors == p_tors, "torsion of pi_" + std::to_string(n) + " disagrees with E_infinity");
    return rep;
}

inline HomotopyGroupReport tmf_pi(int n)
{
    static const DescentChart chart;
    return tmf_pi(chart, n);
}

// pi_n(tmf/3) = pi_n / 3 + Tor(pi_{n-1}, Z/3).
struct ModPGenerator {
    std::string label;
    bool from_tor = false;
    HomotopyGenerator source;
};

struct ModPGroup {
    int n = 0;
    int p = 3;
    std::vector<ModPGenerator> gens;

    int dimension() const { return static_cast<int>(gens.size()); }
    std::string group_text() const
    {
        if (gens.empty()) {
            return "0";
        }
        return gens.size() == 1 ? "F_3" : "F_3^" + std::to_string(gens.size());
    }
};

inline void require_p3(long long p)
{
    if (p != 3) {
        throw input_error("the chart engine is 3-local: p must be 3, got " + std::to_string(p));
    }
}

inline ModPGroup tmf_mod_p_pi(const DescentChart& chart, int n, long long p = 3)
{
    require_p3(p);
    require_in_window(chart.window(), n);
    require_in_window(chart.window(), n - 1);
    ModPGroup out;
    out.n = n;
    for (const auto& g : tmf_pi(chart, n).gens) {
        out.gens.push_back({g.label, false, g});
    }
    for (const auto& g : tmf_pi(chart, n - 1).gens) {
        if (g.order) {
            out.gens.push_back({"tor(" + g.label + ")", true, g});
        }
    }
    return out;
}

inline ModPGroup tmf_mod_p_pi(int n, long long p = 3)
{
    static const DescentChart chart;
    return tmf_mod_p_pi(chart, n, p);
}

struct DualityReport {
    int k = 0;
    int partner = 0;
    std::vector<std::string> left;
    std::vector<std::string> right;
    std::vector<std::vector<int>> matrix; // entries mod 3
    bool is_iso = false;
};

namespace detail {

// Pairing of a DM class with a DC class into pi_{-21}(tmf/3) = F_3 . 3(1)^v.
inline int duality_entry(const ModPGenerator& dm, const ModPGenerator& dc)
{
    const auto& a = dm.source;
    const auto& b = dc.source;
    if (a.order == 0 && b.order == 0 && !dm.from_tor && !dc.from_tor) {
        if (!(a.monomial == b.monomial)) {
            return 0;
        }
        // <scale_a * m, scale_b * m^v> in units of 3 (1)^v.
        const Integer v = a.scale * b.scale;
        ensure(v % 3 == 0, "free pairing is not divisible by 3");
        return mod3(static_cast<long long>(v / 3));
    }
    if (a.order && b.order && a.torsion == b.torsion && dm.from_tor != dc.from_tor) {
        return 1;
    }
    return 0;
}

inline std::size_t rank_mod3(std::vector<std::vector<int>> m)
{
    std::size_t rank = 0;
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] == 0) {
            ++piv;
        }
        if (piv == m.size()) {
            continue;
        }
        std::swap(m[piv], m[rank]);
        const int inv = m[rank][c]; // self-inverse mod 3
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r != rank && m[r][c]) {
                const int f = mod3(static_cast<long long>(m[r][c]) * inv);
                for (std::size_t j = 0; j < cols; ++j) {
                    m[r][j] = mod3(m[r][j] - static_cast<long long>(f) * m[rank][j]);
                }
            }
        }
        ++rank;
    }
    return rank;
}

} // namespace detail

inline DualityReport duality_check(const DescentChart& chart, int k, long long p = 3)
{
    require_p3(p);
    const int partner = -k - 21;
    for (int n : {k, k - 1, partner, partner - 1}) {
        require_in_window(chart.window(), n);
    }
    const ModPGroup L = tmf_mod_p_pi(chart, k);
    const ModPGroup R = tmf_mod_p_pi(chart, partner);
    DualityReport rep;
    rep.k = k;
    rep.partner = partner;
    for (const auto& g : L.gens) {
        rep.left.push_back(g.label);
    }
    for (const auto& g : R.gens) {
        rep.right.push_back(g.label);
    }
    for (const auto& a : L.gens) {
        std::vector<int> row;
        for (const auto& b : R.gens) {
            row.push_back(k >= 0 ? detail::duality_entry(a, b) : detail::duality_entry(b, a));
        }
        rep.matrix.push_back(row);
    }
    rep.is_iso = L.gens.size() == R.gens.size() && detail::rank_mod3(rep.matrix) == L.gens.size();
    return rep;
}

inline DualityReport duality_check(int k, long long p = 3)
{
    static const DescentChart chart;
    return duality_check(chart, k, p);
}

// Degrees k for which duality_check is defined in the given window.
inline std::pair<int, int> duality_range(const ChartWindow& w)
{
    const int lo = std::max({w.n_min + 1, -w.n_max - 21, -w.n_max - 22 + 1});
    const int hi = std::min({w.n_max, -w.n_min - 22, -w.n_min - 21});
    return {lo, hi};
}

struct LiftVerdict {
    int weight = 0;
    bool lifts = false;
    int e = 0; // minimal e with 3^e f a permanent cycle
    std::string verdict;
    std::string obstruction; // the d5 value when f does not lift
    std::vector<std::string> footnotes;
};

// Whether a weight-k modular form with 3-local integral coefficients survives to E_infinity.
template <CoefficientRing R>
    requires std::is_constructible_v<Rational, element_t<R>>
LiftVerdict lifts_to_homotopy(const ModularForm<R>& f)
{
    if (!f.is_zero() && !f.weight()) {
        throw input_error("lifts_to_homotopy needs a homogeneous form, got weight " + f.weight_text());
    }
    static const DescentChart chart;
    LiftVerdict v;
    v.weight = f.is_zero() ? 0 : *f.weight();
    std::map<FormMonomial, Rational, BasisOrder> coeffs;
    for (const auto& [m, a] : f.terms()) {
        const Rational q(a);
        if (boost::multiprecision::denominator(q) % 3 == 0) {
            throw input_error("coefficient of " + format_form_monomial(m) + " is not 3-locally integral");
        }
        coeffs[m] = q;
    }
    const auto B = basis(v.weight);
    const ChartCell& cell = chart.e_infinity(0, v.weight);
    // The zero-line lattice is diagonal: each basis monomial either survives or needs a factor of 3.
    bool found = false;
    for (int e = 0; e <= 1 && !found; ++e) {
        bool ok = true;
        for (std::size_t i = 0; i < B.size(); ++i) {
            const IntVector& row = cell.lattice[i];
            for (std::size_t j = 0; j < row.size(); ++j) {
                ensure(j == i || row[j] == 0, "zero-line lattice is not diagonal");
            }
            const auto it = coeffs.find(B[i]);
            if (it == coeffs.end()) {
                continue;
            }
            Rational q = it->second * (e ? 3 : 1) / Rational(row[i]);
            if (boost::multiprecision::denominator(q) % 3 == 0) {
                ok = false;
                v.obstruction = "d5(" + format_form_monomial(B[i]) + ") = "
                                + scaled_label(B[i].c * chart.signs().d5, label(TorsionClass{1, 2, B[i].c - 1}));
            }
        }
        if (ok) {
            found = true;
            v.e = e;
        }
    }
    ensure(found, "3 times a zero-line class failed to survive");
    v.lifts = v.e == 0;
    if (v.e > 0) {
        v.verdict = "multiple-of-3^" + std::to_string(v.e) + " lifts";
    } else {
        v.verdict = "lifts";
        v.obstruction.clear();
    }
    v.footnotes = {"integrally, 24*Delta is a homotopy class but Delta is not; 3-locally this is 3*Delta",
                   "integrally, 2*c6 is a homotopy class but c6 is not; the factor 2 is invisible with 2 inverted",
                   "c4 is a homotopy class", "the prime-2 part of these statements is outside the 3-local engine"};
    return v;
}

struct KOnePiece {
    std::string monomial; // e.g. "eta*b^-1"
    int torsion = 0;      // 0 for a free summand, else the order
};

struct KOneTmfP2 {
    int n = 0;
    int M = 1;
    int A = 1;
    std::vector<KOnePiece> pieces;
    std::vector<std::string> basis; // pieces times (1/j)^k, k < M
    std::vector<std::string> folded;

    std::string group_text() const
    {
        if (pieces.empty()) {
            return "0";
        }
        const KOnePiece& p = pieces.front();
        const std::string e = M == 1 ? "" : "^" + std::to_string(M);
        if (p.torsion) {
            return M == 1 ? "Z/2" : "(Z/2)" + e;
        }
        return "Z_2" + e + " (mod 2^" + std::to_string(A) + ")";
    }
};

// Degree-n part of Z_2[1/j]^[eta, v, b^(+-1)] / (2 eta, eta^3, v eta, v^2 - 2b), |eta| = 1, |v| = 4, |b| = 8.
inline KOneTmfP2 k1_tmf_p2(long long n, int M, int A)
{
    if (M < 1 || A < 1) {
        throw input_error("j truncation and adic precision must be at least 1");
    }
    KOneTmfP2 out;
    out.n = static_cast<int>(n);
    out.M = M;
    out.A = A;
    const long long r = ((n % 8) + 8) % 8;
    const long long g = (n - r) / 8;
    const std::string bg = g == 0 ? "" : power_label("b", static_cast<int>(g));
    auto join = [&](const std::string& a) {
        if (a.empty()) {
            return bg.empty() ? std::string("1") : bg;
        }
        return bg.empty() ? a : a + "*" + bg;
    };
    if (r == 0) {
        out.pieces.push_back({join(""), 0});
        out.folded.push_back("v^2 = 2*b");
    } else if (r == 1) {
        out.pieces.push_back({join("eta"), 2});
    } else if (r == 2) {
        out.pieces.push_back({join("eta^2"), 2});
    } else if (r == 4) {
        out.pieces.push_back({join("v"), 0});
    }
    for (const auto& p : out.pieces) {
        for (int k = 0; k < M; ++k) {
            out.basis.push_back(k == 0 ? p.monomial : p.monomial + "*" + power_label("(1/j)", k));
        }
    }
    return out;
}

struct KOneSphere {
    long long p = 0;
    long long k = 0;
    bool free = false;
    int exponent = 0; // Z/p^exponent when not free; 0 means the zero group

    std::string group_text() const
    {
        if (free) {
            return "Z_" + std::to_string(p);
        }
        if (exponent == 0) {
            return "0";
        }
        return exponent == 1 ? "Z/" + std::to_string(p) : "Z/" + std::to_string(p) + "^" + std::to_string(exponent);
    }
};

// pi_k of the K(1)-local sphere at an odd prime.
inline KOneSphere k1_sphere(long long p, long long k)
{
    if (p == 2) {
        throw input_error("p = 2 is not supported: odd primes only");
    }
    require_prime(Integer(p));
    KOneSphere out{p, k, false, 0};
    if (k == 0 || k == -1) {
        out.free = true;
        return out;
    }
    const long long period = 2 * (p - 1);
    if ((k + 1) % period != 0) {
        return out;
    }
    long long m = (k + 1) / period;
    int t = 0;
    while (m % p == 0) {
        m /= p;
        ++t;
    }
    out.exponent = t + 1;
    return out;
}

} // namespace tmfkit
