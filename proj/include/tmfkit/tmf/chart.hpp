#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "tmfkit/algebra/linalg.hpp"
#include "tmfkit/modforms/modular_form.hpp"

namespace tmfkit {

// 3-local descent spectral sequence for Tmf with 2 inverted.
//
// E2 in bidegree (s, t), topological degree 2t - s:
//   s = 0:           M_t, free on c4^a c6^b Delta^c
//   s = 1, t >= 0:   Z/3 alpha Delta^m when t = 2 + 12m
//   s = 1, t < 0:    a lattice in the dual of M_k, k = -t - 10, spanned by (Delta^n)^v and
//                    3 (mono)^v for the other basis monomials
//   s >= 2:          Z/3 beta^j Delta^m (s = 2j) or alpha beta^j Delta^m (s = 2j + 1), m in Z
// The class (Delta^n)^v plays the role of alpha Delta^(-n-1), which is why the torsion
// classes alpha Delta^m with m < 0 are absent.

// d5(Delta) = d5 * alpha beta^2 and d9(alpha Delta^2) = d9 * beta^5.
struct DifferentialSigns {
    int d5 = 1;
    int d9 = 1;
};

inline int mod3(long long v) { return static_cast<int>(((v % 3) + 3) % 3); }

struct ChartWindow {
    int n_min = -80;
    int n_max = 80;
    int s_max = 12;
    int t_abs = 60;

    bool contains_degree(int n) const { return n >= n_min && n <= n_max; }
};

// alpha^e beta^j Delta^m with e in {0, 1}.
struct TorsionClass {
    int e = 0;
    int j = 0;
    int m = 0;

    int s() const { return e + 2 * j; }
    int t() const { return 2 * e + 6 * j + 12 * m; }
    int degree() const { return 2 * t() - s(); }
    friend auto operator<=>(const TorsionClass&, const TorsionClass&) = default;
};

inline std::string power_label(const std::string& name, int e)
{
    return e == 1 ? name : name + "^" + std::to_string(e);
}

inline std::string label(const TorsionClass& c)
{
    std::vector<std::string> parts;
    if (c.e) {
        parts.push_back("alpha");
    }
    if (c.j) {
        parts.push_back(power_label("beta", c.j));
    }
    if (c.m) {
        parts.push_back(power_label("Delta", c.m));
    }
    std::string s;
    for (const auto& p : parts) {
        s += (s.empty() ? "" : "*") + p;
    }
    return s.empty() ? "1" : s;
}

inline std::string dual_label(const FormMonomial& m) { return "(" + format_form_monomial(m) + ")^v"; }

inline bool is_pure_delta(const FormMonomial& m) { return m.a == 0 && m.b == 0; }

// "c*L" with the coefficient dropped when it is 1.
inline std::string scaled_label(long long c, const std::string& l)
{
    if (c == 1) {
        return l;
    }
    if (c == -1) {
        return "-" + l;
    }
    return std::to_string(c) + "*" + l;
}

// One bidegree of a page: a lattice (given by generators in E2 coordinates) and at most
// one Z/3 class.
struct ChartCell {
    int s = 0;
    int t = 0;
    std::vector<std::string> basis; // E2 basis of the free part
    IntMatrix lattice;              // rows: generators of the E_r free part
    std::optional<TorsionClass> torsion;

    int degree() const { return 2 * t - s; }
    bool is_zero() const { return lattice.empty() && !torsion; }

    std::vector<std::string> free_labels() const
    {
        std::vector<std::string> out;
        for (const auto& row : lattice) {
            std::string l;
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (row[i] == 0) {
                    continue;
                }
                const std::string term = scaled_label(static_cast<long long>(row[i]), basis[i]);
                l += l.empty() ? term : " + " + term;
            }
            out.push_back(l);
        }
        return out;
    }
    std::vector<std::string> labels() const
    {
        auto out = free_labels();
        if (torsion) {
            out.push_back(label(*torsion));
        }
        return out;
    }
};

// Image of a generator under d_r: target class and coefficient mod 3.
struct DiffValue {
    TorsionClass target;
    int coeff = 0;
};

struct DifferentialRecord {
    int r = 0;
    int s = 0;
    int t = 0;
    std::string source;
    std::string target;
    int coeff = 0;
};

class DescentChart {
public:
    explicit DescentChart(ChartWindow w = {}, DifferentialSigns signs = {}) : window_(w), signs_(signs)
    {
        ensure((signs.d5 == 1 || signs.d5 == -1) && (signs.d9 == 1 || signs.d9 == -1), "differential signs must be +1 or -1");
    }

    const ChartWindow& window() const { return window_; }
    const DifferentialSigns& signs() const { return signs_; }

    static std::optional<TorsionClass> torsion_at(int s, int t)
    {
        if (s <= 0) {
            return std::nullopt;
        }
        const int e = s % 2;
        const int j = s / 2;
        const int rest = t - 2 * e - 6 * j;
        if (rest % 12 != 0) {
            return std::nullopt;
        }
        const int m = rest / 12;
        if (s == 1 && m < 0) {
            return std::nullopt;
        }
        return TorsionClass{e, j, m};
    }

    static ChartCell e2(int s, int t)
    {
        ChartCell c;
        c.s = s;
        c.t = t;
        if (s == 0 && t >= 0) {
            for (const auto& m : basis(t)) {
                c.basis.push_back(format_form_monomial(m));
            }
        } else if (s == 1 && t < 0) {
            for (const auto& m : basis(-t - 10)) {
                c.basis.push_back(is_pure_delta(m) ? dual_label(m) : "3*" + dual_label(m));
            }
        }
        for (std::size_t i = 0; i < c.basis.size(); ++i) {
            IntVector row(c.basis.size(), 0);
            row[i] = 1;
            c.lattice.push_back(row);
        }
        c.torsion = torsion_at(s, t);
        return c;
    }

    // d_r on the E2 basis of the free part at (s, t): one value per basis element.
    std::vector<DiffValue> d_free(int r, int s, int t) const
    {
        std::vector<DiffValue> out;
        if (s == 0 && t >= 0) {
            for (const auto& m : basis(t)) {
                DiffValue v{{1, 2, m.c - 1}, 0};
                if (r == 5 && is_pure_delta(m)) {
                    v.coeff = mod3(signs_.d5 * m.c);
                }
                out.push_back(v);
            }
        } else if (s == 1 && t < 0) {
            for (const auto& m : basis(-t - 10)) {
                // (Delta^n)^v stands for alpha Delta^(-n-1); it carries the d9 of that class.
                DiffValue v{{0, 5, -m.c - 3}, 0};
                if (r == 9 && is_pure_delta(m) && m.c % 3 == 0) {
                    v.coeff = mod3(signs_.d9);
                }
                out.push_back(v);
            }
        }
        return out;
    }

    std::optional<DiffValue> d_torsion(int r, const TorsionClass& c) const
    {
        if (r == 5 && c.e == 0 && mod3(c.m) != 0) {
            return DiffValue{{1, c.j + 2, c.m - 1}, mod3(signs_.d5 * c.m)};
        }
        if (r == 9 && c.e == 1 && mod3(c.m) == 2) {
            return DiffValue{{0, c.j + 5, c.m - 2}, mod3(signs_.d9)};
        }
        return std::nullopt;
    }

    // Page r in {2, 6, 10}; E10 is E_infinity.
    const ChartCell& cell(int r, int s, int t) const
    {
        const auto key = std::make_tuple(r, s, t);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        ChartCell c = r == 2 ? e2(s, t) : homology(r == 6 ? 5 : 9, s, t);
        return memo_.emplace(key, std::move(c)).first->second;
    }
    const ChartCell& e_infinity(int s, int t) const { return cell(10, s, t); }

    // Value of d_r (r = 5 or 9) on each current generator at (s, t); generators are the
    // lattice rows followed by the torsion class.
    std::vector<std::optional<DiffValue>> differential_on_page(int r, int s, int t) const
    {
        const ChartCell& src = cell(r == 5 ? 2 : 6, s, t);
        std::vector<std::optional<DiffValue>> out;
        const auto df = d_free(r, s, t);
        for (const auto& row : src.lattice) {
            long long v = 0;
            std::optional<TorsionClass> target;
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (df[i].coeff != 0) {
                    v += static_cast<long long>(row[i] % 3) * df[i].coeff;
                    target = df[i].target;
                }
            }
            if (mod3(v) != 0) {
                out.push_back(DiffValue{*target, mod3(v)});
            } else {
                out.push_back(std::nullopt);
            }
        }
        if (src.torsion) {
            out.push_back(d_torsion(r, *src.torsion));
        }
        return out;
    }

    // All bidegrees with 2t - s = n and s <= s_cap.
    std::vector<const ChartCell*> degree_cells(int r, int n, int s_cap) const
    {
        std::vector<const ChartCell*> out;
        for (int s = 0; s <= s_cap; ++s) {
            if ((n + s) % 2 != 0) {
                continue;
            }
            const ChartCell& c = cell(r, s, (n + s) / 2);
            if (!c.is_zero()) {
                out.push_back(&c);
            }
        }
        return out;
    }

    std::vector<DifferentialRecord> differentials(int r, int n_min, int n_max, int s_cap) const
    {
        std::vector<DifferentialRecord> out;
        for (int n = n_min; n <= n_max; ++n) {
            for (int s = 0; s <= s_cap; ++s) {
                if ((n + s) % 2 != 0) {
                    continue;
                }
                const int t = (n + s) / 2;
                const ChartCell& src = cell(r == 5 ? 2 : 6, s, t);
                const auto labels = src.labels();
                const auto d = differential_on_page(r, s, t);
                for (std::size_t i = 0; i < d.size(); ++i) {
                    if (d[i]) {
                        out.push_back({r, s, t, labels[i], label(d[i]->target), d[i]->coeff});
                    }
                }
            }
        }
        return out;
    }

private:
    ChartCell homology(int r, int s, int t) const
    {
        const int prev = r == 5 ? 2 : 6;
        ChartCell c = cell(prev, s, t);
        // Outgoing: kernel.
        const auto d = differential_on_page(r, s, t);
        std::optional<std::size_t> pivot;
        for (std::size_t i = 0; i < c.lattice.size(); ++i) {
            if (d[i]) {
                ensure(cell(prev, s + r, t + (r - 1) / 2).torsion == d[i]->target,
                       "d" + std::to_string(r) + " hits a class that is not on its page");
                if (!pivot) {
                    pivot = i;
                }
            }
        }
        if (pivot) {
            const int pv = d[*pivot]->coeff;
            const int inv = pv; // 1 and 2 are their own inverses mod 3
            IntMatrix rows;
            for (std::size_t i = 0; i < c.lattice.size(); ++i) {
                if (i == *pivot) {
                    IntVector row = c.lattice[i];
                    for (auto& x : row) {
                        x *= 3;
                    }
                    rows.push_back(row);
                } else if (d[i]) {
                    const int k = mod3(static_cast<long long>(d[i]->coeff) * inv);
                    IntVector row = c.lattice[i];
                    for (std::size_t j = 0; j < row.size(); ++j) {
                        row[j] -= k * c.lattice[*pivot][j];
                    }
                    rows.push_back(row);
                } else {
                    rows.push_back(c.lattice[i]);
                }
            }
            c.lattice = rows;
        }
        if (c.torsion && d.back()) {
            ensure(cell(prev, s + r, t + (r - 1) / 2).torsion == d.back()->target,
                   "d" + std::to_string(r) + " hits a class that is not on its page");
            c.torsion.reset();
        }
        // Incoming: the torsion class dies if it is hit.
        if (c.torsion && s - r >= 0) {
            const int ss = s - r;
            const int tt = t - (r - 1) / 2;
            for (const auto& v : differential_on_page(r, ss, tt)) {
                if (v && v->target == *c.torsion) {
                    c.torsion.reset();
                    break;
                }
            }
        }
        return c;
    }

    ChartWindow window_;
    DifferentialSigns signs_;
    mutable std::map<std::tuple<int, int, int>, ChartCell> memo_;
};

} // namespace tmfkit
