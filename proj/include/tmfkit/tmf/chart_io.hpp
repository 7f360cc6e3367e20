#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "tmfkit/algebra/descriptor.hpp"
#include "tmfkit/tmf/homotopy.hpp"

namespace tmfkit {

// E2 = H^s(M_ell-bar, omega^t), bidegree by bidegree, inside the configured window.
inline std::vector<ChartCell> coh_mell(const DescentChart& chart, int s_max, int t_min, int t_max)
{
    const ChartWindow& w = chart.window();
    if (s_max < 0 || s_max > w.s_max || t_min > t_max || t_min < -w.t_abs || t_max > w.t_abs) {
        throw input_error("coh_mell range s <= " + std::to_string(s_max) + ", t in [" + std::to_string(t_min) + ", "
                          + std::to_string(t_max) + "] exceeds the window s <= " + std::to_string(w.s_max)
                          + ", |t| <= " + std::to_string(w.t_abs));
    }
    std::vector<ChartCell> out;
    for (int s = 0; s <= s_max; ++s) {
        for (int t = t_min; t <= t_max; ++t) {
            const ChartCell& c = chart.cell(2, s, t);
            if (!c.is_zero()) {
                out.push_back(c);
            }
        }
    }
    return out;
}

// Page r of the spectral sequence: E2 = ... = E5, E6 = ... = E9, E10 = E_infinity.
inline int stored_page(int r)
{
    if (r < 2) {
        throw input_error("page index must be at least 2, got " + std::to_string(r));
    }
    return r <= 5 ? 2 : r <= 9 ? 6 : 10;
}

struct ChartRange {
    int n_min = 0;
    int n_max = 0;
    int s_max = 12;
};

inline std::vector<const ChartCell*> chart_cells(const DescentChart& chart, int r, const ChartRange& range)
{
    std::vector<const ChartCell*> out;
    for (int n = range.n_min; n <= range.n_max; ++n) {
        for (const ChartCell* c : chart.degree_cells(stored_page(r), n, range.s_max)) {
            out.push_back(c);
        }
    }
    return out;
}

inline ChartRange parse_window(const std::string& text, const ChartWindow& w)
{
    const auto dots = text.find("..");
    ChartRange r;
    r.s_max = w.s_max;
    try {
        if (dots == std::string::npos) {
            throw std::invalid_argument("missing ..");
        }
        std::size_t used = 0;
        const std::string a = text.substr(0, dots);
        const std::string b = text.substr(dots + 2);
        r.n_min = std::stoi(a, &used);
        if (used != a.size()) {
            throw std::invalid_argument("trailing");
        }
        r.n_max = std::stoi(b, &used);
        if (used != b.size()) {
            throw std::invalid_argument("trailing");
        }
    } catch (const std::logic_error&) {
        throw input_error("window must look like a..b, got '" + text + "'");
    }
    if (r.n_min > r.n_max) {
        throw input_error("window " + text + " is empty");
    }
    require_in_window(w, r.n_min);
    require_in_window(w, r.n_max);
    return r;
}

inline json to_json(const ChartCell& c)
{
    json j;
    j["s"] = c.s;
    j["t"] = c.t;
    j["degree"] = c.degree();
    j["free_rank"] = c.lattice.size();
    j["torsion"] = c.torsion ? json::array({3}) : json::array();
    j["gens"] = c.labels();
    return j;
}

inline json chart_json(const DescentChart& chart, int r, const ChartRange& range)
{
    json entries = json::array();
    for (const ChartCell* c : chart_cells(chart, r, range)) {
        entries.push_back(to_json(*c));
    }
    json diffs = json::array();
    if (r == 5 || r == 9) {
        for (const auto& d : chart.differentials(r, range.n_min, range.n_max, range.s_max)) {
            const int ts = d.t + (r - 1) / 2;
            diffs.push_back({{"r", r},
                             {"source", {{"s", d.s}, {"t", d.t}, {"label", d.source}}},
                             {"target", {{"s", d.s + r}, {"t", ts}, {"label", d.target}}},
                             {"coeff", d.coeff}});
        }
    }
    return {{"page", r}, {"entries", entries}, {"differentials", diffs}};
}

// ASCII chart: column 2t - s, row s (top row highest), one label per line inside a cell.
inline std::string render_text(const DescentChart& chart, int r, const ChartRange& range)
{
    const auto cells = chart_cells(chart, r, range);
    std::vector<int> cols;
    std::size_t width = 1;
    int top = 0;
    for (const ChartCell* c : cells) {
        cols.push_back(c->degree());
        top = std::max(top, c->s);
        for (const auto& l : c->labels()) {
            width = std::max(width, l.size());
        }
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (int n : cols) {
        width = std::max(width, std::to_string(n).size());
    }
    auto pad = [&](const std::string& s) { return s + std::string(width + 2 - s.size(), ' '); };
    std::ostringstream out;
    out << "E" << (r >= 10 ? std::string("_infinity") : std::to_string(r)) << " page, degrees " << range.n_min << ".."
        << range.n_max << ", s <= " << range.s_max << "\n";
    if (cells.empty()) {
        out << "(empty)\n";
        return out.str();
    }
    for (int s = top; s >= 0; --s) {
        std::vector<std::vector<std::string>> stacks;
        std::size_t height = 1;
        for (int n : cols) {
            std::vector<std::string> st;
            if ((n + s) % 2 == 0) {
                st = chart.cell(stored_page(r), s, (n + s) / 2).labels();
            }
            height = std::max(height, st.size());
            stacks.push_back(st);
        }
        for (std::size_t line = 0; line < height; ++line) {
            std::string row = line == 0 ? "s=" + std::to_string(s) : "";
            row.resize(6, ' ');
            row += "| ";
            for (const auto& st : stacks) {
                row += pad(line < st.size() ? st[line] : (line == 0 ? "." : ""));
            }
            while (!row.empty() && row.back() == ' ') {
                row.pop_back();
            }
            out << row << "\n";
        }
    }
    std::string axis = "n";
    axis.resize(6, ' ');
    axis += "| ";
    for (int n : cols) {
        axis += pad(std::to_string(n));
    }
    while (!axis.empty() && axis.back() == ' ') {
        axis.pop_back();
    }
    out << axis << "\n";
    return out.str();
}

inline json to_json(const HomotopyGroupReport& rep)
{
    json labels = json::array();
    json gens = json::array();
    for (const auto& g : rep.gens) {
        labels.push_back(g.label);
        gens.push_back({{"label", g.label},
                        {"order", g.order == 0 ? json("infinite") : json(g.order)},
                        {"provenance", provenance_name(g.provenance)},
                        {"detected_by", g.detected_by},
                        {"filtration", g.s}});
    }
    return {{"degree", rep.n},
            {"group", rep.group_text()},
            {"free_rank", rep.free_rank()},
            {"torsion", rep.torsion_orders()},
            {"gens", labels},
            {"generators", gens}};
}

inline json to_json(const ModPGroup& g)
{
    json gens = json::array();
    for (const auto& x : g.gens) {
        gens.push_back({{"label", x.label}, {"from", x.from_tor ? "tor" : "reduction"}});
    }
    return {{"degree", g.n}, {"p", g.p}, {"group", g.group_text()}, {"dimension", g.dimension()}, {"generators", gens}};
}

inline json to_json(const DualityReport& d)
{
    return {{"k", d.k},          {"partner", d.partner}, {"p", 3},           {"left", d.left},
            {"right", d.right},  {"matrix", d.matrix},   {"is_iso", d.is_iso}};
}

inline json to_json(const LiftVerdict& v)
{
    json j{{"weight", v.weight}, {"verdict", v.verdict}, {"lifts", v.lifts}, {"e", v.e}, {"footnotes", v.footnotes}};
    if (!v.obstruction.empty()) {
        j["obstruction"] = v.obstruction;
    }
    return j;
}

inline json to_json(const KOneTmfP2& k)
{
    json pieces = json::array();
    for (const auto& p : k.pieces) {
        pieces.push_back({{"monomial", p.monomial}, {"torsion", p.torsion == 0 ? json(nullptr) : json(p.torsion)}});
    }
    return {{"degree", k.n},         {"j_truncation", k.M}, {"adic_precision", k.A}, {"group", k.group_text()},
            {"pieces", pieces},      {"basis", k.basis},    {"folded", k.folded}};
}

inline json to_json(const KOneSphere& k)
{
    return {{"p", k.p}, {"degree", k.k}, {"group", k.group_text()}, {"free", k.free}, {"exponent", k.exponent}};
}

} // namespace tmfkit
