#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tmfkit/algebra/linalg.hpp"
#include "tmfkit/fgl/height.hpp"

namespace tmfkit {

// Polynomial over Z in a fixed number of generators, sparse by exponent vector.
class MPoly {
public:
    using Exps = std::vector<int>;

    MPoly() = default;
    explicit MPoly(std::size_t nvars) : n_(nvars) {}
    static MPoly constant(std::size_t nvars, const Integer& c)
    {
        MPoly r(nvars);
        r.add(Exps(nvars, 0), c);
        return r;
    }
    static MPoly monomial(const Exps& e, const Integer& c = 1)
    {
        MPoly r(e.size());
        r.add(e, c);
        return r;
    }

    std::size_t nvars() const { return n_; }
    const std::map<Exps, Integer>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add(const Exps& e, const Integer& c)
    {
        if (c == 0) {
            return;
        }
        auto [it, fresh] = t_.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) {
                t_.erase(it);
            }
        }
    }

    friend MPoly operator+(const MPoly& a, const MPoly& b)
    {
        MPoly r = a;
        r.n_ = std::max(a.n_, b.n_);
        for (const auto& [e, c] : b.t_) {
            r.add(e, c);
        }
        return r;
    }
    MPoly operator-() const
    {
        MPoly r(n_);
        for (const auto& [e, c] : t_) {
            r.t_.emplace(e, -c);
        }
        return r;
    }
    friend MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }
    friend MPoly operator*(const MPoly& a, const MPoly& b)
    {
        MPoly r(std::max(a.n_, b.n_));
        for (const auto& [ea, ca] : a.t_) {
            for (const auto& [eb, cb] : b.t_) {
                Exps e = ea;
                for (std::size_t i = 0; i < e.size(); ++i) {
                    e[i] += eb[i];
                }
                r.add(e, ca * cb);
            }
        }
        return r;
    }
    friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }

private:
    std::size_t n_ = 0;
    std::map<Exps, Integer> t_;
};

// Z[g_1, ..., g_k] with positive integer degrees on the generators.
class MPolyRing {
public:
    using element_type = MPoly;

    MPolyRing(std::vector<std::string> names, std::vector<int> degrees)
        : names_(std::move(names)), degrees_(std::move(degrees))
    {
        if (names_.size() != degrees_.size()) {
            throw input_error("generator names and degrees differ in length");
        }
        for (int d : degrees_) {
            if (d <= 0) {
                throw input_error("generator degrees must be positive");
            }
        }
    }

    std::size_t nvars() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& degrees() const { return degrees_; }

    MPoly zero() const { return MPoly(nvars()); }
    MPoly one() const { return MPoly::constant(nvars(), 1); }
    MPoly from_integer(const Integer& n) const { return MPoly::constant(nvars(), n); }
    MPoly gen(std::size_t i) const
    {
        MPoly::Exps e(nvars(), 0);
        e.at(i) = 1;
        return MPoly::monomial(e);
    }
    bool is_zero(const MPoly& a) const { return a.is_zero(); }
    std::optional<MPoly> try_inverse(const MPoly& a) const
    {
        if (a == one() || a == -one()) {
            return a;
        }
        return std::nullopt;
    }
    // Division by an integer constant only.
    std::optional<MPoly> try_divide(const MPoly& a, const MPoly& b) const
    {
        if (a.is_zero()) {
            return zero();
        }
        if (b.terms().size() != 1 || b.terms().begin()->first != MPoly::Exps(nvars(), 0)) {
            return std::nullopt;
        }
        const Integer& d = b.terms().begin()->second;
        MPoly r(nvars());
        for (const auto& [e, c] : a.terms()) {
            if (c % d != 0) {
                return std::nullopt;
            }
            r.add(e, c / d);
        }
        return r;
    }
    Integer characteristic() const { return 0; }
    bool is_field() const { return false; }

    int degree_of(const MPoly::Exps& e) const
    {
        int d = 0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            d += e[i] * degrees_[i];
        }
        return d;
    }
    // Degree of a nonzero homogeneous element; nullopt if mixed.
    std::optional<int> homogeneous_degree(const MPoly& a) const
    {
        std::optional<int> d;
        for (const auto& [e, c] : a.terms()) {
            const int k = degree_of(e);
            if (d && *d != k) {
                return std::nullopt;
            }
            d = k;
        }
        return d;
    }

    std::string format(const MPoly& a) const
    {
        if (a.is_zero()) {
            return "0";
        }
        std::string s;
        // Highest degree first for readability.
        for (auto it = a.terms().rbegin(); it != a.terms().rend(); ++it) {
            const auto& [e, c] = *it;
            std::string mono;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) {
                    continue;
                }
                if (!mono.empty()) {
                    mono += "*";
                }
                mono += names_[i] + (e[i] == 1 ? "" : "^" + std::to_string(e[i]));
            }
            Integer mag = c < 0 ? Integer(-c) : c;
            std::string term = mono.empty() ? mag.str() : (mag == 1 ? mono : mag.str() + "*" + mono);
            if (s.empty()) {
                s = c < 0 ? "-" + term : term;
            } else {
                s += (c < 0 ? " - " : " + ") + term;
            }
        }
        return s;
    }
    json to_json(const MPoly& a) const
    {
        json arr = json::array();
        for (const auto& [e, c] : a.terms()) {
            arr.push_back({{"exp", e}, {"coeff", integer_to_json(c)}});
        }
        return arr;
    }
    MPoly from_json(const json& j, const std::string& path) const
    {
        if (j.is_number_integer() || j.is_string()) {
            return from_integer(json_integer(j, path));
        }
        if (!j.is_array()) {
            json_fail(path, "expected an integer or a list of {exp, coeff} terms");
        }
        MPoly r(nvars());
        for (std::size_t i = 0; i < j.size(); ++i) {
            const std::string tp = path + "/" + std::to_string(i);
            const json& exp = json_field(j[i], "exp", tp);
            if (!exp.is_array() || exp.size() != nvars()) {
                json_fail(tp + "/exp", "expected " + std::to_string(nvars()) + " exponents");
            }
            MPoly::Exps e;
            for (std::size_t v = 0; v < nvars(); ++v) {
                const auto k = json_int64(exp[v], tp + "/exp/" + std::to_string(v));
                if (k < 0 || k > 1000) {
                    json_fail(tp + "/exp/" + std::to_string(v), "exponent out of range");
                }
                e.push_back(static_cast<int>(k));
            }
            r.add(e, json_integer(json_field(j[i], "coeff", tp), tp + "/coeff"));
        }
        return r;
    }
    // Display only: generator names are joined into the variable field.
    RingDescriptor descriptor() const
    {
        std::string v;
        for (const auto& n : names_) {
            v += (v.empty() ? "" : ",") + n;
        }
        return polynomial_descriptor(integers_descriptor(), v);
    }
    friend bool operator==(const MPolyRing& a, const MPolyRing& b)
    {
        return a.names_ == b.names_ && a.degrees_ == b.degrees_;
    }

private:
    std::vector<std::string> names_;
    std::vector<int> degrees_;
};

static_assert(CoefficientRing<MPolyRing>);

// R = Z[generators] / (relations), relations homogeneous.
class GradedPresentation {
public:
    GradedPresentation(MPolyRing ring, std::vector<MPoly> relations) : ring_(std::move(ring)), rel_(std::move(relations))
    {
        for (std::size_t i = 0; i < rel_.size(); ++i) {
            if (!rel_[i].is_zero() && !ring_.homogeneous_degree(rel_[i])) {
                throw input_error("non-homogeneous presentation: relation " + std::to_string(i));
            }
        }
    }

    const MPolyRing& ring() const { return ring_; }
    const std::vector<MPoly>& relations() const { return rel_; }

    // Monomials of degree d in a fixed (lexicographic) order.
    std::vector<MPoly::Exps> basis(int d) const
    {
        std::vector<MPoly::Exps> out;
        MPoly::Exps e(ring_.nvars(), 0);
        enumerate(0, d, e, out);
        return out;
    }

    // Coordinates of a homogeneous degree-d element in basis(d).
    IntVector coordinates(const MPoly& a, const std::vector<MPoly::Exps>& basis) const
    {
        IntVector v(basis.size(), Integer(0));
        for (const auto& [e, c] : a.terms()) {
            const auto it = std::lower_bound(basis.begin(), basis.end(), e);
            if (it == basis.end() || *it != e) {
                throw consistency_error("monomial outside its graded piece");
            }
            v[static_cast<std::size_t>(it - basis.begin())] = c;
        }
        return v;
    }

    // Spanning rows of the degree-d part of the ideal generated by `gens` (homogeneous).
    IntMatrix ideal_part(const std::vector<MPoly>& gens, int d) const
    {
        const auto b = basis(d);
        IntMatrix rows;
        for (const auto& g : gens) {
            if (g.is_zero()) {
                continue;
            }
            const int dg = *ring_.homogeneous_degree(g);
            if (dg > d) {
                continue;
            }
            for (const auto& m : basis(d - dg)) {
                rows.push_back(coordinates(MPoly::monomial(m) * g, b));
            }
        }
        return rows;
    }

    // Degree-d part of an element, possibly zero.
    MPoly part(const MPoly& a, int d) const
    {
        MPoly r(ring_.nvars());
        for (const auto& [e, c] : a.terms()) {
            if (ring_.degree_of(e) == d) {
                r.add(e, c);
            }
        }
        return r;
    }

    // Is a (any element) zero in R?
    bool vanishes(const MPoly& a) const
    {
        std::vector<int> degs;
        for (const auto& [e, c] : a.terms()) {
            degs.push_back(ring_.degree_of(e));
        }
        std::sort(degs.begin(), degs.end());
        degs.erase(std::unique(degs.begin(), degs.end()), degs.end());
        for (int d : degs) {
            const MPoly p = part(a, d);
            if (!in_lattice(coordinates(p, basis(d)), ideal_part(rel_, d))) {
                return false;
            }
        }
        return true;
    }

private:
    void enumerate(std::size_t i, int left, MPoly::Exps& e, std::vector<MPoly::Exps>& out) const
    {
        if (i == e.size()) {
            if (left == 0) {
                out.push_back(e);
            }
            return;
        }
        for (int k = 0; k * ring_.degrees()[i] <= left; ++k) {
            e[i] = k;
            enumerate(i + 1, left - k * ring_.degrees()[i], e, out);
        }
        e[i] = 0;
    }

    MPolyRing ring_;
    std::vector<MPoly> rel_;
};

struct LandweberStage {
    int k = 0;
    std::string v; // v_k as a polynomial in the generators
    std::optional<int> v_degree;
    bool pass = true;
    std::optional<int> failing_degree;
    std::string witness; // an element killed by v_k but nonzero in R/I_k
};

struct LandweberReport {
    std::uint64_t p = 0;
    std::vector<LandweberStage> stages;
    std::string extraction = "v_k = coefficient of t^(p^k) in [p](t), reduced mod (v_0, ..., v_{k-1})";

    bool pass() const
    {
        return std::all_of(stages.begin(), stages.end(), [](const LandweberStage& s) { return s.pass; });
    }
    std::optional<int> first_failure() const
    {
        for (const auto& s : stages) {
            if (!s.pass) {
                return s.k;
            }
        }
        return std::nullopt;
    }
};

// [p](t) = F(t, [p-1](t)) without certifying F over the polynomial ring itself
// (a law presented over Z[g]/J need only satisfy the axioms modulo J).
inline Series<MPolyRing> p_series_over(const Series<MPolyRing>& F, std::uint64_t p)
{
    const Series<MPolyRing> t = Series<MPolyRing>::variable(F.ring(), 1, 0, F.precision());
    Series<MPolyRing> s = t;
    for (std::uint64_t i = 1; i < p; ++i) {
        s = substitute(F, {t, s});
    }
    return s;
}

// Axioms of F checked modulo the relations; throws fgl_axiom_error on the first failure.
inline void validate_modulo(const GradedPresentation& R, const Series<MPolyRing>& F)
{
    const int n = F.precision();
    const MPolyRing& ring = R.ring();
    auto check = [&](const Series<MPolyRing>& a, const Series<MPolyRing>& b, const char* axiom,
                     std::vector<std::string> names) {
        const Series<MPolyRing> d = a - b;
        for (const auto& [e, c] : d.terms()) {
            if (detail::total_degree(e) < n && !R.vanishes(c)) {
                throw fgl_axiom_error(axiom, format_monomial(e, names));
            }
        }
    };
    const auto x = Series<MPolyRing>::variable(ring, 2, 0, n);
    const auto y = Series<MPolyRing>::variable(ring, 2, 1, n);
    check(F.at_zero(1), x, "unit", {"x", "y"});
    check(F.at_zero(0), y, "unit", {"x", "y"});
    check(F.permuted({1, 0, 2}), F, "commutativity", {"x", "y"});
    const auto X = Series<MPolyRing>::variable(ring, 3, 0, n);
    const auto Z = Series<MPolyRing>::variable(ring, 3, 2, n);
    check(substitute(F, {F.embedded(3, {0, 1, 2}), Z}), substitute(F, {X, F.embedded(3, {1, 2, 0})}),
          "associativity", {"x", "y", "z"});
}

// Checks that p = v_0, v_1, ..., v_{n_max} act injectively on the successive quotients,
// degree by degree for source degrees 0..degree_bound.
inline LandweberReport landweber_regularity(const GradedPresentation& R, const Series<MPolyRing>& F, std::uint64_t p,
                                            int n_max, int degree_bound)
{
    require_prime(Integer(p));
    if (degree_bound < 0) {
        throw input_error("degree_bound too small to see any graded piece");
    }
    if (n_max < 0 || n_max > 20) {
        throw input_error("n_max out of range");
    }
    const long long need = detail::pow_ll(p, n_max);
    if (F.precision() <= need) {
        throw input_error("raise precision: need N > " + std::to_string(need));
    }
    const MPolyRing& ring = R.ring();
    const Series<MPolyRing> ps = p_series_over(F, p);
    LandweberReport rep;
    rep.p = p;
    std::vector<MPoly> ideal = R.relations();
    for (int k = 0; k <= n_max; ++k) {
        const MPoly vk = ps[static_cast<int>(detail::pow_ll(p, k))];
        LandweberStage st;
        st.k = k;
        st.v = ring.format(vk);
        // Drop parts of v_k that already vanish in R/I_k so the remainder is homogeneous.
        MPoly vr(ring.nvars());
        for (const auto& [e, c] : vk.terms()) {
            const int d = ring.degree_of(e);
            const MPoly part = R.part(vk, d);
            if (!in_lattice(R.coordinates(part, R.basis(d)), R.ideal_part(ideal, d))) {
                vr.add(e, c);
            }
        }
        if (!vr.is_zero() && !ring.homogeneous_degree(vr)) {
            throw input_error("non-homogeneous presentation: v_" + std::to_string(k) + " = " + st.v
                              + " is not homogeneous");
        }
        st.v_degree = vr.is_zero() ? std::nullopt : ring.homogeneous_degree(vr);
        const int w = st.v_degree.value_or(0);
        for (int d = 0; d <= degree_bound && st.pass; ++d) {
            const auto src = R.basis(d);
            if (src.empty()) {
                continue;
            }
            const auto dst = R.basis(d + w);
            const IntMatrix src_ideal = R.ideal_part(ideal, d);
            const IntMatrix dst_ideal = R.ideal_part(ideal, d + w);
            // Solve v * x = sum y_j g_j: columns are the images v * b_i followed by -g_j.
            const std::size_t ncols = src.size() + dst_ideal.size();
            IntMatrix a(dst.size(), IntVector(ncols, Integer(0)));
            for (std::size_t i = 0; i < src.size(); ++i) {
                const IntVector img = R.coordinates(vr * MPoly::monomial(src[i]), dst);
                for (std::size_t r = 0; r < dst.size(); ++r) {
                    a[r][i] = img[r];
                }
            }
            for (std::size_t j = 0; j < dst_ideal.size(); ++j) {
                for (std::size_t r = 0; r < dst.size(); ++r) {
                    a[r][src.size() + j] = -dst_ideal[j][r];
                }
            }
            IntMatrix kernel;
            if (dst.empty()) {
                for (std::size_t i = 0; i < ncols; ++i) {
                    IntVector e(ncols, Integer(0));
                    e[i] = 1;
                    kernel.push_back(e);
                }
            } else {
                kernel = integer_kernel(a, ncols);
            }
            for (const auto& kv : kernel) {
                const IntVector x(kv.begin(), kv.begin() + static_cast<std::ptrdiff_t>(src.size()));
                if (!in_lattice(x, src_ideal)) {
                    MPoly wit(ring.nvars());
                    for (std::size_t i = 0; i < src.size(); ++i) {
                        wit.add(src[i], x[i]);
                    }
                    st.pass = false;
                    st.failing_degree = d;
                    st.witness = ring.format(wit);
                    break;
                }
            }
        }
        rep.stages.push_back(st);
        ideal.push_back(vr);
    }
    return rep;
}

inline json to_json(const LandweberReport& rep)
{
    json stages = json::array();
    for (const auto& s : rep.stages) {
        json j;
        j["stage"] = s.k;
        j["v"] = s.v;
        j["pass"] = s.pass;
        if (s.failing_degree) {
            j["failing_degree"] = *s.failing_degree;
            j["witness"] = s.witness;
        }
        stages.push_back(j);
    }
    json out;
    out["p"] = rep.p;
    out["pass"] = rep.pass();
    if (auto f = rep.first_failure()) {
        out["first_failing_stage"] = *f;
    }
    out["extraction"] = rep.extraction;
    out["stages"] = stages;
    return out;
}

struct LandweberConfig {
    GradedPresentation ring;
    Series<MPolyRing> fgl;
    std::uint64_t p;
    int n_max;
    int degree_bound;
};

// {"generators": [{"name", "degree"}], "relations": [poly], "p", "n_max", "degree_bound",
//  "fgl": {"name": "additive" | "multiplicative" | "honda", "height": n} or {"terms": [{"exp": [i, j], "coeff": poly}]}}
// A poly is an integer or a list of {"exp": [...], "coeff": integer}.
inline LandweberConfig landweber_config_from_json(const json& j)
{
    std::vector<std::string> names;
    std::vector<int> degrees;
    if (j.contains("generators")) {
        const json& gens = j.at("generators");
        if (!gens.is_array()) {
            json_fail("/generators", "expected an array");
        }
        for (std::size_t i = 0; i < gens.size(); ++i) {
            const std::string gp = "/generators/" + std::to_string(i);
            const json& name = json_field(gens[i], "name", gp);
            if (!name.is_string()) {
                json_fail(gp + "/name", "expected a string");
            }
            names.push_back(name.get<std::string>());
            const auto d = json_int64(json_field(gens[i], "degree", gp), gp + "/degree");
            if (d <= 0 || d > 1000) {
                json_fail(gp + "/degree", "generator degrees must be positive");
            }
            degrees.push_back(static_cast<int>(d));
        }
    }
    const MPolyRing ring(names, degrees);
    std::vector<MPoly> rels;
    if (j.contains("relations")) {
        const json& rs = j.at("relations");
        if (!rs.is_array()) {
            json_fail("/relations", "expected an array");
        }
        for (std::size_t i = 0; i < rs.size(); ++i) {
            rels.push_back(ring.from_json(rs[i], "/relations/" + std::to_string(i)));
        }
    }
    GradedPresentation pres(ring, rels);
    const auto p64 = json_int64(json_field(j, "p", ""), "/p");
    if (p64 < 2 || p64 > 1000000 || !is_prime(static_cast<std::uint64_t>(p64))) {
        json_fail("/p", "not prime");
    }
    const auto p = static_cast<std::uint64_t>(p64);
    const auto n_max = json_int64(json_field(j, "n_max", ""), "/n_max");
    if (n_max < 0 || n_max > 6) {
        json_fail("/n_max", "expected 0 <= n_max <= 6");
    }
    const auto bound = json_int64(json_field(j, "degree_bound", ""), "/degree_bound");
    if (bound < 0 || bound > 200) {
        json_fail("/degree_bound", "expected 0 <= degree_bound <= 200");
    }
    const double need = std::pow(static_cast<double>(p), static_cast<double>(n_max));
    if (need > 2000) {
        json_fail("/n_max", "p^n_max exceeds the desk-scale precision cap");
    }
    const json& f = json_field(j, "fgl", "");
    int N = static_cast<int>(need) + 1;
    Series<MPolyRing> F(ring, 2, N);
    F.rename({"x", "y"});
    const auto x = Series<MPolyRing>::variable(ring, 2, 0, N);
    const auto y = Series<MPolyRing>::variable(ring, 2, 1, N);
    if (f.contains("name")) {
        const json& name = f.at("name");
        const std::string nm = name.is_string() ? name.get<std::string>() : "";
        if (nm == "additive") {
            F = x + y;
        } else if (nm == "multiplicative") {
            F = x + y + x * y;
        } else if (nm == "honda") {
            const auto n = json_int64(json_field(f, "height", "/fgl"), "/fgl/height");
            if (n < 1 || std::pow(static_cast<double>(p), static_cast<double>(n)) > 2000) {
                json_fail("/fgl/height", "height out of range");
            }
            N = std::max(N, static_cast<int>(std::pow(static_cast<double>(p), static_cast<double>(n))) + 1);
            const auto H = honda_fgl(p, static_cast<int>(n), N);
            F = map_coefficients(H.series(), ring,
                                 [&](const Zmod& a) { return ring.from_integer(Integer(a.value())); });
        } else {
            json_fail("/fgl/name", "expected additive, multiplicative or honda");
        }
    } else {
        if (f.contains("precision")) {
            const auto n = json_int64(f.at("precision"), "/fgl/precision");
            if (n <= static_cast<long long>(need) || n > 5000) {
                json_fail("/fgl/precision", "raise precision: need N > p^n_max");
            }
            N = static_cast<int>(n);
        }
        Series<MPolyRing> G(ring, 2, N);
        const json& terms = json_field(f, "terms", "/fgl");
        if (!terms.is_array()) {
            json_fail("/fgl/terms", "expected an array");
        }
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string tp = "/fgl/terms/" + std::to_string(i);
            const json& exp = json_field(terms[i], "exp", tp);
            if (!exp.is_array() || exp.size() != 2) {
                json_fail(tp + "/exp", "expected 2 exponents");
            }
            const auto a = json_int64(exp[0], tp + "/exp/0");
            const auto b = json_int64(exp[1], tp + "/exp/1");
            if (a < 0 || b < 0) {
                json_fail(tp + "/exp", "negative exponent");
            }
            G.set({static_cast<int>(a), static_cast<int>(b), 0}, ring.from_json(json_field(terms[i], "coeff", tp), tp + "/coeff"));
        }
        G.rename({"x", "y"});
        validate_modulo(pres, G);
        F = G;
    }
    F.rename({"x", "y"});
    return LandweberConfig{pres, F, p, static_cast<int>(n_max), static_cast<int>(bound)};
}

} // namespace tmfkit
