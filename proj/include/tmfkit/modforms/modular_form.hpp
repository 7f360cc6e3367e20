#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "tmfkit/algebra/any_ring.hpp"
#include "tmfkit/algebra/linalg.hpp"
#include "tmfkit/series/series.hpp"

namespace tmfkit {

// c4^a c6^b Delta^c, stored as {a, b, c}.
struct FormMonomial {
    int a = 0;
    int b = 0;
    int c = 0;

    int weight() const { return 4 * a + 6 * b + 12 * c; }
    friend auto operator<=>(const FormMonomial&, const FormMonomial&) = default;
};

inline std::string format_form_monomial(const FormMonomial& m)
{
    std::string s;
    auto put = [&](const char* name, int e) {
        if (e == 0) {
            return;
        }
        if (!s.empty()) {
            s += "*";
        }
        s += name;
        if (e > 1) {
            s += "^" + std::to_string(e);
        }
    };
    put("c4", m.a);
    put("c6", m.b);
    put("Delta", m.c);
    return s.empty() ? "1" : s;
}

// Order used for bases and for stored terms: by c, then b, then a.
inline bool basis_order(const FormMonomial& x, const FormMonomial& y)
{
    return std::tie(x.c, x.b, x.a) < std::tie(y.c, y.b, y.a);
}

struct BasisOrder {
    bool operator()(const FormMonomial& x, const FormMonomial& y) const { return basis_order(x, y); }
};

// An element of Z[c4, c6, Delta]/(c4^3 - c6^2 - 1728 Delta) (or the same over R),
// kept in normal form: every stored monomial has b in {0, 1}.
template <CoefficientRing R>
class ModularForm {
public:
    using E = element_t<R>;

    explicit ModularForm(R ring) : ring_(std::move(ring)) {}

    static ModularForm monomial(const R& ring, int a, int b, int c, const E& coeff)
    {
        ModularForm f(ring);
        f.add_raw({a, b, c}, coeff);
        return f;
    }
    static ModularForm monomial(const R& ring, int a, int b, int c)
    {
        return monomial(ring, a, b, c, ring.one());
    }
    static ModularForm constant(const R& ring, const E& a) { return monomial(ring, 0, 0, 0, a); }

    const R& ring() const { return ring_; }
    const std::map<FormMonomial, E, BasisOrder>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    E coeff(const FormMonomial& m) const
    {
        auto it = t_.find(m);
        return it == t_.end() ? ring_.zero() : it->second;
    }

    // The common weight; nullopt if mixed or zero.
    std::optional<int> weight() const
    {
        std::optional<int> w;
        for (const auto& [m, a] : t_) {
            if (w && *w != m.weight()) {
                return std::nullopt;
            }
            w = m.weight();
        }
        return w;
    }
    std::string weight_text() const
    {
        if (t_.empty()) {
            return "zero";
        }
        const auto w = weight();
        return w ? std::to_string(*w) : "mixed";
    }

    // Adds coeff * c4^a c6^b Delta^c for any b, rewriting c6^2 = c4^3 - 1728 Delta.
    void add_raw(const FormMonomial& m, const E& coeff)
    {
        if (m.a < 0 || m.b < 0 || m.c < 0) {
            throw input_error("negative exponent in modular form monomial");
        }
        if (ring_.is_zero(coeff)) {
            return;
        }
        const int k = m.b / 2;
        // (c4^3 - 1728 Delta)^k = sum_i binom(k, i) c4^(3(k-i)) (-1728)^i Delta^i
        Integer binom = 1;
        for (int i = 0; i <= k; ++i) {
            const Integer scalar = binom * ipow(Integer(-1728), static_cast<unsigned>(i));
            accumulate({m.a + 3 * (k - i), m.b % 2, m.c + i}, coeff * ring_.from_integer(scalar));
            binom = binom * (k - i) / (i + 1);
        }
    }

    friend ModularForm operator+(const ModularForm& f, const ModularForm& g)
    {
        f.check_ring(g);
        ModularForm r = f;
        for (const auto& [m, a] : g.t_) {
            r.accumulate(m, a);
        }
        return r;
    }
    friend ModularForm operator-(const ModularForm& f) { return f.scaled(-f.ring_.one()); }
    friend ModularForm operator-(const ModularForm& f, const ModularForm& g) { return f + (-g); }
    friend ModularForm operator*(const ModularForm& f, const ModularForm& g)
    {
        f.check_ring(g);
        ModularForm r(f.ring_);
        for (const auto& [m, a] : f.t_) {
            for (const auto& [n, b] : g.t_) {
                r.add_raw({m.a + n.a, m.b + n.b, m.c + n.c}, a * b);
            }
        }
        return r;
    }
    friend bool operator==(const ModularForm& f, const ModularForm& g) { return f.ring_ == g.ring_ && f.t_ == g.t_; }

    ModularForm scaled(const E& s) const
    {
        ModularForm r(ring_);
        for (const auto& [m, a] : t_) {
            r.accumulate(m, a * s);
        }
        return r;
    }
    ModularForm pow(unsigned e) const
    {
        ModularForm r = constant(ring_, ring_.one());
        for (unsigned i = 0; i < e; ++i) {
            r = r * *this;
        }
        return r;
    }

    std::string format() const
    {
        if (t_.empty()) {
            return "0";
        }
        std::string s;
        for (const auto& [m, a] : t_) {
            std::string cs = ring_.format(a);
            std::string mono = format_form_monomial(m);
            std::string term;
            if (mono == "1") {
                term = cs;
            } else if (a == ring_.one()) {
                term = mono;
            } else if (a == -ring_.one()) {
                term = "-" + mono;
            } else {
                term = cs + "*" + mono;
            }
            if (s.empty()) {
                s = term;
            } else if (term.front() == '-') {
                s += " - " + term.substr(1);
            } else {
                s += " + " + term;
            }
        }
        return s;
    }

private:
    void accumulate(const FormMonomial& m, const E& a)
    {
        auto [it, inserted] = t_.try_emplace(m, a);
        if (!inserted) {
            it->second = it->second + a;
        }
        if (ring_.is_zero(it->second)) {
            t_.erase(it);
        }
    }
    void check_ring(const ModularForm& g) const
    {
        if (!(ring_ == g.ring_)) {
            throw input_error("modular forms over different coefficient rings");
        }
    }

    R ring_;
    std::map<FormMonomial, E, BasisOrder> t_;
};

// Rewrites a polynomial in c4, c6, Delta (any c6 exponent) into normal form.
template <CoefficientRing R>
ModularForm<R> normal_form(const R& ring, const std::vector<std::pair<FormMonomial, element_t<R>>>& expr)
{
    ModularForm<R> f(ring);
    for (const auto& [m, a] : expr) {
        f.add_raw(m, a);
    }
    return f;
}

// Monomials of weight k with b in {0, 1}, in (c, b, a) order.
inline std::vector<FormMonomial> basis(int k)
{
    std::vector<FormMonomial> out;
    if (k < 0) {
        return out;
    }
    for (int c = 0; 12 * c <= k; ++c) {
        for (int b = 0; b <= 1; ++b) {
            const int rest = k - 12 * c - 6 * b;
            if (rest >= 0 && rest % 4 == 0) {
                out.push_back({rest / 4, b, c});
            }
        }
    }
    return out;
}

inline std::size_t dimension(int k) { return basis(k).size(); }

// Sign of c6 under the Eisenstein substitution.
inline constexpr int kC6Sign = -1;

namespace detail {

inline Integer divisor_power_sum(long long n, unsigned e)
{
    Integer s = 0;
    for (long long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            s += ipow(Integer(d), e);
            if (d * d != n) {
                s += ipow(Integer(n / d), e);
            }
        }
    }
    return s;
}

inline Series<IntegerRing> eisenstein(int N, const Integer& scale, unsigned e)
{
    const IntegerRing ZZ;
    Series<IntegerRing> s = Series<IntegerRing>::one(ZZ, 1, N);
    for (int n = 1; n < N; ++n) {
        s.set({n, 0, 0}, scale * divisor_power_sum(n, e));
    }
    s.rename({"q"});
    return s;
}

} // namespace detail

struct EisensteinData {
    Series<IntegerRing> c4;
    Series<IntegerRing> c6;
    Series<IntegerRing> delta;
};

// c4 -> E4, c6 -> -E6, Delta = (c4^3 - c6^2) / 1728 over Z, to precision N.
inline EisensteinData eisenstein_data(int N)
{
    if (N < 1) {
        throw input_error("q-expansion precision must be at least 1");
    }
    const Series<IntegerRing> e4 = detail::eisenstein(N, 240, 3);
    const Series<IntegerRing> e6 = detail::eisenstein(N, -504, 5);
    const Series<IntegerRing> c6 = e6.scaled(Integer(kC6Sign));
    const Series<IntegerRing> num = e4 * e4 * e4 - c6 * c6;
    Series<IntegerRing> delta(IntegerRing{}, 1, N, 0, {"q"});
    for (const auto& [e, a] : num.terms()) {
        ensure(a % 1728 == 0, "(E4^3 - E6^2)/1728 is not integral at q^" + std::to_string(e[0]));
        delta.set(e, a / 1728);
    }
    return {e4, c6, delta};
}

template <CoefficientRing R>
Series<R> q_expansion(const ModularForm<R>& f, int N)
{
    const R& r = f.ring();
    const EisensteinData ed = eisenstein_data(N);
    auto lift = [&](const Series<IntegerRing>& s) {
        Series<R> t = map_coefficients(s, r, [&](const Integer& a) { return r.from_integer(a); });
        t.rename({"q"});
        return t;
    };
    const std::array<Series<R>, 3> gens{lift(ed.c4), lift(ed.c6), lift(ed.delta)};
    std::array<std::vector<Series<R>>, 3> powers;
    auto power = [&](int which, int e) -> const Series<R>& {
        auto& v = powers[static_cast<std::size_t>(which)];
        if (v.empty()) {
            v.push_back(Series<R>::one(r, 1, N).rename({"q"}));
        }
        while (static_cast<int>(v.size()) <= e) {
            v.push_back(v.back() * gens[static_cast<std::size_t>(which)]);
        }
        return v[static_cast<std::size_t>(e)];
    };
    Series<R> out(r, 1, N, 0, {"q"});
    for (const auto& [m, a] : f.terms()) {
        out = out + (power(0, m.a) * power(1, m.b) * power(2, m.c)).scaled(a);
    }
    return out;
}

// j = c4^3 / Delta as a Laurent series in q; precision N counts terms from q^-1.
inline Series<IntegerRing> j_q_expansion(int N)
{
    if (N < 1) {
        throw input_error("q-expansion precision must be at least 1");
    }
    const EisensteinData ed = eisenstein_data(N + 1);
    Series<IntegerRing> j = divide_exact(ed.c4 * ed.c4 * ed.c4, ed.delta, -1);
    j = j.truncated(N - 1);
    j.rename({"q"});
    return j;
}

struct InjectivityEntry {
    int weight = 0;
    std::size_t dim = 0;
    bool independent = false;
    std::optional<int> min_precision; // least N at which the basis expansions are independent
};

struct InjectivityReport {
    int k_max = 0;
    int precision = 0;
    std::vector<InjectivityEntry> weights;

    std::vector<int> not_yet_visible() const
    {
        std::vector<int> out;
        for (const auto& e : weights) {
            if (!e.independent) {
                out.push_back(e.weight);
            }
        }
        return out;
    }
};

inline InjectivityReport qexp_injectivity_check(int k_max, int N)
{
    if (N < 1) {
        throw input_error("q-expansion precision must be at least 1");
    }
    const IntegerRing ZZ;
    InjectivityReport rep{k_max, N, {}};
    for (int k = 0; k <= k_max; ++k) {
        const auto B = basis(k);
        if (B.empty()) {
            continue;
        }
        std::vector<Series<IntegerRing>> ex;
        for (const auto& m : B) {
            ex.push_back(q_expansion(ModularForm<IntegerRing>::monomial(ZZ, m.a, m.b, m.c), N));
        }
        InjectivityEntry e{k, B.size(), false, std::nullopt};
        for (int n = static_cast<int>(B.size()); n <= N; ++n) {
            IntMatrix rows;
            for (const auto& s : ex) {
                IntVector row;
                for (int i = 0; i < n; ++i) {
                    row.push_back(s[i]);
                }
                rows.push_back(row);
            }
            if (rank_over_q(rows) == B.size()) {
                e.independent = true;
                e.min_precision = n;
                break;
            }
        }
        rep.weights.push_back(e);
    }
    return rep;
}

inline json to_json(const InjectivityReport& rep)
{
    json w = json::array();
    for (const auto& e : rep.weights) {
        json x{{"weight", e.weight}, {"dim", e.dim}, {"independent", e.independent}};
        x["min_precision"] = e.min_precision ? json(*e.min_precision) : json(nullptr);
        w.push_back(x);
    }
    json nv = json::array();
    for (int k : rep.not_yet_visible()) {
        nv.push_back(k);
    }
    return {{"k_max", rep.k_max}, {"precision", rep.precision}, {"weights", w}, {"not_yet_visible", nv}};
}

inline json to_json(const FormMonomial& m) { return {{"a", m.a}, {"b", m.b}, {"c", m.c}}; }

template <CoefficientRing R>
json to_json(const ModularForm<R>& f)
{
    json terms = json::array();
    for (const auto& [m, a] : f.terms()) {
        json t = to_json(m);
        t["coeff"] = f.ring().to_json(a);
        terms.push_back(t);
    }
    json j{{"terms", terms}, {"ring", to_json(f.ring().descriptor())}};
    j["weight"] = f.weight() ? json(*f.weight()) : json(f.weight_text());
    return j;
}

// Terms may carry any c6 exponent; the result is normalized.
template <CoefficientRing R>
ModularForm<R> modular_form_from_json(const R& ring, const json& j, const std::string& path = "")
{
    const json& terms = json_field(j, "terms", path);
    if (!terms.is_array()) {
        json_fail(path + "/terms", "expected a list of {a, b, c, coeff}");
    }
    ModularForm<R> f(ring);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string p = path + "/terms/" + std::to_string(i);
        const json& t = terms[i];
        auto exp = [&](const char* key) {
            if (!t.is_object() || !t.contains(key)) {
                return 0LL;
            }
            const long long e = json_int64(t[key], p + "/" + key);
            if (e < 0 || e > 10000) {
                json_fail(p + "/" + key, "exponent out of range");
            }
            return e;
        };
        const auto coeff = ring.from_json(json_field(t, "coeff", p), p + "/coeff");
        f.add_raw({static_cast<int>(exp("a")), static_cast<int>(exp("b")), static_cast<int>(exp("c"))}, coeff);
    }
    return f;
}

} // namespace tmfkit
