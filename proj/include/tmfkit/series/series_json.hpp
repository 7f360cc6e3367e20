#pragma once

#include <string>
#include <vector>

#include "tmfkit/series/series.hpp"

namespace tmfkit {

template <CoefficientRing R>
json to_json(const Series<R>& s)
{
    json terms = json::array();
    for (const auto& [e, a] : s.terms()) {
        json exp = json::array();
        for (int v = 0; v < s.nvars(); ++v) {
            exp.push_back(e[static_cast<std::size_t>(v)]);
        }
        terms.push_back({{"exp", exp}, {"coeff", s.ring().to_json(a)}});
    }
    json j;
    j["ring"] = to_json(s.ring().descriptor());
    j["vars"] = s.names();
    j["precision"] = s.precision();
    if (s.lowest_allowed() != 0) {
        j["lowest_allowed_degree"] = s.lowest_allowed();
    }
    j["terms"] = terms;
    return j;
}

template <CoefficientRing R>
Series<R> series_from_json(const R& ring, const json& j, const std::string& path = "")
{
    const json& vars = json_field(j, "vars", path);
    if (!vars.is_array() || vars.empty() || vars.size() > 3) {
        json_fail(path + "/vars", "expected 1 to 3 variable names");
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!vars[i].is_string()) {
            json_fail(path + "/vars/" + std::to_string(i), "expected a string");
        }
        names.push_back(vars[i].get<std::string>());
    }
    const auto n = json_int64(json_field(j, "precision", path), path + "/precision");
    if (n < 0 || n > 100000) {
        json_fail(path + "/precision", "precision out of range");
    }
    int low = 0;
    if (j.contains("lowest_allowed_degree")) {
        low = static_cast<int>(json_int64(j.at("lowest_allowed_degree"), path + "/lowest_allowed_degree"));
    }
    Series<R> s(ring, static_cast<int>(names.size()), static_cast<int>(n), low, names);
    const json& terms = json_field(j, "terms", path);
    if (!terms.is_array()) {
        json_fail(path + "/terms", "expected an array");
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = path + "/terms/" + std::to_string(i);
        const json& exp = json_field(terms[i], "exp", tp);
        if (!exp.is_array() || exp.size() != names.size()) {
            json_fail(tp + "/exp", "expected " + std::to_string(names.size()) + " exponents");
        }
        Exponent e{0, 0, 0};
        for (std::size_t v = 0; v < names.size(); ++v) {
            e[v] = static_cast<int>(json_int64(exp[v], tp + "/exp/" + std::to_string(v)));
            if (e[v] < 0 && names.size() > 1) {
                json_fail(tp + "/exp/" + std::to_string(v), "negative exponent");
            }
        }
        if (detail::total_degree(e) < low) {
            json_fail(tp + "/exp", "below the lowest allowed degree");
        }
        if (detail::total_degree(e) >= n) {
            json_fail(tp + "/exp", "degree beyond the stated precision");
        }
        s.set(e, ring.from_json(json_field(terms[i], "coeff", tp), tp + "/coeff"));
    }
    return s;
}

} // namespace tmfkit
