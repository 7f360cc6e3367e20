#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tmfkit/algebra/any_ring.hpp"
#include "tmfkit/fgl/landweber.hpp"
#include "tmfkit/series/series_json.hpp"
#include "tmfkit/tmf/chart_io.hpp"
#include "tmfkit/weierstrass/hasse.hpp"

using namespace tmfkit;

namespace {

// Inline JSON if the argument starts with '{' or '[', "-" for stdin, otherwise a file path.
json read_payload(const std::string& arg, const std::string& what)
{
    std::string text;
    const auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
        text = arg;
    } else if (arg == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(arg);
        if (!in) {
            throw input_error("cannot read " + what + " file '" + arg + "'");
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw input_error(what + " is not valid JSON: " + e.what());
    }
}

// Curves default to Q, forms to Z.
AnyRing ring_of(const json& j, AnyRing fallback = IntegerRing{})
{
    if (j.is_object() && j.contains("ring")) {
        return make_ring(descriptor_from_json(j.at("ring"), "/ring"));
    }
    return fallback;
}

// Flat "key: value" rendering for --format text.
void print_text(std::ostream& out, const json& j, const std::string& prefix = "")
{
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            print_text(out, v, prefix.empty() ? k : prefix + "." + k);
        }
    } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_structured(); })) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            print_text(out, j[i], prefix + "[" + std::to_string(i) + "]");
        }
    } else {
        out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

struct Output {
    std::string format = "json";

    void emit(const json& j) const
    {
        if (format == "text") {
            print_text(std::cout, j);
        } else {
            std::cout << j.dump(2) << "\n";
        }
    }
};

int parse_page(const std::string& s)
{
    if (s == "inf" || s == "infinity") {
        return 10;
    }
    try {
        std::size_t used = 0;
        const int r = std::stoi(s, &used);
        if (used == s.size()) {
            stored_page(r);
            return r;
        }
    } catch (const std::logic_error&) {
    }
    throw input_error("page must be an integer >= 2 or 'inf', got '" + s + "'");
}

template <CoefficientRing R>
json hasse_json(const WeierstrassCurve<R>& C, HasseRoute route)
{
    const auto h = hasse_invariant(C, route);
    json j{{"curve", C.format()},
           {"route", route == HasseRoute::PSeries ? "p-series" : "differential"},
           {"v1", C.ring.to_json(h.v1)},
           {"ordinary", h.ordinary},
           {"height", h.ordinary ? 1 : 2}};
    if (h.deuring) {
        j["deuring"] = C.ring.to_json(*h.deuring);
    }
    return j;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"tmfkit: formal groups, elliptic curves, modular forms and the 3-local tmf chart"};
    app.require_subcommand(1);
    Output out;
    std::function<void()> action;

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", out.format, "output format")->check(CLI::IsMember({"json", "text"}));
    };

    // curve
    auto* curve = app.add_subcommand("curve", "Weierstrass curves");
    curve->require_subcommand(1);
    std::string curve_arg;
    int fgl_precision = 6;
    std::string route_name = "p-series";

    auto with_curve = [&](auto&& fn) {
        const json j = read_payload(curve_arg, "curve");
        std::visit([&](const auto& r) { fn(curve_from_json(r, j)); }, ring_of(j, RationalField{}));
    };

    auto* inv = curve->add_subcommand("invariants", "b/c invariants, discriminant, j, reduction type");
    inv->add_option("--curve", curve_arg, "curve JSON {\"ring\":..., \"a\": [a1,a2,a3,a4,a6]}, file or -")->required();
    add_format(inv);
    inv->callback([&] {
        action = [&] {
            with_curve([&](const auto& C) {
                json j = to_json(invariants(C), C.ring);
                j["curve"] = C.format();
                out.emit(j);
            });
        };
    });

    auto* fgl = curve->add_subcommand("fgl", "formal group law in the coordinate z = -x/y");
    fgl->add_option("--curve", curve_arg, "curve JSON, file or -")->required();
    fgl->add_option("--precision", fgl_precision, "total-degree precision")->check(CLI::Range(3, 40));
    add_format(fgl);
    fgl->callback([&] {
        action = [&] {
            with_curve([&](const auto& C) {
                const auto G = formal_group(C, fgl_precision);
                out.emit({{"curve", C.format()},
                          {"fgl", to_json(G.fgl)},
                          {"w", to_json(G.w)},
                          {"invariant_differential", to_json(G.eta)}});
            });
        };
    });

    auto* hasse = curve->add_subcommand("hasse", "Hasse invariant over a finite field");
    hasse->add_option("--curve", curve_arg, "curve JSON, file or -")->required();
    hasse->add_option("--route", route_name, "p-series or differential")
        ->check(CLI::IsMember({"p-series", "differential"}));
    add_format(hasse);
    hasse->callback([&] {
        action = [&] {
            const HasseRoute route = route_name == "p-series" ? HasseRoute::PSeries : HasseRoute::Differential;
            const json j = read_payload(curve_arg, "curve");
            std::visit(
                [&](const auto& r) {
                    using Rg = std::decay_t<decltype(r)>;
                    if constexpr (std::is_same_v<Rg, ZmodRing> || std::is_same_v<Rg, Fp2Field>) {
                        out.emit(hasse_json(curve_from_json(r, j), route));
                    } else {
                        throw input_error("Hasse invariant requires a finite field of prime characteristic");
                    }
                },
                ring_of(j));
        };
    });

    // ss-poly
    auto* ss = app.add_subcommand("ss-poly", "supersingular polynomial over F_p");
    long long ss_prime = 0;
    ss->add_option("--prime", ss_prime, "prime p <= 101")->required();
    add_format(ss);
    ss->callback([&] {
        action = [&] {
            if (ss_prime < 2) {
                throw input_error("--prime must be a prime, got " + std::to_string(ss_prime));
            }
            out.emit(to_json(supersingular_polynomial(static_cast<std::uint64_t>(ss_prime))));
        };
    });

    // modforms
    auto* mf = app.add_subcommand("modforms", "level-1 modular forms");
    mf->require_subcommand(1);
    int weight = 0;
    int qprec = 10;
    std::string form_arg;

    auto* mb = mf->add_subcommand("basis", "monomial basis of M_k");
    mb->add_option("--weight", weight, "weight k")->required()->check(CLI::Range(-10000, 10000));
    add_format(mb);
    mb->callback([&] {
        action = [&] {
            json b = json::array();
            for (const auto& m : basis(weight)) {
                b.push_back(format_form_monomial(m));
            }
            out.emit({{"weight", weight}, {"dimension", dimension(weight)}, {"basis", b}});
        };
    });

    auto* mq = mf->add_subcommand("qexp", "q-expansion of a form, or of j with --form j");
    mq->add_option("--precision", qprec, "number of q-coefficients")->required()->check(CLI::Range(1, 2000));
    mq->add_option("--form", form_arg, "form JSON {\"ring\":..., \"terms\": [{a,b,c,coeff}]}, file, - or j")
        ->required();
    add_format(mq);
    mq->callback([&] {
        action = [&] {
            if (form_arg == "j") {
                const auto s = j_q_expansion(qprec + 1); // coefficients of q^n for -1 <= n < qprec
                json c = json::array();
                for (int n = -1; n < s.precision(); ++n) {
                    c.push_back(integer_to_json(s.coeff({n, 0, 0})));
                }
                out.emit({{"form", "j"}, {"lowest_degree", -1}, {"precision", s.precision()}, {"coefficients", c}});
                return;
            }
            const json j = read_payload(form_arg, "form");
            std::visit(
                [&](const auto& r) {
                    using Rg = std::decay_t<decltype(r)>;
                    if constexpr (!std::is_same_v<Rg, IntegerRing> && !std::is_same_v<Rg, RationalField>
                                  && !std::is_same_v<Rg, LocalizedIntegers> && !std::is_same_v<Rg, ZmodRing>) {
                        throw input_error("/ring: q-expansions need Z, Q, a localization of Z or Z/m");
                    } else {
                        const auto f = modular_form_from_json(r, j);
                        const auto s = q_expansion(f, qprec);
                        json c = json::array();
                        for (int n = 0; n < qprec; ++n) {
                            c.push_back(r.to_json(s[n]));
                        }
                        out.emit({{"form", f.format()},
                                  {"weight", f.weight() ? json(*f.weight()) : json(f.weight_text())},
                                  {"ring", to_json(r.descriptor())},
                                  {"precision", qprec},
                                  {"coefficients", c}});
                    }
                },
                ring_of(j));
        };
    });

    // tmf
    auto* tmf = app.add_subcommand("tmf", "3-local homotopy of Tmf with 2 inverted");
    tmf->require_subcommand(1);
    int degree = 0;
    long long tmf_prime = 3;
    std::string window_text;
    std::string page_text = "5";
    int s_max = 12;
    int t_min = -60;
    int t_max = 60;
    int j_trunc = 1;
    int adic = 1;
    static const DescentChart chart;

    auto* tpi = tmf->add_subcommand("pi", "pi_n from the DM/DC presentations, checked against E_infinity");
    tpi->add_option("--degree", degree, "n in [-80, 80]")->required();
    add_format(tpi);
    tpi->callback([&] { action = [&] { out.emit(to_json(tmf_pi(chart, degree))); }; });

    auto* tmod = tmf->add_subcommand("mod", "pi_n(tmf/p) for p = 3");
    tmod->add_option("--degree", degree, "n with n and n-1 in the window")->required();
    tmod->add_option("--prime", tmf_prime, "p (only 3)");
    add_format(tmod);
    tmod->callback([&] { action = [&] { out.emit(to_json(tmf_mod_p_pi(chart, degree, tmf_prime))); }; });

    auto* tdual = tmf->add_subcommand("duality", "pairing pi_k(tmf/3) x pi_{-k-21}(tmf/3) -> F_3");
    tdual->add_option("--degree", degree, "k")->required();
    tdual->add_option("--prime", tmf_prime, "p (only 3)");
    add_format(tdual);
    tdual->callback([&] { action = [&] { out.emit(to_json(duality_check(chart, degree, tmf_prime))); }; });

    auto* tchart = tmf->add_subcommand("chart", "a page of the descent spectral sequence");
    tchart->add_option("--window", window_text, "degree range a..b")->required();
    tchart->add_option("--page", page_text, "page r >= 2 or inf (r = 5 and 9 carry the differentials)");
    tchart->add_option("--s-max", s_max, "highest filtration shown")->check(CLI::Range(0, 40));
    add_format(tchart);
    tchart->callback([&] {
        action = [&] {
            ChartRange range = parse_window(window_text, chart.window());
            range.s_max = s_max;
            const int r = parse_page(page_text);
            if (out.format == "text") {
                std::cout << render_text(chart, r, range);
            } else {
                out.emit(chart_json(chart, r, range));
            }
        };
    });

    auto* tcoh = tmf->add_subcommand("coh", "E2 = H^s(M_ell, omega^t) over a range");
    tcoh->add_option("--s-max", s_max, "s <= 12");
    tcoh->add_option("--t-min", t_min, "t >= -60");
    tcoh->add_option("--t-max", t_max, "t <= 60");
    add_format(tcoh);
    tcoh->callback([&] {
        action = [&] {
            json entries = json::array();
            for (const auto& c : coh_mell(chart, s_max, t_min, t_max)) {
                entries.push_back(to_json(c));
            }
            out.emit({{"coefficients", "Z_(3)"}, {"entries", entries}});
        };
    });

    auto* tlift = tmf->add_subcommand("lifts", "does a modular form lift to pi_* (3-locally)");
    tlift->add_option("--form", form_arg, "form JSON over Z, Q or a localization of Z, file or -")->required();
    add_format(tlift);
    tlift->callback([&] {
        action = [&] {
            const json j = read_payload(form_arg, "form");
            std::visit(
                [&](const auto& r) {
                    using Rg = std::decay_t<decltype(r)>;
                    if constexpr (std::is_constructible_v<Rational, element_t<Rg>>) {
                        const auto f = modular_form_from_json(r, j);
                        json v = to_json(lifts_to_homotopy(f));
                        v["form"] = f.format();
                        out.emit(v);
                    } else {
                        throw input_error("/ring: lifting needs Z, Q or a localization of Z");
                    }
                },
                ring_of(j));
        };
    });

    auto* tk1 = tmf->add_subcommand("k1", "degree-n part of K(1)-local tmf at p = 2");
    tk1->add_option("--degree", degree, "n")->required();
    tk1->add_option("--j-truncation", j_trunc, "powers of 1/j kept")->check(CLI::Range(1, 1000));
    tk1->add_option("--adic-precision", adic, "2-adic precision")->check(CLI::Range(1, 1000));
    add_format(tk1);
    tk1->callback([&] { action = [&] { out.emit(to_json(k1_tmf_p2(degree, j_trunc, adic))); }; });

    // sphere
    auto* sphere = app.add_subcommand("sphere", "K(1)-local sphere");
    sphere->require_subcommand(1);
    long long sp_prime = 3;
    long long sp_degree = 0;
    auto* sk1 = sphere->add_subcommand("k1", "pi_k of the K(1)-local sphere at an odd prime");
    sk1->add_option("--prime", sp_prime, "odd prime p")->required();
    sk1->add_option("--degree", sp_degree, "k")->required();
    add_format(sk1);
    sk1->callback([&] { action = [&] { out.emit(to_json(k1_sphere(sp_prime, sp_degree))); }; });

    // landweber
    auto* lw = app.add_subcommand("landweber", "Landweber regularity test");
    std::string config_arg;
    lw->add_option("--config", config_arg, "config JSON, file or -")->required();
    add_format(lw);
    lw->callback([&] {
        action = [&] {
            const auto cfg = landweber_config_from_json(read_payload(config_arg, "config"));
            out.emit(to_json(landweber_regularity(cfg.ring, cfg.fgl, cfg.p, cfg.n_max, cfg.degree_bound)));
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        action();
        return 0;
    } catch (const consistency_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal failure: " << e.what() << "\n";
        return 3;
    }
}
