#pragma once

#include <complex>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kleinbundle/bundles.hpp"
#include "kleinbundle/holonomy.hpp"
#include "kleinbundle/json_io.hpp"
#include "kleinbundle/moduli.hpp"
#include "kleinbundle/picard.hpp"
#include "kleinbundle/plot.hpp"
#include "kleinbundle/torus.hpp"

namespace kb::cli {

inline constexpr const char* kVersion = "kleinb 0.1.0";

namespace detail {

inline std::string fmt_double(double x) { return kb::detail::fmt_double(x); }

inline std::string fmt_complex(std::complex<double> z) {
    std::string s = fmt_double(z.real());
    s += z.imag() < 0 ? " - " : " + ";
    s += fmt_double(std::fabs(z.imag()));
    s += " i";
    return s;
}

// Rational literal: "p/q" or "p"; decimal literals are snapped to the
// nearest rational with denominator <= 10^6 and reported on err.
inline Rational parse_rational_arg(const std::string& text, const std::string& name,
                                   std::ostream& err) {
    if (text.find('.') != std::string::npos || text.find('e') != std::string::npos ||
        text.find('E') != std::string::npos) {
        double x = std::stod(text);
        Rational snapped = snap_to_rational(x);
        err << "warning: snapped " << name << " = " << text << " to " << snapped.str() << "\n";
        return snapped;
    }
    return Rational::parse(text);
}

// Coordinate in float mode: decimal or "p/q".
inline double parse_double_arg(const std::string& text) {
    if (text.find('/') != std::string::npos) return Rational::parse(text).value();
    return std::stod(text);
}

// Complex literal: "a", "bi", "a+bi", "a-bi", "i".
inline std::complex<double> parse_complex_arg(const std::string& text) {
    std::string s = text;
    if (s.empty()) throw DomainError(errc::bad_argument, "empty complex literal");
    if (s.back() != 'i' && s.back() != 'I') return {std::stod(s), 0.0};
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
    }
    auto num = [](const std::string& t) -> double {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return std::stod(t);
    };
    if (split == std::string::npos) return {0.0, num(s)};
    return {std::stod(s.substr(0, split)), num(s.substr(split))};
}

// Inline JSON, or @path to read it from a file.
inline json parse_json_arg(const std::string& text) {
    std::string payload = text;
    if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw DomainError(errc::bad_argument, "cannot open file: " + text.substr(1));
        std::ostringstream ss;
        ss << in.rdbuf();
        payload = ss.str();
    }
    json v = json::parse(payload, nullptr, false);
    if (v.is_discarded()) throw DomainError(errc::bad_argument, "malformed JSON input");
    return v;
}

inline void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << "\n"; }

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"real algebraic line and vector bundles on Klein bottles "
                 "(genus-one real curves without real points)"};
    app.name("kleinb");
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(0, 1);

    double tau = 1.0;
    bool json_mode = false, float_mode = false, exact_mode = false;
    int steps = 10000;
    double tol = 1e-9;
    std::string out_path;
    app.add_option("--tau", tau, "torus modulus tau > 0");
    app.add_flag("--json", json_mode, "emit JSON documents");
    app.add_flag("--exact", exact_mode, "exact rational coordinates (default)");
    app.add_flag("--float", float_mode, "floating-point coordinates");
    app.add_option("--steps", steps, "integrator steps per segment");
    app.add_option("--tol", tol, "agreement tolerance for holonomy reports");
    app.add_option("--out", out_path, "output path prefix");

    // line-classify
    auto* c_line = app.add_subcommand("line-classify", "fixed/real trichotomy of a line bundle class");
    int lc_d = 0;
    std::string lc_a, lc_b;
    c_line->add_option("--d", lc_d, "degree")->required();
    c_line->add_option("--a", lc_a, "first coordinate (p/q)")->required();
    c_line->add_option("--b", lc_b, "second coordinate (p/q)")->required();
    c_line->fallthrough();

    // torsion
    auto* c_tor = app.add_subcommand("torsion", "r-torsion subgroup of Pic^0");
    int tor_r = 1;
    bool tor_real = false;
    c_tor->add_option("--r", tor_r, "torsion order")->required();
    c_tor->add_flag("--real-only", tor_real, "intersect with the real circle b = 0");
    c_tor->fallthrough();

    // holonomy
    auto* c_hol = app.add_subcommand("holonomy", "loop holonomy of the flat connection on phi(z0)");
    std::string hol_z0;
    std::string hol_scheme = "rk4";
    c_hol->add_option("--z0", hol_z0, "connection parameter, e.g. 0.3+0.5i")->required();
    c_hol->add_option("--scheme", hol_scheme, "integrator: rk4 (default) or midpoint")
        ->check(CLI::IsMember({"rk4", "midpoint"}));
    c_hol->fallthrough();

    // rank2-classify
    auto* c_r2 = app.add_subcommand("rank2-classify", "stratum of a rank-two real descriptor");
    std::string r2_desc;
    c_r2->add_option("--desc", r2_desc, "descriptor JSON (or @file)")->required();
    c_r2->fallthrough();

    // iso-test
    auto* c_iso = app.add_subcommand("iso-test", "isomorphism test for two descriptors");
    std::string iso_left, iso_right;
    c_iso->add_option("--left", iso_left, "descriptor JSON (or @file)")->required();
    c_iso->add_option("--right", iso_right, "descriptor JSON (or @file)")->required();
    c_iso->fallthrough();

    // moduli-report
    auto* c_mod = app.add_subcommand("moduli-report", "moduli descriptor for stable type (r, d)");
    int mod_r = 1, mod_d = 0;
    c_mod->add_option("--r", mod_r, "rank")->required();
    c_mod->add_option("--d", mod_d, "degree")->required();
    c_mod->fallthrough();

    // construct
    auto* c_con = app.add_subcommand("construct", "stable real bundle of coprime type via pushforward");
    int con_r = 1, con_d = 0;
    std::string con_t = "0";
    c_con->add_option("--r", con_r, "rank (odd)")->required();
    c_con->add_option("--d", con_d, "degree (even)")->required();
    c_con->add_option("--t", con_t, "twist parameter (p/q)");
    c_con->fallthrough();

    // fixed-locus
    auto* c_fix = app.add_subcommand("fixed-locus", "delta-fixed circles of the side-1/r quotient torus");
    int fix_r = 1;
    c_fix->add_option("--r", fix_r, "rank (odd)")->required();
    c_fix->fallthrough();

    // plot
    auto* c_plot = app.add_subcommand("plot", "fundamental-domain SVG plot with CSV twin");
    int plot_d = 0, plot_r = 1;
    c_plot->add_option("--d", plot_d, "degree for the sigma_d-fixed circles");
    c_plot->add_option("--r", plot_r, "torsion order / moduli cell");
    c_plot->fallthrough();

    std::vector<char*> argv;
    std::vector<std::string> storage = args;
    std::string prog = "kleinb";
    argv.push_back(prog.data());
    for (auto& a : storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    if (app.get_subcommands().empty()) {
        err << app.help();
        return 2;
    }
    if (float_mode && exact_mode) {
        err << "error: --exact and --float are mutually exclusive\n";
        return 2;
    }

    try {
        if (*c_line) {
            KleinBottle X(tau);
            json doc;
            std::string kind_str;
            int sign = 0;
            bool fixed = false;
            if (float_mode) {
                FloatLineBundle L{lc_d, make_point<double>(detail::parse_double_arg(lc_a),
                                                           detail::parse_double_arg(lc_b))};
                FixedClassKind k = classify_fixed(L);
                kind_str = to_string(k);
                fixed = k != FixedClassKind::NotFixed;
                if (fixed) sign = realness_sign(X, L);
                doc = json{{"degree", L.degree}, {"a", L.point.a}, {"b", L.point.b}, {"kind", kind_str}};
            } else {
                ExactLineBundle L{lc_d, make_point<Rational>(detail::parse_rational_arg(lc_a, "a", err),
                                                             detail::parse_rational_arg(lc_b, "b", err))};
                FixedClassKind k = classify_fixed(L);
                kind_str = to_string(k);
                fixed = k != FixedClassKind::NotFixed;
                if (fixed) sign = realness_sign(X, L);
                doc = json{{"degree", L.degree},
                           {"a", rat_json(L.point.a)},
                           {"b", rat_json(L.point.b)},
                           {"kind", kind_str}};
            }
            doc["obstruction"] = fixed ? json(sign) : json(nullptr);
            if (json_mode) {
                detail::emit(out, doc);
            } else if (fixed) {
                out << kind_str << ", obstruction " << (sign > 0 ? "+1" : "-1") << "\n";
            } else {
                out << kind_str << "\n";
            }
        } else if (*c_tor) {
            TorsionSubgroup g = torsion_subgroup(tor_r, tor_real);
            if (json_mode) {
                detail::emit(out, torsion_json(g));
            } else {
                out << "torsion subgroup: order " << g.order << ", "
                    << (g.real_only ? "real-only" : "full") << ", size " << g.elements.size()
                    << "\n";
                for (const auto& p : g.elements)
                    out << "(" << p.a.str() << ", " << p.b.str() << ")\n";
            }
        } else if (*c_hol) {
            if (app.count("--tau") == 0)
                throw DomainError(errc::bad_argument, "holonomy requires an explicit --tau > 0");
            FlatConnection C(detail::parse_complex_arg(hol_z0), tau);
            Scheme scheme = hol_scheme == "midpoint" ? Scheme::Midpoint : Scheme::RK4;
            Complex ode = parallel_transport(C, PathSpec::unit_loop(steps), scheme);
            Complex closed = holonomy_unit_loop(C);
            double diff = std::abs(ode - closed);
            if (json_mode) {
                detail::emit(out, json{{"tau", tau},
                                       {"z0", {{"re", C.z0.real()}, {"im", C.z0.imag()}}},
                                       {"steps", steps},
                                       {"scheme", hol_scheme},
                                       {"holonomy", {{"re", ode.real()}, {"im", ode.imag()}}},
                                       {"closed_form", {{"re", closed.real()}, {"im", closed.imag()}}},
                                       {"abs_difference", diff},
                                       {"within_tol", diff <= tol}});
            } else {
                out << "z0 = " << detail::fmt_complex(C.z0) << ", tau = " << detail::fmt_double(tau)
                    << ", steps = " << steps << ", scheme = " << hol_scheme << "\n";
                out << "holonomy (ode)    = " << detail::fmt_complex(ode) << "\n";
                out << "holonomy (closed) = " << detail::fmt_complex(closed) << "\n";
                out << "|ode - closed|    = " << detail::fmt_double(diff) << "\n";
            }
        } else if (*c_r2) {
            std::vector<std::string> warnings;
            BundleDesc d = desc_from_json(detail::parse_json_arg(r2_desc), &warnings);
            for (const auto& w : warnings) err << "warning: " << w << "\n";
            Rank2Class c = classify_rank2(d);
            if (json_mode) {
                detail::emit(out, rank2_json(c));
            } else {
                out << "stratum: " << to_string(c.stratum) << "\n";
                switch (c.stratum) {
                    case Rank2Class::Stratum::Stable22:
                    case Rank2Class::Stratum::Stable20:
                        out << "orbit representative: (" << c.orbit_rep.a.str() << ", "
                            << c.orbit_rep.b.str() << ")\n";
                        break;
                    case Rank2Class::Stratum::PolyNotStable:
                        out << "pair: {" << c.circle_pair[0].str() << ", " << c.circle_pair[1].str()
                            << "}\n";
                        break;
                    case Rank2Class::Stratum::SelfExtStratum:
                        out << "xi: " << c.circle_point.str() << "\n";
                        break;
                    case Rank2Class::Stratum::SplitUnstable:
                        out << "summands: degrees " << c.split_pair[0].degree << " and "
                            << c.split_pair[1].degree << "\n";
                        break;
                }
                out << "twists applied: " << c.twists_applied << "\n";
            }
        } else if (*c_iso) {
            std::vector<std::string> warnings;
            BundleDesc l = desc_from_json(detail::parse_json_arg(iso_left), &warnings);
            BundleDesc r = desc_from_json(detail::parse_json_arg(iso_right), &warnings);
            for (const auto& w : warnings) err << "warning: " << w << "\n";
            bool iso = is_isomorphic(l, r);
            if (json_mode)
                detail::emit(out, json{{"isomorphic", iso}});
            else
                out << "isomorphic: " << (iso ? "true" : "false") << "\n";
        } else if (*c_mod) {
            ModuliDesc m = moduli_descriptor(mod_r, mod_d);
            if (json_mode) {
                detail::emit(out, moduli_json(m));
            } else {
                out << "moduli of stable real bundles, rank " << m.r << ", degree " << m.d << "\n";
                out << "kind: " << to_string(m.kind) << ", dimension " << m.dimension << "\n";
                if (m.kind == ModuliKind::Circle) {
                    out << "circumference: " << m.cell.str() << "\n";
                    auto locus = real_locus_in_coprime_moduli(m.r, m.d);
                    out << "real circle b = " << locus.real_b.str() << "; obstructed circle b = "
                        << locus.obstructed_b.str() << " (mod " << locus.side.str() << ")\n";
                } else if (m.kind != ModuliKind::Empty) {
                    out << "torus side: " << m.cell.str() << ", involution (a,b) -> (a,-b) mod "
                        << m.cell.str() << "\n";
                    if (m.kind == ModuliKind::PuncturedTorusQuotient)
                        out << "removed locus: b = 0 (mod " << m.cell.str() << ")\n";
                }
            }
        } else if (*c_con) {
            ConstructedStable c =
                construct_stable_real(con_r, con_d, detail::parse_rational_arg(con_t, "t", err));
            if (json_mode) {
                detail::emit(out, construct_json(c));
            } else {
                out << "stable real bundle: rank " << c.atom.rank << ", degree " << c.atom.degree
                    << ", key " << c.atom.key.str() << "\n";
                out << "recipe: invariant direct image along the degree-" << c.recipe.covering_degree
                    << " covering C/<" << c.recipe.covering_degree << ", i*tau> -> C/<1, i*tau>\n";
                out << "source line bundle: degree " << c.recipe.source_xi.degree
                    << ", key 0, realness witness +" << c.recipe.realness_witness << "\n";
            }
        } else if (*c_fix) {
            FixedLocusDelta f = fixed_locus_delta(fix_r);
            if (json_mode) {
                detail::emit(out, fixed_locus_json(f));
            } else {
                out << "delta-fixed locus of the side-" << f.side.str() << " quotient torus\n";
                out << "real circle: b = " << f.real_b.str() << " (sign +1)\n";
                out << "obstructed circle: b = " << f.obstructed_b.str() << " (sign -1)\n";
            }
        } else if (*c_plot) {
            if (app.count("--tau") == 0)
                throw DomainError(errc::bad_argument, "plot requires an explicit --tau > 0");
            if (out_path.empty())
                throw DomainError(errc::bad_argument, "plot requires --out <path-prefix>");
            PlotSpec spec{tau, plot_d, plot_r};
            std::ostringstream svg, csv;
            write_plot_svg(svg, spec);
            write_plot_csv(csv, spec);
            std::string svg_path = out_path + ".svg", csv_path = out_path + ".csv";
            std::ofstream fsvg(svg_path, std::ios::binary), fcsv(csv_path, std::ios::binary);
            if (!fsvg || !fcsv)
                throw DomainError(errc::bad_argument, "cannot write plot files at " + out_path);
            fsvg << svg.str();
            fcsv << csv.str();
            if (json_mode) {
                detail::emit(out, json{{"svg", svg_path},
                                       {"svg_bytes", svg.str().size()},
                                       {"csv", csv_path},
                                       {"csv_bytes", csv.str().size()}});
            } else {
                out << "wrote " << svg_path << " (" << svg.str().size() << " bytes)\n";
                out << "wrote " << csv_path << " (" << csv.str().size() << " bytes)\n";
            }
        }
        return 0;
    } catch (const DomainError& e) {
        if (json_mode)
            detail::emit(out, error_json(e.code(), e.what()));
        else
            err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace kb::cli
