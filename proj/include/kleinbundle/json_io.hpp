#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kleinbundle/bundles.hpp"
#include "kleinbundle/errors.hpp"
#include "kleinbundle/moduli.hpp"
#include "kleinbundle/picard.hpp"

namespace kb {

using json = nlohmann::ordered_json;

// ---- rationals and points ----

inline json rat_json(const Rational& x) { return x.str(); }

// Accepts "p/q" strings, integers, or floats (floats are snapped to the
// nearest rational with denominator <= 10^6; the snap is reported through
// `warnings` when given).
inline Rational rational_from_json(const json& v, std::vector<std::string>* warnings = nullptr) {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) {
        double x = v.get<double>();
        Rational snapped = snap_to_rational(x);
        if (warnings)
            warnings->push_back("snapped " + std::to_string(x) + " to " + snapped.str());
        return snapped;
    }
    throw DomainError(errc::bad_argument, "expected a rational literal (\"p/q\", integer, or float)");
}

inline json point_json(const ExactPoint& p) {
    return json{{"a", rat_json(p.a)}, {"b", rat_json(p.b)}};
}

inline ExactPoint point_from_json(const json& v, std::vector<std::string>* warnings = nullptr) {
    if (!v.is_object() || !v.contains("a") || !v.contains("b"))
        throw DomainError(errc::bad_argument, "expected a point object with fields a and b");
    return make_point<Rational>(rational_from_json(v.at("a"), warnings),
                                rational_from_json(v.at("b"), warnings));
}

// ---- line bundle classes ----

inline json line_bundle_json(const ExactLineBundle& L) {
    return json{{"degree", L.degree}, {"a", rat_json(L.point.a)}, {"b", rat_json(L.point.b)}};
}

inline ExactLineBundle line_bundle_from_json(const json& v,
                                             std::vector<std::string>* warnings = nullptr) {
    if (!v.is_object() || !v.contains("degree") || !v.contains("a") || !v.contains("b"))
        throw DomainError(errc::bad_argument,
                          "expected a line bundle object with fields degree, a, b");
    ExactLineBundle L;
    L.degree = v.at("degree").get<int>();
    L.point = make_point<Rational>(rational_from_json(v.at("a"), warnings),
                                   rational_from_json(v.at("b"), warnings));
    return L;
}

// ---- bundle descriptors (atom-tagged union) ----

inline json complex_atom_json(const ComplexAtom& a) {
    if (const auto* l = std::get_if<LineAtom>(&a))
        return json{{"kind", "line"}, {"line", line_bundle_json(l->value)}};
    if (const auto* e = std::get_if<Ext2Atom>(&a))
        return json{{"kind", "ext2"}, {"xi", line_bundle_json(e->xi)}};
    const auto& s = std::get<StableAtom>(a);
    return json{{"kind", "stable"}, {"r", s.rank}, {"d", s.degree}, {"det", point_json(s.det)}};
}

inline json real_atom_json(const RealAtom& a) {
    if (const auto* l = std::get_if<RealLineAtom>(&a))
        return json{{"kind", "real_line"}, {"line", line_bundle_json(l->xi)}};
    if (const auto* e = std::get_if<SelfExtAtom>(&a))
        return json{{"kind", "self_ext"}, {"xi", line_bundle_json(e->xi)}};
    if (const auto* s = std::get_if<RealStableAtom>(&a))
        return json{{"kind", "real_stable"}, {"r", s->rank}, {"d", s->degree}, {"key", rat_json(s->key)}};
    return json{{"kind", "conj_pair"}, {"of", complex_atom_json(std::get<ConjPairAtom>(a).inner)}};
}

inline ComplexAtom complex_atom_from_json(const json& v,
                                          std::vector<std::string>* warnings = nullptr) {
    std::string kind = v.value("kind", "");
    if (kind == "line") return line_atom(line_bundle_from_json(v.at("line"), warnings));
    if (kind == "ext2") return ext2_atom(line_bundle_from_json(v.at("xi"), warnings));
    if (kind == "stable")
        return stable_atom(v.at("r").get<int>(), v.at("d").get<int>(),
                           point_from_json(v.at("det"), warnings));
    if (kind.rfind("ext", 0) == 0 || kind.rfind("self_ext", 0) == 0)
        throw DomainError(errc::unsupported_atom,
                          "self-extension atoms of rank >= 3 are not supported");
    throw DomainError(errc::unsupported_atom, "unknown complex atom kind: '" + kind + "'");
}

inline RealAtom real_atom_from_json(const json& v, std::vector<std::string>* warnings = nullptr) {
    std::string kind = v.value("kind", "");
    if (kind == "real_line") return real_line_atom(line_bundle_from_json(v.at("line"), warnings));
    if (kind == "self_ext") return self_ext_atom(line_bundle_from_json(v.at("xi"), warnings));
    if (kind == "real_stable")
        return real_stable_atom(v.at("r").get<int>(), v.at("d").get<int>(),
                                rational_from_json(v.at("key"), warnings));
    if (kind == "conj_pair") return conj_pair_atom(complex_atom_from_json(v.at("of"), warnings));
    if (kind.rfind("self_ext", 0) == 0)
        throw DomainError(errc::unsupported_atom,
                          "self-extension atoms of rank >= 3 are not supported");
    throw DomainError(errc::unsupported_atom, "unknown real atom kind: '" + kind + "'");
}

inline json desc_json(const BundleDesc& d) {
    json atoms = json::array();
    if (d.flavor == BundleDesc::Flavor::Real)
        for (const auto& a : d.real_atoms) atoms.push_back(real_atom_json(a));
    else
        for (const auto& a : d.complex_atoms) atoms.push_back(complex_atom_json(a));
    return json{{"flavor", d.flavor == BundleDesc::Flavor::Real ? "real" : "complex"},
                {"atoms", atoms}};
}

inline BundleDesc desc_from_json(const json& v, std::vector<std::string>* warnings = nullptr) {
    if (!v.is_object() || !v.contains("flavor") || !v.contains("atoms"))
        throw DomainError(errc::bad_argument,
                          "expected a descriptor object with fields flavor and atoms");
    std::string flavor = v.at("flavor").get<std::string>();
    const json& atoms = v.at("atoms");
    if (!atoms.is_array() || atoms.empty())
        throw DomainError(errc::bad_descriptor, "descriptor needs a nonempty atom list");
    if (flavor == "real") {
        std::vector<RealAtom> as;
        for (const auto& a : atoms) as.push_back(real_atom_from_json(a, warnings));
        return BundleDesc::of_real(std::move(as));
    }
    if (flavor == "complex") {
        std::vector<ComplexAtom> as;
        for (const auto& a : atoms) as.push_back(complex_atom_from_json(a, warnings));
        return BundleDesc::of_complex(std::move(as));
    }
    throw DomainError(errc::bad_argument, "flavor must be \"real\" or \"complex\"");
}

// ---- moduli reports ----

inline json moduli_json(const ModuliDesc& m) {
    json out{{"r", m.r}, {"d", m.d}, {"kind", to_string(m.kind)}, {"dimension", m.dimension}};
    json param = json::object();
    json real_locus;
    switch (m.kind) {
        case ModuliKind::Empty:
            real_locus = nullptr;
            break;
        case ModuliKind::Circle: {
            param["circumference"] = rat_json(m.cell);
            auto locus = real_locus_in_coprime_moduli(m.r, m.d);
            real_locus = json{{"real_circle", "b = " + locus.real_b.str()},
                              {"obstructed_circle",
                               "b = " + locus.obstructed_b.str() + " (mod " + locus.side.str() + ")"}};
            break;
        }
        case ModuliKind::TorusQuotient:
            param["torus_side"] = rat_json(m.cell);
            param["involution"] = "(a,b) -> (a,-b) mod " + m.cell.str();
            real_locus = nullptr;
            break;
        case ModuliKind::PuncturedTorusQuotient:
            param["torus_side"] = rat_json(m.cell);
            param["involution"] = "(a,b) -> (a,-b) mod " + m.cell.str();
            param["removed_locus"] = "b = 0 (mod " + m.cell.str() + ")";
            real_locus = json{{"removed_real_circle", "b = 0 (mod " + m.cell.str() + ")"}};
            break;
    }
    out["parametrization"] = param;
    out["real_locus"] = real_locus;
    return out;
}

inline ModuliDesc moduli_from_json(const json& v) {
    ModuliDesc m;
    m.r = v.at("r").get<int>();
    m.d = v.at("d").get<int>();
    std::string kind = v.at("kind").get<std::string>();
    if (kind == "Empty") m.kind = ModuliKind::Empty;
    else if (kind == "Circle") m.kind = ModuliKind::Circle;
    else if (kind == "TorusQuotient") m.kind = ModuliKind::TorusQuotient;
    else if (kind == "PuncturedTorusQuotient") m.kind = ModuliKind::PuncturedTorusQuotient;
    else throw DomainError(errc::bad_argument, "unknown moduli kind: '" + kind + "'");
    m.dimension = v.at("dimension").get<int>();
    const json& param = v.at("parametrization");
    if (param.contains("circumference")) m.cell = Rational::parse(param.at("circumference").get<std::string>());
    else if (param.contains("torus_side")) m.cell = Rational::parse(param.at("torus_side").get<std::string>());
    else m.cell = Rational(0);
    return m;
}

// ---- keys, strata, recipes ----

inline json key_json(const StableClassKey& k) {
    json out{{"r", k.r}, {"d", k.d}};
    if (!k.pair_orbit) {
        out["kind"] = "circle";
        out["key"] = rat_json(k.circle_key);
    } else {
        out["kind"] = "orbit";
        out["rep"] = point_json(k.rep);
        out["partner"] = point_json(k.partner);
    }
    return out;
}

inline json rank2_json(const Rank2Class& c) {
    json out{{"stratum", to_string(c.stratum)}, {"twists_applied", c.twists_applied}};
    switch (c.stratum) {
        case Rank2Class::Stratum::Stable22:
        case Rank2Class::Stratum::Stable20:
            out["orbit_rep"] = point_json(c.orbit_rep);
            break;
        case Rank2Class::Stratum::PolyNotStable:
            out["pair"] = json::array({rat_json(c.circle_pair[0]), rat_json(c.circle_pair[1])});
            break;
        case Rank2Class::Stratum::SelfExtStratum:
            out["xi"] = rat_json(c.circle_point);
            break;
        case Rank2Class::Stratum::SplitUnstable:
            out["summands"] = json::array(
                {line_bundle_json(c.split_pair[0]), line_bundle_json(c.split_pair[1])});
            break;
    }
    return out;
}

inline json construct_json(const ConstructedStable& c) {
    return json{{"atom",
                 {{"kind", "real_stable"},
                  {"r", c.atom.rank},
                  {"d", c.atom.degree},
                  {"key", rat_json(c.atom.key)}}},
                {"recipe",
                 {{"rank", c.recipe.rank},
                  {"degree", c.recipe.degree},
                  {"covering_degree", c.recipe.covering_degree},
                  {"sublattice", {{"gen1", std::to_string(c.recipe.covering_degree)}, {"gen2", "i*tau"}}},
                  {"source_line_bundle", line_bundle_json(c.recipe.source_xi)},
                  {"realness_witness", c.recipe.realness_witness}}}};
}

inline json fixed_locus_json(const FixedLocusDelta& f) {
    return json{{"r", f.r},
                {"torus_side", rat_json(f.side)},
                {"real_circle", {{"b", rat_json(f.real_b)}, {"sign", +1}}},
                {"obstructed_circle", {{"b", rat_json(f.obstructed_b)}, {"sign", -1}}}};
}

inline json torsion_json(const TorsionSubgroup& g) {
    json elems = json::array();
    for (const auto& p : g.elements) elems.push_back(point_json(p));
    return json{{"order", g.order},
                {"real_only", g.real_only},
                {"size", static_cast<int>(g.elements.size())},
                {"elements", elems}};
}

inline json error_json(const std::string& code, const std::string& message) {
    return json{{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace kb
