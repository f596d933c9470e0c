#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <variant>
#include <vector>

#include "kleinbundle/errors.hpp"
#include "kleinbundle/picard.hpp"

namespace kb {

// ---------------------------------------------------------------------------
// Atoms.  A descriptor is a formal direct sum of indecomposable atoms, in a
// complex flavor (bundles over the complex curve) or a real flavor (real
// bundles, encoded by their complex data plus descent type).
// ---------------------------------------------------------------------------

struct LineAtom {
    ExactLineBundle value;
};

// The unique nontrivial self-extension of xi by xi (rank 2, degree 2*deg xi).
struct Ext2Atom {
    ExactLineBundle xi;
};

// Stable bundle of coprime type, identified by its class in the quotient of
// Pic^0 by the rank-torsion subgroup; `det` is the canonical representative
// with coordinates in [0, 1/rank).  Keys are relative to the pushforward
// base bundle of the same type.
struct StableAtom {
    int rank = 1;
    int degree = 0;
    ExactPoint det;
};

using ComplexAtom = std::variant<LineAtom, Ext2Atom, StableAtom>;

// Real line bundle, stored as its complexified class (even degree, b = 0).
struct RealLineAtom {
    ExactLineBundle xi;
};

// W(xi): the unique nontrivial self-extension of a real line bundle by itself.
struct SelfExtAtom {
    ExactLineBundle xi;
};

// Stable real bundle of coprime type (degree even, rank odd); `key` is the
// class in Pic^0(X) / (real rank-torsion), canonical in [0, 1/rank).
struct RealStableAtom {
    int rank = 1;
    int degree = 0;
    Rational key;
};

// The real bundle underlying F + sigma^* conj(F) with the swap structure.
struct ConjPairAtom {
    ComplexAtom inner;
};

using RealAtom = std::variant<RealLineAtom, SelfExtAtom, RealStableAtom, ConjPairAtom>;

// ---- validated constructors ----

inline ComplexAtom line_atom(const ExactLineBundle& L) { return LineAtom{L}; }

inline ComplexAtom ext2_atom(const ExactLineBundle& xi) { return Ext2Atom{xi}; }

inline ComplexAtom stable_atom(int rank, int degree, const ExactPoint& det) {
    if (rank < 1) throw DomainError(errc::bad_argument, "stable atom rank must be >= 1");
    if (std::gcd(rank, std::abs(degree)) != 1)
        throw DomainError(errc::bad_argument, "stable atom requires coprime rank and degree");
    Rational side(1, rank);
    return StableAtom{rank, degree, {modulo(det.a, side), modulo(det.b, side)}};
}

inline RealAtom real_line_atom(const ExactLineBundle& xi) {
    if (classify_fixed(xi) != FixedClassKind::RealizableReal)
        throw DomainError(errc::bad_argument,
                          "real line atom requires an even degree class on the b = 0 circle");
    return RealLineAtom{xi};
}

inline RealAtom self_ext_atom(const ExactLineBundle& xi) {
    if (classify_fixed(xi) != FixedClassKind::RealizableReal)
        throw DomainError(errc::bad_argument, "self-extension atom requires a real line bundle");
    return SelfExtAtom{xi};
}

inline RealAtom real_stable_atom(int rank, int degree, const Rational& key) {
    if (rank < 1) throw DomainError(errc::bad_argument, "stable atom rank must be >= 1");
    if (degree % 2 != 0)
        throw DomainError(errc::odd_degree, "real bundles have even degree");
    if (std::gcd(rank, std::abs(degree)) != 1)
        throw DomainError(errc::bad_argument, "real stable atom requires coprime rank and degree");
    return RealStableAtom{rank, degree, modulo(key, Rational(1, rank))};
}

inline RealAtom conj_pair_atom(const ComplexAtom& inner) { return ConjPairAtom{inner}; }

// ---- rank / degree ----

inline int rank_of(const ComplexAtom& a) {
    return std::visit(
        [](const auto& x) -> int {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, LineAtom>) return 1;
            else if constexpr (std::is_same_v<T, Ext2Atom>) return 2;
            else return x.rank;
        },
        a);
}

inline int degree_of(const ComplexAtom& a) {
    return std::visit(
        [](const auto& x) -> int {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, LineAtom>) return x.value.degree;
            else if constexpr (std::is_same_v<T, Ext2Atom>) return 2 * x.xi.degree;
            else return x.degree;
        },
        a);
}

inline int rank_of(const RealAtom& a) {
    return std::visit(
        [](const auto& x) -> int {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, RealLineAtom>) return 1;
            else if constexpr (std::is_same_v<T, SelfExtAtom>) return 2;
            else if constexpr (std::is_same_v<T, RealStableAtom>) return x.rank;
            else return 2 * rank_of(x.inner);
        },
        a);
}

inline int degree_of(const RealAtom& a) {
    return std::visit(
        [](const auto& x) -> int {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, RealLineAtom>) return x.xi.degree;
            else if constexpr (std::is_same_v<T, SelfExtAtom>) return 2 * x.xi.degree;
            else if constexpr (std::is_same_v<T, RealStableAtom>) return x.degree;
            else return 2 * degree_of(x.inner);
        },
        a);
}

// ---- total order on atoms (used for canonical sorting and orbit minima) ----

inline int cmp(const Rational& x, const Rational& y) {
    if (x < y) return -1;
    if (y < x) return 1;
    return 0;
}
inline int cmp(const ExactPoint& p, const ExactPoint& q) {
    if (int c = cmp(p.a, q.a)) return c;
    return cmp(p.b, q.b);
}
inline int cmp(const ExactLineBundle& x, const ExactLineBundle& y) {
    if (x.degree != y.degree) return x.degree < y.degree ? -1 : 1;
    return cmp(x.point, y.point);
}

inline int cmp(const ComplexAtom& a, const ComplexAtom& b) {
    if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
    if (std::holds_alternative<LineAtom>(a))
        return cmp(std::get<LineAtom>(a).value, std::get<LineAtom>(b).value);
    if (std::holds_alternative<Ext2Atom>(a))
        return cmp(std::get<Ext2Atom>(a).xi, std::get<Ext2Atom>(b).xi);
    const auto& x = std::get<StableAtom>(a);
    const auto& y = std::get<StableAtom>(b);
    if (x.rank != y.rank) return x.rank < y.rank ? -1 : 1;
    if (x.degree != y.degree) return x.degree < y.degree ? -1 : 1;
    return cmp(x.det, y.det);
}

inline int cmp(const RealAtom& a, const RealAtom& b) {
    if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
    if (std::holds_alternative<RealLineAtom>(a))
        return cmp(std::get<RealLineAtom>(a).xi, std::get<RealLineAtom>(b).xi);
    if (std::holds_alternative<SelfExtAtom>(a))
        return cmp(std::get<SelfExtAtom>(a).xi, std::get<SelfExtAtom>(b).xi);
    if (std::holds_alternative<RealStableAtom>(a)) {
        const auto& x = std::get<RealStableAtom>(a);
        const auto& y = std::get<RealStableAtom>(b);
        if (x.rank != y.rank) return x.rank < y.rank ? -1 : 1;
        if (x.degree != y.degree) return x.degree < y.degree ? -1 : 1;
        return cmp(x.key, y.key);
    }
    return cmp(std::get<ConjPairAtom>(a).inner, std::get<ConjPairAtom>(b).inner);
}

inline bool atom_less(const ComplexAtom& a, const ComplexAtom& b) { return cmp(a, b) < 0; }
inline bool atom_less(const RealAtom& a, const RealAtom& b) { return cmp(a, b) < 0; }
inline bool atom_eq(const ComplexAtom& a, const ComplexAtom& b) { return cmp(a, b) == 0; }
inline bool atom_eq(const RealAtom& a, const RealAtom& b) { return cmp(a, b) == 0; }

// sigma^* conj acting on a complex atom's classifying data.
inline ComplexAtom conj_atom(const ComplexAtom& a) {
    if (std::holds_alternative<LineAtom>(a))
        return LineAtom{sigma_conj(std::get<LineAtom>(a).value)};
    if (std::holds_alternative<Ext2Atom>(a))
        return Ext2Atom{sigma_conj(std::get<Ext2Atom>(a).xi)};
    const auto& s = std::get<StableAtom>(a);
    Rational side(1, s.rank);
    return StableAtom{s.rank, s.degree, {s.det.a, modulo(-s.det.b, side)}};
}

// ---------------------------------------------------------------------------
// Descriptors.
// ---------------------------------------------------------------------------

struct BundleDesc {
    enum class Flavor { Real, Complex };

    Flavor flavor = Flavor::Real;
    std::vector<RealAtom> real_atoms;
    std::vector<ComplexAtom> complex_atoms;

    static BundleDesc of_real(std::vector<RealAtom> atoms) {
        BundleDesc d;
        d.flavor = Flavor::Real;
        d.real_atoms = std::move(atoms);
        return d;
    }
    static BundleDesc of_complex(std::vector<ComplexAtom> atoms) {
        BundleDesc d;
        d.flavor = Flavor::Complex;
        d.complex_atoms = std::move(atoms);
        return d;
    }

    std::size_t atom_count() const {
        return flavor == Flavor::Real ? real_atoms.size() : complex_atoms.size();
    }

    int rank() const {
        int r = 0;
        if (flavor == Flavor::Real)
            for (const auto& a : real_atoms) r += rank_of(a);
        else
            for (const auto& a : complex_atoms) r += rank_of(a);
        return r;
    }

    int degree() const {
        int d = 0;
        if (flavor == Flavor::Real)
            for (const auto& a : real_atoms) d += degree_of(a);
        else
            for (const auto& a : complex_atoms) d += degree_of(a);
        return d;
    }
};

inline Rational slope(const BundleDesc& d) {
    int r = d.rank();
    if (r < 1) throw DomainError(errc::bad_descriptor, "slope of an empty descriptor");
    return Rational(d.degree(), r);
}

namespace detail {

// Rank-one stable atoms are line classes; fold them into the line form.
inline ComplexAtom canonical_complex_atom(const ComplexAtom& a) {
    if (const auto* s = std::get_if<StableAtom>(&a); s && s->rank == 1)
        return LineAtom{ExactLineBundle{s->degree, s->det}};
    return a;
}

// Is the complex atom the complexification of a real atom? (b = 0 locus,
// even degree).  Such conjugate pairs split as two copies of the real form.
inline bool complexified_real(const ComplexAtom& a) {
    if (const auto* l = std::get_if<LineAtom>(&a))
        return classify_fixed(l->value) == FixedClassKind::RealizableReal;
    if (const auto* e = std::get_if<Ext2Atom>(&a))
        return classify_fixed(e->xi) == FixedClassKind::RealizableReal;
    const auto& s = std::get<StableAtom>(a);
    return s.degree % 2 == 0 && s.det.b == Rational(0);
}

inline RealAtom real_form(const ComplexAtom& a) {
    if (const auto* l = std::get_if<LineAtom>(&a)) return RealLineAtom{l->value};
    if (const auto* e = std::get_if<Ext2Atom>(&a)) return SelfExtAtom{e->xi};
    const auto& s = std::get<StableAtom>(a);
    return RealStableAtom{s.rank, s.degree, s.det.a};
}

}  // namespace detail

// Canonical form: conjugate pairs of complexified real atoms split into two
// copies of the real atom; remaining pair atoms carry the lexicographically
// least of {F, sigma^* conj(F)}; rank-one stable atoms become line atoms;
// atoms are sorted.  Idempotent, and preserves rank, degree and class.
inline BundleDesc normalize_desc(const BundleDesc& d) {
    BundleDesc out;
    out.flavor = d.flavor;
    if (d.flavor == BundleDesc::Flavor::Complex) {
        out.complex_atoms.reserve(d.complex_atoms.size());
        for (const auto& a : d.complex_atoms)
            out.complex_atoms.push_back(detail::canonical_complex_atom(a));
        std::sort(out.complex_atoms.begin(), out.complex_atoms.end(),
                  [](const ComplexAtom& x, const ComplexAtom& y) { return atom_less(x, y); });
        return out;
    }
    out.real_atoms.reserve(d.real_atoms.size());
    for (const auto& a : d.real_atoms) {
        if (const auto* cp = std::get_if<ConjPairAtom>(&a)) {
            ComplexAtom inner = detail::canonical_complex_atom(cp->inner);
            if (detail::complexified_real(inner)) {
                RealAtom rf = detail::real_form(inner);
                out.real_atoms.push_back(rf);
                out.real_atoms.push_back(rf);
            } else {
                ComplexAtom c = conj_atom(inner);
                out.real_atoms.push_back(ConjPairAtom{atom_less(c, inner) ? c : inner});
            }
        } else if (const auto* rs = std::get_if<RealStableAtom>(&a); rs && rs->rank == 1) {
            out.real_atoms.push_back(RealLineAtom{ExactLineBundle{rs->degree, {rs->key, Rational(0)}}});
        } else {
            out.real_atoms.push_back(a);
        }
    }
    std::sort(out.real_atoms.begin(), out.real_atoms.end(),
              [](const RealAtom& x, const RealAtom& y) { return atom_less(x, y); });
    return out;
}

inline bool is_isomorphic(const BundleDesc& d1, const BundleDesc& d2) {
    if (d1.flavor != d2.flavor)
        throw DomainError(errc::mixed_flavors, "cannot compare descriptors of different flavors");
    BundleDesc n1 = normalize_desc(d1);
    BundleDesc n2 = normalize_desc(d2);
    if (d1.flavor == BundleDesc::Flavor::Complex) {
        return n1.complex_atoms.size() == n2.complex_atoms.size() &&
               std::equal(n1.complex_atoms.begin(), n1.complex_atoms.end(),
                          n2.complex_atoms.begin(),
                          [](const ComplexAtom& x, const ComplexAtom& y) { return atom_eq(x, y); });
    }
    return n1.real_atoms.size() == n2.real_atoms.size() &&
           std::equal(n1.real_atoms.begin(), n1.real_atoms.end(), n2.real_atoms.begin(),
                      [](const RealAtom& x, const RealAtom& y) { return atom_eq(x, y); });
}

// Base change to the complex curve: conjugate pairs open up as F + conj(F).
inline BundleDesc complexify(const BundleDesc& d) {
    if (d.flavor != BundleDesc::Flavor::Real)
        throw DomainError(errc::mixed_flavors, "complexify expects a real-flavor descriptor");
    std::vector<ComplexAtom> atoms;
    atoms.reserve(2 * d.real_atoms.size());
    for (const auto& a : d.real_atoms) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, RealLineAtom>) {
                    atoms.push_back(LineAtom{x.xi});
                } else if constexpr (std::is_same_v<T, SelfExtAtom>) {
                    atoms.push_back(Ext2Atom{x.xi});
                } else if constexpr (std::is_same_v<T, RealStableAtom>) {
                    atoms.push_back(StableAtom{x.rank, x.degree, {x.key, Rational(0)}});
                } else {
                    ComplexAtom inner = detail::canonical_complex_atom(x.inner);
                    atoms.push_back(inner);
                    atoms.push_back(conj_atom(inner));
                }
            },
            a);
    }
    return normalize_desc(BundleDesc::of_complex(std::move(atoms)));
}

enum class Stability { Stable, PolystableNotStable, SemistableNotPolystable, Unstable };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "Stable";
        case Stability::PolystableNotStable: return "PolystableNotStable";
        case Stability::SemistableNotPolystable: return "SemistableNotPolystable";
        case Stability::Unstable: return "Unstable";
    }
    return "?";
}

namespace detail {

inline bool stable_kind(const ComplexAtom& a) { return !std::holds_alternative<Ext2Atom>(a); }

inline bool stable_kind(const RealAtom& a) {
    if (std::holds_alternative<SelfExtAtom>(a)) return false;
    if (const auto* cp = std::get_if<ConjPairAtom>(&a)) return stable_kind(cp->inner);
    return true;
}

}  // namespace detail

// Slope trichotomy over the atom algebra.  In normalized form a single
// stable-kind atom is stable; equal slopes with a non-stable atom (a
// self-extension, possibly inside a conjugate pair) are semistable only;
// two or more stable-kind atoms of equal slope are polystable.
inline Stability stability(const BundleDesc& desc) {
    BundleDesc d = normalize_desc(desc);
    if (d.atom_count() == 0)
        throw DomainError(errc::bad_descriptor, "stability of an empty descriptor");
    bool equal_slopes = true;
    bool all_stable_kind = true;
    if (d.flavor == BundleDesc::Flavor::Real) {
        Rational s0(degree_of(d.real_atoms[0]), rank_of(d.real_atoms[0]));
        for (const auto& a : d.real_atoms) {
            if (Rational(degree_of(a), rank_of(a)) != s0) equal_slopes = false;
            if (!detail::stable_kind(a)) all_stable_kind = false;
        }
    } else {
        Rational s0(degree_of(d.complex_atoms[0]), rank_of(d.complex_atoms[0]));
        for (const auto& a : d.complex_atoms) {
            if (Rational(degree_of(a), rank_of(a)) != s0) equal_slopes = false;
            if (!detail::stable_kind(a)) all_stable_kind = false;
        }
    }
    if (!equal_slopes) return Stability::Unstable;
    if (!all_stable_kind) return Stability::SemistableNotPolystable;
    if (d.atom_count() >= 2) return Stability::PolystableNotStable;
    return Stability::Stable;
}

// ---------------------------------------------------------------------------
// Rank-two classification.
// ---------------------------------------------------------------------------

struct Rank2Class {
    enum class Stratum { Stable22, Stable20, PolyNotStable, SelfExtStratum, SplitUnstable };

    Stratum stratum = Stratum::Stable20;
    int twists_applied = 0;  // multiples of the real degree-2 reference removed

    // canonical parameters, valid per stratum
    ExactPoint orbit_rep;                       // Stable22 / Stable20
    std::array<Rational, 2> circle_pair{};      // PolyNotStable (sorted)
    Rational circle_point;                      // SelfExtStratum
    std::array<ExactLineBundle, 2> split_pair;  // SplitUnstable (sorted)
};

inline const char* to_string(Rank2Class::Stratum s) {
    switch (s) {
        case Rank2Class::Stratum::Stable22: return "Stable22";
        case Rank2Class::Stratum::Stable20: return "Stable20";
        case Rank2Class::Stratum::PolyNotStable: return "PolyNotStable";
        case Rank2Class::Stratum::SelfExtStratum: return "SelfExtStratum";
        case Rank2Class::Stratum::SplitUnstable: return "SplitUnstable";
    }
    return "?";
}

namespace detail {

// Tensor by the k-th power of the real degree-2 reference O(x0 + sigma(x0)),
// whose class is (degree 2, point (1/2, 0)).
inline ExactLineBundle twist_line(const ExactLineBundle& L, int k) {
    return {L.degree + 2 * k, make_point<Rational>(L.point.a + Rational(k, 2), L.point.b)};
}

inline ComplexAtom twist_atom(const ComplexAtom& a, int k) {
    if (const auto* l = std::get_if<LineAtom>(&a)) return LineAtom{twist_line(l->value, k)};
    if (const auto* e = std::get_if<Ext2Atom>(&a)) return Ext2Atom{twist_line(e->xi, k)};
    const auto& s = std::get<StableAtom>(a);
    Rational side(1, s.rank);
    return StableAtom{s.rank, s.degree + 2 * k * s.rank,
                      {modulo(s.det.a + Rational(k, 2), side), s.det.b}};
}

inline RealAtom twist_atom(const RealAtom& a, int k) {
    return std::visit(
        [&](const auto& x) -> RealAtom {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, RealLineAtom>) return RealLineAtom{twist_line(x.xi, k)};
            else if constexpr (std::is_same_v<T, SelfExtAtom>) return SelfExtAtom{twist_line(x.xi, k)};
            else if constexpr (std::is_same_v<T, RealStableAtom>)
                return RealStableAtom{x.rank, x.degree + 2 * k * x.rank,
                                      modulo(x.key + Rational(k, 2), Rational(1, x.rank))};
            else return ConjPairAtom{twist_atom(x.inner, k)};
        },
        a);
}

}  // namespace detail

// Classification of a rank-two real descriptor into the five strata, after
// reducing the degree mod 4 (tensoring by the real degree-2 reference) so
// only total degrees 0 and 2 occur.
inline Rank2Class classify_rank2(const BundleDesc& desc) {
    if (desc.flavor != BundleDesc::Flavor::Real)
        throw DomainError(errc::mixed_flavors, "rank-two classification expects a real descriptor");
    if (desc.rank() != 2)
        throw DomainError(errc::bad_descriptor, "descriptor does not have rank two");
    int d = desc.degree();
    if (((d % 2) + 2) % 2 != 0)
        throw DomainError(errc::odd_degree, "real rank-two bundles have even degree");
    int dm4 = ((d % 4) + 4) % 4;  // 0 or 2
    int m = (d - dm4) / 4;

    BundleDesc reduced = desc;
    if (m != 0)
        for (auto& a : reduced.real_atoms) a = detail::twist_atom(a, -m);
    reduced = normalize_desc(reduced);

    Rank2Class out;
    out.twists_applied = m;
    const auto& atoms = reduced.real_atoms;
    if (atoms.size() == 1) {
        if (const auto* se = std::get_if<SelfExtAtom>(&atoms[0])) {
            out.stratum = Rank2Class::Stratum::SelfExtStratum;
            out.circle_point = se->xi.point.a;
            return out;
        }
        const auto& cp = std::get<ConjPairAtom>(atoms[0]);
        const auto& L = std::get<LineAtom>(cp.inner).value;
        ExactLineBundle Lc = sigma_conj(L);
        out.orbit_rep = cmp(Lc.point, L.point) < 0 ? Lc.point : L.point;
        out.stratum = L.degree == 1 ? Rank2Class::Stratum::Stable22
                                    : Rank2Class::Stratum::Stable20;
        return out;
    }
    // two line atoms
    const auto& x1 = std::get<RealLineAtom>(atoms[0]).xi;
    const auto& x2 = std::get<RealLineAtom>(atoms[1]).xi;
    if (x1.degree == x2.degree) {
        out.stratum = Rank2Class::Stratum::PolyNotStable;
        out.circle_pair = {x1.point.a, x2.point.a};
        if (out.circle_pair[1] < out.circle_pair[0])
            std::swap(out.circle_pair[0], out.circle_pair[1]);
    } else {
        out.stratum = Rank2Class::Stratum::SplitUnstable;
        out.split_pair = {x1, x2};
        if (cmp(out.split_pair[1], out.split_pair[0]) < 0)
            std::swap(out.split_pair[0], out.split_pair[1]);
    }
    return out;
}

}  // namespace kb
