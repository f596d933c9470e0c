#pragma once

#include <cmath>
#include <numeric>
#include <string>

#include "kleinbundle/bundles.hpp"
#include "kleinbundle/errors.hpp"
#include "kleinbundle/torus.hpp"

namespace kb {

enum class ModuliKind { Empty, Circle, TorusQuotient, PuncturedTorusQuotient };

inline const char* to_string(ModuliKind k) {
    switch (k) {
        case ModuliKind::Empty: return "Empty";
        case ModuliKind::Circle: return "Circle";
        case ModuliKind::TorusQuotient: return "TorusQuotient";
        case ModuliKind::PuncturedTorusQuotient: return "PuncturedTorusQuotient";
    }
    return "?";
}

// Shape of the set of stable real bundles of type (r, d).  `cell` is the
// circle circumference (Circle) or the quotient torus side (quotient kinds),
// always 1/r in the nonempty cases.
struct ModuliDesc {
    int r = 1;
    int d = 0;
    ModuliKind kind = ModuliKind::Empty;
    int dimension = 0;
    Rational cell{0};
};

inline int gcd_rd(int r, int d) { return std::gcd(r, std::abs(d)); }

// Stable real bundles of type (r, d) exist iff d is even and gcd(r, d) is
// 1 or 2.
inline bool exists_stable(int r, int d) {
    if (r < 1) throw DomainError(errc::bad_argument, "rank must be a positive integer");
    if (d % 2 != 0) return false;
    int g = gcd_rd(r, d);
    return g == 1 || g == 2;
}

inline ModuliDesc moduli_descriptor(int r, int d) {
    ModuliDesc m;
    m.r = r;
    m.d = d;
    if (!exists_stable(r, d)) {
        m.kind = ModuliKind::Empty;
        m.dimension = 0;
        m.cell = Rational(0);
        return m;
    }
    m.cell = Rational(1, r);
    if (gcd_rd(r, d) == 1) {
        m.kind = ModuliKind::Circle;
        m.dimension = 1;
    } else {
        m.dimension = 2;
        m.kind = ((d / 2) % 2 != 0) ? ModuliKind::TorusQuotient
                                    : ModuliKind::PuncturedTorusQuotient;
    }
    return m;
}

// Canonical isomorphism key of a stable class.  For gcd = 1 the key is a
// point of the circle [0, 1/r); for gcd = 2 it is the lexicographically
// least representative of the delta-orbit {p, (a, -b)} on the side-1/r
// quotient torus.
struct StableClassKey {
    int r = 1;
    int d = 0;
    bool pair_orbit = false;
    Rational circle_key;  // gcd = 1
    ExactPoint rep;       // gcd = 2: canonical orbit representative
    ExactPoint partner;   // gcd = 2: the other orbit member (= rep if fixed)
};

inline StableClassKey canonical_key(int r, int d, const ExactPoint& p) {
    if (!exists_stable(r, d))
        throw DomainError(errc::empty_moduli, "no stable real bundles of this rank and degree");
    StableClassKey key;
    key.r = r;
    key.d = d;
    Rational side(1, r);
    if (gcd_rd(r, d) == 1) {
        if (p.b != Rational(0))
            throw DomainError(errc::not_on_real_circle,
                              "coprime-type keys are points of the real circle b = 0");
        key.pair_orbit = false;
        key.circle_key = modulo(p.a, side);
        return key;
    }
    ExactPoint q{modulo(p.a, side), modulo(p.b, side)};
    if ((d / 2) % 2 == 0 && q.b == Rational(0))
        throw DomainError(errc::excluded_real_locus,
                          "class lies over the real circle: it is a complexified real bundle, "
                          "not a stable conjugate pair");
    ExactPoint dq{q.a, modulo(-q.b, side)};
    key.pair_orbit = true;
    if (cmp(dq, q) < 0) {
        key.rep = dq;
        key.partner = q;
    } else {
        key.rep = q;
        key.partner = dq;
    }
    return key;
}

namespace detail {

// Snap a float coordinate for keying: exact multiples of 1/(2r) pass
// through, values strictly within 1e-9 of one are refused, anything else is
// snapped to the nearest rational with denominator <= 10^6.
inline Rational snap_key_coordinate(double x, int r, double tol = 1e-9) {
    double y = wrap_unit(x);
    double grid = 1.0 / (2.0 * r);
    double nearest = std::round(y / grid) * grid;
    double dist = std::fabs(y - nearest);
    if (dist == 0.0) return modulo(Rational(llround(y / grid), 2LL * r), Rational(1));
    if (dist < tol)
        throw DomainError(errc::ambiguous_at_tolerance,
                          "coordinate is within 1e-9 of an orbit boundary");
    return mod1(snap_to_rational(y));
}

}  // namespace detail

inline StableClassKey canonical_key(int r, int d, const FloatPoint& p) {
    return canonical_key(r, d,
                         ExactPoint{detail::snap_key_coordinate(p.a, r),
                                    detail::snap_key_coordinate(p.b, r)});
}

// The delta-fixed locus of the side-1/r quotient torus: the real circle
// b = 0 and the obstructed circle b = 1/(2r).  (For odd r, 1/2 mod 1/r is
// 1/(2r).)
struct FixedLocusDelta {
    int r = 1;
    Rational side;
    Rational real_b;
    Rational obstructed_b;
};

inline FixedLocusDelta fixed_locus_delta(int r) {
    if (r < 1) throw DomainError(errc::bad_argument, "rank must be a positive integer");
    if (r % 2 == 0)
        throw DomainError(errc::bad_argument,
                          "the fixed-locus formula applies to odd rank (coprime type)");
    return {r, Rational(1, r), Rational(0), Rational(1, 2 * r)};
}

// Invariant direct image data for the existence construction: pull back
// along the degree-r isogeny from C/<r, i*tau>, sum over the Galois orbit of
// a real degree-d line bundle, and take invariants.
struct PushforwardRecipe {
    int rank = 1;
    int degree = 0;
    int covering_degree = 1;
    ExactLineBundle source_xi;   // degree-d real class of key 0 on the covering torus
    int realness_witness = +1;   // obstruction sign of the source pair
};

struct ConstructedStable {
    RealStableAtom atom;
    PushforwardRecipe recipe;
};

// Stable real bundle of coprime type (r odd, d even): the pushforward base
// bundle twisted by the real degree-zero class of parameter t.  Keys live in
// [0, 1/r); twisting by real r-torsion does not move the class.
inline ConstructedStable construct_stable_real(int r, int d, const Rational& t) {
    if (r < 1) throw DomainError(errc::bad_argument, "rank must be a positive integer");
    if (d % 2 != 0) throw DomainError(errc::odd_degree, "real bundles have even degree");
    if (gcd_rd(r, d) != 1)
        throw DomainError(errc::bad_argument,
                          "the pushforward construction needs coprime rank and degree");
    ConstructedStable c;
    c.atom = RealStableAtom{r, d, modulo(t, Rational(1, r))};
    c.recipe.rank = r;
    c.recipe.degree = d;
    c.recipe.covering_degree = r;
    c.recipe.source_xi = ExactLineBundle{d, {Rational(0), Rational(0)}};
    c.recipe.realness_witness = +1;
    return c;
}

// Inside the delta-fixed locus of the coprime moduli, the b = 0 circle
// consists of complexified real stable bundles and the b = 1/(2r) circle is
// obstructed (sign -1).
struct CoprimeRealLocus {
    int r = 1;
    int d = 0;
    Rational side;
    Rational real_b;
    Rational obstructed_b;
};

inline CoprimeRealLocus real_locus_in_coprime_moduli(int r, int d) {
    if (r < 1) throw DomainError(errc::bad_argument, "rank must be a positive integer");
    if (d % 2 != 0) throw DomainError(errc::odd_degree, "real bundles have even degree");
    if (gcd_rd(r, d) != 1)
        throw DomainError(errc::bad_argument, "rank and degree must be coprime");
    return {r, d, Rational(1, r), Rational(0), Rational(1, 2 * r)};
}

}  // namespace kb
