#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "kleinbundle/errors.hpp"
#include "kleinbundle/torus.hpp"

namespace kb {

// Isomorphism class of a degree-d line bundle, written as the reference
// bundle O(d * 0) twisted by the degree-zero class phi(point).
template <class S>
struct LineBundle {
    int degree = 0;
    TorusPoint<S> point;

    friend bool operator==(const LineBundle& x, const LineBundle& y) {
        return x.degree == y.degree && x.point == y.point;
    }
    friend bool operator!=(const LineBundle& x, const LineBundle& y) { return !(x == y); }
};

using ExactLineBundle = LineBundle<Rational>;
using FloatLineBundle = LineBundle<double>;

template <class S>
inline LineBundle<S> tensor(const LineBundle<S>& x, const LineBundle<S>& y) {
    return {x.degree + y.degree, add(x.point, y.point)};
}

// Checked variant for classes living on explicitly named tori.
template <class S>
inline LineBundle<S> tensor(const KleinBottle& X1, const LineBundle<S>& x,
                            const KleinBottle& X2, const LineBundle<S>& y) {
    if (X1.tau != X2.tau || X1.convention != X2.convention)
        throw DomainError(errc::mismatched_tau, "tensor of line bundles over different Klein bottles");
    return tensor(x, y);
}

template <class S>
inline LineBundle<S> dual(const LineBundle<S>& x) {
    return {-x.degree, negate(x.point)};
}

template <class S>
inline LineBundle<S> tensor_power(const LineBundle<S>& x, int n) {
    LineBundle<S> r{x.degree * n, scale(n, x.point)};
    return r;
}

// The involution L -> sigma^* conj(L) on Pic^d.  With the O(d * 0) reference
// this is (a, b) -> (a + d/2, -b): conjugation fixes a and negates b, and the
// reference divisor moves from d*0 to d*(1/2).
template <class S>
inline LineBundle<S> sigma_conj(const LineBundle<S>& x) {
    S shift = S(x.degree) * scalar_half<S>();
    return {x.degree, make_point<S>(x.point.a + shift, -x.point.b)};
}

enum class FixedClassKind { NotFixed, RealizableReal, FixedNotReal };

inline const char* to_string(FixedClassKind k) {
    switch (k) {
        case FixedClassKind::NotFixed: return "NotFixed";
        case FixedClassKind::RealizableReal: return "RealizableReal";
        case FixedClassKind::FixedNotReal: return "FixedNotReal";
    }
    return "?";
}

// Exact trichotomy.  A class is sigma_d-fixed iff its degree is even and
// b is 0 or 1/2; after untwisting by the real reference of the same degree,
// b = 0 descends to a real bundle and b = 1/2 is obstructed.
inline FixedClassKind classify_fixed(const ExactLineBundle& L) {
    if (sigma_conj(L) != L) return FixedClassKind::NotFixed;
    return L.point.b == Rational(0) ? FixedClassKind::RealizableReal
                                    : FixedClassKind::FixedNotReal;
}

// Float flavor: decisions within `tol` of a boundary line are snapped onto
// it; anything strictly between `tol` and `band` is refused rather than
// silently resolved.
inline FixedClassKind classify_fixed(const FloatLineBundle& L, double tol = 1e-9,
                                     double band = 1e-7) {
    if (L.degree % 2 != 0) return FixedClassKind::NotFixed;
    double b = wrap_unit(L.point.b);
    double dist0 = std::min(b, 1.0 - b);
    double dist_half = std::fabs(b - 0.5);
    double dist = std::min(dist0, dist_half);
    if (dist <= tol) return dist0 <= tol ? FixedClassKind::RealizableReal
                                         : FixedClassKind::FixedNotReal;
    if (dist < band)
        throw DomainError(errc::ambiguous_at_tolerance,
                          "b is ambiguous at tolerance: between 1e-9 and 1e-7 of a fixed line");
    return FixedClassKind::NotFixed;
}

// The r-torsion subgroup of Pic^0, or its intersection with the circle of
// real classes (b = 0) when real_only is set.
struct TorsionSubgroup {
    int order = 1;
    bool real_only = false;
    std::vector<ExactPoint> elements;  // sorted lexicographically
};

inline TorsionSubgroup torsion_subgroup(int r, bool real_only) {
    if (r < 1) throw DomainError(errc::bad_argument, "torsion order must be a positive integer");
    TorsionSubgroup g;
    g.order = r;
    g.real_only = real_only;
    if (real_only) {
        g.elements.reserve(static_cast<std::size_t>(r));
        for (int k = 0; k < r; ++k) g.elements.push_back({Rational(k, r), Rational(0)});
    } else {
        g.elements.reserve(static_cast<std::size_t>(r) * r);
        for (int m = 0; m < r; ++m)
            for (int n = 0; n < r; ++n) g.elements.push_back({Rational(m, r), Rational(n, r)});
    }
    std::sort(g.elements.begin(), g.elements.end(), [](const ExactPoint& p, const ExactPoint& q) {
        return p.a < q.a || (p.a == q.a && p.b < q.b);
    });
    return g;
}

// Degrees of real line bundles are exactly the even integers.
inline bool real_line_bundle_exists(int d) { return d % 2 == 0; }

}  // namespace kb
