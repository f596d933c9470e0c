#pragma once

#include <cmath>
#include <string>

#include "kleinbundle/errors.hpp"
#include "kleinbundle/rational.hpp"

namespace kb {

// Which fixed-point-free anti-holomorphic involution the modulus refers to:
// SigmaStandard is z -> conj(z) + 1/2, SigmaPrime is z -> -conj(z) + i*tau/2.
enum class Convention { SigmaStandard, SigmaPrime };

inline const char* to_string(Convention c) {
    return c == Convention::SigmaStandard ? "SigmaStandard" : "SigmaPrime";
}

// A genus-one real curve without real points, presented as the complex torus
// C / <1, i*tau> together with one of the two involution conventions.
struct KleinBottle {
    double tau = 1.0;
    Convention convention = Convention::SigmaStandard;

    KleinBottle() = default;
    explicit KleinBottle(double t, Convention c = Convention::SigmaStandard)
        : tau(t), convention(c) {
        if (!std::isfinite(tau) || !(tau > 0.0))
            throw DomainError(errc::bad_argument, "tau must be a positive finite real");
    }
};

// Point of the torus in lattice coordinates: z = a + b*tau*i with
// a, b in [0, 1).  The second coordinate is stored in units of tau, so all
// involution and torsion structure is tau-independent.
template <class S>
struct TorusPoint {
    S a{};
    S b{};

    friend bool operator==(const TorusPoint& p, const TorusPoint& q) {
        return p.a == q.a && p.b == q.b;
    }
    friend bool operator!=(const TorusPoint& p, const TorusPoint& q) { return !(p == q); }
};

using ExactPoint = TorusPoint<Rational>;
using FloatPoint = TorusPoint<double>;

inline constexpr double kFloatSnapEps = 1e-12;

inline Rational wrap_unit(const Rational& x) { return mod1(x); }

// Float reduction snaps values within 1e-12 of the seam to 0, so canonical
// representatives do not flap between 0 and 1 - epsilon.
inline double wrap_unit(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y -= 1.0;
    if (y < kFloatSnapEps || y > 1.0 - kFloatSnapEps) y = 0.0;
    return y;
}

template <class S>
inline TorusPoint<S> make_point(const S& a, const S& b) {
    return TorusPoint<S>{wrap_unit(a), wrap_unit(b)};
}

template <class S>
inline TorusPoint<S> add(const TorusPoint<S>& p, const TorusPoint<S>& q) {
    return make_point<S>(p.a + q.a, p.b + q.b);
}

template <class S>
inline TorusPoint<S> negate(const TorusPoint<S>& p) {
    return make_point<S>(-p.a, -p.b);
}

template <class S>
inline TorusPoint<S> scale(int n, const TorusPoint<S>& p) {
    return make_point<S>(S(n) * p.a, S(n) * p.b);
}

// Canonical representative of z = z_re + z_im * i in the fundamental domain.
inline FloatPoint normalize(double z_re, double z_im, const KleinBottle& X) {
    if (!std::isfinite(z_re) || !std::isfinite(z_im))
        throw DomainError(errc::bad_argument, "non-finite torus coordinates");
    return make_point<double>(z_re, z_im / X.tau);
}

// Exact flavor: coordinates are supplied directly in lattice units.
inline ExactPoint normalize(const Rational& a, const Rational& b) {
    return make_point<Rational>(a, b);
}

template <class S>
inline S scalar_half();
template <>
inline Rational scalar_half<Rational>() { return Rational(1, 2); }
template <>
inline double scalar_half<double>() { return 0.5; }

// The involution induced by z -> conj(z) + 1/2: (a, b) -> (a + 1/2, -b).
template <class S>
inline TorusPoint<S> sigma_point(const TorusPoint<S>& p, const KleinBottle& X) {
    if (X.convention != Convention::SigmaStandard)
        throw DomainError(errc::bad_argument,
                          "sigma_point expects the SigmaStandard model; apply normal_form_klein first");
    return make_point<S>(p.a + scalar_half<S>(), -p.b);
}

// Normal form of a Klein bottle plus the isomorphism that realizes it.
struct KleinNormalForm {
    KleinBottle model;
    std::string map_note;  // self-map of C inducing the isomorphism
};

// Every (Y_tau, sigma') is isomorphic to (Y_{1/tau}, sigma) via z -> i*z/tau;
// the output modulus is the unique invariant of the isomorphism class.
inline KleinNormalForm normal_form_klein(const KleinBottle& X) {
    if (X.convention == Convention::SigmaStandard) return {X, "z -> z"};
    return {KleinBottle(1.0 / X.tau, Convention::SigmaStandard), "z -> i*z/tau"};
}

}  // namespace kb
