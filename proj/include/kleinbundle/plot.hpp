#pragma once

#include <charconv>
#include <ostream>
#include <string>

#include "kleinbundle/errors.hpp"
#include "kleinbundle/moduli.hpp"
#include "kleinbundle/picard.hpp"

namespace kb {

// Fundamental-domain plot: the unit square in (a, b) coordinates with the
// sigma_d-fixed circles (even degree only), the r-torsion lattice, and the
// side-1/r moduli quotient cell.  SVG output is pure geometry (no text
// elements), and every plot has a CSV twin with the same data.
struct PlotSpec {
    double tau = 1.0;
    int degree = 0;
    int torsion_order = 1;
};

namespace detail {

// shortest round-trip decimal
inline std::string fmt_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline void check_plot_spec(const PlotSpec& s) {
    if (!(s.tau > 0.0)) throw DomainError(errc::bad_argument, "plot requires tau > 0");
    if (s.torsion_order < 1 || s.torsion_order > 24)
        throw DomainError(errc::bad_argument, "plot torsion order must be in [1, 24]");
}

}  // namespace detail

inline void write_plot_svg(std::ostream& out, const PlotSpec& spec) {
    detail::check_plot_spec(spec);
    const double size = 440.0, margin = 40.0;
    const double W = size + 2 * margin;
    auto X = [&](double a) { return margin + a * size; };
    auto Y = [&](double b) { return margin + (1.0 - b) * size; };  // b increases upward
    auto fd = detail::fmt_double;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fd(W) << "\" height=\""
        << fd(W) << "\" viewBox=\"0 0 " << fd(W) << " " << fd(W) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << fd(W) << "\" height=\"" << fd(W)
        << "\" fill=\"#ffffff\"/>\n";
    out << "<rect x=\"" << fd(X(0)) << "\" y=\"" << fd(Y(1)) << "\" width=\"" << fd(size)
        << "\" height=\"" << fd(size) << "\" fill=\"none\" stroke=\"#24292f\" stroke-width=\"1.5\"/>\n";

    if (spec.degree % 2 == 0) {
        // sigma_d-fixed circles: real locus b = 0, obstructed locus b = 1/2
        out << "<line x1=\"" << fd(X(0)) << "\" y1=\"" << fd(Y(0)) << "\" x2=\"" << fd(X(1))
            << "\" y2=\"" << fd(Y(0)) << "\" stroke=\"#1a7f37\" stroke-width=\"3\"/>\n";
        out << "<line x1=\"" << fd(X(0)) << "\" y1=\"" << fd(Y(0.5)) << "\" x2=\"" << fd(X(1))
            << "\" y2=\"" << fd(Y(0.5)) << "\" stroke=\"#cf222e\" stroke-width=\"3\"/>\n";
    }

    const int r = spec.torsion_order;
    out << "<rect x=\"" << fd(X(0)) << "\" y=\"" << fd(Y(1.0 / r)) << "\" width=\""
        << fd(size / r) << "\" height=\"" << fd(size / r)
        << "\" fill=\"none\" stroke=\"#0969da\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            out << "<circle cx=\"" << fd(X(double(i) / r)) << "\" cy=\"" << fd(Y(double(j) / r))
                << "\" r=\"3\" fill=\"#57606a\"/>\n";
    out << "</svg>\n";
}

inline void write_plot_csv(std::ostream& out, const PlotSpec& spec) {
    detail::check_plot_spec(spec);
    auto fd = detail::fmt_double;
    out << "a,b,tag\n";
    const int r = spec.torsion_order;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            out << fd(double(i) / r) << "," << fd(double(j) / r) << ",torsion\n";
    if (spec.degree % 2 == 0) {
        for (int k = 0; k < 64; ++k)
            out << fd(k / 64.0) << ",0,sigma_fixed_real\n";
        for (int k = 0; k < 64; ++k)
            out << fd(k / 64.0) << ",0.5,sigma_fixed_obstructed\n";
    }
    out << "0,0,moduli_cell\n";
    out << fd(1.0 / r) << ",0,moduli_cell\n";
    out << "0," << fd(1.0 / r) << ",moduli_cell\n";
    out << fd(1.0 / r) << "," << fd(1.0 / r) << ",moduli_cell\n";
}

}  // namespace kb
