#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "nlsist/errors.hpp"
#include "nlsist/mat2.hpp"

namespace nlsist {

// Numerical knobs shared across the library. Defaults are tuned so that the
// round-trip pipeline (synthesize -> scatter) recovers poles to 1e-5 and
// couplings to 1e-3 with comfortable margin.
struct Tolerances {
    double root_tol = 1e-10;        // |a(z)| at a refined zero
    double unitarity_tol = 1e-7;    // | |a|^2 + |b|^2 - 1 | on the real axis
    double gamma_tol = 1e-6;        // x-independence of the bound-state ratio
    double tail_tol = 1e-8;         // |u| at the window edges
    double a_floor = 1e-8;          // |a| below this on R signals a spectral singularity
    double deriv_floor = 1e-8;      // |a'(z_k)| must exceed this (simple zero)
    double pole_sep_tol = 1e-6;     // minimal pairwise pole distance
    double h_deriv = 1e-5;          // step of the central difference for a'(z)
    double linsys_tol = 1e-9;       // relative residual of residue/collocation solves
    double quad_tol = 1e-10;        // absolute tolerance of adaptive quadrature
    double ray_tol = 1e-8;          // minimal distance of z from the branch ray of delta
    double lambda_tail_tol = 1e-10; // integrand mass allowed at the r-grid edges
    double c1_tol = 1e-8;           // change of C1 allowed under node doubling
    int nodes_per_circle = 64;      // collocation nodes per contour circle
    double box_margin = 0.02;       // zeros may not sit closer than this to the search box edge
};

// Complex field u(x) on a uniform grid over [x_min, x_max]. The potential must
// be effectively supported inside the window (tails below tail_tol).
struct SampledPotential {
    double x_min = 0.0;
    double x_max = 0.0;
    std::vector<Complex> samples;

    int n_points() const { return static_cast<int>(samples.size()); }
    double dx() const { return (x_max - x_min) / (n_points() - 1); }
    double x(int i) const { return x_min + dx() * i; }

    // grid L2 mass  int |u|^2 dx  (trapezoid)
    double mass() const {
        double s = 0.0;
        const int n = n_points();
        for (int i = 0; i < n; ++i) {
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            s += w * std::norm(samples[i]);
        }
        return s * dx();
    }

    void validate(double tail_tol = 1e-8) const;
};

SampledPotential make_potential(double x_min, double x_max, int n,
                                const std::vector<Complex>& samples);

// The scattering data (r(z); z_1..z_N; c_1..c_N) plus the derivative of the
// transmission coefficient at the poles.
struct ScatteringData {
    std::vector<double> r_grid;          // real z values
    std::vector<Complex> r_values;       // r(z) on r_grid
    std::vector<Complex> poles;          // z_j, Im z_j > 0
    std::vector<Complex> couplings;      // c_j != 0
    std::vector<Complex> a_prime_at_poles;

    int order() const { return static_cast<int>(poles.size()); }
    void validate(double pole_sep_tol = 1e-6) const;
};

// Reflectionless data: the poles and couplings of an exact N-soliton.
struct SolitonParams {
    std::vector<Complex> poles;
    std::vector<Complex> couplings;

    int order() const { return static_cast<int>(poles.size()); }
    void validate(double pole_sep_tol = 1e-6) const;
};

// Rectangle strictly inside the open upper half-plane, searched for zeros of a.
struct SearchBox {
    double re_min = -1.5, re_max = 1.5;
    double im_min = 0.1, im_max = 2.0;

    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    bool contains(Complex z, double margin = 0.0) const {
        return z.real() >= re_min + margin && z.real() <= re_max - margin &&
               z.imag() >= im_min + margin && z.imag() <= im_max - margin;
    }
};

inline std::vector<double> uniform_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo + h * i;
    return g;
}

} // namespace nlsist
