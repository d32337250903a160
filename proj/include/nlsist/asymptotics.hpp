#pragma once

#include <vector>

#include "nlsist/quad.hpp"
#include "nlsist/types.hpp"

namespace nlsist {

// phi(z;x,t) = 2ixz + 4iz^2 t. With xi = -x/(4t) its real part is
// Re phi = 8 Im(z) t (xi - Re z), which drives the pole classification.
Complex phase(Complex z, double x, double t);

// Classification of the poles relative to the ray parameter xi = -x/(4t):
//   growing:  Re z_k <  xi  (|e^{phi_k}| -> infinity as t -> +infinity)
//   decaying: Re z_k >= xi  (|e^{phi_k}| -> 0, ties go here)
//   near_ray: |Re z_k - xi| <= 1/sqrt(|t|)
// For large t, near_ray is empty or consists of poles sharing one real part.
// If members with distinct real parts fall inside the 1/sqrt(t) window the
// frame is marked ambiguous and downstream consumers must skip it.
struct PhaseFrame {
    double x = 0.0;
    double t = 0.0;
    double xi = 0.0;
    std::vector<int> growing;
    std::vector<int> decaying;
    std::vector<int> near_ray;
    bool ambiguous = false;
};

PhaseFrame classify(const std::vector<Complex>& poles, double x, double t);

// Blaschke product over the growing set: T(z) = prod (z - z_k)/(z - conj z_k).
// Unimodular on the real axis and conj(T(z)) = 1/T(conj z).
Complex blaschke_T(Complex z, const PhaseFrame& frame, const std::vector<Complex>& poles);
Complex blaschke_T(Complex z, const std::vector<int>& growing, const std::vector<Complex>& poles);
// T'(z_k) for k in the growing set (the vanishing factor differentiated).
Complex blaschke_T_prime(int k, const std::vector<int>& growing, const std::vector<Complex>& poles);

// Spline interpolant of a sampled reflection coefficient. Provides
// log(1+|r|^2) and r itself between grid nodes; outside the grid the
// integrand is treated as zero (tails must be negligible, see
// lambda_tail_tol).
class ReflectionInterpolant {
public:
    ReflectionInterpolant() = default;
    ReflectionInterpolant(const std::vector<double>& grid, const std::vector<Complex>& r);

    double log1p_abs2(double y) const;  // log(1 + |r(y)|^2)
    Complex r_at(double y) const;
    double grid_min() const { return lo_; }
    double grid_max() const { return hi_; }
    double edge_magnitude() const;      // max |log(1+|r|^2)| at the two edges
    bool zero() const { return zero_; }
    // leftmost point where the integrand exceeds the cut threshold
    double support_min(double cut = 1e-12) const;
    double support_max(double cut = 1e-12) const;
    double l2_norm_sq() const;          // int |r|^2 over the grid (trapezoid)

private:
    CubicSpline log1p_;                 // spline of log(1+|r|^2)
    CubicSpline re_, im_;
    std::vector<double> grid_;
    std::vector<double> f_;             // log(1+|r|^2) samples
    double lo_ = 0.0, hi_ = 0.0;
    bool zero_ = true;
};

// delta(z) = exp( (2 pi i)^-1 int_{-inf}^{xi} log(1+|r(y)|^2)/(y - z) dy ).
// Analytic off the ray (-inf, xi]; delta -> 1 as |z| -> infinity; across the
// ray delta_+/delta_- = 1 + |r|^2.
Complex delta_function(Complex z, double xi, const ReflectionInterpolant& r,
                       const Tolerances& tol = {});

// nu0 = -(2 pi)^-1 log(1 + |r(xi)|^2); always <= 0, zero iff r(xi) = 0.
double nu0(double xi, const ReflectionInterpolant& r);

// Coupling modifiers of the asymptotic solitons:
//   Lambda_j^+ = exp( -(2 pi i)^-1 int_{-inf}^{Re z_j} log(1+|r|^2)/(s - z_j) ds ),
//   Lambda_j^- = exp( +(2 pi i)^-1 int_{+inf}^{Re z_j} log(1+|r|^2)/(s - z_j) ds ),
// so that log Lambda^+ + log Lambda^- = -(2 pi i)^-1 times the full-line
// integral. c_j^{+-} = c_j (Lambda_j^{+-})^2.
struct AsymptoticCouplings {
    std::vector<Complex> lambdas_plus;
    std::vector<Complex> lambdas_minus;
    std::vector<Complex> c_plus;
    std::vector<Complex> c_minus;
    std::vector<double> smallness_ratio; // |1 - Lambda_j^+| / ||r||_{L2}^2
    double r_l2_sq = 0.0;
};

AsymptoticCouplings lambda_factors(const std::vector<Complex>& poles,
                                   const std::vector<Complex>& couplings,
                                   const ReflectionInterpolant& r,
                                   const Tolerances& tol = {});

enum class Sign { Plus, Minus };

// The asymptotic soliton u^{sol}_{+-}: the N-soliton built from sd's poles
// with couplings c_j (Lambda_j^{+-})^2.
Complex asymptotic_soliton(const ScatteringData& sd, Sign sign, double x, double t,
                           const Tolerances& tol = {});
std::vector<Complex> asymptotic_soliton_profile(const ScatteringData& sd, Sign sign,
                                                const std::vector<double>& xs, double t,
                                                const Tolerances& tol = {});

} // namespace nlsist
