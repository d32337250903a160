#pragma once

#include <vector>

#include "nlsist/types.hpp"
#include "nlsist/zs.hpp"

namespace nlsist {

// Strang split-step Fourier integrator for  i u_t + u_xx + 2|u|^2 u = 0.
// Both substeps are exact flows: the dispersion factor e^{-ik^2 dt} in
// Fourier space and the pointwise phase rotation e^{2i|u|^2 dt} (|u| is
// invariant under it), so the grid L2 mass is conserved to roundoff.
struct EvolutionConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    int n_modes = 4096;          // power of two
    double x_min = -40.0;
    double x_max = 40.0;
    bool auto_widen = true;      // double the window until edge mass < 1e-10
    double edge_mass_tol = 1e-10;
    // final-state guard: long runs shed low-amplitude radiation that wraps
    // around the periodic window; raise this when that is part of the model
    // (it still has to catch a soliton parked on the edge)
    double edge_mass_final = 1e-8;
    double blowup_factor = 10.0; // abort if max|u| exceeds this times initial

    void validate() const;
};

struct ConservedTrace {
    std::vector<double> t;
    std::vector<double> mass;   // int |u|^2 dx
    std::vector<double> energy; // int (|u_x|^2 - |u|^4) dx
};

// Evolve to cfg.t_final (negative dt/t_final run the flow backwards).
// The potential must live on the cfg window with cfg.n_modes points; with
// auto_widen the data is re-embedded into a doubled window as needed and the
// returned potential lives on the final window.
SampledPotential evolve(const SampledPotential& pot, const EvolutionConfig& cfg,
                        ConservedTrace* trace = nullptr);

double field_energy(const SampledPotential& pot);

struct IsospectralityReport {
    double max_a_drift = 0.0;       // max_z |a_t(z) - a_0(z)| on the real grid
    double max_pole_drift = 0.0;    // max_j |z_j(t) - z_j(0)|
    double max_r_factor_err = 0.0;  // max_z |r_t(z) - e^{4iz^2 t} r_0(z)|
    double max_c_factor_err = 0.0;  // max_j |c_j(t)/c_j(0) - e^{4i z_j^2 t}|
};

// Evolves pot0 to time t with the split-step scheme, recomputes the
// scattering data and compares against the exact evolution laws.
IsospectralityReport isospectrality_check(const SampledPotential& pot0, double t,
                                          const EvolutionConfig& cfg,
                                          const std::vector<double>& zgrid,
                                          const SearchBox& box,
                                          const Tolerances& tol = {});

} // namespace nlsist
