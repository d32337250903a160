#pragma once

#include <cstdint>
#include <vector>

#include "nlsist/asymptotics.hpp"
#include "nlsist/evolution.hpp"
#include "nlsist/recipes.hpp"
#include "nlsist/types.hpp"

namespace nlsist {

// End-to-end experiment: perturb an exact N-soliton, measure its scattering
// data, build the modified-coupling soliton for the requested time direction
// and compare it against the split-step evolution at the listed times.
struct StabilityOptions {
    SolitonParams params;                                    // unperturbed soliton
    PerturbationShape shape = PerturbationShape::Gaussian;
    double eps = 0.05;
    double center = 0.0;
    double width = 1.0;
    std::uint64_t seed = 1;
    Sign sign = Sign::Plus;
    std::vector<double> t_list{5.0, 10.0, 20.0, 40.0};       // all same sign as `sign`
    double window_half = 128.0;
    int n_modes = 16384;
    double dt = 1e-3;
    std::vector<double> r_grid = uniform_grid(-6.0, 6.0, 1025);
    SearchBox box{-1.5, 1.5, 0.1, 2.0};
    Tolerances tol{};
};

struct StabilityPoint {
    double t = 0.0;
    double sup_err = 0.0;     // sup_x |u(x,t) - u_sol(x,t)|
    double scaled = 0.0;      // sqrt(|t|) * sup_err
    bool skipped = false;     // frame not asymptotic at some soliton ray
};

struct StabilityReport {
    ScatteringData measured;        // data of the perturbed initial field
    AsymptoticCouplings couplings;
    std::vector<StabilityPoint> points;
    double param_closeness = 0.0;   // max_j |z_j - z'_j| + |c_j - c_j^{sign}|
    double eps = 0.0;
    // conserved-quantity trace of the evolution (recorded at the t-list)
    std::vector<double> mass;
    std::vector<double> energy;
};

StabilityReport run_stability(const StabilityOptions& opt);

} // namespace nlsist
