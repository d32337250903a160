#pragma once

#include <utility>
#include <vector>

#include "nlsist/asymptotics.hpp"
#include "nlsist/soliton.hpp"
#include "nlsist/types.hpp"

namespace nlsist {

// System of disjoint counter-clockwise circles with equispaced collocation
// nodes. Radius is 1/sqrt(t) around every pole (and conjugate) that is not in
// the near-ray set.
struct ContourSystem {
    struct Circle {
        Complex center;
        double radius;
    };
    std::vector<Circle> circles;
    int nodes_per_circle = 64;

    int total_nodes() const {
        return static_cast<int>(circles.size()) * nodes_per_circle;
    }
    Complex node(int ci, int l) const;
    // dz quadrature weight of node l on circle ci (trapezoid in the angle)
    Complex weight(int ci, int l) const;
    int circle_of(int flat) const { return flat / nodes_per_circle; }
};

// Per-node 2x2 jump matrices. Triangular with unit diagonal, det V = 1.
struct JumpData {
    std::vector<Mat2> V;
};

// Jump of the pole-removal transformation on the circle system, stored in the
// convention (inside limit) = (outside limit) V. For a pole z_k with coupling
// c_k (reflectionless data),
//   growing k:  V = [[1, -(z-z_k) / (c_k e^{phi_k} T(z)^2)], [0, 1]]   on the circle at z_k,
//   decaying k: V = [[1, 0], [-c_k e^{phi_k} T(z)^2 / (z-z_k), 1]]     on the circle at z_k,
// with the conjugate-transposed mirror entries on the conjugate circles.
// Near-ray poles carry no circle. Throws on overlapping circles.
std::pair<ContourSystem, JumpData> build_jump(const SolitonParams& params,
                                              const PhaseFrame& frame, double t,
                                              const Tolerances& tol = {});

// Residue problem for the near-ray poles after the Blaschke transformation:
// decaying near-ray poles keep the Lower condition with coupling c_k T(z_k)^2,
// growing near-ray poles flip to the Upper condition with 1/(c_k T'(z_k)^2).
ResidueProblem near_ray_problem(const SolitonParams& params, const PhaseFrame& frame,
                                double x, double t, const Tolerances& tol = {});

// Conjugate every jump by the ansatz matrix of `m2` evaluated at the node.
JumpData conjugate_jump(const ContourSystem& cs, const JumpData& jd,
                        const ResidueProblem& m2);

struct SmallNormSolution {
    std::vector<Mat2> mu;   // solution of (1 - C_V) mu = 1 at the nodes
    Mat2 C1;                // -(2 pi i)^-1  oint mu (V-1) dz
    double v_minus_one_inf = 0.0;
    std::vector<double> v_minus_one_per_circle;
    double contraction = 0.0;  // estimate of ||C_V||
    double kappa = 0.0;        // discrete Cauchy-projection norm
    double c1_norm = 0.0;
    double residual = 0.0;
    int nodes = 0;
};

// Collocation solve of (1 - C_V) mu = 1. The minus boundary value of the
// Cauchy integral on the source circle uses the Fourier-mode split (negative
// modes flip sign, the rest vanish); disjoint circles use the plain kernel.
// Throws NumericalError("non-contraction") when the contraction estimate
// reaches 0.5.
SmallNormSolution solve_small_norm(const ContourSystem& cs, const JumpData& jd,
                                   const Tolerances& tol = {});

// End-to-end decomposition of a reflectionless field at (x,t>0):
//   u(x,t) = u_near_ray + 2i [C1]_12,
// where u_near_ray is the field of the near-ray residue problem (zero when no
// pole tracks the ray) and C1 comes from the small-norm solve on the circles
// of the remaining poles with the jump conjugated by the near-ray ansatz.
// `check_resolution` re-solves with doubled nodes and reports the C1 shift.
struct Decomposition {
    Complex u_near_ray{0.0, 0.0};
    Mat2 C1;
    Complex u_total{0.0, 0.0};
    double c1_norm = 0.0;
    double v_minus_one_inf = 0.0;
    double contraction = 0.0;
    double kappa = 0.0;
    double c1_doubling_shift = 0.0;
    int nodes = 0;
};

Decomposition decompose_reflectionless(const SolitonParams& params, double x, double t,
                                       const Tolerances& tol = {},
                                       bool check_resolution = false);

} // namespace nlsist
