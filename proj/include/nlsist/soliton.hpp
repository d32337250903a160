#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nlsist/types.hpp"

namespace nlsist {

// Closed-form 1-soliton for pole z1 (Im z1 > 0) and coupling c1 != 0:
//   u(x,t) = -2i Im(z1) e^{-i[arg c1 + 2 Re(z1) x + 4 Re(z1^2) t]}
//            * sech[ 2 Im(z1)(x + 4 Re(z1) t) - ln(|c1| / (2 Im z1)) ].
// |u| peaks with height 2 Im(z1) at
//   x0 = ln(|c1|/(2 Im z1)) / (2 Im z1) - 4 Re(z1) t.
Complex one_soliton(Complex z1, Complex c1, double x, double t);
double one_soliton_center(Complex z1, Complex c1, double t);

// Residue condition flavour at a pole z_k in the upper half-plane. `Lower`
// is the standard soliton condition
//   Res_{z_k} m = lim m [[0,0],[g_k,0]],   g_k = coeff_k e^{+phi_k},
// `Upper` is the column-flipped condition that appears after the Blaschke
// transformation,
//   Res_{z_k} m = lim m [[0,h_k],[0,0]],   h_k = coeff_k e^{-phi_k},
// with the conjugate pole carrying -conj(g_k) / -conj(h_k) in the mirrored slot.
enum class ResidueKind { Lower, Upper };

struct ResiduePole {
    Complex z;      // in C^+
    Complex coeff;  // g or h without the exponential factor
    ResidueKind kind = ResidueKind::Lower;
};

// The collocation form of one row of the partial-fraction ansatz
//   m(z) = 1 + sum_k A_k/(z - z_k) + sum_k At_k/(z - conj(z_k)).
// `solution` stacks the nonzero-column entries of A_k then At_k; the entries
// listed in `u12_index` are the 1-2 residue components whose sum reconstructs
// the field.
struct ResidueSystem {
    Eigen::MatrixXcd matrix;
    Eigen::VectorXcd rhs;
    Eigen::VectorXcd solution;
    std::vector<int> u12_index;
};

// u = 2i * (sum of 1-2 entries of all residue matrices).
Complex reconstruct_from_residues(const ResidueSystem& sys);

// Assembles and solves the residue conditions of the pole-only problem as two
// 2N x 2N linear systems (one per matrix row, same coefficient matrix).
// Rows whose exponential factor exceeds unit magnitude are rescaled by it
// analytically before assembly, so arbitrarily large |Re phi_k| stay finite.
class ResidueProblem {
public:
    ResidueProblem(std::vector<ResiduePole> poles, double x, double t,
                   const Tolerances& tol = {});

    Complex u() const { return u_; }
    Mat2 m_at(Complex z) const;            // ansatz evaluated off the poles
    Mat2 residue_A(int k) const;           // A_k
    Mat2 residue_At(int k) const;          // At_k
    const ResidueSystem& system() const { return row1_; } // row-1 block
    double rcond() const { return rcond_; }
    double residual() const { return residual_; }
    int order() const { return static_cast<int>(poles_.size()); }

private:
    std::vector<ResiduePole> poles_;
    ResidueSystem row1_, row2_;
    Complex u_{0.0, 0.0};
    double rcond_ = 1.0;
    double residual_ = 0.0;
};

// Exact N-soliton field via the residue linear system. N = 0 gives u = 0.
Complex n_soliton(const SolitonParams& params, double x, double t,
                  const Tolerances& tol = {});

// Same with couplings c_k replaced by c_k * lambda_k^2. All lambda_k = 1
// reduces to n_soliton.
Complex modified_soliton(const SolitonParams& params,
                         const std::vector<Complex>& lambdas, double x, double t,
                         const Tolerances& tol = {});

// Batch evaluation over an x grid at fixed t.
std::vector<Complex> n_soliton_profile(const SolitonParams& params,
                                       const std::vector<double>& xs, double t,
                                       const Tolerances& tol = {});

// Sample the N-soliton onto a uniform window.
SampledPotential sample_n_soliton(const SolitonParams& params, double x_min,
                                  double x_max, int n, double t = 0.0,
                                  const Tolerances& tol = {});

} // namespace nlsist
