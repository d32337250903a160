#include "nlsist/soliton.hpp"

#include <cmath>
#include <sstream>

#include "nlsist/errors.hpp"

namespace nlsist {

namespace {

constexpr Complex I{0.0, 1.0};

Complex phase_value(Complex z, double x, double t) {
    return 2.0 * I * x * z + 4.0 * I * z * z * t;
}

} // namespace

Complex one_soliton(Complex z1, Complex c1, double x, double t) {
    if (!(z1.imag() > 0.0))
        throw ValidationError("invalid-pole", "one_soliton needs Im z1 > 0");
    const double ac = std::abs(c1);
    if (!(ac > 0.0))
        throw ValidationError("invalid-coupling", "one_soliton needs c1 != 0");
    const double im = z1.imag();
    const double re = z1.real();
    const double re_z2 = re * re - im * im;
    const double theta = std::arg(c1) + 2.0 * re * x + 4.0 * re_z2 * t;
    const double s = 2.0 * im * (x + 4.0 * re * t) - std::log(ac / (2.0 * im));
    return -2.0 * I * im * std::exp(-I * theta) / std::cosh(s);
}

double one_soliton_center(Complex z1, Complex c1, double t) {
    const double im = z1.imag();
    return std::log(std::abs(c1) / (2.0 * im)) / (2.0 * im) - 4.0 * z1.real() * t;
}

Complex reconstruct_from_residues(const ResidueSystem& sys) {
    Complex s{0.0, 0.0};
    for (int idx : sys.u12_index) s += sys.solution(idx);
    return 2.0 * I * s;
}

ResidueProblem::ResidueProblem(std::vector<ResiduePole> poles, double x, double t,
                               const Tolerances& tol)
    : poles_(std::move(poles)) {
    const int n = order();
    for (const ResiduePole& p : poles_) {
        if (!(p.z.imag() > 0.0))
            throw ValidationError("invalid-pole", "residue poles must have Im z > 0");
        if (!(std::abs(p.coeff) > 0.0))
            throw ValidationError("invalid-coupling", "residue coefficients must be nonzero");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(poles_[i].z - poles_[j].z) <= tol.pole_sep_tol)
                throw ValidationError("pole-separation", "residue poles nearly coincide");

    row1_.u12_index.clear();
    if (n == 0) {
        u_ = {0.0, 0.0};
        return;
    }

    // Strength of pole k is coeff_k e^{sigma phi_k} (sigma = +1 Lower, -1 Upper).
    // Store it as a log and keep either w or 1/w depending on which stays
    // bounded; rows with |w| > 1 are divided by w so the matrix entries never
    // overflow and the |w| -> infinity limit degrades gracefully to the exact
    // constraint system.
    std::vector<Complex> w(n), inv_w(n);
    std::vector<bool> scaled(n);
    for (int k = 0; k < n; ++k) {
        const double sigma = poles_[k].kind == ResidueKind::Lower ? 1.0 : -1.0;
        const Complex lw = sigma * phase_value(poles_[k].z, x, t) + std::log(poles_[k].coeff);
        scaled[k] = lw.real() > 0.0;
        w[k] = std::exp(lw);          // may be inf when scaled; unused then
        inv_w[k] = std::exp(-lw);     // may be 0 when |w| huge; that is the limit system
        if (scaled[k]) w[k] = {0.0, 0.0};
    }

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(2 * n, 2); // columns: matrix rows 1,2

    const auto z = [&](int k) { return poles_[k].z; };
    const auto zb = [&](int k) { return std::conj(poles_[k].z); };
    const auto is_lower = [&](int k) { return poles_[k].kind == ResidueKind::Lower; };

    for (int k = 0; k < n; ++k) {
        // unit row of the rhs identity this pole's conditions pick up
        const int e_p = is_lower(k) ? 1 : 0; // delta_{i2} for Lower, delta_{i1} for Upper
        const int e_q = is_lower(k) ? 0 : 1;

        const Complex diag_p = scaled[k] ? inv_w[k] : Complex{1.0, 0.0};
        const Complex mult_p = scaled[k] ? Complex{-1.0, 0.0} : -w[k];
        const Complex wbar = std::conj(w[k]);
        const Complex inv_wbar = std::conj(inv_w[k]);
        const Complex diag_q = scaled[k] ? inv_wbar : Complex{1.0, 0.0};
        const Complex mult_q = scaled[k] ? Complex{1.0, 0.0} : wbar;

        // p_k equation (row k): residue at z_k
        M(k, k) += diag_p;
        for (int j = 0; j < n; ++j) {
            if (j != k && is_lower(j) != is_lower(k))
                M(k, j) += mult_p / (z(k) - z(j));
            if (is_lower(j) == is_lower(k))
                M(k, n + j) += mult_p / (z(k) - zb(j));
        }
        rhs(k, e_p) = scaled[k] ? Complex{1.0, 0.0} : w[k];

        // q_k equation (row n+k): residue at conj(z_k)
        M(n + k, n + k) += diag_q;
        for (int j = 0; j < n; ++j) {
            if (is_lower(j) == is_lower(k))
                M(n + k, j) += mult_q / (zb(k) - z(j));
            if (j != k && is_lower(j) != is_lower(k))
                M(n + k, n + j) += mult_q / (zb(k) - zb(j));
        }
        rhs(n + k, e_q) = scaled[k] ? Complex{-1.0, 0.0} : -wbar;
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    rcond_ = lu.rcond();
    const Eigen::MatrixXcd sol = lu.solve(rhs);

    const double scale =
        M.cwiseAbs().maxCoeff() * sol.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff();
    residual_ = (M * sol - rhs).cwiseAbs().maxCoeff() / (scale > 0.0 ? scale : 1.0);
    if (!std::isfinite(residual_) || residual_ > tol.linsys_tol) {
        std::ostringstream os;
        os << "residue system solve failed (residual " << residual_ << ", rcond " << rcond_
           << ")";
        throw NumericalError("singular-system", os.str());
    }

    row1_.matrix = M;
    row1_.rhs = rhs.col(0);
    row1_.solution = sol.col(0);
    row2_.matrix = M;
    row2_.rhs = rhs.col(1);
    row2_.solution = sol.col(1);
    for (int k = 0; k < n; ++k)
        row1_.u12_index.push_back(is_lower(k) ? n + k : k);
    row2_.u12_index = row1_.u12_index;

    u_ = reconstruct_from_residues(row1_);
}

Mat2 ResidueProblem::residue_A(int k) const {
    Mat2 A = Mat2::zero();
    if (order() == 0) return A;
    const bool lower = poles_[k].kind == ResidueKind::Lower;
    const Complex r1 = row1_.solution(k);
    const Complex r2 = row2_.solution(k);
    if (lower) {
        A.m11 = r1;
        A.m21 = r2;
    } else {
        A.m12 = r1;
        A.m22 = r2;
    }
    return A;
}

Mat2 ResidueProblem::residue_At(int k) const {
    Mat2 A = Mat2::zero();
    if (order() == 0) return A;
    const int n = order();
    const bool lower = poles_[k].kind == ResidueKind::Lower;
    const Complex r1 = row1_.solution(n + k);
    const Complex r2 = row2_.solution(n + k);
    if (lower) {
        A.m12 = r1;
        A.m22 = r2;
    } else {
        A.m11 = r1;
        A.m21 = r2;
    }
    return A;
}

Mat2 ResidueProblem::m_at(Complex zeval) const {
    Mat2 m = Mat2::identity();
    for (int k = 0; k < order(); ++k) {
        m = m + residue_A(k) * (1.0 / (zeval - poles_[k].z));
        m = m + residue_At(k) * (1.0 / (zeval - std::conj(poles_[k].z)));
    }
    return m;
}

Complex n_soliton(const SolitonParams& params, double x, double t, const Tolerances& tol) {
    params.validate(tol.pole_sep_tol);
    std::vector<ResiduePole> rp;
    rp.reserve(params.order());
    for (int k = 0; k < params.order(); ++k)
        rp.push_back({params.poles[k], params.couplings[k], ResidueKind::Lower});
    return ResidueProblem(std::move(rp), x, t, tol).u();
}

Complex modified_soliton(const SolitonParams& params, const std::vector<Complex>& lambdas,
                         double x, double t, const Tolerances& tol) {
    params.validate(tol.pole_sep_tol);
    if (static_cast<int>(lambdas.size()) != params.order())
        throw ValidationError("invalid-coupling", "lambda count does not match pole count");
    SolitonParams mod = params;
    for (int k = 0; k < params.order(); ++k) {
        if (!(std::abs(lambdas[k]) > 0.0))
            throw ValidationError("invalid-coupling", "lambda factors must be nonzero");
        mod.couplings[k] *= lambdas[k] * lambdas[k];
    }
    return n_soliton(mod, x, t, tol);
}

std::vector<Complex> n_soliton_profile(const SolitonParams& params,
                                       const std::vector<double>& xs, double t,
                                       const Tolerances& tol) {
    std::vector<Complex> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = n_soliton(params, xs[i], t, tol);
    return out;
}

SampledPotential sample_n_soliton(const SolitonParams& params, double x_min, double x_max,
                                  int n, double t, const Tolerances& tol) {
    SampledPotential pot;
    pot.x_min = x_min;
    pot.x_max = x_max;
    pot.samples.resize(n);
    for (int i = 0; i < n; ++i) pot.samples[i] = n_soliton(params, pot.x(i), t, tol);
    return pot;
}

} // namespace nlsist
