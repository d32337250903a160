#include "nlsist/smallnorm.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "nlsist/errors.hpp"

namespace nlsist {

namespace {
constexpr Complex I{0.0, 1.0};
}

Complex ContourSystem::node(int ci, int l) const {
    const double th = 2.0 * M_PI * l / nodes_per_circle;
    return circles[ci].center + circles[ci].radius * std::exp(I * th);
}

Complex ContourSystem::weight(int ci, int l) const {
    const double th = 2.0 * M_PI * l / nodes_per_circle;
    return 2.0 * M_PI / nodes_per_circle * I * circles[ci].radius * std::exp(I * th);
}

std::pair<ContourSystem, JumpData> build_jump(const SolitonParams& params,
                                              const PhaseFrame& frame, double t,
                                              const Tolerances& tol) {
    params.validate(tol.pole_sep_tol);
    if (!(t > 0.0))
        throw ValidationError("domain", "circle contours are defined for t > 0");
    const double radius = 1.0 / std::sqrt(t);

    ContourSystem cs;
    cs.nodes_per_circle = tol.nodes_per_circle;
    std::vector<int> owner;   // pole index per circle
    std::vector<bool> is_conj;
    const auto near = [&](int k) {
        for (int q : frame.near_ray)
            if (q == k) return true;
        return false;
    };
    const auto grows = [&](int k) {
        for (int q : frame.growing)
            if (q == k) return true;
        return false;
    };
    for (int k = 0; k < params.order(); ++k) {
        if (near(k)) continue;
        cs.circles.push_back({params.poles[k], radius});
        owner.push_back(k);
        is_conj.push_back(false);
        cs.circles.push_back({std::conj(params.poles[k]), radius});
        owner.push_back(k);
        is_conj.push_back(true);
    }
    for (std::size_t i = 0; i < cs.circles.size(); ++i) {
        if (cs.circles[i].radius >= std::abs(cs.circles[i].center.imag()))
            throw NumericalError("circle-overlap", "circle touches the real axis; t too small");
        for (std::size_t j = i + 1; j < cs.circles.size(); ++j)
            if (std::abs(cs.circles[i].center - cs.circles[j].center) <=
                cs.circles[i].radius + cs.circles[j].radius)
                throw NumericalError("circle-overlap", "contour circles intersect; t too small");
    }

    JumpData jd;
    jd.V.resize(cs.total_nodes(), Mat2::identity());
    for (std::size_t ci = 0; ci < cs.circles.size(); ++ci) {
        const int k = owner[ci];
        const Complex zk = params.poles[k];
        const Complex ck = params.couplings[k];
        const Complex phik = phase(zk, frame.x, t);
        // |e^{phi_k}| >= 1 on the growing side, <= 1 on the decaying side;
        // keep only the bounded factor in each branch
        const Complex inv_g = std::exp(-phik - std::log(ck)); // 1/(c_k e^{phi_k})
        const Complex g = std::exp(phik + std::log(ck));      // c_k e^{phi_k}
        for (int l = 0; l < cs.nodes_per_circle; ++l) {
            const Complex zeta = cs.node(static_cast<int>(ci), l);
            const Complex T = blaschke_T(zeta, frame.growing, params.poles);
            // Convention: V relates the boundary values as (inside) =
            // (outside) V, which is what the minus-side collocation
            // representation encodes. That is the inverse of the outward
            // table, hence the leading minus signs on the first two cases.
            Mat2 V = Mat2::identity();
            if (!is_conj[ci]) {
                if (grows(k))
                    V.m12 = -(zeta - zk) * inv_g / (T * T);
                else
                    V.m21 = -g * T * T / (zeta - zk);
            } else {
                if (grows(k))
                    V.m21 = (zeta - std::conj(zk)) * T * T * std::conj(inv_g);
                else
                    V.m12 = std::conj(g) / ((zeta - std::conj(zk)) * T * T);
            }
            jd.V[ci * cs.nodes_per_circle + l] = V;
        }
    }
    return {std::move(cs), std::move(jd)};
}

ResidueProblem near_ray_problem(const SolitonParams& params, const PhaseFrame& frame,
                                double x, double t, const Tolerances& tol) {
    params.validate(tol.pole_sep_tol);
    std::vector<ResiduePole> rp;
    for (int k : frame.near_ray) {
        bool growing = false;
        for (int q : frame.growing) growing |= (q == k);
        if (growing) {
            const Complex tp = blaschke_T_prime(k, frame.growing, params.poles);
            rp.push_back({params.poles[k], 1.0 / (params.couplings[k] * tp * tp),
                          ResidueKind::Upper});
        } else {
            const Complex tv = blaschke_T(params.poles[k], frame.growing, params.poles);
            rp.push_back({params.poles[k], params.couplings[k] * tv * tv, ResidueKind::Lower});
        }
    }
    return ResidueProblem(std::move(rp), x, t, tol);
}

JumpData conjugate_jump(const ContourSystem& cs, const JumpData& jd,
                        const ResidueProblem& m2) {
    JumpData out = jd;
    for (int ci = 0; ci < static_cast<int>(cs.circles.size()); ++ci) {
        for (int l = 0; l < cs.nodes_per_circle; ++l) {
            const int idx = ci * cs.nodes_per_circle + l;
            const Mat2 m = m2.m_at(cs.node(ci, l));
            out.V[idx] = m * jd.V[idx] * m.inverse();
        }
    }
    return out;
}

SmallNormSolution solve_small_norm(const ContourSystem& cs, const JumpData& jd,
                                   const Tolerances& tol) {
    SmallNormSolution sol;
    const int M = cs.nodes_per_circle;
    const int nc = static_cast<int>(cs.circles.size());
    const int total = nc * M;
    sol.nodes = total;
    sol.C1 = Mat2::zero();
    if (total == 0) {
        sol.mu.clear();
        return sol;
    }
    if (static_cast<int>(jd.V.size()) != total)
        throw ValidationError("invalid-grid", "jump data does not match the contour nodes");

    sol.v_minus_one_per_circle.assign(nc, 0.0);
    for (int l = 0; l < total; ++l) {
        const double d = (jd.V[l] - Mat2::identity()).norm_inf();
        sol.v_minus_one_inf = std::max(sol.v_minus_one_inf, d);
        sol.v_minus_one_per_circle[l / M] = std::max(sol.v_minus_one_per_circle[l / M], d);
    }

    // Same-circle block of the discrete minus-side Cauchy projection: negative
    // Fourier modes flip sign, the others vanish.
    Eigen::MatrixXcd pminus(M, M);
    for (int j = 0; j < M; ++j)
        for (int l = 0; l < M; ++l) {
            Complex s{0.0, 0.0};
            for (int m = 1; m <= M / 2; ++m)
                s += std::exp(-I * (2.0 * M_PI * m * (j - l) / M));
            pminus(j, l) = -s / static_cast<double>(M);
        }

    Eigen::MatrixXcd K(total, total);
    for (int j = 0; j < total; ++j) {
        const int cj = j / M;
        const Complex xj = cs.node(cj, j % M);
        for (int l = 0; l < total; ++l) {
            const int cl = l / M;
            if (cl == cj) {
                K(j, l) = pminus(j % M, l % M);
            } else {
                const Complex zl = cs.node(cl, l % M);
                const double rho = cs.circles[cl].radius;
                const double th = 2.0 * M_PI * (l % M) / M;
                K(j, l) = rho * std::exp(I * th) / (static_cast<double>(M) * (zl - xj));
            }
        }
    }
    sol.kappa = K.cwiseAbs().rowwise().sum().maxCoeff();
    sol.contraction = sol.kappa * sol.v_minus_one_inf;
    if (sol.contraction >= 0.5) {
        std::ostringstream os;
        os << "collocation operator not contracting (estimate " << sol.contraction << ")";
        throw NumericalError("non-contraction", os.str());
    }

    // (1 - C_V) mu = 1 with C_V f = C^-(f (V-1)); two right-hand sides, one per
    // matrix row of mu.
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2 * total, 2 * total);
    for (int j = 0; j < total; ++j)
        for (int beta = 0; beta < 2; ++beta)
            for (int l = 0; l < total; ++l) {
                const Mat2 W = jd.V[l] - Mat2::identity();
                const Complex w0 = beta == 0 ? W.m11 : W.m12; // (V-1)[0][beta]
                const Complex w1 = beta == 0 ? W.m21 : W.m22; // (V-1)[1][beta]
                A(2 * j + beta, 2 * l + 0) -= K(j, l) * w0;
                A(2 * j + beta, 2 * l + 1) -= K(j, l) * w1;
            }
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(2 * total, 2);
    for (int j = 0; j < total; ++j) {
        B(2 * j + 0, 0) = 1.0;
        B(2 * j + 1, 1) = 1.0;
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const Eigen::MatrixXcd X = lu.solve(B);
    const double scale = X.cwiseAbs().maxCoeff() + 1.0;
    sol.residual = (A * X - B).cwiseAbs().maxCoeff() / scale;
    if (!std::isfinite(sol.residual) || sol.residual > tol.linsys_tol)
        throw NumericalError("singular-system", "collocation solve failed its residual check");

    sol.mu.resize(total);
    for (int l = 0; l < total; ++l) {
        sol.mu[l] = {X(2 * l + 0, 0), X(2 * l + 1, 0), X(2 * l + 0, 1), X(2 * l + 1, 1)};
    }

    Mat2 c1 = Mat2::zero();
    for (int l = 0; l < total; ++l) {
        const int cl = l / M;
        const double rho = cs.circles[cl].radius;
        const double th = 2.0 * M_PI * (l % M) / M;
        const Complex w = rho * std::exp(I * th) / static_cast<double>(M);
        c1 = c1 + (sol.mu[l] * (jd.V[l] - Mat2::identity())) * (-w);
    }
    sol.C1 = c1;
    sol.c1_norm = c1.norm_inf();
    return sol;
}

Decomposition decompose_reflectionless(const SolitonParams& params, double x, double t,
                                       const Tolerances& tol, bool check_resolution) {
    const PhaseFrame frame = classify(params.poles, x, t);
    if (frame.ambiguous)
        throw NumericalError("ambiguous-frame",
                             "near-ray poles with distinct real parts; t not asymptotic");

    Decomposition d;
    ResidueProblem m2 = near_ray_problem(params, frame, x, t, tol);
    d.u_near_ray = m2.u();

    auto [cs, jd] = build_jump(params, frame, t, tol);
    if (cs.circles.empty()) {
        d.u_total = d.u_near_ray;
        d.C1 = Mat2::zero();
        return d;
    }
    if (m2.order() > 0) jd = conjugate_jump(cs, jd, m2);

    const SmallNormSolution sn = solve_small_norm(cs, jd, tol);
    d.C1 = sn.C1;
    d.c1_norm = sn.c1_norm;
    d.v_minus_one_inf = sn.v_minus_one_inf;
    d.contraction = sn.contraction;
    d.kappa = sn.kappa;
    d.nodes = sn.nodes;
    d.u_total = d.u_near_ray + 2.0 * I * sn.C1.m12;

    if (check_resolution) {
        Tolerances t2 = tol;
        t2.nodes_per_circle = 2 * tol.nodes_per_circle;
        auto [cs2, jd2] = build_jump(params, frame, t, t2);
        if (m2.order() > 0) jd2 = conjugate_jump(cs2, jd2, m2);
        const SmallNormSolution sn2 = solve_small_norm(cs2, jd2, t2);
        d.c1_doubling_shift = (sn2.C1 - sn.C1).norm_inf();
        if (d.c1_doubling_shift > tol.c1_tol)
            throw NumericalError("resolution",
                                 "C1 changed by more than c1_tol under node doubling");
    }
    return d;
}

} // namespace nlsist
