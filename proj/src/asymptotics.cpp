#include "nlsist/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "nlsist/errors.hpp"
#include "nlsist/soliton.hpp"

namespace nlsist {

namespace {
constexpr Complex I{0.0, 1.0};
}

Complex phase(Complex z, double x, double t) { return 2.0 * I * x * z + 4.0 * I * z * z * t; }

PhaseFrame classify(const std::vector<Complex>& poles, double x, double t) {
    if (t == 0.0)
        throw ValidationError("domain", "pole classification needs t != 0");
    PhaseFrame f;
    f.x = x;
    f.t = t;
    f.xi = -x / (4.0 * t);
    const double window = 1.0 / std::sqrt(std::abs(t));
    for (int k = 0; k < static_cast<int>(poles.size()); ++k) {
        if (poles[k].real() < f.xi)
            f.growing.push_back(k);
        else
            f.decaying.push_back(k);
        if (std::abs(poles[k].real() - f.xi) <= window) f.near_ray.push_back(k);
    }
    // near-ray members must share one real part; otherwise the 1/sqrt(t)
    // window has not yet separated the pole groups
    for (std::size_t i = 1; i < f.near_ray.size(); ++i)
        if (std::abs(poles[f.near_ray[i]].real() - poles[f.near_ray[0]].real()) > 1e-12)
            f.ambiguous = true;
    return f;
}

Complex blaschke_T(Complex z, const std::vector<int>& growing,
                   const std::vector<Complex>& poles) {
    Complex t{1.0, 0.0};
    for (int k : growing) {
        const Complex denom = z - std::conj(poles[k]);
        if (!(std::abs(denom) > 0.0))
            throw ValidationError("pole-of-T", "Blaschke product evaluated at a conjugate pole");
        t *= (z - poles[k]) / denom;
    }
    return t;
}

Complex blaschke_T(Complex z, const PhaseFrame& frame, const std::vector<Complex>& poles) {
    return blaschke_T(z, frame.growing, poles);
}

Complex blaschke_T_prime(int k, const std::vector<int>& growing,
                         const std::vector<Complex>& poles) {
    const Complex zk = poles[k];
    Complex t = 1.0 / (zk - std::conj(zk));
    for (int j : growing) {
        if (j == k) continue;
        t *= (zk - poles[j]) / (zk - std::conj(poles[j]));
    }
    return t;
}

ReflectionInterpolant::ReflectionInterpolant(const std::vector<double>& grid,
                                             const std::vector<Complex>& r) {
    if (grid.size() != r.size() || grid.size() < 3)
        throw ValidationError("invalid-grid", "reflection interpolant needs >= 3 nodes");
    grid_ = grid;
    lo_ = grid.front();
    hi_ = grid.back();
    f_.resize(grid.size());
    std::vector<double> re(grid.size()), im(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        f_[i] = std::log1p(std::norm(r[i]));
        re[i] = r[i].real();
        im[i] = r[i].imag();
        if (f_[i] != 0.0) zero_ = false;
    }
    log1p_ = CubicSpline(grid_, f_);
    re_ = CubicSpline(grid_, re);
    im_ = CubicSpline(grid_, im);
}

double ReflectionInterpolant::log1p_abs2(double y) const {
    if (zero_ || y < lo_ || y > hi_) return 0.0;
    return std::max(0.0, log1p_(y));
}

Complex ReflectionInterpolant::r_at(double y) const {
    if (zero_ || y < lo_ || y > hi_) return {0.0, 0.0};
    return {re_(y), im_(y)};
}

double ReflectionInterpolant::edge_magnitude() const {
    if (zero_) return 0.0;
    return std::max(std::abs(f_.front()), std::abs(f_.back()));
}

double ReflectionInterpolant::support_min(double cut) const {
    if (zero_) return 0.0;
    for (std::size_t i = 0; i < f_.size(); ++i)
        if (std::abs(f_[i]) > cut) return grid_[i == 0 ? 0 : i - 1];
    return hi_;
}

double ReflectionInterpolant::support_max(double cut) const {
    if (zero_) return 0.0;
    for (std::size_t i = f_.size(); i-- > 0;)
        if (std::abs(f_[i]) > cut) return grid_[std::min(i + 1, f_.size() - 1)];
    return lo_;
}

double ReflectionInterpolant::l2_norm_sq() const {
    if (zero_) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double fa = std::expm1(f_[i]);     // |r|^2 at node i
        const double fb = std::expm1(f_[i + 1]);
        s += 0.5 * (fa + fb) * (grid_[i + 1] - grid_[i]);
    }
    return s;
}

namespace {

// int_{a}^{b} log(1+|r(y)|^2) / (y - z) dy by adaptive quadrature, split at
// the projection of z onto the interval (integrand is peaked there when z
// sits close to the line).
Complex log_kernel_integral(const ReflectionInterpolant& r, double a, double b, Complex z,
                            double quad_tol) {
    if (a >= b || r.zero()) return {0.0, 0.0};
    const auto f = [&](double y) { return Complex{r.log1p_abs2(y), 0.0} / (y - z); };
    const double p = std::clamp(z.real(), a, b);
    Complex s{0.0, 0.0};
    if (p > a + 1e-14) s += adaptive_simpson(f, a, p, quad_tol);
    if (b > p + 1e-14) s += adaptive_simpson(f, p, b, quad_tol);
    return s;
}

} // namespace

Complex delta_function(Complex z, double xi, const ReflectionInterpolant& r,
                       const Tolerances& tol) {
    if (r.zero()) return {1.0, 0.0};
    // distance from the branch ray (-inf, xi]
    const double dist = z.real() <= xi ? std::abs(z.imag()) : std::abs(z - Complex{xi, 0.0});
    if (dist < tol.ray_tol)
        throw ValidationError("ray-proximity", "delta evaluated on the integration ray");
    const double lo = std::min(r.support_min(), xi);
    const Complex integral = log_kernel_integral(r, lo, xi, z, tol.quad_tol);
    return std::exp(integral / (2.0 * M_PI * I));
}

double nu0(double xi, const ReflectionInterpolant& r) {
    return -std::log1p(std::norm(r.r_at(xi))) / (2.0 * M_PI);
}

AsymptoticCouplings lambda_factors(const std::vector<Complex>& poles,
                                   const std::vector<Complex>& couplings,
                                   const ReflectionInterpolant& r, const Tolerances& tol) {
    if (poles.size() != couplings.size())
        throw ValidationError("invalid-coupling", "pole/coupling count mismatch");
    AsymptoticCouplings ac;
    ac.r_l2_sq = r.l2_norm_sq();
    if (!r.zero() && r.edge_magnitude() > tol.lambda_tail_tol)
        throw NumericalError("tail-truncation",
                             "log(1+|r|^2) not negligible at the reflection grid edges");
    const double lo = r.support_min();
    const double hi = r.support_max();
    for (std::size_t j = 0; j < poles.size(); ++j) {
        const Complex zj = poles[j];
        Complex lp{1.0, 0.0}, lm{1.0, 0.0};
        if (!r.zero()) {
            const Complex ip = log_kernel_integral(r, std::min(lo, zj.real()), zj.real(), zj,
                                                   tol.quad_tol);
            const Complex im = log_kernel_integral(r, zj.real(), std::max(hi, zj.real()), zj,
                                                   tol.quad_tol);
            lp = std::exp(-ip / (2.0 * M_PI * I));
            lm = std::exp(-im / (2.0 * M_PI * I));
        }
        ac.lambdas_plus.push_back(lp);
        ac.lambdas_minus.push_back(lm);
        ac.c_plus.push_back(couplings[j] * lp * lp);
        ac.c_minus.push_back(couplings[j] * lm * lm);
        ac.smallness_ratio.push_back(ac.r_l2_sq > 0.0 ? std::abs(1.0 - lp) / ac.r_l2_sq : 0.0);
    }
    return ac;
}

Complex asymptotic_soliton(const ScatteringData& sd, Sign sign, double x, double t,
                           const Tolerances& tol) {
    sd.validate(tol.pole_sep_tol);
    ReflectionInterpolant ri(sd.r_grid, sd.r_values);
    const AsymptoticCouplings ac = lambda_factors(sd.poles, sd.couplings, ri, tol);
    SolitonParams p;
    p.poles = sd.poles;
    p.couplings = sign == Sign::Plus ? ac.c_plus : ac.c_minus;
    return n_soliton(p, x, t, tol);
}

std::vector<Complex> asymptotic_soliton_profile(const ScatteringData& sd, Sign sign,
                                                const std::vector<double>& xs, double t,
                                                const Tolerances& tol) {
    sd.validate(tol.pole_sep_tol);
    ReflectionInterpolant ri(sd.r_grid, sd.r_values);
    const AsymptoticCouplings ac = lambda_factors(sd.poles, sd.couplings, ri, tol);
    SolitonParams p;
    p.poles = sd.poles;
    p.couplings = sign == Sign::Plus ? ac.c_plus : ac.c_minus;
    std::vector<Complex> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = n_soliton(p, xs[i], t, tol);
    return out;
}

} // namespace nlsist
