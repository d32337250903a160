#include "nlsist/zs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nlsist/errors.hpp"

namespace nlsist {

namespace {

constexpr Complex I{0.0, 1.0};

// Gauss-Legendre nodes of the 4th-order Magnus step, relative to the cell.
constexpr double kGaussC1 = 0.5 - 0.28867513459481288225; // 1/2 - sqrt(3)/6
constexpr double kGaussC2 = 0.5 + 0.28867513459481288225;

std::array<double, 4> lagrange_weights(double tau) {
    std::array<double, 4> w{};
    for (int m = 0; m < 4; ++m) {
        double p = 1.0;
        for (int l = 0; l < 4; ++l)
            if (l != m) p *= (tau - l) / (m - l);
        w[m] = p;
    }
    return w;
}

// Transfer-matrix sweep machinery for one potential. Precomputes the
// potential values at the two Gauss nodes of every cell (z-independent), so
// repeated evaluations at many z reuse the interpolation.
class JostIntegrator {
public:
    explicit JostIntegrator(const SampledPotential& pot) : pot_(pot), n_(pot.n_points()) {
        const int cells = n_ - 1;
        u1_.resize(cells);
        u2_.resize(cells);
        for (int j = 0; j < cells; ++j) {
            // 4-point stencil around the cell, clamped at the window edges
            int s = std::clamp(j - 1, 0, n_ - 4);
            const double base = j - s; // cell start in stencil coordinates
            const auto w1 = lagrange_weights(base + kGaussC1);
            const auto w2 = lagrange_weights(base + kGaussC2);
            Complex a{0.0, 0.0}, b{0.0, 0.0};
            for (int m = 0; m < 4; ++m) {
                a += w1[m] * pot.samples[s + m];
                b += w2[m] * pot.samples[s + m];
            }
            u1_[j] = a;
            u2_[j] = b;
        }
    }

    void check_z(Complex z) const {
        if (z.imag() < 0.0)
            throw ValidationError("domain",
                                  "Jost solutions require Im z >= 0 for this solution pair");
        if (std::abs(z) * pot_.dx() > 0.7)
            throw NumericalError("accuracy",
                                 "|z| too large for the potential grid resolution");
    }

    // One-cell propagator exp(Omega_j) for psi' = P psi,
    // P = [[-iz, u], [-conj(u), iz]].
    Mat2 cell_exp(int j, Complex z, bool inverse) const {
        const double h = pot_.dx();
        const Complex ua = u1_[j], ub = u2_[j];
        // (h/2)(P1 + P2)
        Mat2 s{-I * z * h, 0.5 * h * (ua + ub), -0.5 * h * std::conj(ua + ub), I * z * h};
        // commutator [P2, P1]; the -iz sigma3 parts cancel in the diagonal of
        // each factor but not in the cross terms
        const Mat2 p1{-I * z, ua, -std::conj(ua), I * z};
        const Mat2 p2{-I * z, ub, -std::conj(ub), I * z};
        const Mat2 c = commutator(p2, p1);
        const double k = std::sqrt(3.0) / 12.0 * h * h;
        Mat2 omega = s + c * Complex{k, 0.0};
        if (inverse) omega = omega * Complex{-1.0, 0.0};
        return exp_traceless(omega);
    }

    // w(x) = psi1_minus(x) e^{+izx}; w(x_min) = e1; forward sweep.
    std::vector<Vec2> sweep_w_minus(Complex z) const {
        check_z(z);
        std::vector<Vec2> w(n_);
        w[0] = {1.0, 0.0};
        const Complex g = std::exp(I * z * pot_.dx()); // |g| <= 1 for Im z >= 0
        for (int j = 0; j + 1 < n_; ++j) {
            Vec2 v = cell_exp(j, z, false) * w[j];
            w[j + 1] = {g * v.a, g * v.b};
        }
        return w;
    }

    // v(x) = psi2_plus(x) e^{-izx}; v(x_max) = e2; backward sweep.
    std::vector<Vec2> sweep_v_plus(Complex z) const {
        check_z(z);
        std::vector<Vec2> v(n_);
        v[n_ - 1] = {0.0, 1.0};
        const Complex g = std::exp(I * z * pot_.dx());
        for (int j = n_ - 2; j >= 0; --j) {
            Vec2 t = cell_exp(j, z, true) * v[j + 1];
            v[j] = {g * t.a, g * t.b};
        }
        return v;
    }

    // w(x) = psi1_plus(x) e^{+izx}; w(x_max) = e1; backward sweep (real z).
    std::vector<Vec2> sweep_w_plus(Complex z) const {
        check_z(z);
        std::vector<Vec2> w(n_);
        w[n_ - 1] = {1.0, 0.0};
        const Complex g = std::exp(-I * z * pot_.dx());
        for (int j = n_ - 2; j >= 0; --j) {
            Vec2 t = cell_exp(j, z, true) * w[j + 1];
            w[j] = {g * t.a, g * t.b};
        }
        return w;
    }

    // a(z) = det[psi1_minus | psi2_plus]; at x_max the second column is e2, so
    // the determinant is the first gauge component of the forward sweep.
    Complex a(Complex z) const {
        check_z(z);
        Vec2 w{1.0, 0.0};
        const Complex g = std::exp(I * z * pot_.dx());
        for (int j = 0; j + 1 < n_; ++j) {
            Vec2 v = cell_exp(j, z, false) * w;
            w = {g * v.a, g * v.b};
        }
        return w.a;
    }

    Complex a_prime(Complex z, double h) const {
        return (a(z + h) - a(z - h)) / (2.0 * h);
    }

private:
    const SampledPotential& pot_;
    int n_;
    std::vector<Complex> u1_, u2_;
};

// Trapezoid of a'/a over the rectangle boundary divided by 2*pi*i, refined by
// node doubling until it settles on an integer.
int winding_impl(const JostIntegrator& ji, const SearchBox& box, const Tolerances& tol) {
    const std::array<Complex, 4> corners = {
        Complex{box.re_min, box.im_min}, Complex{box.re_max, box.im_min},
        Complex{box.re_max, box.im_max}, Complex{box.re_min, box.im_max}};

    const auto integrate = [&](int per_edge) {
        Complex total{0.0, 0.0};
        double min_abs_a = 1e300;
        for (int e = 0; e < 4; ++e) {
            const Complex za = corners[e];
            const Complex zb = corners[(e + 1) % 4];
            const Complex dz = (zb - za) / static_cast<double>(per_edge);
            Complex prev = ji.a_prime(za, tol.h_deriv) / ji.a(za);
            for (int i = 1; i <= per_edge; ++i) {
                const Complex z = za + dz * static_cast<double>(i);
                const Complex av = ji.a(z);
                min_abs_a = std::min(min_abs_a, std::abs(av));
                const Complex cur = ji.a_prime(z, tol.h_deriv) / av;
                total += 0.5 * (prev + cur) * dz;
                prev = cur;
            }
        }
        if (min_abs_a < 1e3 * tol.root_tol)
            throw NumericalError("boundary", "a(z) nearly vanishes on the search boundary");
        return total / (2.0 * M_PI * I);
    };

    int per_edge = 48;
    Complex w_prev = integrate(per_edge);
    for (int pass = 0; pass < 5; ++pass) {
        per_edge *= 2;
        const Complex w_cur = integrate(per_edge);
        const double r = std::round(w_cur.real());
        if (std::abs(w_cur - w_prev) < 0.1 && std::abs(w_cur.real() - r) < 0.2 &&
            std::abs(w_cur.imag()) < 0.2)
            return static_cast<int>(r);
        w_prev = w_cur;
    }
    throw NumericalError("winding", "winding integral did not stabilize on an integer");
}

Complex newton_root(const JostIntegrator& ji, const SearchBox& box, Complex seed,
                    const Tolerances& tol) {
    const double diam = std::hypot(box.width(), box.height());
    Complex z = seed;
    for (int it = 0; it < 60; ++it) {
        const Complex av = ji.a(z);
        if (std::abs(av) <= tol.root_tol) return z;
        const Complex dv = ji.a_prime(z, tol.h_deriv);
        if (!(std::abs(dv) > 0.0)) break;
        Complex step = av / dv;
        const double cap = 0.5 * diam;
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        z -= step;
        if (!box.contains(z, -0.5 * diam)) break; // wandered far outside
        if (z.imag() <= 0.0) break;
    }
    return {0.0, -1.0}; // sentinel: failed
}

void collect_zeros(const JostIntegrator& ji, const SearchBox& box, int count,
                   std::vector<Complex>& out, const Tolerances& tol, int depth) {
    if (count == 0) return;
    if (count == 1) {
        // seeds: center first, then a coarse grid
        std::vector<Complex> seeds;
        seeds.emplace_back(0.5 * (box.re_min + box.re_max), 0.5 * (box.im_min + box.im_max));
        for (int a = 1; a <= 3; ++a)
            for (int b = 1; b <= 3; ++b)
                seeds.emplace_back(box.re_min + 0.25 * a * box.width(),
                                   box.im_min + 0.25 * b * box.height());
        for (const Complex& s : seeds) {
            const Complex z = newton_root(ji, box, s, tol);
            if (z.imag() > 0.0 && box.contains(z, -1e-9)) {
                out.push_back(z);
                return;
            }
        }
        throw NumericalError("newton", "Newton refinement failed to converge in a cell");
    }
    if (std::min(box.width(), box.height()) < std::max(tol.pole_sep_tol, 1e-4))
        throw NumericalError("pole-separation",
                             "could not isolate zeros; nearly coincident poles?");

    // split into four children; jitter the cut to avoid slicing through a zero
    for (int attempt = 0; attempt < 3; ++attempt) {
        const double f = 0.5 + 0.017 * (attempt + (depth % 3) - 1);
        const double cr = box.re_min + f * box.width();
        const double ci = box.im_min + f * box.height();
        const SearchBox kids[4] = {{box.re_min, cr, box.im_min, ci},
                                   {cr, box.re_max, box.im_min, ci},
                                   {box.re_min, cr, ci, box.im_max},
                                   {cr, box.re_max, ci, box.im_max}};
        int counts[4];
        int sum = 0;
        bool ok = true;
        try {
            for (int k = 0; k < 4; ++k) {
                counts[k] = winding_impl(ji, kids[k], tol);
                sum += counts[k];
            }
        } catch (const NumericalError&) {
            ok = false; // a zero sits on or near this cut; re-jitter
        }
        if (ok && sum == count) {
            for (int k = 0; k < 4; ++k) collect_zeros(ji, kids[k], counts[k], out, tol, depth + 1);
            return;
        }
    }
    throw NumericalError("count-mismatch",
                         "subdivision winding counts do not add up to the parent count");
}

} // namespace

Vec2 JostSolutions::psi1_minus(const SampledPotential& pot, int j) const {
    const Complex e = std::exp(-I * z * pot.x(j));
    return {w_minus[j].a * e, w_minus[j].b * e};
}

Vec2 JostSolutions::psi2_plus(const SampledPotential& pot, int j) const {
    const Complex e = std::exp(I * z * pot.x(j));
    return {v_plus[j].a * e, v_plus[j].b * e};
}

JostSolutions jost_solutions(const SampledPotential& pot, Complex z, const Tolerances& tol) {
    pot.validate(tol.tail_tol);
    JostIntegrator ji(pot);
    JostSolutions js;
    js.z = z;
    js.w_minus = ji.sweep_w_minus(z);
    js.v_plus = ji.sweep_v_plus(z);
    return js;
}

Complex transmission_a(const SampledPotential& pot, Complex z, const Tolerances& tol) {
    pot.validate(tol.tail_tol);
    return JostIntegrator(pot).a(z);
}

Complex transmission_a_at(const SampledPotential& pot, Complex z, int node,
                          const Tolerances& tol) {
    pot.validate(tol.tail_tol);
    if (node < 0 || node >= pot.n_points())
        throw ValidationError("invalid-grid", "node index out of range");
    JostIntegrator ji(pot);
    const auto w = ji.sweep_w_minus(z);
    const auto v = ji.sweep_v_plus(z);
    // det[psi1_minus | psi2_plus]: the gauge factors e^{-izx} e^{+izx} cancel
    return w[node].a * v[node].b - w[node].b * v[node].a;
}

Complex transmission_a_prime(const SampledPotential& pot, Complex z, const Tolerances& tol) {
    pot.validate(tol.tail_tol);
    return JostIntegrator(pot).a_prime(z, tol.h_deriv);
}

ReflectionResult reflection_coefficient(const SampledPotential& pot,
                                        const std::vector<double>& grid,
                                        const Tolerances& tol) {
    pot.validate(tol.tail_tol);
    JostIntegrator ji(pot);
    ReflectionResult res;
    res.r.resize(grid.size());
    res.a.resize(grid.size());
    res.b.resize(grid.size());
    const int mid = pot.n_points() / 2;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]))
            throw ValidationError("invalid-grid", "reflection grid must be finite");
        const Complex z{grid[i], 0.0};
        const auto wm = ji.sweep_w_minus(z);
        const auto wp = ji.sweep_w_plus(z);
        const Complex a = wm.back().a;
        // b = det[psi1_plus | psi1_minus] = e^{-2izx} det[w_plus | w_minus]
        const Complex det = wp[mid].a * wm[mid].b - wp[mid].b * wm[mid].a;
        const Complex b = det * std::exp(-2.0 * I * z * pot.x(mid));
        const double unit = std::abs(std::norm(a) + std::norm(b) - 1.0);
        if (unit > tol.unitarity_tol) {
            std::ostringstream os;
            os << "unitarity defect " << unit << " at z=" << grid[i];
            throw NumericalError("unitarity", os.str());
        }
        if (std::abs(a) < tol.a_floor) {
            std::ostringstream os;
            os << "|a(" << grid[i] << ")| = " << std::abs(a)
               << " below a_floor; spectral singularity";
            throw NumericalError("spectral-singularity", os.str());
        }
        res.a[i] = a;
        res.b[i] = b;
        res.r[i] = b / a;
    }
    return res;
}

int winding_number(const SampledPotential& pot, const SearchBox& box, const Tolerances& tol) {
    pot.validate(tol.tail_tol);
    if (!(box.im_min > 0.0))
        throw ValidationError("domain", "search box must lie strictly in the upper half-plane");
    JostIntegrator ji(pot);
    return winding_impl(ji, box, tol);
}

PoleSearchResult pole_search(const SampledPotential& pot, const SearchBox& box,
                             const Tolerances& tol) {
    pot.validate(tol.tail_tol);
    if (!(box.im_min > 0.0) || !(box.im_max > box.im_min) || !(box.re_max > box.re_min))
        throw ValidationError("domain", "search box must lie strictly in the upper half-plane");
    JostIntegrator ji(pot);
    const int total = winding_impl(ji, box, tol);

    std::vector<Complex> roots;
    collect_zeros(ji, box, total, roots, tol, 0);

    if (static_cast<int>(roots.size()) != total)
        throw NumericalError("count-mismatch",
                             "Newton refinement lost or merged roots relative to the winding count");
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) <= tol.pole_sep_tol)
                throw NumericalError("count-mismatch", "two refined roots coincide");
    for (const Complex& z : roots)
        if (!box.contains(z, tol.box_margin))
            throw NumericalError("boundary", "a zero lies within the margin of the box edge");

    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    PoleSearchResult out;
    for (const Complex& z : roots) {
        const Complex ap = ji.a_prime(z, tol.h_deriv);
        if (std::abs(ap) <= tol.deriv_floor)
            throw NumericalError("derivative-floor",
                                 "|a'(z_k)| at or below deriv_floor; zero not simple?");
        out.poles.push_back(z);
        out.a_primes.push_back(ap);
    }
    return out;
}

std::vector<Complex> norming_constants(const SampledPotential& pot,
                                       const std::vector<Complex>& poles,
                                       const std::vector<Complex>& a_primes,
                                       const Tolerances& tol) {
    pot.validate(tol.tail_tol);
    if (poles.size() != a_primes.size())
        throw ValidationError("invalid-pole", "pole/a' count mismatch");
    JostIntegrator ji(pot);
    const int n = pot.n_points();

    std::vector<Complex> cs;
    cs.reserve(poles.size());
    for (std::size_t k = 0; k < poles.size(); ++k) {
        const Complex z = poles[k];
        if (2.0 * z.imag() * std::max(std::abs(pot.x_min), std::abs(pot.x_max)) > 650.0)
            throw NumericalError("accuracy", "window too wide for this pole's decay rate");

        const auto w = ji.sweep_w_minus(z);
        const auto v = ji.sweep_v_plus(z);

        // q_j = psi2_plus e^{+izx_j} = v_j e^{2 i z x_j}; at the bound state
        // w_j = gamma * q_j for all x.
        std::vector<Vec2> q(n);
        for (int j = 0; j < n; ++j) {
            const Complex e = std::exp(2.0 * I * z * pot.x(j));
            q[j] = {v[j].a * e, v[j].b * e};
        }

        // Per-node ratios. Near the window edges the pair is polluted by the
        // companion-solution admixture, which scales like |a(z)| e^{2 Im z |x|}
        // since a vanishes only to root_tol. The ratio is therefore anchored
        // at the field peak (where both solutions are healthiest) and the fit
        // band grows outward while the per-node ratios stay consistent.
        const int lo = n / 20, hi = n - n / 20;
        std::vector<Complex> ratio(n);
        std::vector<bool> usable(n, false);
        int anchor = -1;
        double peak = -1.0;
        for (int j = lo; j < hi; ++j) {
            // absolute floor only: the gauge magnitudes span e^{+-2 Im z |x|},
            // so a max-relative floor would cut the healthy middle band
            const double qa = std::hypot(std::abs(q[j].a), std::abs(q[j].b));
            const double wa = std::hypot(std::abs(w[j].a), std::abs(w[j].b));
            if (qa < 1e-140 || wa < 1e-140) continue;
            const double den = std::norm(q[j].a) + std::norm(q[j].b);
            ratio[j] = (std::conj(q[j].a) * w[j].a + std::conj(q[j].b) * w[j].b) / den;
            if (!std::isfinite(ratio[j].real()) || !std::isfinite(ratio[j].imag())) continue;
            usable[j] = true;
            if (std::abs(pot.samples[j]) > peak) {
                peak = std::abs(pot.samples[j]);
                anchor = j;
            }
        }
        if (anchor < 0)
            throw NumericalError("dependence", "no usable nodes for the bound-state ratio");

        int jl = anchor, jr = anchor;
        Complex gamma = ratio[anchor];
        for (int pass = 0; pass < 2; ++pass) {
            const double band = tol.gamma_tol * std::abs(gamma);
            jl = jr = anchor;
            while (jl - 1 >= lo && usable[jl - 1] && std::abs(ratio[jl - 1] - gamma) <= band)
                --jl;
            while (jr + 1 < hi && usable[jr + 1] && std::abs(ratio[jr + 1] - gamma) <= band)
                ++jr;
            Complex num{0.0, 0.0};
            double den = 0.0;
            for (int j = jl; j <= jr; ++j) {
                num += std::conj(q[j].a) * w[j].a + std::conj(q[j].b) * w[j].b;
                den += std::norm(q[j].a) + std::norm(q[j].b);
            }
            gamma = num / den;
        }
        if (jr - jl + 1 < 16) {
            std::ostringstream os;
            os << "Jost vectors parallel only on " << (jr - jl + 1)
               << " nodes; pole inaccurate?";
            throw NumericalError("dependence", os.str());
        }
        double dev = 0.0;
        for (int j = jl; j <= jr; ++j)
            dev = std::max(dev, std::abs(ratio[j] - gamma) / std::abs(gamma));
        if (dev > tol.gamma_tol) {
            std::ostringstream os;
            os << "Jost vectors not parallel at the reported pole (deviation " << dev
               << "); pole inaccurate?";
            throw NumericalError("dependence", os.str());
        }
        cs.push_back(gamma / a_primes[k]);
    }
    return cs;
}

ScatteringData scatter(const SampledPotential& pot, const std::vector<double>& grid,
                       const SearchBox& box, const Tolerances& tol) {
    ScatteringData sd;
    sd.r_grid = grid;
    ReflectionResult rr = reflection_coefficient(pot, grid, tol);
    sd.r_values = std::move(rr.r);
    PoleSearchResult pr = pole_search(pot, box, tol);
    sd.poles = std::move(pr.poles);
    sd.a_prime_at_poles = std::move(pr.a_primes);
    sd.couplings = norming_constants(pot, sd.poles, sd.a_prime_at_poles, tol);
    sd.validate(tol.pole_sep_tol);
    return sd;
}

ScatteringData evolve_scattering(const ScatteringData& sd, double t) {
    sd.validate();
    ScatteringData out = sd;
    for (std::size_t i = 0; i < out.r_values.size(); ++i) {
        const double z = out.r_grid[i];
        out.r_values[i] *= std::exp(4.0 * I * z * z * t);
    }
    for (std::size_t k = 0; k < out.poles.size(); ++k)
        out.couplings[k] *= std::exp(4.0 * I * out.poles[k] * out.poles[k] * t);
    return out;
}

ScatteringData conjugate_reflect(const ScatteringData& sd) {
    sd.validate();
    ScatteringData out;
    const std::size_t m = sd.r_grid.size();
    out.r_grid.resize(m);
    out.r_values.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        out.r_grid[i] = -sd.r_grid[m - 1 - i];
        out.r_values[i] = std::conj(sd.r_values[m - 1 - i]);
    }
    for (std::size_t k = 0; k < sd.poles.size(); ++k) {
        out.poles.push_back(-std::conj(sd.poles[k]));
        out.couplings.push_back(-std::conj(sd.couplings[k]));
        out.a_prime_at_poles.push_back(-std::conj(sd.a_prime_at_poles[k]));
    }
    return out;
}

} // namespace nlsist
