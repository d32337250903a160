#include "nlsist/recipes.hpp"

#include <cmath>
#include <random>

#include "nlsist/errors.hpp"

namespace nlsist {

PerturbationShape perturbation_shape_from_string(const std::string& s) {
    if (s == "gaussian") return PerturbationShape::Gaussian;
    if (s == "sech-bump") return PerturbationShape::SechBump;
    if (s == "phase-noise") return PerturbationShape::PhaseNoise;
    throw ValidationError("invalid-config", "unknown perturbation shape: " + s);
}

SampledPotential apply_perturbation(const SampledPotential& pot, PerturbationShape shape,
                                    double eps, double center, double width,
                                    std::uint64_t seed) {
    if (!(width > 0.0))
        throw ValidationError("invalid-config", "perturbation width must be positive");
    SampledPotential out = pot;
    const int n = pot.n_points();
    switch (shape) {
        case PerturbationShape::Gaussian:
            for (int i = 0; i < n; ++i) {
                const double s = (pot.x(i) - center) / width;
                out.samples[i] += eps * std::exp(-s * s);
            }
            break;
        case PerturbationShape::SechBump:
            for (int i = 0; i < n; ++i)
                out.samples[i] += eps / std::cosh((pot.x(i) - center) / width);
            break;
        case PerturbationShape::PhaseNoise: {
            // smooth deterministic phase: a few random low-frequency cosines,
            // windowed so the tails stay untouched
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> freq(0.2, 1.2), ph(0.0, 2.0 * M_PI);
            double f[4], p[4];
            for (int m = 0; m < 4; ++m) {
                f[m] = freq(rng);
                p[m] = ph(rng);
            }
            for (int i = 0; i < n; ++i) {
                const double s = (pot.x(i) - center) / (4.0 * width);
                double eta = 0.0;
                for (int m = 0; m < 4; ++m) eta += 0.25 * std::cos(f[m] * pot.x(i) + p[m]);
                eta *= std::exp(-s * s);
                out.samples[i] *= std::exp(Complex{0.0, eps * eta});
            }
            break;
        }
    }
    return out;
}

} // namespace nlsist
