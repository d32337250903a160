#pragma once

#include <cstdint>
#include <string>

#include "nlsist/types.hpp"

namespace nlsist {

// Named perturbation shapes for stability experiments. The perturbation is
// additive for gaussian / sech-bump and multiplicative for phase-noise
// (u -> u e^{i eps eta(x)} with a smooth deterministic eta built from the
// seed).
enum class PerturbationShape { Gaussian, SechBump, PhaseNoise };

PerturbationShape perturbation_shape_from_string(const std::string& s);

SampledPotential apply_perturbation(const SampledPotential& pot,
                                    PerturbationShape shape, double eps,
                                    double center, double width,
                                    std::uint64_t seed = 1);

} // namespace nlsist
