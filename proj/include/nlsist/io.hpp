#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nlsist/asymptotics.hpp"
#include "nlsist/smallnorm.hpp"
#include "nlsist/types.hpp"

namespace nlsist {

// JSON envelopes. Complex arrays are stored as [[re, im], ...]; every
// document carries a "meta" object with tolerances and grid information.
nlohmann::json to_json(const ScatteringData& sd, const Tolerances& tol = {});
nlohmann::json to_json(const SolitonParams& params, const Tolerances& tol = {});
nlohmann::json to_json(const SampledPotential& pot, const Tolerances& tol = {});
nlohmann::json to_json(const AsymptoticCouplings& ac);
// flat diagnostic record of a small-norm solve
nlohmann::json to_json(const SmallNormSolution& sol);

ScatteringData scattering_from_json(const nlohmann::json& j);
SolitonParams params_from_json(const nlohmann::json& j);
SampledPotential potential_from_json(const nlohmann::json& j);

// CSV: "x,re_u,im_u" per line, '#' comments allowed.
void write_potential_csv(const std::string& path, const SampledPotential& pot);
SampledPotential read_potential_csv(const std::string& path);
void write_field_csv(const std::string& path, const std::vector<double>& xs,
                     const std::vector<Complex>& u);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

// FNV-1a of a file's bytes, as "fnv1a64:<hex>". Used by run manifests.
std::string file_hash(const std::string& path);

} // namespace nlsist
