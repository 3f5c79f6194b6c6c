#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "rsc/ensemble.hpp"
#include "rsc/evaluation.hpp"
#include "rsc/sphere_cover.hpp"

namespace rsc {

using json = nlohmann::json;

// Unbounded radii are written as the string "inf". Object keys are sorted
// and doubles use shortest round-trip text, so equal models dump to equal
// bytes.

json to_json(const SphereCoverModel& m);
SphereCoverModel sphere_cover_from_json(const json& j);

json to_json(const EnsembleModel& e);
EnsembleModel ensemble_from_json(const json& j);

json to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const json& j);

json to_json(const FittedModel& m);
FittedModel fitted_model_from_json(const json& j);

void save_model(const std::filesystem::path& path, const FittedModel& m);
FittedModel load_model(const std::filesystem::path& path);

}  // namespace rsc
