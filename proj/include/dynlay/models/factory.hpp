#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dynlay/models/common.hpp"

namespace dynlay::models {

/// Model names accepted by make_model, in display order.
const std::vector<std::string>& model_names();

/// Builds a model from its short name and parameter overrides. Throws
/// std::invalid_argument on an unknown name or parameter key.
std::unique_ptr<ForceModel> make_model(const std::string& name, const ModelParams& params = {});

}  // namespace dynlay::models
