#pragma once

#include <string>

#include "b3opt/net/model.hpp"

namespace b3opt::net {

// Versioned binary artifact; see docs/model_format.md for the byte layout.
// Round trips are bit-exact.
std::string model_to_bytes(const Model& model);
Model model_from_bytes(std::string_view bytes);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace b3opt::net
