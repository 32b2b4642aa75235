#pragma once

#include <string>

#include "json.hpp"

namespace minres::cli {

// Serialises with every number in scientific notation, 8 significant digits.
std::string dump_scientific(const nlohmann::json& j, int indent = 2);

}  // namespace minres::cli
