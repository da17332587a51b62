#pragma once

#include <string>

#include "scx/propagator.hpp"

namespace scx {

/// Parses the JSON model schema (see README) into a validated model.
/// Unknown keys are rejected. Throws ParseError on malformed input and
/// ValidationError (with the field path) when build_model rejects it.
HamiltonianModel load_model_config(const std::string& path);

HamiltonianModel parse_model_json(const std::string& text);

}  // namespace scx
