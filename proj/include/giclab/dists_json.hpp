#pragma once

#include <string>

#include "json.hpp"

#include "giclab/dists.hpp"

namespace giclab {

// {"kind":"gaussian","mean":m,"variance":v}
// {"kind":"discrete","points":[...],"probs":[...]}
// {"kind":"mixture","components":[{"weight":w,"dist":{...}}, ...]}
// A bare string is looked up with preset().
ScalarDistribution distribution_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScalarDistribution& d);

// Accepts either a preset name or a JSON document.
ScalarDistribution parse_distribution(const std::string& text);

}  // namespace giclab
