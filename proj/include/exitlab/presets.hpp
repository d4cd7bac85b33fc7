// SPDX-License-Identifier: Apache-2.0
// Named built-in configurations for the benchmark and demo runs.
#pragma once

#include <string>
#include <vector>

namespace exitlab {

//! Names of all built-in presets, alphabetical.
std::vector<std::string> preset_names();

//! Config text for a preset; throws ConfigError for unknown names.
std::string preset_text(const std::string& name);

}  // namespace exitlab
