// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "exitlab/config.hpp"

namespace exitlab {

/// Run record written next to a subcommand's outputs.  The file carries a
/// `[manifest]` block followed by the fully resolved config, so a finished
/// run can be reproduced from the manifest alone.
struct ManifestData {
  std::string subcommand;
  std::string status;  ///< "running" or "complete"
  double duration_seconds = 0.0;
  std::vector<std::string> outputs;  ///< file names relative to the run directory
  ConfigData config;
};

/// Writes `<dir>/manifest.txt` atomically (temp file + rename).
void write_manifest(const std::string& dir, const ManifestData& data);

struct LoadedManifest {
  std::string subcommand;
  ConfigData config;
};

/// Reads a manifest back; throws ConfigError on malformed content and
/// IoError when the file cannot be read.
LoadedManifest load_manifest(const std::string& path);

}  // namespace exitlab
