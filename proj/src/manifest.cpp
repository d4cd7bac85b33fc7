// SPDX-License-Identifier: Apache-2.0
#include "exitlab/manifest.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "exitlab/csv.hpp"
#include "exitlab/errors.hpp"
#include "exitlab/numfmt.hpp"
#include "exitlab/version.hpp"

namespace exitlab {
namespace {

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void write_manifest(const std::string& dir, const ManifestData& data) {
  if (data.status != "running" && data.status != "complete") {
    throw ConfigError("manifest: status must be `running` or `complete`, got `" +
                      data.status + "`");
  }
  std::ostringstream out;
  out << "[manifest]\n";
  out << "tool = " << kToolName << "\n";
  out << "version = " << kVersion << "\n";
  out << "subcommand = " << data.subcommand << "\n";
  out << "status = " << data.status << "\n";
  out << "duration_seconds = " << format_double(data.duration_seconds) << "\n";
  if (!data.outputs.empty()) {
    out << "outputs =";
    for (const auto& name : data.outputs) {
      out << " " << name;
    }
    out << "\n";
  }
  out << "\n";
  out << resolved_text(data.config);

  ensure_dir(dir);
  const std::filesystem::path final_path = std::filesystem::path(dir) / "manifest.txt";
  const std::filesystem::path tmp_path = std::filesystem::path(dir) / "manifest.txt.tmp";
  write_text_file(tmp_path.string(), out.str());
  std::error_code ec;
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) {
    throw IoError("manifest: cannot rename `" + tmp_path.string() + "` to `" +
                  final_path.string() + "`: " + ec.message());
  }
}

LoadedManifest load_manifest(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  bool in_manifest = false;
  bool seen_manifest = false;
  LoadedManifest loaded;
  std::string config_text;
  std::string tool;
  bool past_header = false;
  while (std::getline(in, line)) {
    if (past_header) {
      config_text += line;
      config_text += '\n';
      continue;
    }
    std::string stripped = line;
    const auto hash = stripped.find('#');
    if (hash != std::string::npos) stripped.resize(hash);
    stripped = trimmed(stripped);
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped == "[manifest]") {
        in_manifest = true;
        seen_manifest = true;
        continue;
      }
      if (!seen_manifest) {
        throw ConfigError("manifest: `" + path + "` must start with a [manifest] block");
      }
      // First non-manifest section begins the embedded config.
      past_header = true;
      config_text += line;
      config_text += '\n';
      continue;
    }
    if (!in_manifest) {
      throw ConfigError("manifest: `" + path + "` must start with a [manifest] block");
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("manifest: malformed line `" + stripped + "` in `" + path + "`");
    }
    const std::string key = trimmed(stripped.substr(0, eq));
    const std::string value = trimmed(stripped.substr(eq + 1));
    if (key == "subcommand") {
      loaded.subcommand = value;
    } else if (key == "tool") {
      tool = value;
    }
    // version / status / duration_seconds / outputs are informational here.
  }
  if (!seen_manifest) {
    throw ConfigError("manifest: `" + path + "` must start with a [manifest] block");
  }
  if (!tool.empty() && tool != kToolName) {
    throw ConfigError("manifest: `" + path + "` was written by `" + tool + "`, not " +
                      kToolName);
  }
  if (loaded.subcommand.empty()) {
    throw ConfigError("manifest: `" + path + "` is missing the subcommand field");
  }
  loaded.config = parse_config(config_text);
  return loaded;
}

}  // namespace exitlab
