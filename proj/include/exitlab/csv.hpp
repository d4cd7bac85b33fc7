// SPDX-License-Identifier: Apache-2.0
// CSV assembly and small file-system helpers. All floating-point cells use
// the shortest round-trip representation so equal results mean equal bytes.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "exitlab/action.hpp"
#include "exitlab/exit_mc.hpp"
#include "exitlab/experiments.hpp"
#include "exitlab/path.hpp"

namespace exitlab {

//! Newline-terminated rows of comma-joined cells with a fixed header.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  const std::string& text() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

void ensure_dir(const std::filesystem::path& dir);
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// Schema emitters shared by the CLI and the test suites.
std::string csv_trials(const std::vector<ExitRecord>& records);
std::string csv_aggregate(const ExitStats& stats);
std::string csv_action_scan(const std::vector<ActionScanRow>& rows);
std::string csv_gap(const ApproxGapResult& gap);
std::string csv_sweep(const SweepResult& sweep);
std::string csv_sweep_normalized(const SweepResult& sweep);
std::string csv_fit_summary(double slope, double intercept, double pearson_r);
std::string csv_trajectory(const Path& path);
std::string csv_discretization(const DiscretizationResult& result);

}  // namespace exitlab
