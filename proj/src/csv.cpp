// SPDX-License-Identifier: Apache-2.0
#include "exitlab/csv.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "exitlab/errors.hpp"
#include "exitlab/numfmt.hpp"

namespace exitlab {

CsvBuilder::CsvBuilder(std::vector<std::string> header) : columns_(header.size()) {
  if (header.empty()) {
    throw ConfigError("csv: header must not be empty");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) {
      text_ += ',';
    }
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvBuilder::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_) {
    throw ConfigError("csv: row width does not match header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) {
      text_ += ',';
    }
    text_ += cells[i];
  }
  text_ += '\n';
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("io: cannot create directory " + dir.string() + ": " + ec.message());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("io: cannot open " + path.string() + " for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) {
    throw IoError("io: short write to " + path.string());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("io: cannot open " + path.string() + " for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("io: read failure on " + path.string());
  }
  return buffer.str();
}

std::string csv_trials(const std::vector<ExitRecord>& records) {
  CsvBuilder csv({"trial", "exited", "exit_step", "exit_time"});
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ExitRecord& rec = records[i];
    csv.add_row({format_u64(i), format_bool(rec.exited), format_u64(rec.exit_step),
                 format_double(rec.exit_time)});
  }
  return csv.text();
}

std::string csv_aggregate(const ExitStats& stats) {
  CsvBuilder csv(
      {"mean_exit_time", "ci_halfwidth", "n_censored", "escape_efficiency", "unreliable"});
  csv.add_row({format_double(stats.mean_exit_time), format_double(stats.ci_halfwidth),
               format_u64(stats.n_censored), format_double(stats.escape_efficiency),
               format_bool(stats.unreliable)});
  return csv.text();
}

std::string csv_action_scan(const std::vector<ActionScanRow>& rows) {
  CsvBuilder csv({"T", "boundary_index", "action", "converged"});
  for (const ActionScanRow& row : rows) {
    csv.add_row({format_double(row.T), format_i64(row.boundary_index),
                 format_double(row.action), format_bool(row.converged)});
  }
  return csv.text();
}

std::string csv_gap(const ApproxGapResult& gap) {
  CsvBuilder csv({"v0", "vhat0", "gap", "bound_factor"});
  csv.add_row({format_double(gap.v0), format_double(gap.vhat0), format_double(gap.gap),
               format_double(gap.bound_factor)});
  return csv.text();
}

std::string csv_sweep(const SweepResult& sweep) {
  CsvBuilder csv({"swept_value", "regressor", "mean_exit_time", "ci_halfwidth", "n_censored"});
  for (const SweepPoint& point : sweep.points) {
    csv.add_row({format_double(point.swept_value), format_double(point.regressor),
                 format_double(point.stats.mean_exit_time),
                 format_double(point.stats.ci_halfwidth), format_u64(point.stats.n_censored)});
  }
  return csv.text();
}

std::string csv_sweep_normalized(const SweepResult& sweep) {
  CsvBuilder csv({"swept_value", "lambda_max_eff", "normalized_mean", "normalized_ci"});
  for (const SweepPoint& point : sweep.points) {
    csv.add_row({format_double(point.swept_value), format_double(point.lambda_max_eff),
                 format_double(point.normalized_mean), format_double(point.normalized_ci)});
  }
  return csv.text();
}

std::string csv_fit_summary(double slope, double intercept, double pearson_r) {
  CsvBuilder csv({"slope", "intercept", "pearson_r"});
  csv.add_row({format_double(slope), format_double(intercept), format_double(pearson_r)});
  return csv.text();
}

std::string csv_trajectory(const Path& path) {
  std::vector<std::string> header{"step", "time"};
  for (int j = 0; j < path.dim(); ++j) {
    header.push_back("theta_" + std::to_string(j));
  }
  CsvBuilder csv(header);
  const double h = path.spacing();
  for (Eigen::Index k = 0; k < path.points.rows(); ++k) {
    std::vector<std::string> row{format_u64(static_cast<std::uint64_t>(k)),
                                 format_double(static_cast<double>(k) * h)};
    for (int j = 0; j < path.dim(); ++j) {
      row.push_back(format_double(path.points(k, j)));
    }
    csv.add_row(row);
  }
  return csv.text();
}

std::string csv_discretization(const DiscretizationResult& result) {
  CsvBuilder csv({"eta", "batch", "mean_discrete", "ci_discrete", "mean_continuous",
                  "ci_continuous", "abs_error", "paired_ci", "dropped"});
  for (const DiscretizationPoint& point : result.points) {
    csv.add_row({format_double(point.eta), format_double(point.batch),
                 format_double(point.mean_discrete), format_double(point.ci_discrete),
                 format_double(point.mean_continuous), format_double(point.ci_continuous),
                 format_double(point.abs_error), format_double(point.paired_ci),
                 format_bool(point.dropped)});
  }
  return csv.text();
}

}  // namespace exitlab
