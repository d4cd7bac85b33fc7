// SPDX-License-Identifier: Apache-2.0
// Declarative run configuration: a flat `key = value` text format with one
// section per module, strict validation (unknown keys are errors), and
// canonical re-emission for manifests.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "exitlab/action.hpp"
#include "exitlab/dynamics.hpp"
#include "exitlab/experiments.hpp"
#include "exitlab/landscape.hpp"

namespace exitlab {

enum class OracleKind { None, Dynkin };
enum class HjField { Analytic, Zero, Loss };

//! Fully-resolved run configuration (defaults filled in).
struct ConfigData {
  // [landscape]
  int dim = 1;
  Eigen::MatrixXd hessian;    // resolved to dim x dim
  Eigen::VectorXd minimizer;  // resolved to dim
  double min_value = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  CovarianceModel covariance = CovarianceModel::Hessian;
  // [domain]
  double radius = 1.0;
  bool compensate_radius = true;
  int validate_samples = 64;
  std::uint64_t validate_budget = 1000000;
  // [dynamics]
  DynamicsKind dynamics = DynamicsKind::DiscreteSGD;
  double eta = 0.1;
  double batch = 1.0;
  double dt = 0.1;  // defaults to eta when absent
  std::uint64_t horizon_steps = 100;
  // [exit]
  std::uint64_t n_trials = 1000;
  bool max_steps_auto = true;  // `max_steps = auto`: command-appropriate budget
  std::uint64_t max_steps = 10000000;
  Eigen::VectorXd initial;  // resolved to dim; defaults to the minimizer
  OracleKind oracle = OracleKind::None;
  // [action]
  int path_nodes = 192;
  std::vector<double> t_grid;  // empty: automatic log-spaced grid
  double metric_exponent = 0.5;
  int opt_max_iters = 4000;
  double opt_tol = 1e-10;
  // [sweep]
  SweepKind sweep = SweepKind::Alpha;
  std::vector<double> grid = {1.0, 1.5874010519681994, 2.5198420997897464, 4.0};
  bool regime_enabled = true;
  double regime_lo = 2.0;
  double regime_hi = 8.0;
  bool normalize_relaxation = false;
  int fine_substeps = 64;
  // [hjcheck]
  HjField hj_field = HjField::Analytic;
  int hj_samples = 100;
  // [run]
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  bool emit_plots = false;
  int threads = 1;
};

//! Parse and validate; unknown keys, duplicates, and malformed values throw
//! ConfigError naming the offending key.
ConfigData parse_config(const std::string& text);
ConfigData parse_config_file(const std::filesystem::path& path);

//! Canonical text with every key present; parse_config(resolved_text(c))
//! round-trips to an equivalent configuration.
std::string resolved_text(const ConfigData& config);

// Projections onto the module inputs.
LandscapeSpec landscape_spec(const ConfigData& config);
DynamicsConfig dynamics_config(const ConfigData& config);
OptimizerSettings optimizer_settings(const ConfigData& config);
//! max_steps is 0 (choose per point) when the config says `auto`.
RunSetup run_setup(const ConfigData& config);
SweepSpec sweep_spec(const ConfigData& config);

}  // namespace exitlab
