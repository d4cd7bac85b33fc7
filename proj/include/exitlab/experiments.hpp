// SPDX-License-Identifier: Apache-2.0
// Exit-time scaling experiments: parameter sweeps with exponential-regime
// auto-configuration, the isotropic reference check, and the
// coarse/fine coupled discretization study.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exitlab/dynamics.hpp"
#include "exitlab/exit_mc.hpp"
#include "exitlab/landscape.hpp"

namespace exitlab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double pearson_r = 0.0;
};

//! Ordinary least squares. Throws ConfigError when sizes mismatch, fewer than
//! two points, or all xs coincide. All ys equal yields slope 0 and r 0.
LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

struct WeightedFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

//! Weighted least squares with known per-point standard deviations.
WeightedFit fit_slope_weighted(const std::vector<double>& xs, const std::vector<double>& ys,
                               const std::vector<double>& sigmas);

enum class SweepKind { Alpha, Eta, Batch, Beta };

//! One Monte-Carlo run's fixed ingredients.
struct RunSetup {
  LandscapeSpec landscape;
  double radius = 1.0;
  bool compensate_radius = true;  // alpha sweeps shrink the domain by 1/sqrt(alpha)
  DynamicsConfig dynamics;
  int n_trials = 1000;
  std::int64_t max_steps = 0;  // 0: choose per point from the predicted exponent
  std::uint64_t seed = 1;
  int threads = 1;
};

struct SweepSpec {
  SweepKind swept = SweepKind::Alpha;
  std::vector<double> grid;  // strictly increasing, at least 3 values
  RunSetup base;
  //! When set, rescale the noise-to-barrier ratio so the predicted exit
  //! exponents span exactly this [lo, hi] band (geometric centering).
  std::optional<std::pair<double, double>> regime_target;
  //! Report and regress relaxation-normalized means (mean * lambda_max_eff).
  bool normalize_relaxation = false;
};

struct SweepPoint {
  double swept_value = 0.0;
  double regressor = 0.0;
  ExitStats stats;
  double lambda_max_eff = 0.0;
  double lambda_min_eff = 0.0;
  double regime_x = 0.0;  // predicted exit exponent V * batch / eta
  DynamicsConfig dynamics;
  std::int64_t max_steps = 0;
  double normalized_mean = 0.0;
  double normalized_ci = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double slope = 0.0;          // weighted fit of log mean exit time vs regressor
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double pearson_r = 0.0;      // unweighted correlation on the same pairs
  bool flagged = false;
  std::string flag_reason;
};

//! Sweep one control parameter and regress log mean exit time against the
//! theory regressor for that parameter:
//!   alpha -> sharpness^{-1/2}, eta -> 1/eta, batch -> batch, beta -> depth.
//! Alpha rescales curvature with optional 1/sqrt(alpha) radius compensation;
//! beta rescales the temperature at fixed effective curvature (base Hessian
//! divided by beta, radius grown by sqrt(beta) so depth tracks beta).
//! Continuous-time kinds shrink dt in proportion to 1/sharpness so each point
//! resolves its own relaxation time.
SweepResult run_sweep(const SweepSpec& spec);

//! Alpha sweep with relaxation normalization forced on: for the isotropic
//! proxy system the normalized mean exit times are sharpness-independent.
SweepResult proxy_reference(const SweepSpec& spec);

struct DiscretizationPoint {
  double eta = 0.0;
  double batch = 0.0;
  double mean_discrete = 0.0;
  double ci_discrete = 0.0;
  double mean_continuous = 0.0;
  double ci_continuous = 0.0;
  double abs_error = 0.0;  // |mean paired difference|
  double paired_ci = 0.0;  // 95% halfwidth of the paired difference
  bool dropped = false;    // difference indistinguishable from zero
  int n_censored = 0;
};

struct DiscretizationResult {
  std::vector<DiscretizationPoint> points;
  double slope = 0.0;  // of log|mean difference| vs log eta, over kept points
  double intercept = 0.0;
  double pearson_r = 0.0;
  bool flagged = false;
  std::string flag_reason;
};

//! Step budget matched to the predicted exit exponent X = V * batch / eta
//! (ceil(50 e^X / (lambda_min dt)), at least 1024): enough steps that
//! censoring is negligible in the exponential regime, without unbounded
//! worst-case runtime. The same rule budgets sweep points automatically.
std::uint64_t exit_step_budget(const Landscape& landscape, double radius,
                               const DynamicsConfig& dynamics);

//! Weak-error probe of the update rule's time discretization. For each eta,
//! batch = eta / (eta_base/batch_base) holds the noise scale fixed, and each
//! trial couples one discrete-update chain (dt = eta) to one continuous-kind
//! chain on dt = eta/substeps driven by the same Gaussian draws (the coarse
//! step consumes the normalized sum of its substeps' draws). The paired
//! exit-time difference isolates the discretization effect; its magnitude is
//! regressed against eta on a log-log scale.
DiscretizationResult discretization_study(const RunSetup& base,
                                          const std::vector<double>& eta_grid,
                                          int fine_substeps = 64);

}  // namespace exitlab
