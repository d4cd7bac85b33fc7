// SPDX-License-Identifier: Apache-2.0
// First-exit detection and Monte Carlo exit-time / tube-probability
// estimation.
//
// Exit is detected on the discrete sample grid with no boundary-crossing
// interpolation: the reported exit time is the time index of the first
// recorded position outside the ball. The O(sqrt(dt)) bias this induces is a
// measured quantity here (see the discretization study), so it must not be
// hidden by interpolating.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "exitlab/dynamics.hpp"
#include "exitlab/landscape.hpp"
#include "exitlab/path.hpp"

namespace exitlab {

struct ExitRecord {
  bool exited = false;
  double exit_time = 0.0;  // censoring horizon when exited == false
  std::uint64_t exit_step = 0;
  Eigen::VectorXd exit_point;
};

struct ExitStats {
  std::uint64_t n_trials = 0;
  std::uint64_t n_censored = 0;
  double mean_exit_time = 0.0;
  double ci_halfwidth = 0.0;  // 95% normal-approximation half width
  double log_mean_exit_time = 0.0;
  double escape_efficiency = 0.0;  // 1 / mean_exit_time
  bool unreliable = false;         // all trials censored
};

//! Step the dynamics until the first recorded position outside the domain, or
//! censor after max_steps. A start point already outside exits at step 0.
ExitRecord first_exit(const Eigen::VectorXd& initial, const DynamicsConfig& config,
                      const Landscape& landscape, const Domain& domain,
                      std::uint64_t max_steps, RngStream& rng);

//! n_trials independent first_exit runs; trial k reads the counter-based
//! stream (master_seed, k), so the aggregate is byte-identical for any worker
//! count. Censored trials contribute the horizon to the mean. n_trials >= 2.
ExitStats mean_exit_time(const Eigen::VectorXd& initial, const DynamicsConfig& config,
                         const Landscape& landscape, const Domain& domain,
                         std::uint64_t n_trials, std::uint64_t max_steps,
                         std::uint64_t master_seed, int threads = 1,
                         std::vector<ExitRecord>* records = nullptr);

struct TubeEstimate {
  double probability = 0.0;
  double ci_halfwidth = 0.0;
  std::uint64_t n_trials = 0;
};

//! Monte Carlo estimate of P(sup_t |theta_t - phi_t| < delta) over trajectories
//! of the reference path's horizon, started at the reference start point. The
//! reference is linearly interpolated at the trajectory's own sample times.
TubeEstimate tube_probability(const Path& reference, const DynamicsConfig& config,
                              const Landscape& landscape, double delta,
                              std::uint64_t n_trials, std::uint64_t master_seed,
                              int threads = 1);

}  // namespace exitlab
