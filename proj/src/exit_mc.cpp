// SPDX-License-Identifier: Apache-2.0

#include "exitlab/exit_mc.hpp"

#include <cmath>
#include <string>

#include "exitlab/errors.hpp"
#include "exitlab/parallel.hpp"

namespace exitlab {

namespace {
constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

//! Dimension-1 trial loop, arithmetic-for-arithmetic the same update as
//! Stepper::step but on scalars; the oracle benchmarks and 1D sweeps spend
//! billions of steps here, where per-step Eigen temporaries would dominate.
ExitRecord first_exit_1d(double initial, const DynamicsConfig& config,
                         const Landscape& landscape, const Domain& domain,
                         std::uint64_t max_steps, RngStream& rng) {
  const double curvature = landscape.effective_hessian()(0, 0);
  const double minimizer = landscape.minimizer()(0);
  const double center = domain.center(0);
  const double radius = domain.radius;
  const double dt = config.dt;
  const bool noisy = config.stochastic();
  double noise_scale = 0.0;
  if (noisy) {
    const double scale = std::sqrt(config.dt) * config.noise_amplitude();
    noise_scale = config.kind == DynamicsKind::ProxySystem
                      ? scale
                      : scale * landscape.covariance_sqrt()(0, 0);
  }

  double pos = initial;
  std::uint64_t step = 0;
  for (;;) {
    if (std::abs(pos - center) > radius) {
      Eigen::VectorXd point(1);
      point(0) = pos;
      return ExitRecord{true, static_cast<double>(step) * dt, step, point};
    }
    if (step >= max_steps) {
      Eigen::VectorXd point(1);
      point(0) = pos;
      return ExitRecord{false, static_cast<double>(step) * dt, step, point};
    }
    pos -= dt * (curvature * (pos - minimizer));
    if (noisy) {
      pos += noise_scale * rng.normal();
    }
    ++step;
    if (!std::isfinite(pos)) {
      throw NumericalError("first_exit: non-finite position at step " + std::to_string(step));
    }
  }
}

}  // namespace

ExitRecord first_exit(const Eigen::VectorXd& initial, const DynamicsConfig& config,
                      const Landscape& landscape, const Domain& domain,
                      std::uint64_t max_steps, RngStream& rng) {
  if (max_steps < 1) {
    throw ConfigError("first_exit: max_steps must be >= 1");
  }
  if (initial.size() != landscape.dim()) {
    throw ConfigError("first_exit: initial has wrong dimension");
  }
  if (landscape.dim() == 1) {
    return first_exit_1d(initial(0), config, landscape, domain, max_steps, rng);
  }
  Stepper stepper(config, landscape);
  const double r = domain.radius;

  SimState state{initial, 0.0, 0};
  for (;;) {
    if ((state.position - domain.center).norm() > r) {
      return ExitRecord{true, state.time, state.step_count, state.position};
    }
    if (state.step_count >= max_steps) {
      return ExitRecord{false, state.time, state.step_count, state.position};
    }
    stepper.step(state, rng);
    if (!state.position.allFinite()) {
      throw NumericalError("first_exit: non-finite position at step " +
                           std::to_string(state.step_count));
    }
  }
}

ExitStats mean_exit_time(const Eigen::VectorXd& initial, const DynamicsConfig& config,
                         const Landscape& landscape, const Domain& domain,
                         std::uint64_t n_trials, std::uint64_t max_steps,
                         std::uint64_t master_seed, int threads,
                         std::vector<ExitRecord>* records) {
  if (n_trials < 2) {
    throw ConfigError("mean_exit_time: need n_trials >= 2");
  }

  std::vector<ExitRecord> slots(n_trials);
  parallel_for(n_trials, threads, [&](std::size_t trial) {
    RngStream stream(master_seed, trial);
    slots[trial] = first_exit(initial, config, landscape, domain, max_steps, stream);
  });

  // Aggregate in trial order: identical bytes for every worker count.
  ExitStats stats;
  stats.n_trials = n_trials;
  double sum = 0.0;
  for (const ExitRecord& rec : slots) {
    sum += rec.exit_time;
    if (!rec.exited) {
      ++stats.n_censored;
    }
  }
  const double n = static_cast<double>(n_trials);
  stats.mean_exit_time = sum / n;
  double ss = 0.0;
  for (const ExitRecord& rec : slots) {
    const double d = rec.exit_time - stats.mean_exit_time;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  stats.ci_halfwidth = kZ95 * sd / std::sqrt(n);
  stats.log_mean_exit_time = std::log(stats.mean_exit_time);
  stats.escape_efficiency = 1.0 / stats.mean_exit_time;
  stats.unreliable = (stats.n_censored == stats.n_trials);

  if (records != nullptr) {
    *records = std::move(slots);
  }
  return stats;
}

TubeEstimate tube_probability(const Path& reference, const DynamicsConfig& config,
                              const Landscape& landscape, double delta,
                              std::uint64_t n_trials, std::uint64_t master_seed,
                              int threads) {
  if (!(delta > 0.0)) {
    throw ConfigError("tube_probability: delta must be positive");
  }
  if (n_trials < 1) {
    throw ConfigError("tube_probability: need n_trials >= 1");
  }
  reference.require_valid(1);
  if (reference.dim() != landscape.dim()) {
    throw ConfigError("tube_probability: reference dimension mismatch");
  }
  const auto n_steps =
      static_cast<std::uint64_t>(std::llround(reference.horizon / config.dt));
  if (n_steps < 1) {
    throw ConfigError("tube_probability: horizon shorter than one step");
  }

  const Eigen::VectorXd start = reference.points.row(0);
  std::vector<std::uint8_t> inside(n_trials, 0);
  parallel_for(n_trials, threads, [&](std::size_t trial) {
    RngStream stream(master_seed, trial);
    Stepper stepper(config, landscape);
    SimState state{start, 0.0, 0};
    bool stayed = true;
    for (std::uint64_t k = 1; k <= n_steps; ++k) {
      stepper.step(state, stream);
      if (!state.position.allFinite()) {
        throw NumericalError("tube_probability: non-finite position at step " +
                             std::to_string(k));
      }
      const Eigen::VectorXd ref = reference.at_time(state.time);
      if ((state.position - ref).norm() >= delta) {
        stayed = false;
        break;
      }
    }
    inside[trial] = stayed ? 1 : 0;
  });

  std::uint64_t hits = 0;
  for (std::uint8_t b : inside) {
    hits += b;
  }
  TubeEstimate est;
  est.n_trials = n_trials;
  est.probability = static_cast<double>(hits) / static_cast<double>(n_trials);
  est.ci_halfwidth = kZ95 * std::sqrt(est.probability * (1.0 - est.probability) /
                                      static_cast<double>(n_trials));
  return est;
}

}  // namespace exitlab
