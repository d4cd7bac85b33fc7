// SPDX-License-Identifier: Apache-2.0
#include "exitlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exitlab/errors.hpp"
#include "exitlab/parallel.hpp"
#include "exitlab/rng.hpp"

namespace exitlab {
namespace {

constexpr double kZ95 = 1.959963984540054;

void append_flag(SweepResult& result, const std::string& reason) {
  result.flagged = true;
  if (!result.flag_reason.empty()) {
    result.flag_reason += "; ";
  }
  result.flag_reason += reason;
}

//! Predicted exit exponent V * batch / eta using the closed-form (metric
//! exponent 1) quasi-potential of a radius-r ball around the minimizer:
//! r^2 under the curvature-matched covariance, lambda_min_eff r^2 under
//! isotropic noise. In one dimension this is exactly the exponent of the
//! boundary-value oracle.
double predicted_exponent(const Landscape& landscape, double radius, double eta, double batch) {
  const double v = landscape.covariance_model() == CovarianceModel::Hessian
                       ? radius * radius
                       : landscape.lambda_min() * radius * radius;
  return v * batch / eta;
}

std::uint64_t auto_max_steps(double exponent, double lambda_min_eff, double dt) {
  const double steps = std::ceil(50.0 * std::exp(exponent) / (lambda_min_eff * dt));
  if (!std::isfinite(steps) || steps >= 9e18) {
    throw ConfigError("sweep: predicted exit exponent too large to budget steps for");
  }
  return static_cast<std::uint64_t>(std::max(steps, 1024.0));
}

}  // namespace

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw ConfigError("fit_line: xs and ys must have equal length");
  }
  if (xs.size() < 2) {
    throw ConfigError("fit_line: need at least two points");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw NumericalError("fit_line: non-finite input");
    }
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) {
    throw ConfigError("fit_line: all xs coincide");
  }
  LinearFit fit;
  if (syy == 0.0) {
    fit.slope = 0.0;
    fit.pearson_r = 0.0;
  } else {
    fit.slope = sxy / sxx;
    fit.pearson_r = sxy / std::sqrt(sxx * syy);
  }
  fit.intercept = my - fit.slope * mx;
  return fit;
}

WeightedFit fit_slope_weighted(const std::vector<double>& xs, const std::vector<double>& ys,
                               const std::vector<double>& sigmas) {
  if (xs.size() != ys.size() || xs.size() != sigmas.size()) {
    throw ConfigError("fit_slope_weighted: input lengths differ");
  }
  if (xs.size() < 2) {
    throw ConfigError("fit_slope_weighted: need at least two points");
  }
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(sigmas[i] > 0.0) || !std::isfinite(sigmas[i])) {
      throw ConfigError("fit_slope_weighted: sigmas must be positive");
    }
    const double w = 1.0 / (sigmas[i] * sigmas[i]);
    sw += w;
    swx += w * xs[i];
    swy += w * ys[i];
  }
  const double xbar = swx / sw;
  const double ybar = swy / sw;
  double swxx = 0.0, swxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double w = 1.0 / (sigmas[i] * sigmas[i]);
    swxx += w * (xs[i] - xbar) * (xs[i] - xbar);
    swxy += w * (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (swxx == 0.0) {
    throw ConfigError("fit_slope_weighted: all xs coincide");
  }
  WeightedFit fit;
  fit.slope = swxy / swxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.slope_stderr = std::sqrt(1.0 / swxx);
  return fit;
}

SweepResult run_sweep(const SweepSpec& spec) {
  const std::vector<double>& grid = spec.grid;
  if (grid.size() < 3) {
    throw ConfigError("sweep: grid needs at least 3 values");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !(grid[i] > 0.0)) {
      throw ConfigError("sweep: grid values must be positive and finite");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ConfigError("sweep: grid must be strictly increasing");
    }
  }
  const RunSetup& base = spec.base;
  if (base.n_trials < 2) {
    throw ConfigError("sweep: need at least 2 trials per point");
  }

  const Landscape base_landscape(base.landscape);
  const double base_sharpness = base_landscape.sharpness();

  // Per-point landscape and domain variants.
  const int n = static_cast<int>(grid.size());
  std::vector<Landscape> landscapes;
  landscapes.reserve(grid.size());
  std::vector<double> radii(grid.size(), base.radius);
  for (int i = 0; i < n; ++i) {
    LandscapeSpec variant = base.landscape;
    const double g = grid[i];
    switch (spec.swept) {
      case SweepKind::Alpha:
        variant.alpha = g;
        if (base.compensate_radius) {
          radii[i] = base.radius / std::sqrt(g);
        }
        break;
      case SweepKind::Eta:
      case SweepKind::Batch:
        break;
      case SweepKind::Beta:
        // Temperature sweep at fixed effective curvature: the base Hessian is
        // divided by beta, and the radius grows by sqrt(beta) so the barrier
        // depth is proportional to beta.
        variant.beta = g;
        variant.hessian = base.landscape.hessian / g;
        radii[i] = base.radius * std::sqrt(g);
        break;
    }
    landscapes.emplace_back(variant);
  }

  // Raw exponents before regime centering.
  std::vector<double> eta_raw(grid.size(), base.dynamics.eta);
  std::vector<double> batch_raw(grid.size(), base.dynamics.batch);
  std::vector<double> x_raw(grid.size());
  double log_mean_x = 0.0;
  for (int i = 0; i < n; ++i) {
    if (spec.swept == SweepKind::Eta) {
      eta_raw[i] = grid[i];
    } else if (spec.swept == SweepKind::Batch) {
      batch_raw[i] = grid[i];
    }
    x_raw[i] = predicted_exponent(landscapes[i], radii[i], eta_raw[i], batch_raw[i]);
    log_mean_x += std::log(x_raw[i]);
  }
  log_mean_x /= n;

  double scale = 1.0;
  if (spec.regime_target.has_value()) {
    const auto [lo, hi] = *spec.regime_target;
    if (!(lo > 0.0) || !(hi > lo)) {
      throw ConfigError("sweep: regime target band must satisfy 0 < lo < hi");
    }
    scale = std::sqrt(lo * hi) / std::exp(log_mean_x);
  }

  SweepResult result;
  result.points.resize(grid.size());
  for (int i = 0; i < n; ++i) {
    // The batch carries the regime scale, except in a batch sweep where the
    // grid owns the batch and the learning rate absorbs the scale instead.
    double eta_i = eta_raw[i];
    double batch_i = batch_raw[i];
    if (spec.swept == SweepKind::Batch) {
      eta_i /= scale;
    } else {
      // Clamped at the smallest legal batch; an already-centered sweep lands
      // on scale == 1 only up to rounding, and the clamp absorbs that too.
      batch_i = std::max(batch_i * scale, 1.0);
    }
    // Recomputed from the values that actually run, so the band check below
    // reports the truth even when the clamp bites.
    const double x_i = predicted_exponent(landscapes[i], radii[i], eta_i, batch_i);
    if (spec.regime_target.has_value()) {
      const auto [lo, hi] = *spec.regime_target;
      if (x_i < lo * (1.0 - 1e-9) || x_i > hi * (1.0 + 1e-9)) {
        append_flag(result, "predicted exponent outside target band at point " +
                                std::to_string(i));
      }
    }

    const Landscape& land = landscapes[i];
    double dt_i = base.dynamics.dt;
    if (base.dynamics.kind == DynamicsKind::ContinuousSGD ||
        base.dynamics.kind == DynamicsKind::ProxySystem) {
      dt_i = base.dynamics.dt * base_sharpness / land.sharpness();
    }
    const DynamicsConfig dyn = DynamicsConfig::make(base.dynamics.kind, eta_i, batch_i, dt_i);

    const Domain domain = make_domain(land, radii[i]);
    const std::uint64_t max_steps =
        base.max_steps > 0 ? static_cast<std::uint64_t>(base.max_steps)
                           : auto_max_steps(x_i, land.lambda_min(), dyn.dt);

    SweepPoint& point = result.points[i];
    point.swept_value = grid[i];
    point.lambda_max_eff = land.sharpness();
    point.lambda_min_eff = land.lambda_min();
    point.regime_x = x_i;
    point.dynamics = dyn;
    point.max_steps = static_cast<std::int64_t>(max_steps);
    point.stats =
        mean_exit_time(land.minimizer(), dyn, land, domain, static_cast<std::uint64_t>(base.n_trials),
                       max_steps, mix_seed(base.seed, static_cast<std::uint64_t>(i)), base.threads);
    point.normalized_mean = point.stats.mean_exit_time * point.lambda_max_eff;
    point.normalized_ci = point.stats.ci_halfwidth * point.lambda_max_eff;

    switch (spec.swept) {
      case SweepKind::Alpha:
        point.regressor = 1.0 / std::sqrt(land.sharpness());
        break;
      case SweepKind::Eta:
        point.regressor = 1.0 / dyn.eta;
        break;
      case SweepKind::Batch:
        point.regressor = dyn.batch;
        break;
      case SweepKind::Beta:
        point.regressor = land.depth(domain);
        break;
    }

    if (point.stats.unreliable) {
      append_flag(result, "all trials censored at point " + std::to_string(i));
    } else if (point.stats.n_censored * 20 > point.stats.n_trials) {
      append_flag(result, "more than 5% of trials censored at point " + std::to_string(i));
    }
  }

  // Regress log mean exit time (normalized when requested) on the regressor,
  // weighting each point by its delta-method log-scale uncertainty.
  std::vector<double> xs(grid.size()), ys(grid.size()), sigmas(grid.size());
  for (int i = 0; i < n; ++i) {
    const SweepPoint& point = result.points[i];
    const double mean =
        spec.normalize_relaxation ? point.normalized_mean : point.stats.mean_exit_time;
    const double ci = spec.normalize_relaxation ? point.normalized_ci : point.stats.ci_halfwidth;
    if (!(mean > 0.0)) {
      throw NumericalError("sweep: non-positive mean exit time at point " + std::to_string(i));
    }
    xs[i] = point.regressor;
    ys[i] = std::log(mean);
    sigmas[i] = std::max(ci / (kZ95 * mean), 1e-12);
  }
  const WeightedFit wfit = fit_slope_weighted(xs, ys, sigmas);
  result.slope = wfit.slope;
  result.intercept = wfit.intercept;
  result.slope_stderr = wfit.slope_stderr;
  result.pearson_r = fit_line(xs, ys).pearson_r;
  return result;
}

SweepResult proxy_reference(const SweepSpec& spec) {
  SweepSpec normalized = spec;
  normalized.normalize_relaxation = true;
  return run_sweep(normalized);
}

std::uint64_t exit_step_budget(const Landscape& landscape, double radius,
                               const DynamicsConfig& dynamics) {
  const double exponent =
      predicted_exponent(landscape, radius, dynamics.eta, dynamics.batch);
  return auto_max_steps(exponent, landscape.lambda_min(), dynamics.dt);
}

DiscretizationResult discretization_study(const RunSetup& base,
                                          const std::vector<double>& eta_grid,
                                          int fine_substeps) {
  if (eta_grid.size() < 3) {
    throw ConfigError("discretization: eta grid needs at least 3 values");
  }
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    if (!std::isfinite(eta_grid[i]) || !(eta_grid[i] > 0.0)) {
      throw ConfigError("discretization: eta values must be positive and finite");
    }
    if (i > 0 && !(eta_grid[i] > eta_grid[i - 1])) {
      throw ConfigError("discretization: eta grid must be strictly increasing");
    }
  }
  if (fine_substeps < 1) {
    throw ConfigError("discretization: fine_substeps must be >= 1");
  }
  if (base.n_trials < 2) {
    throw ConfigError("discretization: need at least 2 trials per point");
  }

  const Landscape landscape(base.landscape);
  const Domain domain = make_domain(landscape, base.radius);
  const double eps2 = base.dynamics.eta / base.dynamics.batch;
  const int d = landscape.dim();

  DiscretizationResult result;
  result.points.resize(eta_grid.size());

  struct TrialSlot {
    double coarse_time = 0.0;
    double fine_time = 0.0;
    bool censored = true;
  };

  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    const double eta = eta_grid[i];
    const double batch = eta / eps2;
    if (batch < 1.0 - 1e-12) {
      throw ConfigError("discretization: eta " + std::to_string(eta) +
                        " requires batch below 1 at the base noise scale");
    }
    const DynamicsConfig coarse_cfg =
        DynamicsConfig::make(DynamicsKind::DiscreteSGD, eta, std::max(batch, 1.0), eta);
    const DynamicsConfig fine_cfg = DynamicsConfig::make(
        DynamicsKind::ContinuousSGD, eta, std::max(batch, 1.0), eta / fine_substeps);

    const double exponent = predicted_exponent(landscape, base.radius, eta, batch);
    const std::uint64_t max_blocks =
        base.max_steps > 0 ? static_cast<std::uint64_t>(base.max_steps)
                           : auto_max_steps(exponent, landscape.lambda_min(), coarse_cfg.dt);

    const std::uint64_t point_seed = mix_seed(base.seed, static_cast<std::uint64_t>(i));
    std::vector<TrialSlot> slots(static_cast<std::size_t>(base.n_trials));
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(fine_substeps));

    parallel_for(static_cast<std::uint64_t>(base.n_trials), base.threads, [&](std::uint64_t t) {
      RngStream stream(point_seed, t);
      TrialSlot slot;
      bool coarse_alive = true;
      bool fine_alive = true;
      if (d == 1) {
        // Scalar copy of the coupled loop below; these trials run hundreds of
        // millions of substeps, where per-step Eigen temporaries dominate.
        const double curvature = landscape.effective_hessian()(0, 0);
        const double minimizer = landscape.minimizer()(0);
        const double center = domain.center(0);
        const double radius = domain.radius;
        const double coarse_noise =
            std::sqrt(coarse_cfg.dt) * coarse_cfg.noise_amplitude() *
            landscape.covariance_sqrt()(0, 0);
        const double fine_noise = std::sqrt(fine_cfg.dt) * fine_cfg.noise_amplitude() *
                                  landscape.covariance_sqrt()(0, 0);
        double coarse_pos = minimizer;
        double fine_pos = minimizer;
        std::uint64_t coarse_steps = 0;
        std::uint64_t fine_steps = 0;
        for (std::uint64_t block = 0; block < max_blocks && (coarse_alive || fine_alive);
             ++block) {
          double z_sum = 0.0;
          for (int j = 0; j < fine_substeps; ++j) {
            const double z = stream.normal();  // always consumed: fixed coupling
            z_sum += z;
            if (fine_alive) {
              if (std::abs(fine_pos - center) > radius) {
                slot.fine_time = static_cast<double>(fine_steps) * fine_cfg.dt;
                fine_alive = false;
              } else {
                fine_pos -= fine_cfg.dt * (curvature * (fine_pos - minimizer));
                fine_pos += fine_noise * z;
                ++fine_steps;
              }
            }
          }
          if (coarse_alive) {
            if (std::abs(coarse_pos - center) > radius) {
              slot.coarse_time = static_cast<double>(coarse_steps) * coarse_cfg.dt;
              coarse_alive = false;
            } else {
              coarse_pos -= coarse_cfg.dt * (curvature * (coarse_pos - minimizer));
              coarse_pos += coarse_noise * (z_sum * inv_sqrt_m);
              ++coarse_steps;
            }
          }
          if (!std::isfinite(coarse_pos) || !std::isfinite(fine_pos)) {
            throw NumericalError("discretization: non-finite position in trial " +
                                 std::to_string(t));
          }
        }
      } else {
        Stepper coarse(coarse_cfg, landscape);
        Stepper fine(fine_cfg, landscape);
        SimState coarse_state{landscape.minimizer(), 0.0, 0};
        SimState fine_state{landscape.minimizer(), 0.0, 0};
        Eigen::VectorXd z(d);
        Eigen::VectorXd z_sum(d);
        for (std::uint64_t block = 0; block < max_blocks && (coarse_alive || fine_alive);
             ++block) {
          z_sum.setZero();
          for (int j = 0; j < fine_substeps; ++j) {
            stream.normal_fill(z);  // always consumed, so the coupling is fixed
            z_sum += z;
            if (fine_alive) {
              if (!domain.contains(fine_state.position)) {
                slot.fine_time = fine_state.time;
                fine_alive = false;
              } else {
                fine.step_with(fine_state, z);
              }
            }
          }
          if (coarse_alive) {
            if (!domain.contains(coarse_state.position)) {
              slot.coarse_time = coarse_state.time;
              coarse_alive = false;
            } else {
              coarse.step_with(coarse_state, z_sum * inv_sqrt_m);
            }
          }
          if (!coarse_state.position.allFinite() || !fine_state.position.allFinite()) {
            throw NumericalError("discretization: non-finite position in trial " +
                                 std::to_string(t));
          }
        }
      }
      slot.censored = coarse_alive || fine_alive;
      slots[static_cast<std::size_t>(t)] = slot;
    });

    DiscretizationPoint& point = result.points[i];
    point.eta = eta;
    point.batch = batch;

    // Trial-order aggregation keeps the result independent of thread count.
    double sum_c = 0.0, sum_f = 0.0, sum_d = 0.0;
    std::uint64_t kept = 0;
    for (const TrialSlot& slot : slots) {
      if (slot.censored) {
        ++point.n_censored;
        continue;
      }
      ++kept;
      sum_c += slot.coarse_time;
      sum_f += slot.fine_time;
      sum_d += slot.coarse_time - slot.fine_time;
    }
    if (kept < 2) {
      result.flagged = true;
      result.flag_reason = "discretization: fewer than 2 uncensored trials at eta " +
                           std::to_string(eta);
      continue;
    }
    const double nk = static_cast<double>(kept);
    point.mean_discrete = sum_c / nk;
    point.mean_continuous = sum_f / nk;
    const double mean_d = sum_d / nk;
    double var_c = 0.0, var_f = 0.0, var_d = 0.0;
    for (const TrialSlot& slot : slots) {
      if (slot.censored) {
        continue;
      }
      const double dc = slot.coarse_time - point.mean_discrete;
      const double df = slot.fine_time - point.mean_continuous;
      const double dd = (slot.coarse_time - slot.fine_time) - mean_d;
      var_c += dc * dc;
      var_f += df * df;
      var_d += dd * dd;
    }
    point.ci_discrete = kZ95 * std::sqrt(var_c / (nk - 1.0) / nk);
    point.ci_continuous = kZ95 * std::sqrt(var_f / (nk - 1.0) / nk);
    point.paired_ci = kZ95 * std::sqrt(var_d / (nk - 1.0) / nk);
    point.abs_error = std::abs(mean_d);
    point.dropped = point.abs_error <= point.paired_ci;
    if (point.n_censored > 0) {
      result.flagged = true;
      if (!result.flag_reason.empty()) {
        result.flag_reason += "; ";
      }
      result.flag_reason +=
          "censored trials at eta " + std::to_string(eta);
    }
  }

  std::vector<double> xs, ys;
  for (const DiscretizationPoint& point : result.points) {
    if (!point.dropped && point.abs_error > 0.0) {
      xs.push_back(std::log(point.eta));
      ys.push_back(std::log(point.abs_error));
    }
  }
  if (xs.size() < 3) {
    result.flagged = true;
    if (!result.flag_reason.empty()) {
      result.flag_reason += "; ";
    }
    result.flag_reason += "fewer than 3 points with a resolvable discretization error";
  } else {
    const LinearFit fit = fit_line(xs, ys);
    result.slope = fit.slope;
    result.intercept = fit.intercept;
    result.pearson_r = fit.pearson_r;
    if (xs.size() < result.points.size()) {
      result.flagged = true;
      if (!result.flag_reason.empty()) {
        result.flag_reason += "; ";
      }
      result.flag_reason += "some points dropped as statistically unresolved";
    }
  }
  return result;
}

}  // namespace exitlab
