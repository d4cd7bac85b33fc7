// SPDX-License-Identifier: Apache-2.0
#include "exitlab/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "exitlab/errors.hpp"

namespace exitlab {
namespace {

//! Shared quadratic-form machinery for the discretized functional.
//!
//! Nodes are the rows of an (N+1) x d matrix X. Per-segment residuals
//!   r_i = (x_{i+1} - x_i)/h + H (m_i - theta*),  m_i = (x_i + x_{i+1})/2,
//! give S = h/2 sum_i r_i' M r_i with metric M. The gradient with respect to
//! an interior node is
//!   dS/dx_j = M (r_{j-1} - r_j) + h/2 H M (r_{j-1} + r_j),
//! and with respect to a free right endpoint M r_{N-1} + h/2 H M r_{N-1}.
//! H and M are symmetric, so everything is evaluated in row form.
class DiscreteAction {
 public:
  DiscreteAction(const Landscape& landscape, double T, int N, double metric_exponent,
                 ActionMetric metric)
      : h_(T / N),
        n_(N),
        d_(landscape.dim()),
        hessian_(landscape.effective_hessian()),
        minimizer_(landscape.minimizer()) {
    if (!(T > 0.0) || !std::isfinite(T)) {
      throw ConfigError("min_action_path: horizon must be positive and finite");
    }
    if (metric == ActionMetric::Covariance) {
      metric_ = landscape.covariance_power(-metric_exponent);
    } else {
      metric_ = Eigen::MatrixXd::Identity(d_, d_);
    }
    diff_.resize(n_, d_);
    resid_.resize(n_, d_);
    mresid_.resize(n_, d_);
  }

  double spacing() const { return h_; }

  //! Action value; leaves residual buffers in place for gradient().
  double value(const Eigen::MatrixXd& x) {
    diff_ = (x.bottomRows(n_) - x.topRows(n_)) / h_;
    resid_ = (x.bottomRows(n_) + x.topRows(n_)) / 2.0;
    resid_.rowwise() -= minimizer_.transpose();
    resid_ = diff_ + resid_ * hessian_;  // H symmetric: row form of H(m - theta*)
    mresid_.noalias() = resid_ * metric_;
    return 0.5 * h_ * mresid_.cwiseProduct(resid_).sum();
  }

  //! Gradient rows for nodes 1..N-1 (and N when free_end); row 0 is zeroed.
  //! Requires value(x) to have been called on the same x.
  void gradient(Eigen::MatrixXd& grad, bool free_end) const {
    grad.setZero(n_ + 1, d_);
    for (int j = 1; j < n_; ++j) {
      const auto prev = mresid_.row(j - 1);
      const auto next = mresid_.row(j);
      grad.row(j) = (prev - next) + (0.5 * h_) * ((prev + next) * hessian_);
    }
    if (free_end) {
      const auto prev = mresid_.row(n_ - 1);
      grad.row(n_) = prev + (0.5 * h_) * (prev * hessian_);
    }
  }

 private:
  double h_;
  int n_;
  int d_;
  Eigen::MatrixXd hessian_;
  Eigen::VectorXd minimizer_;
  Eigen::MatrixXd metric_;
  Eigen::MatrixXd diff_;
  Eigen::MatrixXd resid_;
  Eigen::MatrixXd mresid_;
};

Eigen::MatrixXd straight_line(const Eigen::VectorXd& start, const Eigen::VectorXd& end, int N) {
  Eigen::MatrixXd x(N + 1, start.size());
  for (int i = 0; i <= N; ++i) {
    const double w = static_cast<double>(i) / N;
    x.row(i) = ((1.0 - w) * start + w * end).transpose();
  }
  return x;
}

void clamp_rows(Eigen::MatrixXd& x, const BoxConstraint& box, int first_row) {
  for (int i = first_row; i < x.rows(); ++i) {
    x.row(i) = x.row(i).cwiseMax(box.lo.transpose()).cwiseMin(box.hi.transpose());
  }
}

MinActionResult minimize(const Landscape& landscape, const Eigen::VectorXd& start,
                         const Eigen::VectorXd& end, double T, int N,
                         const OptimizerSettings& settings, double metric_exponent,
                         ActionMetric metric, bool free_end, const BoxConstraint* box) {
  if (N < 8) {
    throw ConfigError("min_action_path: need at least 8 segments");
  }
  if (start.size() != landscape.dim() || end.size() != landscape.dim()) {
    throw ConfigError("min_action_path: endpoint dimension mismatch");
  }
  DiscreteAction problem(landscape, T, N, metric_exponent, metric);

  Eigen::MatrixXd x = straight_line(start, end, N);
  if (box != nullptr) {
    if (box->lo.size() != landscape.dim() || box->hi.size() != landscape.dim()) {
      throw ConfigError("min_action_path: box constraint dimension mismatch");
    }
    clamp_rows(x, *box, 0);
  }

  double value = problem.value(x);
  Eigen::MatrixXd grad;
  problem.gradient(grad, free_end);

  MinActionResult result;
  result.iterations = 0;

  const double grad_floor = 1e-14 * std::max(1.0, std::abs(value));
  if (grad.lpNorm<Eigen::Infinity>() <= grad_floor) {
    result.path = Path{x, T};
    result.action = value;
    result.converged = true;
    return result;
  }

  Eigen::MatrixXd x_new, grad_new, step_diff, grad_diff;
  double step = problem.spacing();  // safe first scale; Armijo shrinks as needed
  constexpr double kArmijo = 1e-4;
  bool converged = false;
  int iter = 0;
  for (; iter < settings.max_iters; ++iter) {
    // Backtracking line search along -grad (projected when box-constrained).
    double t = step;
    double trial_value = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      x_new = x - t * grad;
      if (free_end) {
        x_new.row(0) = x.row(0);  // start always pinned
      }
      if (box != nullptr) {
        clamp_rows(x_new, *box, 1);
      }
      trial_value = problem.value(x_new);
      const double decrease =
          box == nullptr ? kArmijo * t * grad.squaredNorm()
                         : (kArmijo / t) * (x_new - x).squaredNorm();
      if (std::isfinite(trial_value) && trial_value <= value - decrease) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      break;  // step underflow: no further progress representable
    }

    problem.gradient(grad_new, free_end);
    step_diff = x_new - x;
    grad_diff = grad_new - grad;
    const double sy = step_diff.cwiseProduct(grad_diff).sum();
    const double yy = grad_diff.squaredNorm();
    if (std::isfinite(sy) && std::isfinite(yy) && sy > 0.0 && yy > 0.0) {
      step = std::clamp(sy / yy, 1e-14, 1e14);  // Barzilai-Borwein (second form)
    } else {
      step = t;
    }

    const double drop = value - trial_value;
    x.swap(x_new);
    grad.swap(grad_new);
    value = trial_value;
    if (drop <= settings.tol * std::max(std::abs(value), 1e-300)) {
      converged = true;
      ++iter;
      break;
    }
  }

  result.path = Path{x, T};
  result.action = value;
  result.converged = converged;
  result.iterations = iter;
  return result;
}

//! Golden-section refinement of the horizon on a bracket around the best grid
//! point, tracking the global best across all probes.
void refine_horizon(const Landscape& landscape, const Eigen::VectorXd& start,
                    const Eigen::VectorXd& end, double t_lo, double t_hi, int N,
                    const OptimizerSettings& settings, double metric_exponent,
                    ActionMetric metric, MinActionResult& best, double& t_best,
                    std::vector<ActionScanRow>* scan, int boundary_index) {
  const double inv_phi = 0.6180339887498949;
  double a = std::log(t_lo);
  double b = std::log(t_hi);
  auto probe = [&](double u) {
    const double T = std::exp(u);
    MinActionResult r =
        min_action_path(landscape, start, end, T, N, settings, metric_exponent, metric);
    if (scan != nullptr) {
      scan->push_back({T, boundary_index, r.action, r.converged});
    }
    if (r.action < best.action) {
      best = r;
      t_best = T;
    }
    return r.action;
  };
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = probe(c);
  double fd = probe(d);
  for (int i = 0; i < 16 && (b - a) > 1e-4; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = probe(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = probe(d);
    }
  }
}

}  // namespace

ActionReport steepness(const Path& path, const Landscape& landscape, double metric_exponent) {
  path.require_valid(2);
  if (path.dim() != landscape.dim()) {
    throw ConfigError("steepness: path dimension does not match landscape");
  }
  const int n = path.segments();
  const double h = path.spacing();
  const Eigen::MatrixXd metric = landscape.covariance_power(-metric_exponent);
  const Eigen::MatrixXd& hessian = landscape.effective_hessian();

  Eigen::MatrixXd resid = (path.points.bottomRows(n) + path.points.topRows(n)) / 2.0;
  resid.rowwise() -= landscape.minimizer().transpose();
  resid = (path.points.bottomRows(n) - path.points.topRows(n)) / h + resid * hessian;

  ActionReport report;
  report.metric_exponent = metric_exponent;
  report.proxy_steepness = 0.5 * h * resid.squaredNorm();
  report.steepness = 0.5 * h * (resid * metric).cwiseProduct(resid).sum();
  if (!std::isfinite(report.steepness) || !std::isfinite(report.proxy_steepness)) {
    throw NumericalError("steepness: non-finite value (path or metric out of range)");
  }
  return report;
}

MinActionResult min_action_path(const Landscape& landscape, const Eigen::VectorXd& start,
                                const Eigen::VectorXd& end, double T, int N,
                                const OptimizerSettings& settings, double metric_exponent,
                                ActionMetric metric) {
  return minimize(landscape, start, end, T, N, settings, metric_exponent, metric,
                  /*free_end=*/false, /*box=*/nullptr);
}

MinActionResult min_action_free_end(const Landscape& landscape, const Eigen::VectorXd& start,
                                    double T, int N, const OptimizerSettings& settings,
                                    double metric_exponent, ActionMetric metric,
                                    const BoxConstraint& box) {
  // Initialize toward the box center so the free endpoint starts feasible.
  const Eigen::VectorXd target = ((box.lo + box.hi) / 2.0).eval();
  return minimize(landscape, start, target, T, N, settings, metric_exponent, metric,
                  /*free_end=*/true, &box);
}

std::vector<double> default_t_grid(const Landscape& landscape) {
  const double scale = 1.0 / landscape.sharpness();
  std::vector<double> grid(8);
  for (int j = 0; j < 8; ++j) {
    grid[j] = scale * std::exp(std::log(64.0) * j / 7.0);
  }
  return grid;
}

MinActionResult min_action_over_horizons(const Landscape& landscape,
                                         const Eigen::VectorXd& start,
                                         const Eigen::VectorXd& end,
                                         const std::vector<double>& t_grid, int N,
                                         const OptimizerSettings& settings,
                                         double metric_exponent, ActionMetric metric,
                                         std::vector<ActionScanRow>* scan, int boundary_index) {
  const std::vector<double> grid = t_grid.empty() ? default_t_grid(landscape) : t_grid;
  MinActionResult best;
  best.action = std::numeric_limits<double>::infinity();
  double t_best = grid.front();
  int best_idx = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    MinActionResult r =
        min_action_path(landscape, start, end, grid[j], N, settings, metric_exponent, metric);
    if (scan != nullptr) {
      scan->push_back({grid[j], boundary_index, r.action, r.converged});
    }
    if (r.action < best.action) {
      best = r;
      t_best = grid[j];
      best_idx = static_cast<int>(j);
    }
  }
  if (grid.size() >= 2) {
    const int lo = std::max(0, best_idx - 1);
    const int hi = std::min(static_cast<int>(grid.size()) - 1, best_idx + 1);
    refine_horizon(landscape, start, end, grid[lo], grid[hi], N, settings, metric_exponent,
                   metric, best, t_best, scan, boundary_index);
  }
  best.path.horizon = t_best;  // horizon of the winning path (already set; keep explicit)
  return best;
}

QuasiPotentialResult quasi_potential(const Landscape& landscape, const Domain& domain,
                                     const std::vector<double>& t_grid, int N,
                                     const OptimizerSettings& settings, double metric_exponent,
                                     ActionMetric metric) {
  const int d = landscape.dim();
  if (domain.center.size() != d) {
    throw ConfigError("quasi_potential: domain dimension does not match landscape");
  }
  std::vector<Eigen::VectorXd> candidates;
  const Eigen::VectorXd flattest = landscape.hessian_eigenvectors().col(0);
  candidates.push_back(domain.center + domain.radius * flattest);
  candidates.push_back(domain.center - domain.radius * flattest);
  if (d >= 2 && d <= 3) {
    for (int i = 0; i < 32; ++i) {
      candidates.push_back(domain.center + domain.radius * sphere_sample(d, i));
    }
  }

  QuasiPotentialResult result;
  result.v0 = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    MinActionResult r = min_action_over_horizons(landscape, domain.center, candidates[c],
                                                 t_grid, N, settings, metric_exponent, metric,
                                                 &result.scan, static_cast<int>(c));
    if (r.action < result.v0) {
      result.v0 = r.action;
      result.boundary_point = candidates[c];
      result.path = r.path;
      result.t_opt = r.path.horizon;
      result.converged = r.converged;
    }
  }
  return result;
}

ApproxGapResult approx_gap(const Landscape& landscape, const Domain& domain,
                           const std::vector<double>& t_grid, int N,
                           const OptimizerSettings& settings, double metric_exponent) {
  ApproxGapResult out;
  out.v0 = quasi_potential(landscape, domain, t_grid, N, settings, metric_exponent,
                           ActionMetric::Covariance)
               .v0;
  out.vhat0 = quasi_potential(landscape, domain, t_grid, N, settings, metric_exponent,
                              ActionMetric::Identity)
                  .v0;
  double cov_max = 1.0;
  double cov_min = 1.0;
  if (landscape.covariance_model() == CovarianceModel::Hessian) {
    cov_max = landscape.sharpness();
    cov_min = landscape.lambda_min();
  }
  out.gap = std::abs(out.v0 - out.vhat0 / std::sqrt(cov_max));
  out.bound_factor = std::sqrt(cov_min) * (std::sqrt(cov_max / cov_min) - 1.0);
  return out;
}

double hj_residual(const Eigen::VectorXd& grad_v, const Landscape& landscape,
                   const Eigen::VectorXd& theta) {
  if (grad_v.size() != landscape.dim() || theta.size() != landscape.dim()) {
    throw ConfigError("hj_residual: dimension mismatch");
  }
  const Eigen::VectorXd half_pow = landscape.covariance_power(0.5) * grad_v;
  return 0.5 * grad_v.dot(half_pow) - landscape.gradient(theta).dot(grad_v);
}

}  // namespace exitlab
