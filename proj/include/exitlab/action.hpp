// SPDX-License-Identifier: Apache-2.0
// Path-space rate functional and its minimizers.
//
// For a path phi on [0,T] the steepness is
//   S_T(phi) = 1/2 Int_0^T (phi' + grad L)' C^{-p} (phi' + grad L) dt,
// quadratured by the midpoint rule on per-segment finite-difference velocities.
// The proxy steepness is the same integral with the identity metric. The
// quasi-potential V0 is the infimum of steepness over boundary points, paths,
// and horizons; on these quadratic landscapes the discrete minimum converges
// to the continuum value as the horizon grows (the midpoint scheme introduces
// no h^2 error in that limit for quadratics).
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "exitlab/landscape.hpp"
#include "exitlab/path.hpp"

namespace exitlab {

//! Which metric weights the residual: the landscape's noise covariance
//! (C^{-p}) or the identity (the proxy functional).
enum class ActionMetric { Covariance, Identity };

struct ActionReport {
  double steepness = 0.0;
  double proxy_steepness = 0.0;
  double metric_exponent = 0.5;
};

struct OptimizerSettings {
  int max_iters = 4000;
  double tol = 1e-10;  // relative action decrease that counts as converged
};

struct MinActionResult {
  Path path;
  double action = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct ActionScanRow {
  double T = 0.0;
  int boundary_index = 0;
  double action = 0.0;
  bool converged = false;
};

struct QuasiPotentialResult {
  double v0 = 0.0;
  Eigen::VectorXd boundary_point;
  Path path;
  double t_opt = 0.0;
  bool converged = false;
  std::vector<ActionScanRow> scan;
};

struct ApproxGapResult {
  double v0 = 0.0;     // quasi-potential under the covariance metric
  double vhat0 = 0.0;  // proxy quasi-potential (identity metric)
  double gap = 0.0;    // |v0 - lambda_max(C)^{-1/2} vhat0|
  double bound_factor = 0.0;  // lambda_min(C)^{1/2} (kappa^{1/2} - 1)
};

//! Per-coordinate box constraint applied to every path node.
struct BoxConstraint {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

//! Midpoint-rule steepness and proxy steepness of a fixed path.
ActionReport steepness(const Path& path, const Landscape& landscape,
                       double metric_exponent = 0.5);

//! Minimize the discretized steepness over interior nodes with both endpoints
//! pinned; straight-line initialization; first-order descent (Barzilai-Borwein
//! step proposals under Armijo backtracking) on the exact analytic gradient.
//! N >= 8. Non-convergence within the cap returns the best iterate, flagged.
MinActionResult min_action_path(const Landscape& landscape, const Eigen::VectorXd& start,
                                const Eigen::VectorXd& end, double T, int N,
                                const OptimizerSettings& settings,
                                double metric_exponent = 0.5,
                                ActionMetric metric = ActionMetric::Covariance);

//! Same minimization with a free right endpoint under a box constraint
//! (projected descent); used for tube-neighborhood minimum steepness.
MinActionResult min_action_free_end(const Landscape& landscape, const Eigen::VectorXd& start,
                                    double T, int N, const OptimizerSettings& settings,
                                    double metric_exponent, ActionMetric metric,
                                    const BoxConstraint& box);

//! Log-spaced default horizon grid: 8 points spanning [1, 64]/lambda_max(H_eff).
std::vector<double> default_t_grid(const Landscape& landscape);

//! Infimum of min_action_path over a horizon grid plus golden-section
//! refinement around the best grid point. Appends one row per evaluation to
//! scan when provided (tagged with boundary_index).
MinActionResult min_action_over_horizons(const Landscape& landscape,
                                         const Eigen::VectorXd& start,
                                         const Eigen::VectorXd& end,
                                         const std::vector<double>& t_grid, int N,
                                         const OptimizerSettings& settings,
                                         double metric_exponent, ActionMetric metric,
                                         std::vector<ActionScanRow>* scan = nullptr,
                                         int boundary_index = 0);

//! Quasi-potential of the domain: minimize min_action_over_horizons over
//! boundary candidates (the two flattest-eigendirection points, cross-checked
//! against a 32-point boundary grid for dim <= 3).
QuasiPotentialResult quasi_potential(const Landscape& landscape, const Domain& domain,
                                     const std::vector<double>& t_grid, int N,
                                     const OptimizerSettings& settings,
                                     double metric_exponent = 0.5,
                                     ActionMetric metric = ActionMetric::Covariance);

//! Observed |V0 - lambda_max^{-1/2} Vhat0| and the spectrum-shape factor that
//! bounds it (up to a problem constant).
ApproxGapResult approx_gap(const Landscape& landscape, const Domain& domain,
                           const std::vector<double>& t_grid, int N,
                           const OptimizerSettings& settings, double metric_exponent = 0.5);

//! Residual of the stationary Hamilton-Jacobi equation at theta for a
//! candidate gradient field: 1/2 g' C^{1/2} g - grad L' g.
double hj_residual(const Eigen::VectorXd& grad_v, const Landscape& landscape,
                   const Eigen::VectorXd& theta);

}  // namespace exitlab
