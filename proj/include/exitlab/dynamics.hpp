// SPDX-License-Identifier: Apache-2.0
// Time-steppers: discrete Gaussian-noise SGD, its continuous-time diffusion
// limit (Euler-Maruyama), the isotropic-noise proxy system, and noiseless
// gradient flow.
#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Core>

#include "exitlab/landscape.hpp"
#include "exitlab/path.hpp"
#include "exitlab/rng.hpp"

namespace exitlab {

enum class DynamicsKind { DiscreteSGD, ContinuousSGD, ProxySystem, GradientFlow };

struct DynamicsConfig {
  DynamicsKind kind = DynamicsKind::DiscreteSGD;
  double eta = 0.1;    // learning rate
  double batch = 1.0;  // batch size, positive real, >= 1
  double dt = 0.1;     // integrator step; DiscreteSGD forces dt = eta

  //! Validate and normalize (forces dt = eta for DiscreteSGD).
  static DynamicsConfig make(DynamicsKind kind, double eta, double batch, double dt);

  bool stochastic() const { return kind != DynamicsKind::GradientFlow; }
  //! sqrt(eta/batch): the physical noise amplitude.
  double noise_amplitude() const;
};

struct SimState {
  Eigen::VectorXd position;
  double time = 0.0;
  std::uint64_t step_count = 0;
};

//! Precomputed one-step update for a fixed (config, landscape) pair.
//!
//! Update rule: theta' = theta - dt * grad L(theta) + N * z with z standard
//! normal and N the precomputed noise matrix:
//!   DiscreteSGD:    N = sqrt(eta) * sqrt(eta/batch) * C^{1/2}   (dt = eta)
//!   ContinuousSGD:  N = sqrt(dt)  * sqrt(eta/batch) * C^{1/2}
//!   ProxySystem:    N = sqrt(dt)  * sqrt(eta/batch) * I
//!   GradientFlow:   no noise, consumes no randomness
//! The per-eigendirection per-step standard deviation for covariance
//! eigenvalue c is eta*sqrt(c/batch) in the discrete case and
//! sqrt(dt)*sqrt(eta/batch)*sqrt(c) in the continuous one; the two coincide
//! when dt = eta (same product, same floating-point expression).
class Stepper {
 public:
  Stepper(const DynamicsConfig& config, const Landscape& landscape);

  void step(SimState& state, RngStream& rng);

  //! Advance one step using an externally supplied standard-normal draw
  //! (ignored for GradientFlow); lets callers couple chains through shared
  //! noise. step(state, rng) is exactly step_with(state, rng-draws).
  void step_with(SimState& state, const Eigen::VectorXd& z);

  const DynamicsConfig& config() const { return config_; }
  const Eigen::MatrixXd& noise_matrix() const { return noise_; }
  double dt() const { return config_.dt; }

 private:
  DynamicsConfig config_;
  const Landscape* landscape_;
  Eigen::MatrixXd noise_;  // zero rows/cols unused for GradientFlow
  Eigen::VectorXd grad_;
  Eigen::VectorXd z_;
};

//! Empirical mean and covariance of the one-step increment theta'-theta over
//! n >= 2 draws from a fixed start point.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> sample_moments(const DynamicsConfig& config,
                                                           const Landscape& landscape,
                                                           const Eigen::VectorXd& theta,
                                                           std::uint64_t n, RngStream& rng);

//! Record horizon_steps steps starting from initial; horizon_steps >= 1.
//! Errors with the offending step index if the state becomes non-finite.
Path simulate(const Eigen::VectorXd& initial, const DynamicsConfig& config,
              const Landscape& landscape, std::uint64_t horizon_steps, RngStream& rng);

}  // namespace exitlab
