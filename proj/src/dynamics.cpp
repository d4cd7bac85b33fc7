// SPDX-License-Identifier: Apache-2.0

#include "exitlab/dynamics.hpp"

#include <cmath>
#include <string>

#include "exitlab/errors.hpp"

namespace exitlab {

DynamicsConfig DynamicsConfig::make(DynamicsKind kind, double eta, double batch, double dt) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ConfigError("dynamics: eta must be positive");
  }
  if (!(batch >= 1.0) || !std::isfinite(batch)) {
    throw ConfigError("dynamics: batch must be >= 1");
  }
  if (kind == DynamicsKind::DiscreteSGD) {
    dt = eta;
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("dynamics: dt must be positive");
  }
  return DynamicsConfig{kind, eta, batch, dt};
}

double DynamicsConfig::noise_amplitude() const { return std::sqrt(eta / batch); }

Stepper::Stepper(const DynamicsConfig& config, const Landscape& landscape)
    : config_(config), landscape_(&landscape) {
  const int d = landscape.dim();
  grad_.resize(d);
  z_.resize(d);
  switch (config_.kind) {
    case DynamicsKind::DiscreteSGD:
    case DynamicsKind::ContinuousSGD: {
      const double scale = std::sqrt(config_.dt) * config_.noise_amplitude();
      noise_ = scale * landscape.covariance_sqrt();
      break;
    }
    case DynamicsKind::ProxySystem: {
      const double scale = std::sqrt(config_.dt) * config_.noise_amplitude();
      noise_ = scale * Eigen::MatrixXd::Identity(d, d);
      break;
    }
    case DynamicsKind::GradientFlow:
      noise_.resize(0, 0);
      break;
  }
}

void Stepper::step(SimState& state, RngStream& rng) {
  if (config_.kind != DynamicsKind::GradientFlow) {
    rng.normal_fill(z_);
  }
  step_with(state, z_);
}

void Stepper::step_with(SimState& state, const Eigen::VectorXd& z) {
  landscape_->gradient_into(state.position, grad_);
  state.position -= config_.dt * grad_;
  if (config_.kind != DynamicsKind::GradientFlow) {
    state.position.noalias() += noise_ * z;
  }
  ++state.step_count;
  state.time = static_cast<double>(state.step_count) * config_.dt;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> sample_moments(const DynamicsConfig& config,
                                                           const Landscape& landscape,
                                                           const Eigen::VectorXd& theta,
                                                           std::uint64_t n, RngStream& rng) {
  if (n < 2) {
    throw ConfigError("sample_moments: need n >= 2");
  }
  const int d = landscape.dim();
  if (theta.size() != d) {
    throw ConfigError("sample_moments: theta has wrong dimension");
  }
  Stepper stepper(config, landscape);

  Eigen::MatrixXd increments(static_cast<Eigen::Index>(n), d);
  SimState state;
  for (std::uint64_t i = 0; i < n; ++i) {
    state.position = theta;
    state.time = 0.0;
    state.step_count = 0;
    stepper.step(state, rng);
    increments.row(static_cast<Eigen::Index>(i)) = (state.position - theta).transpose();
  }

  const Eigen::VectorXd mean = increments.colwise().mean();
  Eigen::MatrixXd centered = increments.rowwise() - mean.transpose();
  Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n - 1);
  return {mean, cov};
}

Path simulate(const Eigen::VectorXd& initial, const DynamicsConfig& config,
              const Landscape& landscape, std::uint64_t horizon_steps, RngStream& rng) {
  if (horizon_steps < 1) {
    throw ConfigError("simulate: horizon_steps must be >= 1");
  }
  if (initial.size() != landscape.dim()) {
    throw ConfigError("simulate: initial has wrong dimension");
  }
  Stepper stepper(config, landscape);

  Path path;
  path.horizon = static_cast<double>(horizon_steps) * config.dt;
  path.points.resize(static_cast<Eigen::Index>(horizon_steps) + 1, landscape.dim());
  path.points.row(0) = initial.transpose();

  SimState state{initial, 0.0, 0};
  for (std::uint64_t k = 1; k <= horizon_steps; ++k) {
    stepper.step(state, rng);
    if (!state.position.allFinite()) {
      throw NumericalError("simulate: non-finite position at step " + std::to_string(k));
    }
    path.points.row(static_cast<Eigen::Index>(k)) = state.position.transpose();
  }
  return path;
}

}  // namespace exitlab
