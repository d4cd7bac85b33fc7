// SPDX-License-Identifier: Apache-2.0

#include "exitlab/landscape.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "exitlab/errors.hpp"

namespace exitlab {

namespace {

//! Kronecker (additive recurrence) low-discrepancy sequence in [0,1)^d, based
//! on the generalized golden ratio: the positive root of x^(d+1) = x + 1.
double kronecker_alpha_root(int d) {
  double x = 1.5;
  for (int i = 0; i < 64; ++i) {
    x = std::pow(1.0 + x, 1.0 / (d + 1));
  }
  return x;
}

}  // namespace

Landscape::Landscape(LandscapeSpec spec) : spec_(std::move(spec)) {
  const int d = spec_.dim;
  if (d < 1) {
    throw ConfigError("landscape: dim must be >= 1");
  }
  if (spec_.hessian.rows() != d || spec_.hessian.cols() != d) {
    throw ConfigError("landscape: hessian must be " + std::to_string(d) + "x" +
                      std::to_string(d));
  }
  if (spec_.minimizer.size() == 0) {
    spec_.minimizer = Eigen::VectorXd::Zero(d);
  }
  if (spec_.minimizer.size() != d) {
    throw ConfigError("landscape: minimizer must have dim entries");
  }
  if (!(spec_.alpha > 0.0)) {
    throw ConfigError("landscape: alpha must be positive");
  }
  if (!(spec_.beta > 0.0)) {
    throw ConfigError("landscape: beta must be positive");
  }
  if (!spec_.hessian.allFinite() || !spec_.minimizer.allFinite() ||
      !std::isfinite(spec_.min_value)) {
    throw ConfigError("landscape: non-finite input");
  }

  // Symmetry to 1e-12 relative tolerance.
  const double scale = spec_.hessian.cwiseAbs().maxCoeff();
  const double asym = (spec_.hessian - spec_.hessian.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1e-300)) {
    throw ConfigError("landscape: hessian is not symmetric");
  }

  effective_hessian_ = spec_.alpha * spec_.beta * spec_.hessian;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(effective_hessian_);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("landscape: eigendecomposition failed");
  }
  eigenvalues_ = eig.eigenvalues();
  eigenvectors_ = eig.eigenvectors();
  if (!(eigenvalues_[0] > 0.0)) {
    throw ConfigError("landscape: hessian must be strictly positive definite");
  }

  if (spec_.covariance == CovarianceModel::Hessian) {
    covariance_sqrt_ = eigenvectors_ * eigenvalues_.cwiseSqrt().asDiagonal() *
                       eigenvectors_.transpose();
  } else {
    covariance_sqrt_ = Eigen::MatrixXd::Identity(d, d);
  }
}

double Landscape::loss(const Eigen::VectorXd& theta) const {
  if (theta.size() != dim()) {
    throw ConfigError("landscape: loss argument has wrong dimension");
  }
  const Eigen::VectorXd q = theta - spec_.minimizer;
  return spec_.min_value + 0.5 * q.dot(effective_hessian_ * q);
}

Eigen::VectorXd Landscape::gradient(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd out(dim());
  gradient_into(theta, out);
  return out;
}

void Landscape::gradient_into(const Eigen::VectorXd& theta, Eigen::VectorXd& out) const {
  if (theta.size() != dim()) {
    throw ConfigError("landscape: gradient argument has wrong dimension");
  }
  out.noalias() = effective_hessian_ * (theta - spec_.minimizer);
}

Eigen::MatrixXd Landscape::covariance() const {
  if (spec_.covariance == CovarianceModel::Hessian) {
    return effective_hessian_;
  }
  return Eigen::MatrixXd::Identity(dim(), dim());
}

Eigen::MatrixXd Landscape::covariance_power(double power) const {
  if (spec_.covariance == CovarianceModel::Identity) {
    return Eigen::MatrixXd::Identity(dim(), dim());
  }
  Eigen::VectorXd powered(dim());
  for (int i = 0; i < dim(); ++i) {
    powered[i] = std::pow(eigenvalues_[i], power);
    if (!std::isfinite(powered[i])) {
      throw NumericalError("landscape: covariance power overflow");
    }
  }
  return eigenvectors_ * powered.asDiagonal() * eigenvectors_.transpose();
}

double Landscape::depth(const Domain& domain) const {
  if (domain.center.size() != dim()) {
    throw ConfigError("domain: center has wrong dimension");
  }
  if ((domain.center.array() != spec_.minimizer.array()).any()) {
    throw ConfigError("depth: domain center must equal the minimizer");
  }
  return 0.5 * lambda_min() * domain.radius * domain.radius;
}

Domain make_domain(const Landscape& landscape, double radius) {
  if (!(radius > 0.0)) {
    throw ConfigError("domain: radius must be positive");
  }
  return Domain{landscape.minimizer(), radius};
}

Eigen::VectorXd sphere_sample(int dim, int index) {
  if (dim < 1) {
    throw ConfigError("sphere_sample: dim must be >= 1");
  }
  if (dim == 1) {
    Eigen::VectorXd v(1);
    v[0] = (index % 2 == 0) ? 1.0 : -1.0;
    return v;
  }
  // Low-discrepancy uniforms -> Box-Muller pairs -> normalized direction.
  const int n_coords = (dim % 2 == 0) ? dim : dim + 1;
  const double root = kronecker_alpha_root(n_coords);
  Eigen::VectorXd z(n_coords);
  double alpha_j = 1.0;
  std::vector<double> u(static_cast<std::size_t>(n_coords));
  for (int j = 0; j < n_coords; ++j) {
    alpha_j /= root;
    double val = 0.5 + (index + 1) * alpha_j;
    u[static_cast<std::size_t>(j)] = val - std::floor(val);
  }
  for (int j = 0; j + 1 < n_coords; j += 2) {
    const double u1 = 1.0 - u[static_cast<std::size_t>(j)];  // in (0, 1]
    const double u2 = u[static_cast<std::size_t>(j + 1)];
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 6.283185307179586476925286766559 * u2;
    z[j] = r * std::cos(phi);
    z[j + 1] = r * std::sin(phi);
  }
  Eigen::VectorXd v = z.head(dim);
  const double norm = v.norm();
  if (norm < 1e-12) {
    v.setZero();
    v[0] = 1.0;
    return v;
  }
  return v / norm;
}

DomainValidationReport validate_domain(const Landscape& landscape, const Domain& domain,
                                       int n_samples, std::uint64_t flow_budget) {
  if (n_samples < 1) {
    throw ConfigError("validate_domain: n_samples must be >= 1");
  }
  if (!(domain.radius > 0.0)) {
    throw ConfigError("validate_domain: radius must be positive");
  }
  if (domain.center.size() != landscape.dim()) {
    throw ConfigError("validate_domain: center has wrong dimension");
  }

  DomainValidationReport report;
  report.passed = true;
  report.samples.reserve(static_cast<std::size_t>(n_samples));

  const double r = domain.radius;
  const double dt = 1.0 / landscape.sharpness();
  const double target = r / 100.0;
  Eigen::VectorXd grad(landscape.dim());

  for (int i = 0; i < n_samples; ++i) {
    DomainSampleCheck check;
    const Eigen::VectorXd n = sphere_sample(landscape.dim(), i);
    check.point = domain.center + r * n;

    // Outward normal of the ball at the sample is n; the flow must point in.
    landscape.gradient_into(check.point, grad);
    check.inward_ok = (-grad).dot(n) < 0.0;

    Eigen::VectorXd theta = check.point;
    check.flow_ok = false;
    for (std::uint64_t step = 0; step < flow_budget; ++step) {
      landscape.gradient_into(theta, grad);
      theta -= dt * grad;
      const double dist = (theta - domain.center).norm();
      if (dist > r * (1.0 + 1e-9)) {
        break;  // left the ball: fail
      }
      if (dist < target) {
        check.flow_ok = true;
        break;
      }
    }

    report.passed = report.passed && check.inward_ok && check.flow_ok;
    report.samples.push_back(std::move(check));
  }
  return report;
}

}  // namespace exitlab
