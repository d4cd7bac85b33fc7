// SPDX-License-Identifier: Apache-2.0
// Quadratic basin with scaling knobs, plus the ball-shaped escape domain.
//
// The loss is L(theta) = min_value + 1/2 (theta-m)' H_eff (theta-m) with
// H_eff = alpha * beta * H. `alpha` steepens the basin (sharpness map), `beta`
// deepens it (depth map). The stationary gradient-noise covariance is either
// H_eff itself or the identity.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace exitlab {

enum class CovarianceModel { Hessian, Identity };

struct LandscapeSpec {
  int dim = 1;
  Eigen::MatrixXd hessian;    // base Hessian H, symmetric positive definite
  Eigen::VectorXd minimizer;  // defaults to the origin
  double min_value = 0.0;
  double alpha = 1.0;  // sharpness scale
  double beta = 1.0;   // depth scale
  CovarianceModel covariance = CovarianceModel::Hessian;
};

struct Domain;

class Landscape {
 public:
  explicit Landscape(LandscapeSpec spec);

  int dim() const { return spec_.dim; }
  const Eigen::VectorXd& minimizer() const { return spec_.minimizer; }
  double min_value() const { return spec_.min_value; }
  double alpha() const { return spec_.alpha; }
  double beta() const { return spec_.beta; }
  CovarianceModel covariance_model() const { return spec_.covariance; }
  const LandscapeSpec& spec() const { return spec_; }

  const Eigen::MatrixXd& base_hessian() const { return spec_.hessian; }
  const Eigen::MatrixXd& effective_hessian() const { return effective_hessian_; }

  double loss(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const;
  //! Gradient without allocation; out must have size dim.
  void gradient_into(const Eigen::VectorXd& theta, Eigen::VectorXd& out) const;

  //! Largest eigenvalue of the effective Hessian.
  double sharpness() const { return eigenvalues_[dim() - 1]; }
  //! Smallest eigenvalue of the effective Hessian.
  double lambda_min() const { return eigenvalues_[0]; }
  //! Eigenvalues of the effective Hessian, ascending.
  const Eigen::VectorXd& hessian_eigenvalues() const { return eigenvalues_; }
  //! Matching orthonormal eigenvectors (columns).
  const Eigen::MatrixXd& hessian_eigenvectors() const { return eigenvectors_; }

  //! Noise covariance C (H_eff or identity).
  Eigen::MatrixXd covariance() const;
  //! Symmetric square root of C; squared it reconstructs C.
  const Eigen::MatrixXd& covariance_sqrt() const { return covariance_sqrt_; }
  //! C^power for any real power (via the spectral decomposition of C).
  Eigen::MatrixXd covariance_power(double power) const;

  //! Barrier height of the ball domain: 1/2 lambda_min(H_eff) r^2.
  double depth(const Domain& domain) const;

 private:
  LandscapeSpec spec_;
  Eigen::MatrixXd effective_hessian_;
  Eigen::VectorXd eigenvalues_;   // of H_eff, ascending
  Eigen::MatrixXd eigenvectors_;  // of H_eff
  Eigen::MatrixXd covariance_sqrt_;
};

//! Euclidean ball centered at the minimizer.
struct Domain {
  Eigen::VectorXd center;
  double radius = 0.0;

  bool contains(const Eigen::VectorXd& theta) const {
    return (theta - center).norm() <= radius;
  }
};

Domain make_domain(const Landscape& landscape, double radius);

struct DomainSampleCheck {
  Eigen::VectorXd point;
  bool inward_ok = false;  // -grad points into the ball at the boundary point
  bool flow_ok = false;    // gradient flow reaches r/100 without leaving
};

struct DomainValidationReport {
  bool passed = false;
  std::vector<DomainSampleCheck> samples;
};

//! Check that the ball is attracted to the minimizer: boundary normals point
//! uphill, and gradient flow from deterministic boundary samples contracts to
//! within radius/100 inside the step budget without ever leaving the ball.
DomainValidationReport validate_domain(const Landscape& landscape, const Domain& domain,
                                       int n_samples, std::uint64_t flow_budget = 1000000);

//! Deterministic low-discrepancy point on the unit sphere in R^dim.
//! index enumerates the sequence; dim=1 alternates +1/-1.
Eigen::VectorXd sphere_sample(int dim, int index);

}  // namespace exitlab
