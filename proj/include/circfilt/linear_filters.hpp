#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "circfilt/models.hpp"

namespace circfilt {

/// N(μ, σ²) posterior of the scalar linear model.
struct GaussianBelief {
  double mu = 0.0;
  double sigma2 = 1.0;
};

/// Which increment-noise denominator the scalar filter divides by.
enum class GkbfDenominator {
  kConsistent,  ///< c²σ_x² + σ_u², matches the multivariate CΣ_xCᵀ + Σ_u
  kVerbatim,    ///< cσ_x² + σ_u²
};

double gkbf_denominator(const LinearModelParams& params, GkbfDenominator mode);

/// Mean gain c(aσ² + σ_x²)/σ̃_u².
double gkbf_gain(double sigma2, const LinearModelParams& params,
                 GkbfDenominator mode = GkbfDenominator::kConsistent);

/// Right-hand side of the variance ODE: 2aσ² + σ_x² − c²(aσ² + σ_x²)²/σ̃_u².
double gkbf_variance_rate(double sigma2, const LinearModelParams& params,
                          GkbfDenominator mode = GkbfDenominator::kConsistent);

/// One Euler step of the generalized Kalman–Bucy filter driven by the
/// state-increment observation dU = c dX + σ_u dV.
GaussianBelief gkbf_step(const GaussianBelief& belief, double dU, const LinearModelParams& params,
                         GkbfDenominator mode = GkbfDenominator::kConsistent);

struct MultiLinearParams {
  Eigen::MatrixXd A;
  Eigen::MatrixXd C;
  Eigen::MatrixXd Sigma_x;
  Eigen::MatrixXd Sigma_u;
  double dt = 0.01;

  [[nodiscard]] Eigen::Index state_dim() const { return A.rows(); }
  [[nodiscard]] Eigen::Index obs_dim() const { return C.rows(); }
  /// Throws DomainError on shape problems, asymmetric covariances or a
  /// singular CΣ_xCᵀ + Σ_u.
  void validate() const;
};

/// Gaussian with diagonal covariance; only the N variances are tracked.
struct DiagGaussianBelief {
  Eigen::VectorXd mu;
  Eigen::VectorXd sigma2;
};

DiagGaussianBelief diag_gauss_step(const DiagGaussianBelief& belief, const Eigen::VectorXd& dU,
                                   const MultiLinearParams& params);

/// CSV columns t,mu_1..mu_N,sigma2_1..sigma2_N after "# " header lines.
void write_linear_trace(std::ostream& out, std::span<const std::string> header, std::span<const double> t,
                        std::span<const DiagGaussianBelief> beliefs);

}  // namespace circfilt
