#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "circfilt/circular_filters.hpp"
#include "circfilt/models.hpp"
#include "circfilt/special.hpp"

namespace circfilt {

inline constexpr int kDefaultQuadPoints = 512;
inline constexpr int kMaxGvmOrder = 4;
inline constexpr double kGvmConditionLimit = 1e10;

/// Generalized von Mises density ∝ exp Σ_k a_k cos(kφ) + b_k sin(kφ).
/// Natural parameters are ordered (a_1..a_K, b_1..b_K) wherever a flat vector is used.
struct GvmNaturalParams {
  std::vector<double> a;
  std::vector<double> b;

  [[nodiscard]] int order() const { return static_cast<int>(a.size()); }
  void validate() const;
  [[nodiscard]] Eigen::VectorXd flat() const;
  static GvmNaturalParams from_flat(const Eigen::VectorXd& theta);
  static GvmNaturalParams from_von_mises(const VonMisesBelief& belief, int order);
  /// Von Mises read off the first harmonic; exact when K = 1.
  [[nodiscard]] VonMisesBelief first_harmonic() const;
};

struct GvmMoments {
  std::vector<double> eta_cos;
  std::vector<double> eta_sin;
  double logZ = 0.0;

  [[nodiscard]] Eigen::VectorXd flat() const;
};

GvmMoments gvm_moments(const GvmNaturalParams& theta, int quad_points = kDefaultQuadPoints);

/// Covariance of the sufficient statistics, G = E[TTᵀ] − ηηᵀ.
Eigen::MatrixXd gvm_fisher(const GvmNaturalParams& theta, int quad_points = kDefaultQuadPoints);

struct GvmStepInfo {
  double condition = 1.0;  ///< largest metric condition number seen during the step
};

/// One Heun (Stratonovich) step of the projection filter for increment observations.
/// Throws ConditioningError when the metric is singular or cond(G) > kGvmConditionLimit.
GvmNaturalParams gvm_step(const GvmNaturalParams& theta, double dU, const CircularModelParams& params,
                          int quad_points = kDefaultQuadPoints, GvmStepInfo* info = nullptr);

/// Direct von Mises observation: a_1 += α cos z, b_1 += α sin z.
GvmNaturalParams gvm_direct_update(const GvmNaturalParams& theta, Angle z, double alpha);

/// Increment step followed by the direct update when z is present and κ_z is configured.
GvmNaturalParams gvm_filter_step(const GvmNaturalParams& theta, double dU, std::optional<Angle> z,
                                 const CircularModelParams& params, int quad_points = kDefaultQuadPoints);

/// Normalized density sampled on `grid_points` uniform angles, CSV columns phi,density.
void write_gvm_density_csv(std::ostream& out, std::span<const std::string> header, const GvmNaturalParams& theta,
                           int grid_points, int quad_points = kDefaultQuadPoints);

}  // namespace circfilt
