#pragma once

#include <numbers>
#include <span>

#include "circfilt/rng.hpp"

namespace circfilt {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps any finite angle into [0, 2π). Throws DomainError on non-finite input.
double wrap_radians(double phi);

/// Signed difference a − b folded into (−π, π].
double angle_difference(double a, double b);

/// Angle on the circle, always held in [0, 2π).
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(wrap_radians(radians)) {}

  [[nodiscard]] constexpr double radians() const { return value_; }

  friend Angle operator+(Angle a, double delta) { return Angle(a.value_ + delta); }
  friend Angle operator-(Angle a, double delta) { return Angle(a.value_ - delta); }
  friend constexpr bool operator==(Angle, Angle) = default;

 private:
  double value_ = 0.0;
};

/// Concentration / precision: finite and nonnegative.
class Precision {
 public:
  constexpr Precision() = default;
  explicit Precision(double value);

  [[nodiscard]] constexpr double value() const { return value_; }
  friend constexpr bool operator==(Precision, Precision) = default;

 private:
  double value_ = 0.0;
};

// ---------------------------------------------------------------------------
// Bessel-ratio family. F(κ) = I₁(κ)/I₀(κ) is the mean resultant length of a
// von Mises distribution with concentration κ.
// ---------------------------------------------------------------------------

/// F(κ) = I₁(κ)/I₀(κ), relative accuracy ~1e-13 or better for all κ ≥ 0.
double bessel_ratio(double kappa);

/// F'(κ) = 1 − F/κ − F². This is also the Fisher information of a von Mises
/// density with respect to κ. Accurate for large κ where the direct form cancels.
double bessel_ratio_slope(double kappa);

/// ℱ(κ) = F(κ) / (1 − F(κ)/κ − F(κ)²), the precision decay function of the
/// increment-only von Mises filter. Requires κ > 0.
double precision_decay(double kappa);

/// ξ(α) = α·F(α): Fisher information about the mean carried by one von Mises
/// observation with concentration α.
double observation_information(double alpha);

/// ξ⁻¹(y): the concentration whose single-observation Fisher information is y.
/// Safeguarded Newton; |ξ(result) − y| ≤ 1e-12·max(1, y).
double observation_concentration(double information);

/// Inverse of bessel_ratio on [0, 1). Throws DomainError for r ≥ 1.
double kappa_from_r(double r);

/// log I₀(κ), overflow-free.
double log_bessel_i0(double kappa);

/// log of the von Mises density at phi.
double von_mises_log_density(double phi, double mu, double kappa);

// ---------------------------------------------------------------------------
// Sampling and moments.
// ---------------------------------------------------------------------------

/// Von Mises draw via the Best–Fisher wrapped-Cauchy rejection scheme.
/// κ = 0 gives a uniform angle.
Angle vm_sample(Angle mu, Precision kappa, CounterRng& rng);

struct CircularMoment {
  double r = 0.0;  ///< resultant length in [0, 1]
  Angle mu;        ///< mean direction; 0 when r == 0
};

/// Weighted first circular moment. Weights must be nonnegative and sum to 1
/// within 1e-9.
CircularMoment circular_moment(std::span<const double> angles, std::span<const double> weights);

/// Equal-weight first circular moment.
CircularMoment circular_moment(std::span<const double> angles);

}  // namespace circfilt
