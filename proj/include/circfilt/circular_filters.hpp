#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "circfilt/models.hpp"
#include "circfilt/special.hpp"

namespace circfilt {

/// Lower bound kept on reported concentrations; the mean gain 1/κ of the
/// continuum update is singular at κ = 0.
inline constexpr double kKappaFloor = 1e-8;

/// Von Mises posterior VM(μ, κ).
struct VonMisesBelief {
  Angle mu;
  Precision kappa;

  /// Natural parameters θ = κ (cos μ, sin μ).
  [[nodiscard]] std::array<double, 2> natural() const;
  static VonMisesBelief from_natural(double theta_cos, double theta_sin);
  /// Estimated precision r = F(κ).
  [[nodiscard]] double r() const { return bessel_ratio(kappa.value()); }
};

/// Prediction with increment observations only:
///   μ ← μ + κ_u/(κ_φ+κ_u) dU,   κ ← κ − ℱ(κ) dt / (2(κ_φ+κ_u)).
VonMisesBelief vm_increment_step(const VonMisesBelief& belief, double dU, const CircularModelParams& params);

/// Exact conjugate update with one observation z ~ VM(φ, α): natural
/// parameters add, θ ← θ + α (cos z, sin z).
VonMisesBelief vm_direct_update(const VonMisesBelief& belief, Angle z, double alpha);

/// Circular Kalman filter step: increment prediction followed, when z is
/// present, by the conjugate update with α from params.alpha_mode.
VonMisesBelief circkf_step(const VonMisesBelief& belief, double dU, std::optional<Angle> z,
                           const CircularModelParams& params);

/// κ dynamics of the Gaussian assumed-density benchmark.
enum class GaussAdfVariant {
  kVerbatim,  ///< dκ = −(1/(κ_φ+κ_u)) κ⁻² dt
  kDerived,   ///< dκ = −(1/(κ_φ+κ_u)) κ² dt, from d(1/σ²) = −σ⁻⁴ dσ²
};

GaussAdfVariant parse_gauss_variant(std::string_view name);
std::string_view to_string(GaussAdfVariant variant);

/// Gaussian posterior on the line mapped to the circle via κ ≈ 1/σ².
struct GaussAdfBelief {
  Angle mu;
  double kappa = 1.0;
  bool floored = false;  ///< set once κ has been clamped at kKappaFloor

  [[nodiscard]] double r() const { return bessel_ratio(kappa); }
};

GaussAdfBelief gauss_adf_step(const GaussAdfBelief& belief, double dU, std::optional<Angle> z,
                              const CircularModelParams& params, GaussAdfVariant variant);

}  // namespace circfilt
