#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circfilt/rng.hpp"
#include "circfilt/special.hpp"

namespace circfilt {

/// How a direct observation's concentration α is derived from the
/// information rate κ_z and the sampling interval δ.
enum class AlphaMode {
  kIdeal,        ///< α = ξ⁻¹(κ_z δ): constant information rate for every δ
  kSqrt,         ///< α = √(2 κ_z δ): small-δ limit of the ideal rule
  kSqrtCaption,  ///< α = √(κ_z δ)
  kLinear,       ///< α = κ_z δ: Gaussian (large κ_z δ) approximation
};

AlphaMode parse_alpha_mode(std::string_view name);
std::string_view to_string(AlphaMode mode);

/// Concentration of one direct observation taken after an interval `delta`.
double observation_alpha(double kappa_z, double delta, AlphaMode mode);

/// Circular diffusion dφ = κ_φ^{-1/2} dW observed through increments
/// dU = dφ + κ_u^{-1/2} dV and, optionally, direct von Mises observations.
struct CircularModelParams {
  double kappa_phi = 1.0;
  double kappa_u = 10.0;
  std::optional<double> kappa_z;  ///< absent: no direct observations
  double dt = 0.01;
  int obs_stride = 1;             ///< direct observation every obs_stride steps
  AlphaMode alpha_mode = AlphaMode::kIdeal;

  void validate() const;
  [[nodiscard]] double obs_interval() const { return obs_stride * dt; }
  /// Concentration of each direct observation under alpha_mode (0 if absent).
  [[nodiscard]] double direct_alpha() const;
  /// Weight κ_u/(κ_φ+κ_u) given to each observed increment.
  [[nodiscard]] double increment_gain() const { return kappa_u / (kappa_phi + kappa_u); }
};

/// dX = a X dt + σ_x dW,  dU = c dX + σ_u dV.
struct LinearModelParams {
  double a = -1.0;
  double c = 1.0;
  double sigma_x2 = 1.0;
  double sigma_u2 = 1.0;
  double dt = 0.01;

  void validate() const;
  /// σ̃_u² = c²σ_x² + σ_u², total variance rate of the increment channel.
  [[nodiscard]] double effective_obs_variance() const { return c * c * sigma_x2 + sigma_u2; }
};

struct CircularSimOptions {
  double phi0 = 0.0;
  bool increments = true;     ///< false: no increment channel, dU ≡ 0
  bool static_state = false;  ///< hold φ fixed at phi0 (filters still assume diffusion)
};

/// Running hash of an observation stream, one (dU, z) row at a time.
class ObservationHash {
 public:
  void feed(double dU, std::optional<double> z);
  [[nodiscard]] std::uint64_t value() const { return value_; }

 private:
  std::uint64_t value_ = 0xcbf29ce484222325ULL;
};

/// One simulated path. Row 0 is the initial state (dU = 0, no z).
struct TrajectoryRecord {
  bool circular = true;
  std::vector<double> t;
  std::vector<double> phi;  ///< wrapped into [0, 2π) when circular
  std::vector<double> dU;
  std::vector<std::optional<double>> z;

  [[nodiscard]] std::size_t steps() const { return t.empty() ? 0 : t.size() - 1; }
  /// ObservationHash over every (dU, z) row.
  [[nodiscard]] std::uint64_t checksum() const;
};

/// Number of Euler–Maruyama steps for horizon T; throws unless T ≥ dt.
std::size_t step_count(double T, double dt);

TrajectoryRecord simulate_circular(const CircularModelParams& params, double T, std::uint64_t seed,
                                   const CircularSimOptions& options = {});

TrajectoryRecord simulate_linear(const LinearModelParams& params, double x0, double T, std::uint64_t seed);

/// Z ~ VM(φ, α(κ_z δ)).
Angle sample_direct_obs(Angle phi, double kappa_z, double delta, AlphaMode mode, CounterRng& rng);

/// CSV with columns t,phi,dU,z. Each header line is written as "# <line>".
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record,
                          const std::vector<std::string>& header_lines = {});

/// Parses write_trajectory_csv output. Comment lines are returned through
/// `header_lines` (without the leading "# ") when non-null.
TrajectoryRecord read_trajectory_csv(std::istream& in, bool circular = true,
                                     std::vector<std::string>* header_lines = nullptr);

}  // namespace circfilt
