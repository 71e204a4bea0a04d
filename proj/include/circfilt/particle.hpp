#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circfilt/models.hpp"
#include "circfilt/rng.hpp"
#include "circfilt/special.hpp"

namespace circfilt {

/// Kernel selection. Both variants produce bit-identical ensembles.
enum class Execution { kSerial, kParallel };

struct PfInit {
  enum class Kind { kUniform, kVonMises, kPoint };
  Kind kind = Kind::kUniform;
  double mu = 0.0;
  double kappa = 0.0;

  static PfInit uniform() { return {}; }
  static PfInit von_mises(double mu, double kappa) { return {Kind::kVonMises, mu, kappa}; }
  static PfInit point(double phi) { return {Kind::kPoint, phi, 0.0}; }
};

/// Weighted particle approximation of the circular posterior.
/// Angles live in [0, 2π); log_weights are normalized (log-sum-exp = 0) and
/// `weights` holds their exponentials.
struct ParticleEnsemble {
  std::vector<double> angles;
  std::vector<double> log_weights;
  std::vector<double> weights;
  double ess = 0.0;

  [[nodiscard]] std::size_t size() const { return angles.size(); }
};

ParticleEnsemble pf_init(std::size_t n, const PfInit& init, CounterRng& rng);

struct PfStepInfo {
  double ess_before_resampling = 0.0;
  bool resampled = false;
};

/// Propagate through N(φ + κ_u/(κ_φ+κ_u) dU, dt/(κ_φ+κ_u)) mod 2π, reweight
/// with the von Mises likelihood of z, and resample systematically when
/// ESS < N/2. Consumes exactly one draw of `rng`.
void pf_step(ParticleEnsemble& ens, double dU, std::optional<Angle> z, const CircularModelParams& params,
             CounterRng& rng, Execution exec = Execution::kSerial, PfStepInfo* info = nullptr);

struct PfEstimate {
  Angle mu;
  double r = 0.0;
  double kappa = 0.0;
  bool capped = false;  ///< r within 1e-12 of 1; κ reported at that bound
};

PfEstimate pf_estimate(const ParticleEnsemble& ens, Execution exec = Execution::kSerial);

/// Raw kernels, exposed for benchmarks and the serial/parallel equivalence tests.
namespace kernels {
void propagate_serial(std::span<double> angles, double shift, double spread, std::uint64_t key);
void propagate_parallel(std::span<double> angles, double shift, double spread, std::uint64_t key);
void reweight_serial(std::span<double> log_weights, std::span<const double> angles, double z, double alpha);
void reweight_parallel(std::span<double> log_weights, std::span<const double> angles, double z, double alpha);
/// Σ w cos φ, Σ w sin φ accumulated in fixed blocks so both variants round identically.
std::pair<double, double> resultant_serial(std::span<const double> angles, std::span<const double> weights);
std::pair<double, double> resultant_parallel(std::span<const double> angles, std::span<const double> weights);
}  // namespace kernels

/// CSV columns angle,weight for debugging.
void write_ensemble_csv(std::ostream& out, std::span<const std::string> header, const ParticleEnsemble& ens);

}  // namespace circfilt
