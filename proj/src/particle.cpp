#include "circfilt/particle.hpp"

#include <algorithm>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "circfilt/errors.hpp"

namespace circfilt {
namespace {

constexpr std::size_t kBlock = 1024;
constexpr double kRCap = 1.0 - 1e-12;

// Angles move by a few standard deviations per step; fall back to fmod otherwise.
inline double wrap_fast(double x) {
  if (x >= kTwoPi) x -= kTwoPi;
  else if (x < 0.0) x += kTwoPi;
  if (x >= 0.0 && x < kTwoPi) return x;
  return wrap_radians(x);
}

// Per-particle bit source so the draws of particle j do not depend on which
// thread runs it. The ziggurat sampler consumes a variable number of slots.
struct ParticleBits {
  using result_type = std::uint64_t;
  std::uint64_t key;
  std::uint64_t counter = 0;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return CounterRng::bits_at(key, counter++); }
};

inline void propagate_one(std::span<double> angles, std::size_t j, double shift, double spread, std::uint64_t key) {
  ParticleBits bits{CounterRng::bits_at(key, j)};
  boost::random::normal_distribution<double> normal;
  angles[j] = wrap_fast(angles[j] + shift + spread * normal(bits));
}

inline std::pair<double, double> block_resultant(std::span<const double> angles, std::span<const double> weights,
                                                 std::size_t block) {
  const std::size_t lo = block * kBlock;
  const std::size_t hi = std::min(angles.size(), lo + kBlock);
  double c = 0.0, s = 0.0;
  for (std::size_t j = lo; j < hi; ++j) {
    c += weights[j] * std::cos(angles[j]);
    s += weights[j] * std::sin(angles[j]);
  }
  return {c, s};
}

// Normalizes log-weights in place, refreshes the linear weights and the ESS.
void normalize(ParticleEnsemble& ens) {
  const double peak = *std::max_element(ens.log_weights.begin(), ens.log_weights.end());
  if (!std::isfinite(peak)) throw DegeneracyError("particle filter: all weights vanished (max log-weight not finite)");
  double mass = 0.0;
  for (const double lw : ens.log_weights) mass += std::exp(lw - peak);
  const double shift = peak + std::log(mass);
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < ens.size(); ++j) {
    ens.log_weights[j] -= shift;
    ens.weights[j] = std::exp(ens.log_weights[j]);
    sum_sq += ens.weights[j] * ens.weights[j];
  }
  ens.ess = 1.0 / sum_sq;
}

void resample_systematic(ParticleEnsemble& ens, double u) {
  const std::size_t n = ens.size();
  std::vector<double> picked(n);
  double cumulative = ens.weights[0];
  std::size_t src = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = (static_cast<double>(i) + u) / static_cast<double>(n);
    while (target > cumulative && src + 1 < n) cumulative += ens.weights[++src];
    picked[i] = ens.angles[src];
  }
  ens.angles = std::move(picked);
  const double lw = -std::log(static_cast<double>(n));
  std::fill(ens.log_weights.begin(), ens.log_weights.end(), lw);
  std::fill(ens.weights.begin(), ens.weights.end(), 1.0 / static_cast<double>(n));
  ens.ess = static_cast<double>(n);
}

}  // namespace

namespace kernels {

void propagate_serial(std::span<double> angles, double shift, double spread, std::uint64_t key) {
  for (std::size_t j = 0; j < angles.size(); ++j) propagate_one(angles, j, shift, spread, key);
}

void propagate_parallel(std::span<double> angles, double shift, double spread, std::uint64_t key) {
  const auto n = static_cast<std::ptrdiff_t>(angles.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) propagate_one(angles, static_cast<std::size_t>(j), shift, spread, key);
}

void reweight_serial(std::span<double> log_weights, std::span<const double> angles, double z, double alpha) {
  for (std::size_t j = 0; j < angles.size(); ++j) log_weights[j] += alpha * std::cos(z - angles[j]);
}

void reweight_parallel(std::span<double> log_weights, std::span<const double> angles, double z, double alpha) {
  const auto n = static_cast<std::ptrdiff_t>(angles.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) log_weights[j] += alpha * std::cos(z - angles[j]);
}

std::pair<double, double> resultant_serial(std::span<const double> angles, std::span<const double> weights) {
  const std::size_t blocks = (angles.size() + kBlock - 1) / kBlock;
  double c = 0.0, s = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto [bc, bs] = block_resultant(angles, weights, b);
    c += bc;
    s += bs;
  }
  return {c, s};
}

std::pair<double, double> resultant_parallel(std::span<const double> angles, std::span<const double> weights) {
  const std::size_t blocks = (angles.size() + kBlock - 1) / kBlock;
  std::vector<std::pair<double, double>> partial(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b)
    partial[static_cast<std::size_t>(b)] = block_resultant(angles, weights, static_cast<std::size_t>(b));
  double c = 0.0, s = 0.0;
  for (const auto& [bc, bs] : partial) {
    c += bc;
    s += bs;
  }
  return {c, s};
}

}  // namespace kernels

ParticleEnsemble pf_init(std::size_t n, const PfInit& init, CounterRng& rng) {
  if (n < 1) throw DomainError("particle filter: need at least one particle");
  ParticleEnsemble ens;
  ens.angles.resize(n);
  switch (init.kind) {
    case PfInit::Kind::kUniform:
      for (auto& a : ens.angles) a = wrap_radians(kTwoPi * rng.uniform());
      break;
    case PfInit::Kind::kVonMises:
      for (auto& a : ens.angles) a = vm_sample(Angle(init.mu), Precision(init.kappa), rng).radians();
      break;
    case PfInit::Kind::kPoint:
      std::fill(ens.angles.begin(), ens.angles.end(), wrap_radians(init.mu));
      break;
  }
  ens.log_weights.assign(n, -std::log(static_cast<double>(n)));
  ens.weights.assign(n, 1.0 / static_cast<double>(n));
  ens.ess = static_cast<double>(n);
  return ens;
}

void pf_step(ParticleEnsemble& ens, double dU, std::optional<Angle> z, const CircularModelParams& params,
             CounterRng& rng, Execution exec, PfStepInfo* info) {
  if (ens.size() == 0) throw DomainError("particle filter: empty ensemble");
  if (!std::isfinite(dU)) throw NumericError("particle filter: non-finite increment");
  const std::uint64_t step_tag = rng();
  const CounterRng step = rng.split(step_tag);
  const double total = params.kappa_phi + params.kappa_u;
  const double shift = params.increment_gain() * dU;
  const double spread = std::sqrt(params.dt / total);

  if (exec == Execution::kParallel) kernels::propagate_parallel(ens.angles, shift, spread, step.key());
  else kernels::propagate_serial(ens.angles, shift, spread, step.key());

  if (z && params.kappa_z) {
    const double alpha = params.direct_alpha();
    if (exec == Execution::kParallel) kernels::reweight_parallel(ens.log_weights, ens.angles, z->radians(), alpha);
    else kernels::reweight_serial(ens.log_weights, ens.angles, z->radians(), alpha);
    normalize(ens);
  }

  if (info) {
    info->ess_before_resampling = ens.ess;
    info->resampled = false;
  }
  if (ens.ess < 0.5 * static_cast<double>(ens.size())) {
    resample_systematic(ens, CounterRng::uniform_at(step.split("resample").key(), 0));
    if (info) info->resampled = true;
  }
}

PfEstimate pf_estimate(const ParticleEnsemble& ens, Execution exec) {
  if (ens.size() == 0) throw DomainError("particle filter: empty ensemble");
  const auto [c, s] = exec == Execution::kParallel ? kernels::resultant_parallel(ens.angles, ens.weights)
                                                   : kernels::resultant_serial(ens.angles, ens.weights);
  PfEstimate est;
  est.r = std::min(1.0, std::hypot(c, s));
  if (est.r < 1e-14) {
    est.r = 0.0;
    return est;
  }
  est.mu = Angle(std::atan2(s, c));
  if (est.r >= kRCap) {
    est.capped = true;
    est.kappa = kappa_from_r(kRCap);
  } else {
    est.kappa = kappa_from_r(est.r);
  }
  return est;
}

void write_ensemble_csv(std::ostream& out, std::span<const std::string> header, const ParticleEnsemble& ens) {
  for (const auto& line : header) out << "# " << line << '\n';
  out << "angle,weight\n";
  char buf[64];
  for (std::size_t j = 0; j < ens.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", ens.angles[j], ens.weights[j]);
    out << buf;
  }
  if (!out) throw IoError("ensemble: write failed");
}

}  // namespace circfilt
