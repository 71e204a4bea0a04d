#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "circfilt/circular_filters.hpp"
#include "circfilt/expfam.hpp"
#include "circfilt/linear_filters.hpp"
#include "circfilt/models.hpp"
#include "circfilt/particle.hpp"

namespace circfilt {

enum class ModelKind { kCircular, kLinear };

ModelKind parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind kind);

enum class FilterKind { kCircKf, kVmIncrement, kGaussAdf, kGkbf, kGvm, kPf };

struct FilterSpec {
  FilterKind kind = FilterKind::kCircKf;
  int order = 2;                ///< gvm only
  std::size_t particles = 0;    ///< pf only; 0 picks 10³ with direct observations, 10⁴ without

  /// Stable name used in output files, e.g. "circkf", "gvm(2)", "pf(1000)".
  [[nodiscard]] std::string label() const;
};

/// Accepts circkf, vm_increment, gauss_adf, gkbf, gvm, gvm(K), pf, pf(N).
FilterSpec parse_filter_spec(std::string_view text);

enum class InitMode {
  kPrior,  ///< φ₀ ~ VM(μ₀, κ₀) (x₀ ~ N(μ₀, σ₀²)) and every filter starts from that prior
  kTruth,  ///< filters start centred on the true φ₀ = μ₀ with concentration κ₀
};

InitMode parse_init_mode(std::string_view name);
std::string_view to_string(InitMode mode);

struct InitSpec {
  InitMode mode = InitMode::kPrior;
  double mu0 = 0.0;
  double kappa0 = 2.0;
  double sigma2_0 = 0.5;  ///< linear model
};

struct ExperimentConfig {
  ModelKind model = ModelKind::kCircular;
  CircularModelParams circular;
  bool increments = true;
  bool static_state = false;
  LinearModelParams linear;
  GkbfDenominator gkbf_denominator = GkbfDenominator::kConsistent;
  GaussAdfVariant gauss_variant = GaussAdfVariant::kVerbatim;
  int quad_points = kDefaultQuadPoints;
  std::vector<FilterSpec> filters;

  std::size_t runs = 2000;
  double T = 10.0;
  std::uint64_t seed = 1;
  int jobs = 0;                    ///< worker threads; 0 uses the OpenMP default
  std::size_t record_stride = 1;   ///< record every k-th step (the final step is always recorded)
  std::size_t trace_runs = 0;      ///< keep full per-run traces for the first n runs
  InitSpec init;

  [[nodiscard]] double dt() const { return model == ModelKind::kCircular ? circular.dt : linear.dt; }
  /// Throws ConfigError / DomainError on inconsistent settings.
  void validate() const;
  /// validate() without the checks on the filter list.
  void validate_model() const;
};

/// Per-filter statistics on the recorded time grid.
struct FilterSeries {
  std::string label;
  std::vector<double> r_mean;       ///< circular: mean estimated precision F(κ)
  std::vector<double> r_hat;        ///< circular: empirical precision
  std::vector<double> sigma2_mean;  ///< linear: mean filter variance
  std::vector<double> mse;          ///< linear: mean squared error of μ
  double wall_seconds = 0.0;        ///< summed over runs
  std::uint64_t stream_checksum = 0;  ///< hash of all observations the filter consumed
};

struct RunTrace {
  std::size_t run = 0;
  std::vector<double> phi;  ///< true state on the recorded grid
  std::vector<std::vector<double>> mu;      ///< per filter
  std::vector<std::vector<double>> spread;  ///< per filter: r (circular) or σ² (linear)
};

struct RunSummary {
  ModelKind model = ModelKind::kCircular;
  std::vector<double> t;
  std::vector<FilterSeries> filters;
  std::size_t runs_requested = 0;
  std::size_t runs_completed = 0;
  std::vector<std::string> failures;  ///< "run k: message", first few only
  std::vector<RunTrace> traces;

  [[nodiscard]] bool complete() const { return runs_completed == runs_requested; }
  /// Throws DomainError when no filter carries that label.
  [[nodiscard]] const FilterSeries& series(std::string_view label) const;
};

/// r̂ = |(1/M) Σ exp(i(μ_m − φ_m))|.
double empirical_precision(std::span<const double> mu, std::span<const double> phi);

/// Simulates `runs` independent trajectories and filters each with every
/// configured filter on the identical observation stream. Runs execute in
/// parallel; results are reduced in run order and do not depend on `jobs`.
RunSummary run_monte_carlo(const ExperimentConfig& config);

struct FilterTrace {
  std::vector<double> t;
  std::vector<double> mu;
  std::vector<double> spread;  ///< r (circular) or σ² (linear)
};

/// One filter over a recorded trajectory, read out at every step. The filter
/// starts at init.mu0 (prior mode) or at the recorded initial state (truth mode).
FilterTrace filter_trajectory(const ExperimentConfig& config, const FilterSpec& spec, const TrajectoryRecord& traj,
                              std::uint64_t seed);

enum class SweepParameter { kKappaU, kKappaZ, kDt };

SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter parameter);

struct SweepResult {
  SweepParameter parameter = SweepParameter::kKappaZ;
  std::vector<double> values;
  std::vector<RunSummary> summaries;
};

/// One run_monte_carlo per value, each with its own seed derived from config.seed.
SweepResult sweep(const ExperimentConfig& config, SweepParameter parameter, std::span<const double> values);

/// Seed used by sweep() for the i-th value.
std::uint64_t sweep_seed(std::uint64_t seed, std::size_t index);

struct TimingEntry {
  std::string label;
  std::vector<double> samples;  ///< seconds per full single-run filtering pass
  double median = 0.0;
};

struct TimingReport {
  std::vector<TimingEntry> entries;
  std::optional<double> circkf_to_pf;  ///< PF median / circKF median when both are configured

  [[nodiscard]] const TimingEntry& entry(std::string_view label) const;
};

/// Median wall-clock of `repeats` single-run passes per filter on one shared trajectory.
TimingReport timing_report(const ExperimentConfig& config, int repeats = 5);

}  // namespace circfilt
