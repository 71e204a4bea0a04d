#include "circfilt/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <omp.h>

#include "circfilt/errors.hpp"

namespace circfilt {
namespace {

constexpr std::size_t kRunBlock = 64;
constexpr std::size_t kMaxReportedFailures = 10;

using Clock = std::chrono::steady_clock;

struct FilterPass {
  std::vector<double> mu;
  std::vector<double> spread;
  std::uint64_t checksum = 0;
  double seconds = 0.0;
};

struct RunOutput {
  bool ok = false;
  std::string error;
  std::vector<double> phi;
  std::vector<FilterPass> passes;
};

std::vector<std::size_t> record_indices(std::size_t steps, std::size_t stride) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k <= steps; k += stride) idx.push_back(k);
  if (idx.back() != steps) idx.push_back(steps);
  return idx;
}

// Feeds the stream row by row, stepping the filter and reading it out on the recorded grid.
template <class Step, class Read>
FilterPass drive(const TrajectoryRecord& traj, std::span<const std::size_t> rec, Step&& step, Read&& read) {
  FilterPass pass;
  pass.mu.reserve(rec.size());
  pass.spread.reserve(rec.size());
  const auto start = Clock::now();
  ObservationHash hash;
  hash.feed(traj.dU[0], traj.z[0]);
  std::size_t next = 0;
  if (rec[0] == 0) {
    read(pass);
    next = 1;
  }
  for (std::size_t k = 1; k <= traj.steps(); ++k) {
    hash.feed(traj.dU[k], traj.z[k]);
    std::optional<Angle> z;
    if (traj.z[k]) z = Angle(*traj.z[k]);
    step(traj.dU[k], z);
    if (next < rec.size() && rec[next] == k) {
      read(pass);
      ++next;
    }
  }
  pass.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  pass.checksum = hash.value();
  return pass;
}

std::size_t particle_count(const FilterSpec& spec, const CircularModelParams& p) {
  if (spec.particles > 0) return spec.particles;
  return p.kappa_z ? 1000 : 10000;
}

FilterPass run_circular_filter(const FilterSpec& spec, const ExperimentConfig& cfg, const TrajectoryRecord& traj,
                               std::span<const std::size_t> rec, Angle mu0, double kappa0, CounterRng rng,
                               Execution exec) {
  const auto& p = cfg.circular;
  auto push = [](FilterPass& pass, double mu, double r) {
    pass.mu.push_back(mu);
    pass.spread.push_back(r);
  };
  switch (spec.kind) {
    case FilterKind::kCircKf:
    case FilterKind::kVmIncrement: {
      VonMisesBelief b{mu0, Precision(kappa0)};
      const bool direct = spec.kind == FilterKind::kCircKf;
      return drive(
          traj, rec,
          [&](double dU, std::optional<Angle> z) {
            b = direct ? circkf_step(b, dU, z, p) : vm_increment_step(b, dU, p);
          },
          [&](FilterPass& pass) { push(pass, b.mu.radians(), b.r()); });
    }
    case FilterKind::kGaussAdf: {
      GaussAdfBelief g{mu0, std::max(kappa0, kKappaFloor)};
      return drive(
          traj, rec, [&](double dU, std::optional<Angle> z) { g = gauss_adf_step(g, dU, z, p, cfg.gauss_variant); },
          [&](FilterPass& pass) { push(pass, g.mu.radians(), g.r()); });
    }
    case FilterKind::kGvm: {
      auto theta = GvmNaturalParams::from_von_mises({mu0, Precision(kappa0)}, spec.order);
      return drive(
          traj, rec,
          [&](double dU, std::optional<Angle> z) { theta = gvm_filter_step(theta, dU, z, p, cfg.quad_points); },
          [&](FilterPass& pass) {
            const auto m = gvm_moments(theta, cfg.quad_points);
            push(pass, std::atan2(m.eta_sin[0], m.eta_cos[0]), std::hypot(m.eta_cos[0], m.eta_sin[0]));
          });
    }
    case FilterKind::kPf: {
      auto ens = pf_init(particle_count(spec, p), PfInit::von_mises(mu0.radians(), kappa0), rng);
      return drive(
          traj, rec, [&](double dU, std::optional<Angle> z) { pf_step(ens, dU, z, p, rng, exec); },
          [&](FilterPass& pass) {
            const auto est = pf_estimate(ens, exec);
            push(pass, est.mu.radians(), est.r);
          });
    }
    case FilterKind::kGkbf:
      break;
  }
  throw ConfigError("filter " + spec.label() + " does not apply to the circular model");
}

FilterPass run_linear_filter(const FilterSpec& spec, const ExperimentConfig& cfg, const TrajectoryRecord& traj,
                             std::span<const std::size_t> rec, double mu0, double sigma2_0) {
  if (spec.kind != FilterKind::kGkbf) throw ConfigError("filter " + spec.label() + " does not apply to the linear model");
  GaussianBelief b{mu0, sigma2_0};
  return drive(
      traj, rec, [&](double dU, std::optional<Angle>) { b = gkbf_step(b, dU, cfg.linear, cfg.gkbf_denominator); },
      [&](FilterPass& pass) {
        pass.mu.push_back(b.mu);
        pass.spread.push_back(b.sigma2);
      });
}

// Everything one run needs, derived only from (seed, run index).
RunOutput execute_run(const ExperimentConfig& cfg, std::size_t run, std::span<const std::size_t> rec,
                      Execution exec = Execution::kSerial) {
  RunOutput out;
  try {
    const CounterRng stream = CounterRng(cfg.seed).split("run", run);
    const std::uint64_t sim_seed = stream.split("simulate").key();
    CounterRng init_rng = stream.split("init");
    TrajectoryRecord traj;
    double filter_mu0 = cfg.init.mu0;
    if (cfg.model == ModelKind::kCircular) {
      CircularSimOptions opt;
      opt.increments = cfg.increments;
      opt.static_state = cfg.static_state;
      opt.phi0 = cfg.init.mode == InitMode::kPrior
                     ? vm_sample(Angle(cfg.init.mu0), Precision(cfg.init.kappa0), init_rng).radians()
                     : cfg.init.mu0;
      traj = simulate_circular(cfg.circular, cfg.T, sim_seed, opt);
    } else {
      const double x0 = cfg.init.mode == InitMode::kPrior
                            ? cfg.init.mu0 + std::sqrt(cfg.init.sigma2_0) * init_rng.normal()
                            : cfg.init.mu0;
      traj = simulate_linear(cfg.linear, x0, cfg.T, sim_seed);
    }
    const std::uint64_t reference = traj.checksum();
    out.phi.reserve(rec.size());
    for (const auto k : rec) out.phi.push_back(traj.phi[k]);
    for (std::size_t f = 0; f < cfg.filters.size(); ++f) {
      const auto& spec = cfg.filters[f];
      FilterPass pass = cfg.model == ModelKind::kCircular
                            ? run_circular_filter(spec, cfg, traj, rec, Angle(filter_mu0), cfg.init.kappa0,
                                                  stream.split("filter", f), exec)
                            : run_linear_filter(spec, cfg, traj, rec, filter_mu0, cfg.init.sigma2_0);
      if (pass.checksum != reference) throw NumericError("filter " + spec.label() + " saw a different observation stream");
      out.passes.push_back(std::move(pass));
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
    out.passes.clear();
  }
  return out;
}

struct Accumulator {
  std::vector<double> a, b, c;  // circular: Σr, Σcos err, Σsin err; linear: Σσ², Σerr², unused
  double seconds = 0.0;
  std::uint64_t checksum = 0xcbf29ce484222325ULL;
};

}  // namespace

ModelKind parse_model_kind(std::string_view name) {
  if (name == "circular") return ModelKind::kCircular;
  if (name == "linear") return ModelKind::kLinear;
  throw ConfigError("unknown model kind '" + std::string(name) + "' (expected circular or linear)");
}

std::string_view to_string(ModelKind kind) { return kind == ModelKind::kCircular ? "circular" : "linear"; }

std::string FilterSpec::label() const {
  switch (kind) {
    case FilterKind::kCircKf: return "circkf";
    case FilterKind::kVmIncrement: return "vm_increment";
    case FilterKind::kGaussAdf: return "gauss_adf";
    case FilterKind::kGkbf: return "gkbf";
    case FilterKind::kGvm: return "gvm(" + std::to_string(order) + ")";
    case FilterKind::kPf: return particles > 0 ? "pf(" + std::to_string(particles) + ")" : "pf";
  }
  return "?";
}

FilterSpec parse_filter_spec(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  std::string_view name = text;
  std::optional<long long> arg;
  if (const auto open = text.find('('); open != std::string_view::npos) {
    if (text.back() != ')') throw ConfigError("malformed filter '" + std::string(text) + "'");
    name = trim(text.substr(0, open));
    const auto inner = trim(text.substr(open + 1, text.size() - open - 2));
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), v);
    if (ec != std::errc() || ptr != inner.data() + inner.size() || v < 1)
      throw ConfigError("filter '" + std::string(text) + "': argument must be a positive integer");
    arg = v;
  }
  FilterSpec spec;
  if (name == "circkf") spec.kind = FilterKind::kCircKf;
  else if (name == "vm_increment") spec.kind = FilterKind::kVmIncrement;
  else if (name == "gauss_adf") spec.kind = FilterKind::kGaussAdf;
  else if (name == "gkbf") spec.kind = FilterKind::kGkbf;
  else if (name == "gvm") spec.kind = FilterKind::kGvm;
  else if (name == "pf") spec.kind = FilterKind::kPf;
  else
    throw ConfigError("unknown filter '" + std::string(name) +
                      "' (valid: circkf, vm_increment, gauss_adf, gkbf, gvm(K), pf(N))");
  if (arg) {
    if (spec.kind == FilterKind::kGvm) {
      if (*arg > kMaxGvmOrder) throw ConfigError("gvm order is capped at " + std::to_string(kMaxGvmOrder));
      spec.order = static_cast<int>(*arg);
    } else if (spec.kind == FilterKind::kPf) {
      spec.particles = static_cast<std::size_t>(*arg);
    } else {
      throw ConfigError("filter '" + std::string(name) + "' takes no argument");
    }
  }
  return spec;
}

InitMode parse_init_mode(std::string_view name) {
  if (name == "prior") return InitMode::kPrior;
  if (name == "truth") return InitMode::kTruth;
  throw ConfigError("unknown init mode '" + std::string(name) + "' (expected prior or truth)");
}

std::string_view to_string(InitMode mode) { return mode == InitMode::kPrior ? "prior" : "truth"; }

void ExperimentConfig::validate_model() const {
  if (runs < 1) throw ConfigError("experiment.runs must be ≥ 1");
  if (record_stride < 1) throw ConfigError("experiment.record_stride must be ≥ 1");
  if (model == ModelKind::kCircular) {
    circular.validate();
    if (!increments && circular.kappa_u > 0.0)
      throw ConfigError("model.increments = false requires model.kappa_u = 0 (filters would weight absent increments)");
  } else {
    linear.validate();
  }
  step_count(T, dt());
  if (!(init.kappa0 >= 0.0) || !std::isfinite(init.kappa0)) throw ConfigError("init.kappa0 must be finite and ≥ 0");
  if (!(init.sigma2_0 > 0.0)) throw ConfigError("init.sigma2_0 must be positive");
}

void ExperimentConfig::validate() const {
  validate_model();
  if (filters.empty()) throw ConfigError("filters.list is empty");
  for (const auto& f : filters) {
    const bool linear_filter = f.kind == FilterKind::kGkbf;
    if (linear_filter != (model == ModelKind::kLinear))
      throw ConfigError("filter " + f.label() + " does not apply to the " + std::string(to_string(model)) + " model");
  }
}

const FilterSeries& RunSummary::series(std::string_view label) const {
  for (const auto& f : filters)
    if (f.label == label) return f;
  throw DomainError("no filter labelled '" + std::string(label) + "' in summary");
}

double empirical_precision(std::span<const double> mu, std::span<const double> phi) {
  if (mu.empty() || mu.size() != phi.size()) throw DomainError("empirical_precision: need equal nonzero lengths");
  double c = 0.0, s = 0.0;
  for (std::size_t m = 0; m < mu.size(); ++m) {
    c += std::cos(mu[m] - phi[m]);
    s += std::sin(mu[m] - phi[m]);
  }
  const double n = static_cast<double>(mu.size());
  return std::min(1.0, std::hypot(c / n, s / n));
}

RunSummary run_monte_carlo(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t steps = step_count(cfg.T, cfg.dt());
  const auto rec = record_indices(steps, cfg.record_stride);
  const std::size_t nf = cfg.filters.size();
  const bool circular = cfg.model == ModelKind::kCircular;

  std::vector<Accumulator> acc(nf);
  for (auto& a : acc) a.a = a.b = a.c = std::vector<double>(rec.size(), 0.0);

  RunSummary summary;
  summary.model = cfg.model;
  summary.runs_requested = cfg.runs;
  for (const auto k : rec) summary.t.push_back(static_cast<double>(k) * cfg.dt());

  const int threads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
  std::vector<RunOutput> block(kRunBlock);
  for (std::size_t first = 0; first < cfg.runs; first += kRunBlock) {
    const std::size_t count = std::min(kRunBlock, cfg.runs - first);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
      block[static_cast<std::size_t>(i)] = execute_run(cfg, first + static_cast<std::size_t>(i), rec);

    for (std::size_t i = 0; i < count; ++i) {
      RunOutput& run = block[i];
      if (!run.ok) {
        if (summary.failures.size() < kMaxReportedFailures)
          summary.failures.push_back("run " + std::to_string(first + i) + ": " + run.error);
        continue;
      }
      ++summary.runs_completed;
      for (std::size_t f = 0; f < nf; ++f) {
        const FilterPass& pass = run.passes[f];
        Accumulator& a = acc[f];
        for (std::size_t j = 0; j < rec.size(); ++j) {
          if (circular) {
            a.a[j] += pass.spread[j];
            a.b[j] += std::cos(pass.mu[j] - run.phi[j]);
            a.c[j] += std::sin(pass.mu[j] - run.phi[j]);
          } else {
            a.a[j] += pass.spread[j];
            a.b[j] += (pass.mu[j] - run.phi[j]) * (pass.mu[j] - run.phi[j]);
          }
        }
        a.seconds += pass.seconds;
        a.checksum = CounterRng::mix(a.checksum ^ pass.checksum);
      }
      if (first + i < cfg.trace_runs) {
        RunTrace trace;
        trace.run = first + i;
        trace.phi = std::move(run.phi);
        for (auto& pass : run.passes) {
          trace.mu.push_back(std::move(pass.mu));
          trace.spread.push_back(std::move(pass.spread));
        }
        summary.traces.push_back(std::move(trace));
      }
      run = RunOutput{};
    }
  }

  const double n = static_cast<double>(summary.runs_completed);
  for (std::size_t f = 0; f < nf; ++f) {
    FilterSeries s;
    s.label = cfg.filters[f].label();
    s.wall_seconds = acc[f].seconds;
    s.stream_checksum = acc[f].checksum;
    if (n > 0) {
      for (std::size_t j = 0; j < rec.size(); ++j) {
        if (circular) {
          s.r_mean.push_back(acc[f].a[j] / n);
          s.r_hat.push_back(std::min(1.0, std::hypot(acc[f].b[j], acc[f].c[j]) / n));
        } else {
          s.sigma2_mean.push_back(acc[f].a[j] / n);
          s.mse.push_back(acc[f].b[j] / n);
        }
      }
    }
    summary.filters.push_back(std::move(s));
  }
  return summary;
}

FilterTrace filter_trajectory(const ExperimentConfig& cfg, const FilterSpec& spec, const TrajectoryRecord& traj,
                              std::uint64_t seed) {
  if (traj.t.empty()) throw DomainError("filter: empty trajectory");
  if (traj.circular != (cfg.model == ModelKind::kCircular))
    throw ConfigError("filter: trajectory and model.kind disagree");
  const auto rec = record_indices(traj.steps(), 1);
  const double mu0 = cfg.init.mode == InitMode::kTruth ? traj.phi[0] : cfg.init.mu0;
  FilterPass pass = cfg.model == ModelKind::kCircular
                        ? run_circular_filter(spec, cfg, traj, rec, Angle(mu0), cfg.init.kappa0,
                                              CounterRng(seed).split("filter", 0), Execution::kParallel)
                        : run_linear_filter(spec, cfg, traj, rec, mu0, cfg.init.sigma2_0);
  return {traj.t, std::move(pass.mu), std::move(pass.spread)};
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "kappa_u") return SweepParameter::kKappaU;
  if (name == "kappa_z") return SweepParameter::kKappaZ;
  if (name == "dt") return SweepParameter::kDt;
  throw ConfigError("unknown sweep parameter '" + std::string(name) + "' (expected kappa_u, kappa_z or dt)");
}

std::string_view to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kKappaU: return "kappa_u";
    case SweepParameter::kKappaZ: return "kappa_z";
    case SweepParameter::kDt: return "dt";
  }
  return "?";
}

std::uint64_t sweep_seed(std::uint64_t seed, std::size_t index) { return CounterRng(seed).split("sweep", index).key(); }

SweepResult sweep(const ExperimentConfig& cfg, SweepParameter parameter, std::span<const double> values) {
  if (values.empty()) throw ConfigError("sweep: no values given");
  if (cfg.model != ModelKind::kCircular) throw ConfigError("sweep: only the circular model has sweepable parameters");
  SweepResult result;
  result.parameter = parameter;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig cell = cfg;
    cell.seed = sweep_seed(cfg.seed, i);
    switch (parameter) {
      case SweepParameter::kKappaU: cell.circular.kappa_u = values[i]; break;
      case SweepParameter::kKappaZ: cell.circular.kappa_z = values[i]; break;
      case SweepParameter::kDt: cell.circular.dt = values[i]; break;
    }
    result.values.push_back(values[i]);
    result.summaries.push_back(run_monte_carlo(cell));
  }
  return result;
}

const TimingEntry& TimingReport::entry(std::string_view label) const {
  for (const auto& e : entries)
    if (e.label == label) return e;
  throw DomainError("no timing entry labelled '" + std::string(label) + "'");
}

TimingReport timing_report(const ExperimentConfig& cfg, int repeats) {
  cfg.validate();
  if (repeats < 1) throw DomainError("timing: repeats must be ≥ 1");
  const std::size_t steps = step_count(cfg.T, cfg.dt());
  // Every step is read out, as a filter running online would.
  const auto rec = record_indices(steps, 1);
  TimingReport report;
  for (const auto& spec : cfg.filters) report.entries.push_back({spec.label(), {}, 0.0});
  ExperimentConfig single = cfg;
  for (int rep = 0; rep < repeats; ++rep) {
    for (std::size_t f = 0; f < cfg.filters.size(); ++f) {
      single.filters = {cfg.filters[f]};
      const RunOutput run = execute_run(single, 0, rec);
      if (!run.ok) throw NumericError("timing: " + cfg.filters[f].label() + " failed: " + run.error);
      report.entries[f].samples.push_back(run.passes[0].seconds);
    }
  }
  for (auto& e : report.entries) {
    std::vector<double> sorted = e.samples;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    e.median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  }
  const TimingEntry* kf = nullptr;
  const TimingEntry* pf = nullptr;
  for (std::size_t f = 0; f < cfg.filters.size(); ++f) {
    if (cfg.filters[f].kind == FilterKind::kCircKf && !kf) kf = &report.entries[f];
    if (cfg.filters[f].kind == FilterKind::kPf && !pf) pf = &report.entries[f];
  }
  if (kf && pf && kf->median > 0.0) report.circkf_to_pf = pf->median / kf->median;
  return report;
}

}  // namespace circfilt
