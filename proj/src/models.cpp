#include "circfilt/models.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "circfilt/errors.hpp"

namespace circfilt {

AlphaMode parse_alpha_mode(std::string_view name) {
  if (name == "ideal") return AlphaMode::kIdeal;
  if (name == "sqrt") return AlphaMode::kSqrt;
  if (name == "sqrt-caption") return AlphaMode::kSqrtCaption;
  if (name == "linear") return AlphaMode::kLinear;
  throw ConfigError("unknown alpha mode '" + std::string(name) + "' (valid: ideal, sqrt, sqrt-caption, linear)");
}

std::string_view to_string(AlphaMode mode) {
  switch (mode) {
    case AlphaMode::kIdeal: return "ideal";
    case AlphaMode::kSqrt: return "sqrt";
    case AlphaMode::kSqrtCaption: return "sqrt-caption";
    case AlphaMode::kLinear: return "linear";
  }
  return "ideal";
}

double observation_alpha(double kappa_z, double delta, AlphaMode mode) {
  if (!(kappa_z >= 0.0) || !(delta > 0.0)) throw DomainError("observation_alpha: need kappa_z >= 0, delta > 0");
  const double information = kappa_z * delta;
  switch (mode) {
    case AlphaMode::kIdeal: return observation_concentration(information);
    case AlphaMode::kSqrt: return std::sqrt(2.0 * information);
    case AlphaMode::kSqrtCaption: return std::sqrt(information);
    case AlphaMode::kLinear: return information;
  }
  return 0.0;
}

void CircularModelParams::validate() const {
  if (!(kappa_phi > 0.0) || !std::isfinite(kappa_phi)) throw DomainError("kappa_phi must be > 0");
  if (!(kappa_u >= 0.0) || !std::isfinite(kappa_u)) throw DomainError("kappa_u must be >= 0");
  if (kappa_z && (!(*kappa_z >= 0.0) || !std::isfinite(*kappa_z))) throw DomainError("kappa_z must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be > 0");
  if (obs_stride < 1) throw DomainError("obs_stride must be >= 1");
}

double CircularModelParams::direct_alpha() const {
  if (!kappa_z) return 0.0;
  return observation_alpha(*kappa_z, obs_interval(), alpha_mode);
}

void LinearModelParams::validate() const {
  if (!(sigma_x2 > 0.0)) throw DomainError("sigma_x2 must be > 0");
  if (!(sigma_u2 >= 0.0)) throw DomainError("sigma_u2 must be >= 0");
  if (c == 0.0 || !std::isfinite(c)) throw DomainError("c must be finite and nonzero");
  if (!std::isfinite(a)) throw DomainError("a must be finite");
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
}

void ObservationHash::feed(double dU, std::optional<double> z) {
  auto put = [this](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    value_ = CounterRng::mix(value_ ^ bits);
  };
  put(dU);
  put(z ? *z : -1.0);
}

std::uint64_t TrajectoryRecord::checksum() const {
  ObservationHash h;
  for (std::size_t k = 0; k < dU.size(); ++k) h.feed(dU[k], z[k]);
  return h.value();
}

std::size_t step_count(double T, double dt) {
  if (!(dt > 0.0) || !(T >= dt * (1.0 - 1e-9))) throw DomainError("horizon T must be >= dt");
  return static_cast<std::size_t>(std::llround(T / dt));
}

Angle sample_direct_obs(Angle phi, double kappa_z, double delta, AlphaMode mode, CounterRng& rng) {
  return vm_sample(phi, Precision(observation_alpha(kappa_z, delta, mode)), rng);
}

TrajectoryRecord simulate_circular(const CircularModelParams& params, double T, std::uint64_t seed,
                                   const CircularSimOptions& options) {
  params.validate();
  if (options.increments && params.kappa_u == 0.0) {
    throw DomainError("simulate_circular: kappa_u = 0 gives infinite increment noise");
  }
  const std::size_t n = step_count(T, params.dt);
  const CounterRng root(seed);
  CounterRng state_rng = root.split("state");
  CounterRng increment_rng = root.split("increment");
  CounterRng direct_rng = root.split("direct");

  const double state_sd = options.static_state ? 0.0 : std::sqrt(params.dt / params.kappa_phi);
  const double noise_sd = options.increments ? std::sqrt(params.dt / params.kappa_u) : 0.0;
  const double alpha = params.direct_alpha();

  TrajectoryRecord rec;
  rec.circular = true;
  rec.t.resize(n + 1);
  rec.phi.resize(n + 1);
  rec.dU.assign(n + 1, 0.0);
  rec.z.assign(n + 1, std::nullopt);

  double phi = wrap_radians(options.phi0);
  rec.t[0] = 0.0;
  rec.phi[0] = phi;
  for (std::size_t k = 1; k <= n; ++k) {
    const double displacement = state_sd * state_rng.normal();
    phi = wrap_radians(phi + displacement);
    rec.t[k] = static_cast<double>(k) * params.dt;
    rec.phi[k] = phi;
    if (options.increments) rec.dU[k] = displacement + noise_sd * increment_rng.normal();
    if (params.kappa_z && k % static_cast<std::size_t>(params.obs_stride) == 0) {
      rec.z[k] = vm_sample(Angle(phi), Precision(alpha), direct_rng).radians();
    }
  }
  return rec;
}

TrajectoryRecord simulate_linear(const LinearModelParams& params, double x0, double T, std::uint64_t seed) {
  params.validate();
  const std::size_t n = step_count(T, params.dt);
  const CounterRng root(seed);
  CounterRng state_rng = root.split("state");
  CounterRng increment_rng = root.split("increment");
  const double state_sd = std::sqrt(params.sigma_x2 * params.dt);
  const double noise_sd = std::sqrt(params.sigma_u2 * params.dt);

  TrajectoryRecord rec;
  rec.circular = false;
  rec.t.resize(n + 1);
  rec.phi.resize(n + 1);
  rec.dU.assign(n + 1, 0.0);
  rec.z.assign(n + 1, std::nullopt);
  double x = x0;
  rec.phi[0] = x;
  for (std::size_t k = 1; k <= n; ++k) {
    const double dx = params.a * x * params.dt + state_sd * state_rng.normal();
    x += dx;
    rec.t[k] = static_cast<double>(k) * params.dt;
    rec.phi[k] = x;
    rec.dU[k] = params.c * dx + noise_sd * increment_rng.normal();
  }
  return rec;
}

namespace {

void put(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record,
                          const std::vector<std::string>& header_lines) {
  for (const auto& line : header_lines) out << "# " << line << '\n';
  out << "t,phi,dU,z\n";
  for (std::size_t k = 0; k < record.t.size(); ++k) {
    put(out, record.t[k]);
    out << ',';
    put(out, record.phi[k]);
    out << ',';
    put(out, record.dU[k]);
    out << ',';
    if (record.z[k]) put(out, *record.z[k]);
    out << '\n';
  }
  if (!out) throw IoError("failed writing trajectory CSV");
}

TrajectoryRecord read_trajectory_csv(std::istream& in, bool circular, std::vector<std::string>* header_lines) {
  TrajectoryRecord rec;
  rec.circular = circular;
  std::string line;
  bool seen_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (header_lines) header_lines->push_back(line.size() > 2 ? line.substr(2) : std::string{});
      continue;
    }
    if (!seen_header) {
      if (line.rfind("t,phi,dU,z", 0) != 0) throw IoError("trajectory CSV: missing 't,phi,dU,z' header");
      seen_header = true;
      continue;
    }
    std::stringstream row(line);
    std::string cell[4];
    for (int i = 0; i < 4; ++i) std::getline(row, cell[i], ',');
    try {
      rec.t.push_back(std::stod(cell[0]));
      rec.phi.push_back(std::stod(cell[1]));
      rec.dU.push_back(std::stod(cell[2]));
      rec.z.push_back(cell[3].empty() ? std::nullopt : std::optional<double>(std::stod(cell[3])));
    } catch (const std::exception&) {
      throw IoError("trajectory CSV: malformed row at line " + std::to_string(line_no));
    }
  }
  if (!seen_header || rec.t.empty()) throw IoError("trajectory CSV: no data rows");
  return rec;
}

}  // namespace circfilt
