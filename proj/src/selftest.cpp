#include "circfilt/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "circfilt/circular_filters.hpp"
#include "circfilt/expfam.hpp"
#include "circfilt/linear_filters.hpp"
#include "circfilt/rng.hpp"

namespace circfilt {

double conjugacy_grid_error(int cases, std::uint64_t seed) {
  constexpr int n = 1 << 14;
  const double h = kTwoPi / n;
  CounterRng rng(seed);
  std::vector<double> log_unnorm(n);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const double mu = kTwoPi * rng.uniform();
    const double kappa = 10.0 * rng.uniform();
    const double z = kTwoPi * rng.uniform();
    const double alpha = 10.0 * rng.uniform();
    const VonMisesBelief prior{Angle(mu), Precision(kappa)};
    const auto post = vm_direct_update(prior, Angle(z), alpha);
    for (int i = 0; i < n; ++i) log_unnorm[i] = kappa * std::cos(i * h - mu) + alpha * std::cos(z - i * h);
    const double peak = *std::max_element(log_unnorm.begin(), log_unnorm.end());
    double mass = 0.0;
    for (const double v : log_unnorm) mass += std::exp(v - peak) * h;
    for (int i = 0; i < n; ++i) {
      const double grid = std::exp(log_unnorm[i] - peak) / mass;
      const double param = std::exp(von_mises_log_density(i * h, post.mu.radians(), post.kappa.value()));
      worst = std::max(worst, std::abs(grid - param));
    }
  }
  return worst;
}

XiRoundTrip xi_round_trip(int points) {
  XiRoundTrip out;
  for (int i = 0; i < points; ++i) {
    const double y = std::pow(10.0, -8.0 + 14.0 * i / (points - 1));
    const double back = observation_information(observation_concentration(y));
    out.max_relative_error = std::max(out.max_relative_error, std::abs(back - y) / std::max(1.0, y));
  }
  out.small_ratio = observation_concentration(1e-6) / std::sqrt(2e-6);
  out.large_ratio = observation_concentration(1e4) / (1e4 + 0.5);
  return out;
}

ReductionError k1_reduction(std::uint64_t seed) {
  CircularModelParams p;
  p.kappa_phi = 1.0;
  p.kappa_u = 10.0;
  p.dt = 1e-3;
  CounterRng rng(seed);
  VonMisesBelief vm{Angle(0.3), Precision(2.0)};
  auto theta = GvmNaturalParams::from_von_mises(vm, 1);
  ReductionError err;
  const double du_sd = std::sqrt(p.dt / p.kappa_phi + p.dt / p.kappa_u);
  for (int k = 0; k < 1000; ++k) {
    const double du = du_sd * rng.normal();
    vm = vm_increment_step(vm, du, p);
    theta = gvm_step(theta, du, p);
    const auto back = theta.first_harmonic();
    err.max_mu = std::max(err.max_mu, std::abs(angle_difference(back.mu.radians(), vm.mu.radians())));
    err.max_relative_kappa =
        std::max(err.max_relative_kappa, std::abs(back.kappa.value() - vm.kappa.value()) / vm.kappa.value());
  }
  return err;
}

SteadyState gkbf_steady_state(double T) {
  LinearModelParams p;
  p.a = -1.0;
  p.c = 1.0;
  p.sigma_x2 = 1.0;
  p.sigma_u2 = 1.0;
  double lo = 1e-12, hi = 1e3;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gkbf_variance_rate(mid, p) > 0.0 ? lo : hi) = mid;
  }
  SteadyState s;
  s.root = 0.5 * (lo + hi);
  GaussianBelief b{0.0, 1.0};
  const auto steps = static_cast<long>(std::llround(T / p.dt));
  for (long k = 0; k < steps; ++k) b = gkbf_step(b, 0.0, p);
  s.sigma2 = b.sigma2;
  s.residual = std::abs(gkbf_variance_rate(b.sigma2, p));
  return s;
}

std::vector<SelftestLine> run_selftest() {
  std::vector<SelftestLine> lines;
  char buf[160];

  const double conj = conjugacy_grid_error(100, 1);
  std::snprintf(buf, sizeof buf, "max density error %.3g over 100 cases (limit 1e-8)", conj);
  lines.push_back({"conjugacy grid", conj <= 1e-8, buf});

  const auto xi = xi_round_trip(2001);
  const bool xi_ok = xi.max_relative_error <= 1e-12 && std::abs(xi.small_ratio - 1.0) <= 1e-3 &&
                     std::abs(xi.large_ratio - 1.0) <= 1e-3;
  std::snprintf(buf, sizeof buf, "round trip %.3g, small-y ratio %.6f, large-y ratio %.6f", xi.max_relative_error,
                xi.small_ratio, xi.large_ratio);
  lines.push_back({"xi round trip", xi_ok, buf});

  const auto k1 = k1_reduction(42);
  std::snprintf(buf, sizeof buf, "max |dmu| %.3g, max |dkappa|/kappa %.3g (limit 1e-3)", k1.max_mu,
                k1.max_relative_kappa);
  lines.push_back({"K=1 reduction", k1.max_mu <= 1e-3 && k1.max_relative_kappa <= 1e-3, buf});

  const auto ss = gkbf_steady_state(20.0);
  std::snprintf(buf, sizeof buf, "sigma2(20) %.12f, root %.12f, residual %.3g (limit 1e-6)", ss.sigma2, ss.root,
                ss.residual);
  lines.push_back({"gKBF steady state", ss.residual <= 1e-6, buf});
  return lines;
}

bool print_selftest(std::ostream& out, const std::vector<SelftestLine>& lines) {
  bool all = true;
  for (const auto& l : lines) {
    out << (l.passed ? "PASS  " : "FAIL  ") << l.name << ": " << l.detail << '\n';
    all = all && l.passed;
  }
  return all;
}

}  // namespace circfilt
