#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace circfilt {

/// Largest pointwise gap between the conjugate von Mises update and a
/// brute-force grid product (2^14 points), over `cases` random priors/observations.
double conjugacy_grid_error(int cases, std::uint64_t seed);

struct XiRoundTrip {
  double max_relative_error = 0.0;  ///< |ξ(ξ⁻¹(y)) − y| / max(1, y) over the log grid
  double small_ratio = 0.0;         ///< ξ⁻¹(1e-6) / √(2e-6)
  double large_ratio = 0.0;         ///< ξ⁻¹(1e4) / (1e4 + ½)
};

/// Log grid of `points` values on [1e-8, 1e6].
XiRoundTrip xi_round_trip(int points);

struct ReductionError {
  double max_mu = 0.0;              ///< largest |Δμ| along the path
  double max_relative_kappa = 0.0;  ///< largest |Δκ|/κ along the path
};

/// Generalized von Mises engine at K = 1 against the closed-form filter on a
/// shared increment path: μ₀ = 0.3, κ₀ = 2, κ_φ = 1, κ_u = 10, T = 1, Δt = 1e-3.
ReductionError k1_reduction(std::uint64_t seed);

struct SteadyState {
  double sigma2 = 0.0;    ///< variance after integrating to t = 20
  double root = 0.0;      ///< stationary root from bisection
  double residual = 0.0;  ///< |variance ODE right-hand side| at sigma2
};

/// Scalar Kalman–Bucy variance at a = −1, c = σ_x² = σ_u² = 1, Δt = 0.01.
SteadyState gkbf_steady_state(double T);

struct SelftestLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SelftestLine> run_selftest();

/// Prints one PASS/FAIL line per suite; returns true when all pass.
bool print_selftest(std::ostream& out, const std::vector<SelftestLine>& lines);

}  // namespace circfilt
