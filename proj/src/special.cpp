#include "circfilt/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "circfilt/errors.hpp"

namespace circfilt {
namespace {

// Below this the power series is used, above it the large-argument expansion.
constexpr double kSeriesLimit = 15.0;
// Above this, 1 − F/κ − F² comes from its own 1/κ expansion.
constexpr double kSlopeAsymptoticLimit = 50.0;
constexpr double kResultantNoise = 1e-14;

void require_finite_nonnegative(double x, const char* what) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError(std::string(what) + ": argument must be finite and >= 0, got " + std::to_string(x));
  }
}

struct SeriesSums {
  double i0;        // I₀(x)
  double i1_over;   // I₁(x) / (x/2)
};

// Power series of I₀ and I₁; all terms positive so there is no cancellation.
SeriesSums bessel_series(double x) {
  const double q = 0.25 * x * x;
  double t0 = 1.0;
  double t1 = 1.0;
  double s0 = 1.0;
  double s1 = 1.0;
  for (int k = 1; k < 200; ++k) {
    t0 *= q / (static_cast<double>(k) * k);
    t1 *= q / (static_cast<double>(k) * (k + 1));
    s0 += t0;
    s1 += t1;
    if (t0 < 1e-17 * s0 && t1 < 1e-17 * s1) break;
  }
  return {s0, s1};
}

// Scaled large-argument expansion: I_ν(x)·e^{−x}·√(2πx) = Σ (−1)^k a_k(ν) / x^k.
// Summed until the terms stop shrinking (optimal truncation of the asymptotic series).
double scaled_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// 1 − F/κ − F² = u²·Σ c_k u^k with u = 1/κ; exact rational coefficients.
constexpr std::array<double, 11> kSlopeCoefficients = {
    1.0 / 2.0,         1.0 / 4.0,         3.0 / 8.0,         25.0 / 32.0,
    65.0 / 32.0,       3219.0 / 512.0,    721.0 / 32.0,      375733.0 / 4096.0,
    214173.0 / 512.0,  276923875.0 / 131072.0, 23985071.0 / 2048.0,
};

double slope_asymptotic(double kappa) {
  const double u = 1.0 / kappa;
  double acc = 0.0;
  for (auto it = kSlopeCoefficients.rbegin(); it != kSlopeCoefficients.rend(); ++it) {
    acc = acc * u + *it;
  }
  return acc * u * u;
}

}  // namespace

double wrap_radians(double phi) {
  if (!std::isfinite(phi)) throw DomainError("wrap_radians: non-finite angle");
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_difference(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  if (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

Precision::Precision(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw DomainError("Precision must be finite and >= 0, got " + std::to_string(value));
  }
}

double bessel_ratio(double kappa) {
  require_finite_nonnegative(kappa, "bessel_ratio");
  if (kappa == 0.0) return 0.0;
  if (kappa < kSeriesLimit) {
    const SeriesSums s = bessel_series(kappa);
    return 0.5 * kappa * s.i1_over / s.i0;
  }
  return scaled_asymptotic(1, kappa) / scaled_asymptotic(0, kappa);
}

double bessel_ratio_slope(double kappa) {
  require_finite_nonnegative(kappa, "bessel_ratio_slope");
  if (kappa == 0.0) return 0.5;
  if (kappa > kSlopeAsymptoticLimit) return slope_asymptotic(kappa);
  const double f = bessel_ratio(kappa);
  return 1.0 - f / kappa - f * f;
}

double precision_decay(double kappa) {
  if (!std::isfinite(kappa) || kappa <= 0.0) {
    throw DomainError("precision_decay: kappa must be finite and > 0");
  }
  return bessel_ratio(kappa) / bessel_ratio_slope(kappa);
}

double observation_information(double alpha) {
  require_finite_nonnegative(alpha, "observation_information");
  return alpha * bessel_ratio(alpha);
}

double observation_concentration(double information) {
  require_finite_nonnegative(information, "observation_concentration");
  const double y = information;
  if (y == 0.0) return 0.0;

  // ξ(x) ≤ min(x, x²/2), so this lower end always satisfies ξ(lo) ≤ y.
  double lo = std::max(y, std::sqrt(2.0 * y));
  double width = 1.0 + 0.5 * lo;
  double hi = lo + width;
  while (observation_information(hi) < y) {
    lo = hi;
    width *= 2.0;
    hi = lo + width;
  }

  const double tol = 8.0 * std::numeric_limits<double>::epsilon() * y;
  double x = y < 1.0 ? std::sqrt(2.0 * y) : y + 0.5;
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = bessel_ratio(x);
    const double residual = x * f - y;
    if (std::abs(residual) <= tol) return x;
    if (residual < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double derivative = f + x * bessel_ratio_slope(x);
    double next = x - residual / derivative;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return next;
    x = next;
  }
  return x;
}

double kappa_from_r(double r) {
  if (!std::isfinite(r) || r < 0.0 || r >= 1.0) {
    throw DomainError("kappa_from_r: r must lie in [0, 1), got " + std::to_string(r));
  }
  if (r == 0.0) return 0.0;

  // F(κ) ≤ κ/2, so F(2r) ≤ r.
  double lo = 2.0 * r;
  double width = 1.0;
  double hi = lo + width;
  while (bessel_ratio(hi) < r) {
    lo = hi;
    width *= 2.0;
    hi = lo + width;
  }

  // Classical piecewise approximation as a starting point.
  double x;
  if (r < 0.53) {
    x = 2.0 * r + r * r * r + 5.0 * std::pow(r, 5) / 6.0;
  } else if (r < 0.85) {
    x = -0.4 + 1.39 * r + 0.43 / (1.0 - r);
  } else {
    x = 1.0 / (r * r * r - 4.0 * r * r + 3.0 * r);
  }
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double residual = bessel_ratio(x) - r;
    if (std::abs(residual) <= 1e-15) return x;
    if (residual < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - residual / bessel_ratio_slope(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return next;
    x = next;
  }
  return x;
}

double log_bessel_i0(double kappa) {
  require_finite_nonnegative(kappa, "log_bessel_i0");
  if (kappa < kSeriesLimit) return std::log(bessel_series(kappa).i0);
  return kappa - 0.5 * std::log(kTwoPi * kappa) + std::log(scaled_asymptotic(0, kappa));
}

double von_mises_log_density(double phi, double mu, double kappa) {
  return kappa * std::cos(phi - mu) - std::log(kTwoPi) - log_bessel_i0(kappa);
}

Angle vm_sample(Angle mu, Precision kappa, CounterRng& rng) {
  const double k = kappa.value();
  if (k == 0.0) return Angle(kTwoPi * rng.uniform());

  // Best & Fisher (1979). ρ is written without the τ − √(2τ) cancellation
  // so that small κ stays accurate.
  const double root = std::sqrt(1.0 + 4.0 * k * k);
  const double tau = 1.0 + root;
  const double rho = 2.0 * k * tau / ((root + 1.0) * (tau + std::sqrt(2.0 * tau)));
  const double s = (1.0 + rho * rho) / (2.0 * rho);

  double f = 0.0;
  for (;;) {
    const double z = std::cos(std::numbers::pi * rng.uniform());
    f = (1.0 + s * z) / (s + z);
    const double c = k * (s - f);
    const double u2 = rng.uniform();
    if (c * (2.0 - c) - u2 > 0.0) break;
    if (std::log(c / u2) + 1.0 - c >= 0.0) break;
  }
  const double theta = std::acos(std::clamp(f, -1.0, 1.0));
  return rng.uniform() > 0.5 ? mu + theta : mu - theta;
}

CircularMoment circular_moment(std::span<const double> angles, std::span<const double> weights) {
  if (angles.empty()) throw DomainError("circular_moment: empty input");
  if (angles.size() != weights.size()) throw DomainError("circular_moment: angles/weights size mismatch");
  double total = 0.0;
  double c = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0)) throw DomainError("circular_moment: negative weight");
    total += w;
    c += w * std::cos(angles[i]);
    s += w * std::sin(angles[i]);
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("circular_moment: weights must sum to 1");
  const double r = std::min(1.0, std::hypot(c, s));
  // Below rounding noise the direction is meaningless.
  if (r < kResultantNoise) return {0.0, Angle{}};
  return {r, Angle(std::atan2(s, c))};
}

CircularMoment circular_moment(std::span<const double> angles) {
  if (angles.empty()) throw DomainError("circular_moment: empty input");
  double c = 0.0;
  double s = 0.0;
  for (const double a : angles) {
    c += std::cos(a);
    s += std::sin(a);
  }
  const double n = static_cast<double>(angles.size());
  const double r = std::min(1.0, std::hypot(c, s) / n);
  if (r < kResultantNoise) return {0.0, Angle{}};
  return {r, Angle(std::atan2(s, c))};
}

}  // namespace circfilt
