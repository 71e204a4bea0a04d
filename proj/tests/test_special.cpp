#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <vector>

#include "circfilt/errors.hpp"
#include "circfilt/special.hpp"
#include "doctest.h"

using namespace circfilt;
using std::numbers::pi;

namespace {

// Independent oracle: I₁/I₀ from long-double power series with a fixed,
// generous number of terms. Valid for κ up to ~40.
long double ratio_by_series(long double k) {
  const long double q = k * k / 4.0L;
  long double t0 = 1.0L, t1 = 1.0L, s0 = 1.0L, s1 = 1.0L;
  for (int n = 1; n < 400; ++n) {
    t0 *= q / (static_cast<long double>(n) * n);
    t1 *= q / (static_cast<long double>(n) * (n + 1));
    s0 += t0;
    s1 += t1;
  }
  return 0.5L * k * s1 / s0;
}

// Independent oracle for ξ⁻¹: plain bisection on x·F(x) using the series ratio.
double xi_inv_by_bisection(double y) {
  double lo = 0.0, hi = y + 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double value = mid < 40.0 ? static_cast<double>(mid * ratio_by_series(mid)) : mid * bessel_ratio(mid);
    (value < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("bessel_ratio matches high-precision reference values") {
  // Reference values from mpmath at 40 digits (tests/oracles/bessel_oracles.py).
  struct Ref {
    double kappa, value;
  };
  const std::vector<Ref> refs = {
      {1e-8, 4.9999999999999999375e-9},   {0.1, 0.04993760398793891942505493},
      {1.0, 0.4463899658965345070476818}, {2.0, 0.6977746579640079820067906},
      {5.0, 0.893383137044085221587005},  {10.0, 0.9485998259548459589713019},
      {14.999, 0.9660672588697952423585224}, {15.0, 0.9660695639865081247732459},
      {15.001, 0.9660718687896962282189426}, {30.0, 0.9831895553653360926874557},
      {50.0, 0.9899489673784977525926559}, {100.0, 0.9949873730051687655873646},
      {1000.0, 0.9994998748748042801989182}, {1e6, 0.9999994999998749998749998},
  };
  for (const auto& ref : refs) {
    CAPTURE(ref.kappa);
    CHECK(rel_err(bessel_ratio(ref.kappa), ref.value) <= 1e-12);
  }
}

TEST_CASE("bessel_ratio against long-double series oracle") {
  CHECK(bessel_ratio(0.0) == 0.0);
  CHECK(bessel_ratio(2.0) == doctest::Approx(0.697775).epsilon(1e-6));
  for (double k = 0.05; k < 40.0; k *= 1.07) {
    CAPTURE(k);
    CHECK(rel_err(bessel_ratio(k), static_cast<double>(ratio_by_series(k))) <= 1e-12);
  }
  // Both branches agree at the seam.
  const double below = std::nextafter(15.0, 0.0);
  CHECK(rel_err(bessel_ratio(below), bessel_ratio(15.0)) <= 1e-12);
}

TEST_CASE("bessel_ratio large-kappa asymptotics and monotonicity") {
  const double k = 1e6;
  CHECK(std::abs(bessel_ratio(k) - (1.0 - 1.0 / (2.0 * k))) <= 1e-9);
  double prev = 0.0;
  for (double kk = 1e-6; kk < 1e7; kk *= 1.3) {
    const double f = bessel_ratio(kk);
    CHECK(f > prev);
    CHECK(f < 1.0);
    prev = f;
  }
  CHECK(bessel_ratio(1e-6) / 1e-6 == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("bessel_ratio rejects bad input") {
  CHECK_THROWS_AS(bessel_ratio(-1.0), DomainError);
  CHECK_THROWS_AS(bessel_ratio(std::nan("")), DomainError);
  CHECK_THROWS_AS(bessel_ratio(INFINITY), DomainError);
}

TEST_CASE("bessel_ratio_slope across the asymptotic seam") {
  struct Ref {
    double kappa, value;
  };
  const std::vector<Ref> refs = {
      {0.01, 0.4999812505208208010595644}, {1.0, 0.3543460324503562527039302},
      {10.0, 0.005298387602951359026870764}, {49.999, 0.0002020707639879285421097399},
      {50.0, 0.0002020626386760374230437144}, {50.001, 0.0002020545138542586870894705},
      {100.0, 0.00005025383022147035725021474}, {1e4, 5.000250037507814531878936e-9},
      {1e6, 5.00000250000375000781252e-13},
  };
  for (const auto& ref : refs) {
    CAPTURE(ref.kappa);
    // Direct form 1 − F/κ − F² loses ~log10(1/slope) digits below the seam.
    CHECK(rel_err(bessel_ratio_slope(ref.kappa), ref.value) <= 1e-9);
  }
}

TEST_CASE("precision_decay limits and positivity") {
  CHECK(precision_decay(1e-4) / 1e-4 == doctest::Approx(1.0).epsilon(0.01));
  const double big = precision_decay(100.0) / (2.0 * 100.0 * 100.0);
  CHECK(big >= 0.98);
  CHECK(big <= 1.02);
  for (const double k : {0.01, 0.1, 1.0, 10.0, 1000.0}) CHECK(precision_decay(k) > 0.0);
  CHECK_THROWS_AS(precision_decay(0.0), DomainError);
  CHECK_THROWS_AS(precision_decay(-2.0), DomainError);
}

TEST_CASE("observation_information basics") {
  CHECK(observation_information(0.0) == 0.0);
  CHECK(observation_information(2.0) > observation_information(1.0));
  CHECK(observation_information(1.0) > observation_information(0.5));
  CHECK(observation_information(2.0) == doctest::Approx(1.395551).epsilon(1e-6));
  CHECK_THROWS_AS(observation_information(-0.1), DomainError);
}

TEST_CASE("observation_concentration inverts observation_information") {
  CHECK(observation_concentration(0.0) == 0.0);
  CHECK_THROWS_AS(observation_concentration(-1.0), DomainError);

  // mpmath reference roots.
  CHECK(rel_err(observation_concentration(2e-4), 0.0200005000104166145694224) <= 1e-12);
  CHECK(rel_err(observation_concentration(1.0), 1.608279471726879266944837) <= 1e-12);
  CHECK(rel_err(observation_concentration(100.0), 100.501256337660392648429) <= 1e-12);

  // Bisection oracle and the two limiting laws.
  CHECK(observation_concentration(2e-4) == doctest::Approx(xi_inv_by_bisection(2e-4)).epsilon(1e-10));
  CHECK(observation_concentration(2e-4) == doctest::Approx(0.02).epsilon(0.01));
  CHECK(observation_concentration(100.0) == doctest::Approx(xi_inv_by_bisection(100.0)).epsilon(1e-10));
  CHECK(observation_concentration(100.0) == doctest::Approx(100.5).epsilon(0.005));

  for (double y = 1e-8; y <= 1e6; y *= 1.5) {
    CAPTURE(y);
    const double x = observation_concentration(y);
    CHECK(std::abs(observation_information(x) - y) <= 1e-12 * std::max(1.0, y));
  }
  CHECK(observation_concentration(1e-10) / std::sqrt(2e-10) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(observation_concentration(1e7) / 1e7 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kappa_from_r inverts bessel_ratio") {
  CHECK(kappa_from_r(0.0) == 0.0);
  CHECK(std::abs(kappa_from_r(0.697775) - 2.0) <= 1e-5);
  CHECK(rel_err(kappa_from_r(0.697775), 2.000002082752580517649834) <= 1e-10);
  CHECK(rel_err(kappa_from_r(0.99), 50.25384740109973120751184) <= 1e-9);
  for (const double k : {0.1, 1.0, 10.0, 100.0}) {
    CAPTURE(k);
    CHECK(std::abs(kappa_from_r(bessel_ratio(k)) - k) <= 1e-8 * std::max(1.0, k));
  }
  for (double r = 0.001; r < 0.999999; r = 1.0 - (1.0 - r) * 0.8) {
    CHECK(std::abs(bessel_ratio(kappa_from_r(r)) - r) <= 1e-10);
  }
  CHECK_THROWS_AS(kappa_from_r(1.0), DomainError);
  CHECK_THROWS_AS(kappa_from_r(-0.1), DomainError);
}

TEST_CASE("log_bessel_i0 matches reference") {
  CHECK(std::log(kTwoPi) + log_bessel_i0(0.5) == doctest::Approx(1.899426785594826787501944).epsilon(1e-13));
  CHECK(std::log(kTwoPi) + log_bessel_i0(2.0) == doctest::Approx(2.661870607892301766491997).epsilon(1e-13));
  CHECK(std::log(kTwoPi) + log_bessel_i0(10.0) == doctest::Approx(9.780849149528041038055525).epsilon(1e-13));
  CHECK(std::isfinite(log_bessel_i0(1e5)));
}

TEST_CASE("wrap_radians") {
  CHECK(wrap_radians(2.0 * pi) == 0.0);
  CHECK(wrap_radians(-pi / 2.0) == doctest::Approx(3.0 * pi / 2.0).epsilon(1e-15));
  CHECK(wrap_radians(7.0 * pi) == doctest::Approx(pi).epsilon(1e-14));
  CHECK_THROWS_AS(wrap_radians(std::nan("")), DomainError);
  CHECK_THROWS_AS(Angle{std::numeric_limits<double>::infinity()}, DomainError);

  // Property: idempotent, in range, 2π-periodic up to rounding.
  CounterRng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double phi = (rng.uniform() - 0.5) * 200.0;
    const int k = static_cast<int>(rng() % 41) - 20;
    const double w = wrap_radians(phi);
    CHECK(w >= 0.0);
    CHECK(w < kTwoPi);
    CHECK(wrap_radians(w) == w);
    CHECK(std::abs(angle_difference(wrap_radians(phi + kTwoPi * k), w)) <= 1e-12);
  }
}

TEST_CASE("vm_sample: kappa = 0 is uniform (Kolmogorov–Smirnov)") {
  CounterRng rng(2024);
  const int n = 100000;
  std::vector<double> draws(n);
  for (auto& d : draws) d = vm_sample(Angle(0.3), Precision(0.0), rng).radians() / kTwoPi;
  std::sort(draws.begin(), draws.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    ks = std::max({ks, std::abs((i + 1.0) / n - draws[i]), std::abs(draws[i] - static_cast<double>(i) / n)});
  }
  CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));  // 1% critical value
}

TEST_CASE("vm_sample: first moment equals F(kappa)") {
  CounterRng rng(5);
  const int n = 1000000;
  std::vector<double> draws(n);
  for (auto& d : draws) d = vm_sample(Angle(1.0), Precision(5.0), rng).radians();
  const CircularMoment m = circular_moment(draws);
  CHECK(std::abs(m.r - bessel_ratio(5.0)) <= 0.005);
  CHECK(std::abs(angle_difference(m.mu.radians(), 1.0)) <= 0.01);
}

TEST_CASE("vm_sample: Gaussian limit for large kappa") {
  CounterRng rng(77);
  const int n = 200000;
  const double kappa = 1e4;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = angle_difference(vm_sample(Angle(2.0), Precision(kappa), rng).radians(), 2.0);
    sum2 += e * e;
  }
  CHECK(std::sqrt(sum2 / n) == doctest::Approx(1.0 / std::sqrt(kappa)).epsilon(0.05));
}

TEST_CASE("vm_sample is deterministic per stream") {
  CounterRng a(9), b(9);
  for (int i = 0; i < 100; ++i) {
    CHECK(vm_sample(Angle(0.0), Precision(3.0), a) == vm_sample(Angle(0.0), Precision(3.0), b));
  }
}

TEST_CASE("circular_moment") {
  const std::vector<double> two = {0.0, pi};
  const std::vector<double> half = {0.5, 0.5};
  const auto cancel = circular_moment(two, half);
  CHECK(cancel.r == 0.0);
  CHECK(cancel.mu.radians() == 0.0);

  const std::vector<double> one = {pi / 3.0};
  const std::vector<double> w1 = {1.0};
  const auto single = circular_moment(one, w1);
  CHECK(single.r == doctest::Approx(1.0));
  CHECK(single.mu.radians() == doctest::Approx(pi / 3.0));

  const std::vector<double> quad = {0.0, pi / 2.0};
  const auto diag = circular_moment(quad, half);
  CHECK(diag.r == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK(diag.mu.radians() == doctest::Approx(pi / 4.0).epsilon(1e-14));

  const std::vector<double> empty;
  CHECK_THROWS_AS(circular_moment(empty, empty), DomainError);
  const std::vector<double> bad = {0.5, 0.4};
  CHECK_THROWS_AS(circular_moment(quad, bad), DomainError);
}

TEST_CASE("Precision rejects invalid values") {
  CHECK_THROWS_AS(Precision(-1.0), DomainError);
  CHECK_THROWS_AS(Precision(std::nan("")), DomainError);
  CHECK(Precision(0.0).value() == 0.0);
}
