#include "circfilt/circular_filters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "circfilt/errors.hpp"

namespace circfilt {
namespace {

void require_finite_increment(double dU) {
  if (!std::isfinite(dU)) throw NumericError("non-finite increment observation");
}

}  // namespace

std::array<double, 2> VonMisesBelief::natural() const {
  const double k = kappa.value();
  return {k * std::cos(mu.radians()), k * std::sin(mu.radians())};
}

VonMisesBelief VonMisesBelief::from_natural(double theta_cos, double theta_sin) {
  const double k = std::hypot(theta_cos, theta_sin);
  if (k == 0.0) return {Angle{}, Precision(0.0)};
  return {Angle(std::atan2(theta_sin, theta_cos)), Precision(k)};
}

VonMisesBelief vm_increment_step(const VonMisesBelief& belief, double dU, const CircularModelParams& params) {
  require_finite_increment(dU);
  const double total = params.kappa_phi + params.kappa_u;
  const double kappa = std::max(belief.kappa.value(), kKappaFloor);
  const double next = kappa - precision_decay(kappa) * params.dt / (2.0 * total);
  return {belief.mu + params.increment_gain() * dU, Precision(std::max(next, kKappaFloor))};
}

VonMisesBelief vm_direct_update(const VonMisesBelief& belief, Angle z, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("vm_direct_update: alpha must be >= 0");
  const auto theta = belief.natural();
  const double updated_cos = theta[0] + alpha * std::cos(z.radians());
  const double updated_sin = theta[1] + alpha * std::sin(z.radians());
  const double k = std::hypot(updated_cos, updated_sin);
  // Exact cancellation leaves the direction undefined; keep the prior mean.
  if (k == 0.0) return {belief.mu, Precision(0.0)};
  return {Angle(std::atan2(updated_sin, updated_cos)), Precision(k)};
}

VonMisesBelief circkf_step(const VonMisesBelief& belief, double dU, std::optional<Angle> z,
                           const CircularModelParams& params) {
  VonMisesBelief predicted = vm_increment_step(belief, dU, params);
  if (!z || !params.kappa_z) return predicted;
  return vm_direct_update(predicted, *z, params.direct_alpha());
}

GaussAdfVariant parse_gauss_variant(std::string_view name) {
  if (name == "verbatim" || name == "gauss-adf-verbatim") return GaussAdfVariant::kVerbatim;
  if (name == "derived" || name == "gauss-adf-derived") return GaussAdfVariant::kDerived;
  throw ConfigError("unknown Gauss ADF variant '" + std::string(name) + "' (valid: verbatim, derived)");
}

std::string_view to_string(GaussAdfVariant variant) {
  return variant == GaussAdfVariant::kVerbatim ? "verbatim" : "derived";
}

GaussAdfBelief gauss_adf_step(const GaussAdfBelief& belief, double dU, std::optional<Angle> z,
                              const CircularModelParams& params, GaussAdfVariant variant) {
  require_finite_increment(dU);
  if (!(belief.kappa > 0.0)) throw DomainError("gauss_adf_step: kappa must be > 0");
  const double total = params.kappa_phi + params.kappa_u;
  const double k = belief.kappa;
  const double rate = variant == GaussAdfVariant::kVerbatim ? 1.0 / (k * k) : k * k;

  GaussAdfBelief out;
  out.mu = belief.mu + params.increment_gain() * dU;
  out.kappa = k - rate * params.dt / total;
  out.floored = belief.floored;
  if (!(out.kappa > kKappaFloor)) {
    out.kappa = kKappaFloor;
    out.floored = true;
  }
  if (z && params.kappa_z) {
    const VonMisesBelief updated =
        vm_direct_update({out.mu, Precision(out.kappa)}, *z, params.direct_alpha());
    out.mu = updated.mu;
    out.kappa = updated.kappa.value();
    if (out.kappa < kKappaFloor) {
      out.kappa = kKappaFloor;
      out.floored = true;
    }
  }
  return out;
}

}  // namespace circfilt
