#include "circfilt/expfam.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "circfilt/errors.hpp"

namespace circfilt {
namespace {

void check_quad_points(int n) {
  if (n < 64 || (n & (n - 1)) != 0) throw DomainError("quad_points must be a power of two ≥ 64");
}

// Sufficient statistics T_j(φ_i) on the quadrature grid, columns (cos 1φ..cos Kφ, sin 1φ..sin Kφ).
Eigen::MatrixXd statistics_table(int order, int n) {
  Eigen::MatrixXd t(n, 2 * order);
  const double h = kTwoPi / n;
  for (int i = 0; i < n; ++i) {
    for (int k = 1; k <= order; ++k) {
      t(i, k - 1) = std::cos(k * i * h);
      t(i, order + k - 1) = std::sin(k * i * h);
    }
  }
  return t;
}

struct Quadrature {
  Eigen::MatrixXd table;
  Eigen::VectorXd weights;  // normalized density × h
  double logZ = 0.0;
};

Quadrature integrate(const GvmNaturalParams& theta, int n) {
  theta.validate();
  check_quad_points(n);
  Quadrature q;
  q.table = statistics_table(theta.order(), n);
  const Eigen::VectorXd s = q.table * theta.flat();
  const double peak = s.maxCoeff();
  if (!std::isfinite(peak)) throw NumericError("gvm: log-density not finite; parameters overflow");
  q.weights = (s.array() - peak).exp().matrix();
  const double mass = q.weights.sum();
  if (!(mass > 0.0) || !std::isfinite(mass)) throw NumericError("gvm: normalizer overflow");
  q.weights /= mass;
  q.logZ = peak + std::log(mass * kTwoPi / n);
  return q;
}

GvmMoments to_moments(const Quadrature& q, int order) {
  const Eigen::VectorXd eta = q.table.transpose() * q.weights;
  GvmMoments m;
  m.eta_cos.assign(eta.data(), eta.data() + order);
  m.eta_sin.assign(eta.data() + order, eta.data() + 2 * order);
  m.logZ = q.logZ;
  return m;
}

Eigen::MatrixXd to_fisher(const Quadrature& q) {
  const Eigen::VectorXd eta = q.table.transpose() * q.weights;
  Eigen::MatrixXd g = q.table.transpose() * q.weights.asDiagonal() * q.table;
  g.noalias() -= eta * eta.transpose();
  return 0.5 * (g + g.transpose());
}

// Parameter increment G⁻¹(v_dt dt + v_dU dU) at θ.
Eigen::VectorXd increment(const GvmNaturalParams& theta, double dU, const CircularModelParams& p, int n,
                          double& condition) {
  const int order = theta.order();
  const Quadrature q = integrate(theta, n);
  const Eigen::VectorXd eta = q.table.transpose() * q.weights;
  const Eigen::MatrixXd g = to_fisher(q);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) throw ConditioningError("gvm: Fisher metric is not positive definite");
  condition = std::max(condition, hi / lo);
  if (hi / lo > kGvmConditionLimit)
    throw ConditioningError("gvm: Fisher metric condition number " + std::to_string(hi / lo) + " exceeds limit");

  const double total = p.kappa_phi + p.kappa_u;
  const double gain = p.increment_gain();
  Eigen::VectorXd v(2 * order);
  for (int k = 1; k <= order; ++k) {
    const double ec = eta[k - 1];
    const double es = eta[order + k - 1];
    v[k - 1] = -k * k * ec * p.dt / (2.0 * total) - gain * k * es * dU;
    v[order + k - 1] = -k * k * es * p.dt / (2.0 * total) + gain * k * ec * dU;
  }
  return g.ldlt().solve(v);
}

}  // namespace

void GvmNaturalParams::validate() const {
  if (a.empty() || a.size() != b.size()) throw DomainError("gvm: a and b must have equal nonzero length");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!std::isfinite(a[k]) || !std::isfinite(b[k])) throw DomainError("gvm: parameters must be finite");
}

Eigen::VectorXd GvmNaturalParams::flat() const {
  Eigen::VectorXd v(2 * a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    v[static_cast<Eigen::Index>(k)] = a[k];
    v[static_cast<Eigen::Index>(a.size() + k)] = b[k];
  }
  return v;
}

GvmNaturalParams GvmNaturalParams::from_flat(const Eigen::VectorXd& theta) {
  if (theta.size() == 0 || theta.size() % 2 != 0) throw DomainError("gvm: flat parameter vector must have even length");
  const auto k = theta.size() / 2;
  GvmNaturalParams out;
  out.a.assign(theta.data(), theta.data() + k);
  out.b.assign(theta.data() + k, theta.data() + 2 * k);
  return out;
}

GvmNaturalParams GvmNaturalParams::from_von_mises(const VonMisesBelief& belief, int order) {
  if (order < 1) throw DomainError("gvm: order must be ≥ 1");
  GvmNaturalParams out;
  out.a.assign(static_cast<std::size_t>(order), 0.0);
  out.b.assign(static_cast<std::size_t>(order), 0.0);
  const auto nat = belief.natural();
  out.a[0] = nat[0];
  out.b[0] = nat[1];
  return out;
}

VonMisesBelief GvmNaturalParams::first_harmonic() const {
  validate();
  return VonMisesBelief::from_natural(a[0], b[0]);
}

Eigen::VectorXd GvmMoments::flat() const {
  Eigen::VectorXd v(2 * eta_cos.size());
  for (std::size_t k = 0; k < eta_cos.size(); ++k) {
    v[static_cast<Eigen::Index>(k)] = eta_cos[k];
    v[static_cast<Eigen::Index>(eta_cos.size() + k)] = eta_sin[k];
  }
  return v;
}

GvmMoments gvm_moments(const GvmNaturalParams& theta, int quad_points) {
  return to_moments(integrate(theta, quad_points), theta.order());
}

Eigen::MatrixXd gvm_fisher(const GvmNaturalParams& theta, int quad_points) {
  return to_fisher(integrate(theta, quad_points));
}

GvmNaturalParams gvm_step(const GvmNaturalParams& theta, double dU, const CircularModelParams& params,
                          int quad_points, GvmStepInfo* info) {
  if (!std::isfinite(dU)) throw NumericError("gvm: non-finite increment");
  double condition = 1.0;
  const Eigen::VectorXd x0 = theta.flat();
  const Eigen::VectorXd f0 = increment(theta, dU, params, quad_points, condition);
  const Eigen::VectorXd f1 = increment(GvmNaturalParams::from_flat(x0 + f0), dU, params, quad_points, condition);
  if (info) info->condition = condition;
  return GvmNaturalParams::from_flat(x0 + 0.5 * (f0 + f1));
}

GvmNaturalParams gvm_direct_update(const GvmNaturalParams& theta, Angle z, double alpha) {
  theta.validate();
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("gvm: alpha must be finite and non-negative");
  GvmNaturalParams out = theta;
  out.a[0] += alpha * std::cos(z.radians());
  out.b[0] += alpha * std::sin(z.radians());
  return out;
}

GvmNaturalParams gvm_filter_step(const GvmNaturalParams& theta, double dU, std::optional<Angle> z,
                                 const CircularModelParams& params, int quad_points) {
  GvmNaturalParams out = gvm_step(theta, dU, params, quad_points);
  if (z && params.kappa_z) out = gvm_direct_update(out, *z, params.direct_alpha());
  return out;
}

void write_gvm_density_csv(std::ostream& out, std::span<const std::string> header, const GvmNaturalParams& theta,
                           int grid_points, int quad_points) {
  if (grid_points < 1) throw DomainError("gvm: grid_points must be positive");
  const double logZ = gvm_moments(theta, quad_points).logZ;
  for (const auto& line : header) out << "# " << line << '\n';
  out << "phi,density\n";
  char buf[64];
  for (int i = 0; i < grid_points; ++i) {
    const double phi = kTwoPi * i / grid_points;
    double s = -logZ;
    for (int k = 1; k <= theta.order(); ++k)
      s += theta.a[k - 1] * std::cos(k * phi) + theta.b[k - 1] * std::sin(k * phi);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", phi, std::exp(s));
    out << buf;
  }
  if (!out) throw IoError("gvm density: write failed");
}

}  // namespace circfilt
