#include "circfilt/linear_filters.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "circfilt/errors.hpp"

namespace circfilt {

double gkbf_denominator(const LinearModelParams& p, GkbfDenominator mode) {
  const double den = mode == GkbfDenominator::kVerbatim ? p.c * p.sigma_x2 + p.sigma_u2 : p.effective_obs_variance();
  if (!(den > 0.0)) throw DomainError("gkbf: increment-noise denominator must be positive");
  return den;
}

double gkbf_gain(double sigma2, const LinearModelParams& p, GkbfDenominator mode) {
  return p.c * (p.a * sigma2 + p.sigma_x2) / gkbf_denominator(p, mode);
}

double gkbf_variance_rate(double sigma2, const LinearModelParams& p, GkbfDenominator mode) {
  const double s = p.a * sigma2 + p.sigma_x2;
  return 2.0 * p.a * sigma2 + p.sigma_x2 - p.c * p.c * s * s / gkbf_denominator(p, mode);
}

GaussianBelief gkbf_step(const GaussianBelief& b, double dU, const LinearModelParams& p, GkbfDenominator mode) {
  if (!(b.sigma2 > 0.0) || !std::isfinite(b.sigma2) || !std::isfinite(b.mu))
    throw DomainError("gkbf: belief must have finite mean and positive variance");
  if (!std::isfinite(dU)) throw NumericError("gkbf: non-finite increment");
  const double gain = gkbf_gain(b.sigma2, p, mode);
  GaussianBelief out;
  out.mu = b.mu + p.a * b.mu * p.dt + gain * (dU - p.a * p.c * b.mu * p.dt);
  out.sigma2 = b.sigma2 + gkbf_variance_rate(b.sigma2, p, mode) * p.dt;
  if (!(out.sigma2 > 0.0)) throw NumericError("gkbf: variance left the positive half-line; reduce dt");
  return out;
}

void MultiLinearParams::validate() const {
  const auto n = A.rows();
  const auto m = C.rows();
  if (n == 0 || A.cols() != n) throw DomainError("A must be square and non-empty");
  if (m == 0 || C.cols() != n) throw DomainError("C must be M×N with N = dim A");
  if (Sigma_x.rows() != n || Sigma_x.cols() != n) throw DomainError("Sigma_x must be N×N");
  if (Sigma_u.rows() != m || Sigma_u.cols() != m) throw DomainError("Sigma_u must be M×M");
  if (!Sigma_x.isApprox(Sigma_x.transpose()) || !Sigma_u.isApprox(Sigma_u.transpose()))
    throw DomainError("noise covariances must be symmetric");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  Eigen::LLT<Eigen::MatrixXd> llt(Sigma_u);
  if (llt.info() != Eigen::Success) throw DomainError("Sigma_u must be positive definite");
}

DiagGaussianBelief diag_gauss_step(const DiagGaussianBelief& b, const Eigen::VectorXd& dU,
                                   const MultiLinearParams& p) {
  const auto n = p.state_dim();
  if (b.mu.size() != n || b.sigma2.size() != n) throw DomainError("diag_gauss: belief dimension mismatch");
  if (dU.size() != p.obs_dim()) throw DomainError("diag_gauss: observation dimension mismatch");
  if ((b.sigma2.array() <= 0.0).any()) throw DomainError("diag_gauss: variances must be positive");

  const Eigen::MatrixXd S = p.C * p.Sigma_x * p.C.transpose() + p.Sigma_u;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
  if (ldlt.info() != Eigen::Success) throw NumericError("diag_gauss: C Sigma_x C^T + Sigma_u not factorizable");

  const Eigen::MatrixXd CA = p.C * p.A;
  const Eigen::MatrixXd S_inv_CA = ldlt.solve(CA);                   // Σ̃⁻¹CA
  const Eigen::MatrixXd S_inv_CSx = ldlt.solve(p.C * p.Sigma_x);     // Σ̃⁻¹CΣ_x
  const Eigen::MatrixXd Sx_Ct = p.Sigma_x * p.C.transpose();

  // Gain (Σ_x + diag(σ²)Aᵀ)CᵀΣ̃⁻¹ applied to the innovation.
  const Eigen::VectorXd innovation = dU - CA * b.mu * p.dt;
  const Eigen::MatrixXd pre_gain = p.Sigma_x + b.sigma2.asDiagonal() * p.A.transpose();
  const Eigen::VectorXd correction = pre_gain * (p.C.transpose() * ldlt.solve(innovation));

  const Eigen::VectorXd drift_lin = (p.A - Sx_Ct * S_inv_CA).diagonal();
  const Eigen::VectorXd drift_quad = (CA.transpose() * S_inv_CA).diagonal();
  const Eigen::VectorXd drift_const = (p.Sigma_x - Sx_Ct * S_inv_CSx).diagonal();

  DiagGaussianBelief out;
  out.mu = b.mu + p.A * b.mu * p.dt + correction;
  const Eigen::ArrayXd s2 = b.sigma2.array();
  out.sigma2 = (s2 + (2.0 * s2 * drift_lin.array() - s2 * s2 * drift_quad.array() + drift_const.array()) * p.dt)
                   .matrix();
  if ((out.sigma2.array() <= 0.0).any() || !out.sigma2.allFinite())
    throw NumericError("diag_gauss: variance left the positive half-line; reduce dt");
  return out;
}

void write_linear_trace(std::ostream& out, std::span<const std::string> header, std::span<const double> t,
                        std::span<const DiagGaussianBelief> beliefs) {
  if (t.size() != beliefs.size()) throw DomainError("trace: time and belief lengths differ");
  for (const auto& line : header) out << "# " << line << '\n';
  const auto n = beliefs.empty() ? 0 : beliefs.front().mu.size();
  out << 't';
  for (Eigen::Index i = 1; i <= n; ++i) out << ",mu_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) out << ",sigma2_" << i;
  out << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t k = 0; k < t.size(); ++k) {
    put(t[k]);
    for (Eigen::Index i = 0; i < n; ++i) out << ',', put(beliefs[k].mu[i]);
    for (Eigen::Index i = 0; i < n; ++i) out << ',', put(beliefs[k].sigma2[i]);
    out << '\n';
  }
  if (!out) throw IoError("trace: write failed");
}

}  // namespace circfilt
