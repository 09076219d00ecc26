#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "tucb/model_set.hpp"
#include "tucb/spectral/moments.hpp"
#include "tucb/spectral/power_method.hpp"
#include "tucb/spectral/whitening.hpp"

namespace tucb {

/// Universal constants that the sample-complexity results leave unspecified.
struct DiagnosticsConfig {
  double c3 = 1.0;
  double c4 = 1.0;
  double delta = 0.05;
};

struct SpectrumDiagnostics {
  Vector top_eigenvalues;  // sigma_1 >= ... >= sigma_m of M2
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double gamma_sigma = 0.0;  // 0 when the top-m eigenvalues are all equal
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double mu_max = 0.0;
  double c_theta = 0.0;       // C(Theta); infinite when gamma_sigma = 0
  double min_episodes = 0.0;  // minimum-sample condition, rounded up
  bool degenerate_spectrum = false;
};

/// Throws AssumptionViolation unless the mean vectors are linearly
/// independent and every rho(theta) > 0.
inline void check_identifiability(const ModelSet& set) {
  for (Eigen::Index t = 0; t < set.rho().size(); ++t)
    if (!(set.rho()(t) > 0.0))
      throw AssumptionViolation("rho(theta_" + std::to_string(t) + ") is zero");
  if (set.num_models() > set.num_arms())
    throw AssumptionViolation("more models than arms: mean vectors cannot be independent");
  Eigen::JacobiSVD<Matrix> svd(set.means());
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= 1e-10 * std::max(1.0, s(0)))
    throw AssumptionViolation("mean vectors are linearly dependent");
}

inline SpectrumDiagnostics spectrum_diagnostics(const ModelSet& set,
                                                const DiagnosticsConfig& cfg = {}) {
  check_identifiability(set);
  const std::size_t m = set.num_models();
  const double K = static_cast<double>(set.num_arms());
  const double md = static_cast<double>(m);
  const MomentEstimates pop = population_moments(set);
  const TopEigen top = top_eigenpairs(pop.m2, m);

  SpectrumDiagnostics d;
  d.top_eigenvalues = top.values;
  d.sigma_max = top.values.maxCoeff();
  d.sigma_min = top.values.minCoeff();
  const double same = 1e-12 * std::max(1.0, d.sigma_max);
  d.gamma_sigma = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < top.values.size(); ++a)
    for (Eigen::Index b = a + 1; b < top.values.size(); ++b) {
      const double gap = std::abs(top.values(a) - top.values(b));
      if (gap > same) d.gamma_sigma = std::min(d.gamma_sigma, gap);
    }
  if (!std::isfinite(d.gamma_sigma)) {
    d.gamma_sigma = 0.0;
    d.degenerate_spectrum = true;
  }

  d.lambda_max = 0.0;
  d.lambda_min = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < set.rho().size(); ++t) {
    const double lam = 1.0 / std::sqrt(set.rho()(t));
    d.lambda_max = std::max(d.lambda_max, lam);
    d.lambda_min = std::min(d.lambda_min, lam);
  }
  d.mu_max = set.means().rowwise().norm().maxCoeff();

  const double smin = d.sigma_min, smax = d.sigma_max;
  d.c_theta = d.degenerate_spectrum
                  ? std::numeric_limits<double>::infinity()
                  : cfg.c3 * d.lambda_max * std::sqrt(smax / (smin * smin * smin)) *
                        (smax / d.gamma_sigma + 1.0 / smin + 1.0 / smax);
  const double gap_term = std::min(smin, d.gamma_sigma);
  d.min_episodes = gap_term > 0.0
                       ? std::ceil(cfg.c4 * std::pow(md, 5) * std::pow(K, 6) *
                                   std::log(K / cfg.delta) /
                                   (gap_term * gap_term * smin * smin * smin *
                                    d.lambda_min * d.lambda_min))
                       : std::numeric_limits<double>::infinity();
  return d;
}

struct MomentErrorReport {
  double eps2 = 0.0;        // ||M2_hat - M2|| (spectral)
  double eps3 = 0.0;        // ||M3_hat - M3|| (lower estimate)
  double eps_tensor = 0.0;  // ||T - T_hat|| (lower estimate)
  double eps_bound_rhs = 0.0;
  bool condition_holds = false;  // eps2 <= min(gamma_sigma, sigma_min) / 2

  /// The deterministic bound is only claimed under the precondition.
  bool bound_satisfied() const { return !condition_holds || eps_tensor <= eps_bound_rhs; }
};

struct AuditOptions {
  std::size_t restarts = 32;
  std::size_t iterations = 256;
  std::uint64_t seed = 0;
};

/// Compares empirical moments with the population moments of `set` and
/// evaluates the perturbation bound on the whitened tensor.
inline MomentErrorReport moment_error_audit(const ModelSet& set, const MomentEstimates& moments,
                                            std::size_t m, const AuditOptions& opt = {}) {
  if (moments.num_arms() != set.num_arms())
    throw std::invalid_argument("moment_error_audit: K mismatch");
  const SpectrumDiagnostics diag = spectrum_diagnostics(set);
  const MomentEstimates pop = population_moments(set);

  MomentErrorReport r;
  const Matrix e2 = moments.m2 - pop.m2;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (e2 + e2.transpose()), Eigen::EigenvaluesOnly);
  r.eps2 = es.eigenvalues().cwiseAbs().maxCoeff();
  const Tensor3 e3 = (moments.m3 - pop.m3).symmetrized();
  r.eps3 = tensor_norm_estimate(e3, opt.restarts, opt.iterations, derive_seed(opt.seed, 3));

  const WhiteningMap w_true = whiten(pop.m2, m);
  try {
    WhiteningMap w_hat = whiten(moments.m2, m);
    for (Eigen::Index c = 0; c < w_hat.u.cols(); ++c)
      if (w_hat.u.col(c).dot(w_true.u.col(c)) < 0.0) {
        w_hat.u.col(c) *= -1.0;
        w_hat.w.col(c) *= -1.0;
        w_hat.b.col(c) *= -1.0;
      }
    const Tensor3 t_true = multilinear_map(pop.m3, w_true.w, w_true.w, w_true.w);
    const Tensor3 t_hat = multilinear_map(moments.m3, w_hat.w, w_hat.w, w_hat.w);
    r.eps_tensor = tensor_norm_estimate((t_true - t_hat).symmetrized(), opt.restarts,
                                        opt.iterations, derive_seed(opt.seed, 4));
  } catch (const RankDeficientError&) {
    r.eps_tensor = std::numeric_limits<double>::infinity();
  }

  const double md = static_cast<double>(m);
  const double smin = diag.sigma_min;
  const double inv_gap = diag.gamma_sigma > 0.0 ? 1.0 / diag.gamma_sigma
                                                 : std::numeric_limits<double>::infinity();
  r.eps_bound_rhs = std::pow(md / smin, 1.5) *
                    (10.0 * r.eps2 * (inv_gap + 1.0 / smin) *
                         (r.eps3 + diag.mu_max * diag.mu_max * diag.mu_max) +
                     r.eps3);
  if (std::isnan(r.eps_bound_rhs)) r.eps_bound_rhs = std::numeric_limits<double>::infinity();
  r.condition_holds = r.eps2 <= 0.5 * std::min(diag.gamma_sigma, smin);
  return r;
}

}  // namespace tucb
