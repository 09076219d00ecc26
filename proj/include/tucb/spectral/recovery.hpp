#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "tucb/common.hpp"
#include "tucb/spectral/moments.hpp"
#include "tucb/spectral/power_method.hpp"
#include "tucb/spectral/whitening.hpp"

namespace tucb {

/// Output of one spectral estimation pass.
struct SpectralModel {
  Vector eigenvalues;      // lambda_hat(theta)
  Matrix eigenvectors;     // m x m, columns v_hat(theta), sign-fixed
  Matrix recovered_means;  // m x K, rows mu_hat(theta), clamped to [0,1]
  double radius = 1.0;     // epsilon^j
  bool degenerate = false;
};

/// Row theta = lambda(theta) * B * v(theta), sign chosen so the row sums to a
/// nonnegative value, then clamped to [0,1].
inline Matrix recover_means(const TensorEigenpairs& pairs, const WhiteningMap& whitening) {
  if (pairs.vectors.rows() != whitening.b.cols() || pairs.vectors.cols() != pairs.values.size())
    throw std::invalid_argument("recover_means: eigenpairs and whitening map disagree on m");
  const auto m = pairs.values.size();
  Matrix out(m, whitening.b.rows());
  for (Eigen::Index t = 0; t < m; ++t) {
    Vector row = pairs.values(t) * (whitening.b * pairs.vectors.col(t));
    if (row.sum() < 0.0) row = -row;
    out.row(t) = row.cwiseMax(0.0).cwiseMin(1.0).transpose();
  }
  return out;
}

/// Whitening, tensor power method and inverse map on a set of moments.
inline SpectralModel estimate_models(const MomentEstimates& moments, std::size_t m,
                                     const PowerMethodOptions& opt = {}) {
  const WhiteningMap wm = whiten(moments, m);
  Tensor3 t_hat = multilinear_map(moments.m3, wm.w, wm.w, wm.w).symmetrized();
  TensorEigenpairs pairs = tensor_power_method(t_hat, m, opt);
  SpectralModel out;
  out.degenerate = pairs.degenerate;
  out.eigenvalues = pairs.values;
  out.eigenvectors = pairs.vectors;
  for (Eigen::Index t = 0; t < pairs.values.size(); ++t) {
    const Vector row = pairs.values(t) * (wm.b * pairs.vectors.col(t));
    if (row.sum() < 0.0) out.eigenvectors.col(t) *= -1.0;
  }
  pairs.vectors = out.eigenvectors;
  out.recovered_means = recover_means(pairs, wm);
  return out;
}

struct EpsilonParams {
  double c_theta = 2.0;
  std::size_t m = 1;
  std::size_t K = 1;
  std::size_t J = 1;
  double delta = 0.05;
};

/// epsilon^j = min(1, C sqrt(log(2 m K J / delta) / j)).
inline double epsilon_j(std::size_t j, const EpsilonParams& p) {
  if (j == 0) throw std::invalid_argument("epsilon_j: j must be >= 1");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw std::invalid_argument("epsilon_j: delta in (0,1)");
  const double arg = 2.0 * static_cast<double>(p.m) * static_cast<double>(p.K) *
                     static_cast<double>(p.J) / p.delta;
  return std::min(1.0, p.c_theta * std::sqrt(std::log(arg) / static_cast<double>(j)));
}

struct ModelMatch {
  std::vector<std::size_t> permutation;  // true row theta -> estimated row permutation[theta]
  double max_error = 0.0;
};

namespace detail {

inline bool has_matching_below(const Matrix& cost, double threshold,
                               std::vector<std::size_t>& assign) {
  const auto n = static_cast<std::size_t>(cost.rows());
  std::vector<long> owner(n, -1);  // estimated column -> true row
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<char> seen(n, 0);
    std::function<bool(std::size_t)> augment = [&](std::size_t row) {
      for (std::size_t c = 0; c < n; ++c) {
        if (seen[c] || cost(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) > threshold)
          continue;
        seen[c] = 1;
        if (owner[c] < 0 || augment(static_cast<std::size_t>(owner[c]))) {
          owner[c] = static_cast<long>(row);
          return true;
        }
      }
      return false;
    };
    if (!augment(r)) return false;
  }
  assign.assign(n, 0);
  for (std::size_t c = 0; c < n; ++c) assign[static_cast<std::size_t>(owner[c])] = c;
  return true;
}

}  // namespace detail

/// Permutation minimizing the largest Euclidean row error. Exhaustive for
/// m <= 9, bottleneck assignment above.
inline ModelMatch match_models(const Matrix& truth, const Matrix& estimated) {
  if (truth.rows() != estimated.rows() || truth.cols() != estimated.cols())
    throw std::invalid_argument("match_models: shape mismatch");
  const auto n = static_cast<std::size_t>(truth.rows());
  Matrix cost(truth.rows(), truth.rows());
  for (Eigen::Index a = 0; a < truth.rows(); ++a)
    for (Eigen::Index b = 0; b < truth.rows(); ++b)
      cost(a, b) = (truth.row(a) - estimated.row(b)).norm();

  ModelMatch best;
  if (n == 0) return best;
  if (n <= 9) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    best.max_error = std::numeric_limits<double>::infinity();
    do {
      double worst = 0.0;
      for (std::size_t t = 0; t < n && worst < best.max_error; ++t)
        worst = std::max(worst, cost(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(perm[t])));
      if (worst < best.max_error) {
        best.max_error = worst;
        best.permutation = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }

  std::vector<double> levels(cost.data(), cost.data() + cost.size());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::size_t lo = 0, hi = levels.size() - 1;
  std::vector<std::size_t> assign;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (detail::has_matching_below(cost, levels[mid], assign))
      hi = mid;
    else
      lo = mid + 1;
  }
  detail::has_matching_below(cost, levels[lo], assign);
  best.permutation = assign;
  best.max_error = levels[lo];
  return best;
}

}  // namespace tucb
