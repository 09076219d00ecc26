#pragma once

// Plain-loop reference computations used to check the library. Nothing here
// calls into tucb beyond data conversion.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

/// Reference model means: 5 models, 7 arms.
inline Rows reference_means() {
  return {{0.90, 0.75, 0.45, 0.55, 0.58, 0.61, 0.65},
          {0.75, 0.89, 0.45, 0.55, 0.58, 0.61, 0.65},
          {0.20, 0.23, 0.45, 0.35, 0.30, 0.18, 0.25},
          {0.34, 0.31, 0.45, 0.725, 0.33, 0.37, 0.47},
          {0.60, 0.50, 0.45, 0.35, 0.95, 0.90, 0.80}};
}

/// Published complexity values: rows are models, columns UCB, UCB+, mUCB.
inline Rows reference_complexity() {
  return {{22.31, 14.87, 2.33},
          {23.32, 15.58, 8.48},
          {33.91, 25.21, 2.08},
          {17.91, 11.17, 3.48},
          {35.41, 8.76, 0.0}};
}
inline std::vector<double> reference_complexity_avg() { return {26.57, 15.11, 3.27}; }

inline Rows to_rows(const Eigen::MatrixXd& m) {
  Rows r(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) r[a][b] = m(a, b);
  return r;
}

inline std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

/// 0: sum 1/gap over suboptimal arms; 1: same over arms optimal for some
/// model; 2: sum gap / (min model gap)^2 over optimistic arms.
inline double complexity(const Rows& mu, std::size_t bar, int kind) {
  const std::size_t m = mu.size(), K = mu[0].size();
  const std::size_t star = argmax(mu[bar]);
  const double top = mu[bar][star];
  std::vector<bool> optimal_somewhere(K, false);
  for (std::size_t t = 0; t < m; ++t) optimal_somewhere[argmax(mu[t])] = true;
  double total = 0.0;
  if (kind < 2) {
    for (std::size_t i = 0; i < K; ++i) {
      if (i == star || (kind == 1 && !optimal_somewhere[i])) continue;
      total += 1.0 / (top - mu[bar][i]);
    }
    return total;
  }
  for (std::size_t i = 0; i < K; ++i) {
    if (i == star) continue;
    double min_gamma = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t s = argmax(mu[t]);
      if (s == i && mu[t][s] >= top) min_gamma = std::min(min_gamma, std::abs(mu[t][i] - mu[bar][i]));
    }
    if (std::isfinite(min_gamma)) total += (top - mu[bar][i]) / (min_gamma * min_gamma);
  }
  return total;
}

inline double radius_mucb(double T, double m, double n, double delta) {
  return std::sqrt(std::log(m * n * n / delta) / (2.0 * T));
}
inline double radius_umucb(double T, double m, double K, double n, double delta) {
  return std::sqrt(std::log(2.0 * m * K * n * n / delta) / (2.0 * T));
}

/// Dense tensor as flat vector, index (a*d + b)*d + c.
struct Dense3 {
  std::size_t d = 0;
  std::vector<double> x;
  explicit Dense3(std::size_t dim) : d(dim), x(dim * dim * dim, 0.0) {}
  double& at(std::size_t a, std::size_t b, std::size_t c) { return x[(a * d + b) * d + c]; }
  double at(std::size_t a, std::size_t b, std::size_t c) const { return x[(a * d + b) * d + c]; }
};

inline Dense3 multilinear(const Dense3& A, const Rows& V1, const Rows& V2, const Rows& V3) {
  const std::size_t K = A.d, m = V1[0].size();
  Dense3 out(m);
  for (std::size_t i1 = 0; i1 < m; ++i1)
    for (std::size_t i2 = 0; i2 < m; ++i2)
      for (std::size_t i3 = 0; i3 < m; ++i3) {
        double s = 0.0;
        for (std::size_t j1 = 0; j1 < K; ++j1)
          for (std::size_t j2 = 0; j2 < K; ++j2)
            for (std::size_t j3 = 0; j3 < K; ++j3)
              s += A.at(j1, j2, j3) * V1[j1][i1] * V2[j2][i2] * V3[j3][i3];
        out.at(i1, i2, i3) = s;
      }
  return out;
}

inline Rows population_m2(const Rows& mu, const std::vector<double>& rho) {
  const std::size_t K = mu[0].size();
  Rows m2(K, std::vector<double>(K, 0.0));
  for (std::size_t t = 0; t < mu.size(); ++t)
    for (std::size_t a = 0; a < K; ++a)
      for (std::size_t b = 0; b < K; ++b) m2[a][b] += rho[t] * mu[t][a] * mu[t][b];
  return m2;
}

inline Dense3 population_m3(const Rows& mu, const std::vector<double>& rho) {
  const std::size_t K = mu[0].size();
  Dense3 m3(K);
  for (std::size_t t = 0; t < mu.size(); ++t)
    for (std::size_t a = 0; a < K; ++a)
      for (std::size_t b = 0; b < K; ++b)
        for (std::size_t c = 0; c < K; ++c) m3.at(a, b, c) += rho[t] * mu[t][a] * mu[t][b] * mu[t][c];
  return m3;
}

/// Smallest achievable max row distance over all permutations.
inline double best_matching_error(const Rows& truth, const Rows& est) {
  std::vector<std::size_t> perm(truth.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t t = 0; t < truth.size() && worst < best; ++t) {
      double s = 0.0;
      for (std::size_t i = 0; i < truth[t].size(); ++i) {
        const double d = truth[t][i] - est[perm[t]][i];
        s += d * d;
      }
      worst = std::max(worst, std::sqrt(s));
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
inline std::vector<double> jacobi_eigenvalues(Rows a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

}  // namespace oracle
