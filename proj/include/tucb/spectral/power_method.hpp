#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "tucb/common.hpp"
#include "tucb/spectral/tensor.hpp"

namespace tucb {

struct PowerMethodOptions {
  std::size_t restarts = 64;     // L
  std::size_t iterations = 256;  // N
  double tolerance = 1e-12;      // early stop on successive iterates
  std::uint64_t seed = 0;
  double symmetry_tolerance = 1e-8;
};

/// Eigenpairs in extraction order. `degenerate` is set when the (residual)
/// tensor had no positive component left; such slots carry lambda = 0 and an
/// arbitrary orthonormal completion.
struct TensorEigenpairs {
  Vector values;
  Matrix vectors;  // columns
  bool degenerate = false;
};

namespace detail {

struct PowerRun {
  Vector v;
  double lambda = -std::numeric_limits<double>::infinity();
};

inline Vector random_unit(std::size_t dim, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(dim));
  double norm = 0.0;
  while (norm == 0.0) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    norm = v.norm();
  }
  return v / norm;
}

/// v <- T(I,v,v) / ||T(I,v,v)|| until successive iterates differ by < tol.
inline PowerRun power_iterate(const Tensor3& t, Vector v, std::size_t iterations, double tol) {
  for (std::size_t n = 0; n < iterations; ++n) {
    Vector next = t.contract_two(v);
    const double norm = next.norm();
    if (!(norm > 0.0)) return {v, 0.0};
    next /= norm;
    const double diff = (next - v).norm();
    v = std::move(next);
    if (diff < tol) break;
  }
  const double lambda = t.evaluate(v, v, v);
  return {v, lambda};
}

inline void complete_orthonormal(Matrix& vectors, Eigen::Index filled) {
  const auto dim = vectors.rows();
  Eigen::Index col = filled;
  for (Eigen::Index e = 0; e < dim && col < vectors.cols(); ++e) {
    Vector cand = Vector::Unit(dim, e);
    for (Eigen::Index c = 0; c < col; ++c) cand -= vectors.col(c).dot(cand) * vectors.col(c);
    const double norm = cand.norm();
    if (norm > 1e-8) vectors.col(col++) = cand / norm;
  }
}

}  // namespace detail

/// Robust tensor power method with deflation on a symmetric m x m x m tensor:
/// for each component, L random restarts of the power iteration, keep the
/// restart with the largest T(v,v,v), refine it for N more iterations and
/// deflate T <- T - lambda v(x)v(x)v.
inline TensorEigenpairs tensor_power_method(const Tensor3& t, std::size_t m,
                                            const PowerMethodOptions& opt = {}) {
  if (opt.restarts < 1 || opt.iterations < 1)
    throw std::invalid_argument("tensor_power_method: restarts and iterations must be >= 1");
  if (m == 0 || m > t.dim())
    throw std::invalid_argument("tensor_power_method: m must lie in [1, dim]");
  if (t.asymmetry() > opt.symmetry_tolerance)
    throw std::invalid_argument("tensor_power_method: input tensor is not symmetric");

  const auto mm = static_cast<Eigen::Index>(m);
  const auto dim = static_cast<Eigen::Index>(t.dim());
  TensorEigenpairs out{Vector::Zero(mm), Matrix::Zero(dim, mm), false};
  Rng rng(opt.seed);
  Tensor3 residual = t;

  for (Eigen::Index k = 0; k < mm; ++k) {
    detail::PowerRun best;
    if (residual.max_abs() > 0.0) {
      for (std::size_t r = 0; r < opt.restarts; ++r) {
        auto run = detail::power_iterate(residual, detail::random_unit(t.dim(), rng),
                                         opt.iterations, opt.tolerance);
        // odd order: negative lambda at a non-fixed point is spurious
        if (run.lambda > best.lambda) best = std::move(run);
      }
    }
    if (!(best.lambda > 0.0)) {
      out.degenerate = true;
      detail::complete_orthonormal(out.vectors, k);
      return out;
    }
    best = detail::power_iterate(residual, best.v, opt.iterations, opt.tolerance);
    if (!(best.lambda > 0.0)) {
      out.degenerate = true;
      detail::complete_orthonormal(out.vectors, k);
      return out;
    }
    out.values(k) = best.lambda;
    out.vectors.col(k) = best.v;
    residual.add_outer(-best.lambda, best.v, best.v, best.v);
  }
  return out;
}

/// Lower estimate of the operator norm sup_{|u|=1} |T(u,u,u)| of a symmetric
/// tensor: the largest |T(v,v,v)| visited by restarted power iterations.
inline double tensor_norm_estimate(const Tensor3& t, std::size_t restarts = 32,
                                   std::size_t iterations = 256, std::uint64_t seed = 0) {
  if (t.dim() == 0) return 0.0;
  Rng rng(seed);
  double best = 0.0;
  for (std::size_t r = 0; r < restarts; ++r) {
    Vector v = detail::random_unit(t.dim(), rng);
    for (std::size_t n = 0; n < iterations; ++n) {
      best = std::max(best, std::abs(t.evaluate(v, v, v)));
      Vector next = t.contract_two(v);
      const double norm = next.norm();
      if (!(norm > 0.0)) break;
      next /= norm;
      const double diff = (next - v).norm();
      v = std::move(next);
      if (diff < 1e-12) break;
    }
    best = std::max(best, std::abs(t.evaluate(v, v, v)));
  }
  return best;
}

}  // namespace tucb
