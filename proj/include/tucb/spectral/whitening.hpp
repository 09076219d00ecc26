#pragma once

#include <string>

#include <Eigen/Eigenvalues>

#include "tucb/common.hpp"
#include "tucb/spectral/moments.hpp"

namespace tucb {

constexpr double kEigenvalueFloor = 1e-12;

/// W = U D^{-1/2} with W^T M2 W = I, and B = (W^T)^+ = U D^{1/2}.
struct WhiteningMap {
  Matrix w;  // K x m
  Matrix b;  // K x m
  Vector d;  // top-m eigenvalues, descending
  Matrix u;  // K x m orthonormal columns
};

/// Top-m eigenpairs of a symmetric matrix, eigenvalues descending.
struct TopEigen {
  Vector values;
  Matrix vectors;
};

inline TopEigen top_eigenpairs(const Matrix& sym, std::size_t m) {
  if (sym.rows() != sym.cols()) throw std::invalid_argument("top_eigenpairs: matrix not square");
  if (m == 0 || static_cast<Eigen::Index>(m) > sym.rows())
    throw std::invalid_argument("top_eigenpairs: m must lie in [1, K]");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (sym + sym.transpose()));
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const auto K = sym.rows();
  const auto mm = static_cast<Eigen::Index>(m);
  TopEigen out{Vector(mm), Matrix(K, mm)};
  for (Eigen::Index c = 0; c < mm; ++c) {
    out.values(c) = solver.eigenvalues()(K - 1 - c);
    Vector v = solver.eigenvectors().col(K - 1 - c);
    // fix the sign: largest-magnitude component positive
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    out.vectors.col(c) = v;
  }
  return out;
}

inline WhiteningMap whiten(const Matrix& m2, std::size_t m, double floor = kEigenvalueFloor) {
  TopEigen top = top_eigenpairs(m2, m);
  const auto mm = static_cast<Eigen::Index>(m);
  if (top.values(mm - 1) <= floor)
    throw RankDeficientError("whiten: only fewer than " + std::to_string(m) +
                             " eigenvalues of M2 exceed the floor");
  WhiteningMap out;
  out.d = top.values;
  out.u = top.vectors;
  const Vector inv_sqrt = out.d.cwiseSqrt().cwiseInverse();
  const Vector sqrt_d = out.d.cwiseSqrt();
  out.w = out.u * inv_sqrt.asDiagonal();
  out.b = out.u * sqrt_d.asDiagonal();
  return out;
}

inline WhiteningMap whiten(const MomentEstimates& moments, std::size_t m,
                           double floor = kEigenvalueFloor) {
  return whiten(moments.m2, m, floor);
}

}  // namespace tucb
