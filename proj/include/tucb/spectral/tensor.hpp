#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tucb/common.hpp"

namespace tucb {

/// Dense cubic third-order tensor, row-major (i, j, k).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(std::size_t dim) : dim_(dim), data_(dim * dim * dim, 0.0) {}

  std::size_t dim() const { return dim_; }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * dim_ + j) * dim_ + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dim_ + j) * dim_ + k];
  }

  const std::vector<double>& data() const { return data_; }

  Tensor3& operator+=(const Tensor3& o) {
    require_same(o);
    for (std::size_t x = 0; x < data_.size(); ++x) data_[x] += o.data_[x];
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    require_same(o);
    for (std::size_t x = 0; x < data_.size(); ++x) data_[x] -= o.data_[x];
    return *this;
  }
  Tensor3& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  /// Largest deviation between any two index permutations of one entry.
  double asymmetry() const {
    double worst = 0.0;
    const auto& t = *this;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k) {
          const double v = t(i, j, k);
          worst = std::max({worst, std::abs(v - t(i, k, j)), std::abs(v - t(j, i, k)),
                            std::abs(v - t(j, k, i)), std::abs(v - t(k, i, j)),
                            std::abs(v - t(k, j, i))});
        }
    return worst;
  }

  /// Average over the six index permutations.
  Tensor3 symmetrized() const {
    Tensor3 out(dim_);
    const auto& t = *this;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k)
          out(i, j, k) = (t(i, j, k) + t(i, k, j) + t(j, i, k) + t(j, k, i) + t(k, i, j) +
                          t(k, j, i)) / 6.0;
    return out;
  }

  /// T(I, v, v): contraction of the last two modes.
  Vector contract_two(const Vector& v) const {
    require_vec(v);
    Vector out = Vector::Zero(static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < dim_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) {
        const double* row = &data_[(i * dim_ + j) * dim_];
        double inner = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) inner += row[k] * v(static_cast<Eigen::Index>(k));
        s += inner * v(static_cast<Eigen::Index>(j));
      }
      out(static_cast<Eigen::Index>(i)) = s;
    }
    return out;
  }

  /// T(u, v, w).
  double evaluate(const Vector& u, const Vector& v, const Vector& w) const {
    require_vec(u);
    require_vec(v);
    require_vec(w);
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) {
        double inner = 0.0;
        for (std::size_t k = 0; k < dim_; ++k)
          inner += (*this)(i, j, k) * w(static_cast<Eigen::Index>(k));
        s += u(static_cast<Eigen::Index>(i)) * v(static_cast<Eigen::Index>(j)) * inner;
      }
    return s;
  }

  /// this += scale * a (x) b (x) c
  void add_outer(double scale, const Vector& a, const Vector& b, const Vector& c) {
    require_vec(a);
    require_vec(b);
    require_vec(c);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) {
        const double ab = scale * a(static_cast<Eigen::Index>(i)) * b(static_cast<Eigen::Index>(j));
        double* row = &data_[(i * dim_ + j) * dim_];
        for (std::size_t k = 0; k < dim_; ++k) row[k] += ab * c(static_cast<Eigen::Index>(k));
      }
  }

  static Tensor3 outer(const Vector& a, const Vector& b, const Vector& c) {
    Tensor3 t(static_cast<std::size_t>(a.size()));
    t.add_outer(1.0, a, b, c);
    return t;
  }

 private:
  void require_same(const Tensor3& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("Tensor3: dimension mismatch");
  }
  void require_vec(const Vector& v) const {
    if (static_cast<std::size_t>(v.size()) != dim_)
      throw std::invalid_argument("Tensor3: vector length mismatch");
  }

  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// [A(V1,V2,V3)]_{a,b,c} = sum_{i,j,k} A_{ijk} V1_{ia} V2_{jb} V3_{kc}.
/// Contracts one mode at a time.
inline Tensor3 multilinear_map(const Tensor3& a, const Matrix& v1, const Matrix& v2,
                               const Matrix& v3) {
  const auto K = static_cast<Eigen::Index>(a.dim());
  if (v1.rows() != K || v2.rows() != K || v3.rows() != K)
    throw std::invalid_argument("multilinear_map: factor rows must equal the tensor dimension");
  if (v1.cols() != v2.cols() || v1.cols() != v3.cols())
    throw std::invalid_argument("multilinear_map: factors must have the same number of columns");
  const auto m = v1.cols();
  const auto k_dim = static_cast<std::size_t>(K);
  const auto m_dim = static_cast<std::size_t>(m);

  // stage 1: X[i][j][c] = sum_k A[i][j][k] V3[k][c]
  std::vector<double> x(k_dim * k_dim * m_dim, 0.0);
  for (std::size_t i = 0; i < k_dim; ++i)
    for (std::size_t j = 0; j < k_dim; ++j)
      for (std::size_t k = 0; k < k_dim; ++k) {
        const double aval = a(i, j, k);
        if (aval == 0.0) continue;
        for (std::size_t c = 0; c < m_dim; ++c)
          x[(i * k_dim + j) * m_dim + c] += aval * v3(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c));
      }
  // stage 2: Y[i][b][c] = sum_j X[i][j][c] V2[j][b]
  std::vector<double> y(k_dim * m_dim * m_dim, 0.0);
  for (std::size_t i = 0; i < k_dim; ++i)
    for (std::size_t j = 0; j < k_dim; ++j)
      for (std::size_t b = 0; b < m_dim; ++b) {
        const double w = v2(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b));
        for (std::size_t c = 0; c < m_dim; ++c)
          y[(i * m_dim + b) * m_dim + c] += x[(i * k_dim + j) * m_dim + c] * w;
      }
  // stage 3: out[a][b][c] = sum_i Y[i][b][c] V1[i][a]
  Tensor3 out(m_dim);
  for (std::size_t i = 0; i < k_dim; ++i)
    for (std::size_t aa = 0; aa < m_dim; ++aa) {
      const double w = v1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(aa));
      for (std::size_t b = 0; b < m_dim; ++b)
        for (std::size_t c = 0; c < m_dim; ++c) out(aa, b, c) += y[(i * m_dim + b) * m_dim + c] * w;
    }
  return out;
}

}  // namespace tucb
