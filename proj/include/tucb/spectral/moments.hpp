#pragma once

#include <stdexcept>
#include <string>

#include "tucb/episode.hpp"
#include "tucb/model_set.hpp"
#include "tucb/spectral/tensor.hpp"

namespace tucb {

/// Three independent per-arm estimates of the episode's mean vector.
struct BatchMeans {
  Vector first;
  Vector second;
  Vector third;
};

/// Splits each arm's samples into three equal consecutive batches of
/// floor(T_i/3) samples and averages each; the remainder is discarded.
inline BatchMeans batch_means(const RunRecord& record) {
  const auto K = static_cast<Eigen::Index>(record.per_arm_rewards.size());
  if (K == 0) throw std::invalid_argument("batch_means: empty record");
  BatchMeans out{Vector(K), Vector(K), Vector(K)};
  for (Eigen::Index i = 0; i < K; ++i) {
    const auto& samples = record.per_arm_rewards[static_cast<std::size_t>(i)];
    const std::size_t b = samples.size() / 3;
    if (b == 0)
      throw std::invalid_argument("batch_means: arm " + std::to_string(i) +
                                  " has fewer than 3 samples");
    double s[3] = {0.0, 0.0, 0.0};
    for (std::size_t part = 0; part < 3; ++part)
      for (std::size_t x = part * b; x < (part + 1) * b; ++x) s[part] += samples[x];
    out.first(i) = s[0] / static_cast<double>(b);
    out.second(i) = s[1] / static_cast<double>(b);
    out.third(i) = s[2] / static_cast<double>(b);
  }
  return out;
}

/// Running empirical second and third moments over episodes.
struct MomentEstimates {
  Matrix m2;
  Tensor3 m3;
  std::size_t episodes_seen = 0;

  MomentEstimates() = default;
  explicit MomentEstimates(std::size_t num_arms)
      : m2(Matrix::Zero(static_cast<Eigen::Index>(num_arms), static_cast<Eigen::Index>(num_arms))),
        m3(num_arms) {}

  std::size_t num_arms() const { return m3.dim(); }
};

/// (a b^T + b a^T) / 2
inline Matrix symmetric_outer(const Vector& a, const Vector& b) {
  return 0.5 * (a * b.transpose() + b * a.transpose());
}

/// Average of a (x) b (x) c over all six orderings of the factors.
inline Tensor3 symmetric_outer(const Vector& a, const Vector& b, const Vector& c) {
  Tensor3 t(static_cast<std::size_t>(a.size()));
  const double s = 1.0 / 6.0;
  t.add_outer(s, a, b, c);
  t.add_outer(s, a, c, b);
  t.add_outer(s, b, a, c);
  t.add_outer(s, b, c, a);
  t.add_outer(s, c, a, b);
  t.add_outer(s, c, b, a);
  return t;
}

/// In-place streaming update: M <- M + (sym(outer) - M) / j.
inline void accumulate_moments(MomentEstimates& moments, const BatchMeans& triple) {
  const auto K = static_cast<Eigen::Index>(moments.num_arms());
  if (triple.first.size() != K || triple.second.size() != K || triple.third.size() != K)
    throw std::invalid_argument("update_moments: batch vectors must have length K");
  ++moments.episodes_seen;
  const double w = 1.0 / static_cast<double>(moments.episodes_seen);
  moments.m2 += w * (symmetric_outer(triple.first, triple.second) - moments.m2);
  Tensor3 delta = symmetric_outer(triple.first, triple.second, triple.third);
  delta -= moments.m3;
  delta *= w;
  moments.m3 += delta;
}

inline MomentEstimates update_moments(MomentEstimates moments, const BatchMeans& triple) {
  accumulate_moments(moments, triple);
  return moments;
}

/// Exact M2 = sum rho mu mu^T and M3 = sum rho mu^{(x)3}.
inline MomentEstimates population_moments(const ModelSet& set) {
  MomentEstimates out(set.num_arms());
  for (ModelIndex t = 0; t < set.num_models(); ++t) {
    const Vector mu = set.mean_vector(t);
    const double r = set.rho()(static_cast<Eigen::Index>(t));
    out.m2 += r * mu * mu.transpose();
    out.m3.add_outer(r, mu, mu, mu);
  }
  out.episodes_seen = 0;
  return out;
}

}  // namespace tucb
