#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "tucb/common.hpp"

namespace tucb {

/// The finite set of bandit problems: row `theta` of `means` is the vector of
/// arm means of model `theta`, and `rho` is the task distribution.
class ModelSet {
 public:
  ModelSet(Matrix means, Vector rho) : means_(std::move(means)), rho_(std::move(rho)) {
    validate();
    best_arm_.resize(num_models());
    for (ModelIndex t = 0; t < num_models(); ++t) {
      ArmIndex best = 0;
      for (ArmIndex i = 1; i < num_arms(); ++i)
        if (means_(t, i) > means_(t, best)) best = i;
      best_arm_[t] = best;
    }
  }

  /// Uniform task distribution.
  explicit ModelSet(Matrix means)
      : ModelSet(means, Vector::Constant(means.rows(), 1.0 / static_cast<double>(
                                                           std::max<Eigen::Index>(means.rows(), 1)))) {}

  std::size_t num_models() const { return static_cast<std::size_t>(means_.rows()); }
  std::size_t num_arms() const { return static_cast<std::size_t>(means_.cols()); }

  const Matrix& means() const { return means_; }
  const Vector& rho() const { return rho_; }

  double mean(ModelIndex theta, ArmIndex arm) const {
    check_model(theta);
    check_arm(arm);
    return means_(static_cast<Eigen::Index>(theta), static_cast<Eigen::Index>(arm));
  }

  Vector mean_vector(ModelIndex theta) const {
    check_model(theta);
    return means_.row(static_cast<Eigen::Index>(theta)).transpose();
  }

  /// i_*(theta); ties go to the lowest arm index.
  ArmIndex best_arm(ModelIndex theta) const {
    check_model(theta);
    return best_arm_[theta];
  }

  /// mu_*(theta).
  double best_value(ModelIndex theta) const { return mean(theta, best_arm(theta)); }

  void check_model(ModelIndex theta) const {
    if (theta >= num_models())
      throw std::out_of_range("model index " + std::to_string(theta) + " out of range (m=" +
                              std::to_string(num_models()) + ")");
  }
  void check_arm(ArmIndex arm) const {
    if (arm >= num_arms())
      throw std::out_of_range("arm index " + std::to_string(arm) + " out of range (K=" +
                              std::to_string(num_arms()) + ")");
  }

 private:
  void validate() const {
    if (means_.rows() < 1 || means_.cols() < 1)
      throw std::invalid_argument("model set needs m >= 1 and K >= 1");
    if (rho_.size() != means_.rows())
      throw std::invalid_argument("rho length does not match the number of models");
    for (Eigen::Index t = 0; t < means_.rows(); ++t)
      for (Eigen::Index i = 0; i < means_.cols(); ++i) {
        const double v = means_(t, i);
        if (!(v >= 0.0 && v <= 1.0)) {
          std::ostringstream os;
          os << "mean (" << t << "," << i << ") = " << v << " outside [0,1]";
          throw std::invalid_argument(os.str());
        }
      }
    double total = 0.0;
    for (Eigen::Index t = 0; t < rho_.size(); ++t) {
      if (!(rho_(t) >= 0.0)) throw std::invalid_argument("rho has a negative entry");
      total += rho_(t);
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("rho does not sum to 1");
  }

  Matrix means_;
  Vector rho_;
  std::vector<ArmIndex> best_arm_;
};

/// Delta_i(theta) = mu_*(theta) - mu_i(theta).
inline double arm_gap(const ModelSet& set, ModelIndex theta, ArmIndex arm) {
  return set.best_value(theta) - set.mean(theta, arm);
}

/// Gamma_i(theta, theta') = |mu_i(theta) - mu_i(theta')|.
inline double model_gap(const ModelSet& set, ModelIndex theta, ModelIndex theta_bar,
                        ArmIndex arm) {
  return std::abs(set.mean(theta, arm) - set.mean(theta_bar, arm));
}

/// A_*(subset): arms optimal for at least one model of the subset.
inline ArmSet optimal_arm_set(const ModelSet& set, const ModelSubset& subset) {
  if (subset.empty()) throw std::invalid_argument("optimal_arm_set: empty model subset");
  ArmSet arms;
  for (auto theta : subset) arms.push_back(set.best_arm(theta));
  std::sort(arms.begin(), arms.end());
  arms.erase(std::unique(arms.begin(), arms.end()), arms.end());
  return arms;
}

inline ModelSubset all_models(const ModelSet& set) {
  ModelSubset all(set.num_models());
  for (ModelIndex t = 0; t < all.size(); ++t) all[t] = t;
  return all;
}

/// Theta_+(theta_bar) = {theta : mu_*(theta) >= mu_*(theta_bar)}.
inline ModelSubset optimistic_models(const ModelSet& set, ModelIndex theta_bar) {
  const double target = set.best_value(theta_bar);
  ModelSubset out;
  for (ModelIndex t = 0; t < set.num_models(); ++t)
    if (set.best_value(t) >= target) out.push_back(t);
  return out;
}

}  // namespace tucb
