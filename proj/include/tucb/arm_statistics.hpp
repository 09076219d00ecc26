#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "tucb/common.hpp"

namespace tucb {

/// Pull counts and running means of one episode.
class ArmStatistics {
 public:
  explicit ArmStatistics(std::size_t num_arms)
      : pulls_(num_arms, 0), sums_(num_arms, 0.0), means_(num_arms, 0.0) {}

  std::size_t num_arms() const { return pulls_.size(); }
  std::size_t steps() const { return steps_; }

  const std::vector<std::size_t>& pulls() const { return pulls_; }
  const std::vector<double>& sums() const { return sums_; }
  const std::vector<double>& means() const { return means_; }

  std::size_t pulls(ArmIndex arm) const { return pulls_.at(arm); }
  double mean(ArmIndex arm) const { return means_.at(arm); }

  void record(ArmIndex arm, double reward) {
    if (arm >= pulls_.size()) throw std::out_of_range("ArmStatistics::record: bad arm");
    ++pulls_[arm];
    sums_[arm] += reward;
    means_[arm] = sums_[arm] / static_cast<double>(pulls_[arm]);
    ++steps_;
  }

  /// Direct construction, mainly for tests.
  static ArmStatistics from_counts(const std::vector<std::size_t>& pulls,
                                   const std::vector<double>& means) {
    if (pulls.size() != means.size())
      throw std::invalid_argument("ArmStatistics::from_counts: size mismatch");
    ArmStatistics s(pulls.size());
    for (std::size_t i = 0; i < pulls.size(); ++i) {
      s.pulls_[i] = pulls[i];
      s.means_[i] = pulls[i] > 0 ? means[i] : 0.0;
      s.sums_[i] = s.means_[i] * static_cast<double>(pulls[i]);
    }
    s.steps_ = std::accumulate(pulls.begin(), pulls.end(), std::size_t{0});
    return s;
  }

 private:
  std::vector<std::size_t> pulls_;
  std::vector<double> sums_;
  std::vector<double> means_;
  std::size_t steps_ = 0;
};

}  // namespace tucb
