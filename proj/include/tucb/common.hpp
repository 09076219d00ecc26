#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tucb {

using ArmIndex = std::size_t;
using ModelIndex = std::size_t;
using ArmSet = std::vector<ArmIndex>;      // sorted, unique
using ModelSubset = std::vector<ModelIndex>;  // sorted, unique

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A quantity is undefined because some gap is zero (tied arms or models).
class DegenerateModelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fewer than m eigenvalues of the second moment are above the floor.
class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mean vectors are linearly dependent or some task probability is zero.
class AssumptionViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Seed derivation and random draws. Everything here is bit-for-bit portable
// so that reports are reproducible across standard libraries.

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based split: child stream `stream` of `parent`.
constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                    std::uint64_t stream) noexcept {
  return splitmix64(parent ^ splitmix64(stream * 0xd1342543de82ef95ULL + 1));
}

/// Small deterministic generator (splitmix64 stream).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  double normal() noexcept {
    // Box-Muller; the second variate is discarded.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::size_t below(std::size_t bound) noexcept {
    return static_cast<std::size_t>(uniform() * static_cast<double>(bound));
  }

 private:
  std::uint64_t state_;
};

inline bool contains(const std::vector<std::size_t>& sorted, std::size_t x) {
  for (auto v : sorted) {
    if (v == x) return true;
    if (v > x) return false;
  }
  return false;
}

}  // namespace tucb
