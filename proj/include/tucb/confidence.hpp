#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace tucb {

enum class RadiusVariant { MUCB, UMUCB };

struct ConfidenceParams {
  double delta = 0.01;
  std::size_t horizon_n = 1;
  std::size_t num_models_m = 1;
  std::size_t num_arms_K = 1;
  RadiusVariant variant = RadiusVariant::MUCB;

  void validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    if (horizon_n < 1) throw std::invalid_argument("horizon n must be >= 1");
  }

  /// Numerator inside the square root: log(m n^2 / delta), or
  /// log(2 m K n^2 / delta) for the uncertain-model variant.
  double log_term() const {
    const double n = static_cast<double>(horizon_n);
    double arg = static_cast<double>(num_models_m) * n * n / delta;
    if (variant == RadiusVariant::UMUCB) arg *= 2.0 * static_cast<double>(num_arms_K);
    return std::log(arg);
  }
};

/// Convenience constructor with delta = 1/n.
inline ConfidenceParams default_confidence(std::size_t n, std::size_t m, std::size_t K,
                                           RadiusVariant variant = RadiusVariant::MUCB) {
  ConfidenceParams p;
  p.horizon_n = n;
  p.delta = n > 1 ? 1.0 / static_cast<double>(n) : 0.5;
  p.num_models_m = m;
  p.num_arms_K = K;
  p.variant = variant;
  return p;
}

/// epsilon_{i,t} = sqrt(log(...) / (2 T)).
inline double confidence_radius(std::size_t pulls, const ConfidenceParams& params) {
  if (pulls == 0) throw std::invalid_argument("confidence_radius: arm has not been pulled");
  params.validate();
  return std::sqrt(params.log_term() / (2.0 * static_cast<double>(pulls)));
}

}  // namespace tucb
