#pragma once

#include <cmath>
#include <string>

namespace mrgp {

/// Squared-exponential kernel scale s, length l and observation noise sigma,
/// held in the log domain so every finite value is a valid model.
struct Hyperparameters {
  double log_s = 0.0;
  double log_l = 0.0;
  double log_sigma = 0.0;

  static Hyperparameters from_natural(double s, double l, double sigma) {
    return {std::log(s), std::log(l), std::log(sigma)};
  }

  double s() const { return std::exp(log_s); }
  double l() const { return std::exp(log_l); }
  double sigma() const { return std::exp(log_sigma); }
  double s2() const { return std::exp(2.0 * log_s); }
  double sigma2() const { return std::exp(2.0 * log_sigma); }

  bool finite() const {
    return std::isfinite(log_s) && std::isfinite(log_l) && std::isfinite(log_sigma);
  }

  bool operator==(const Hyperparameters&) const = default;
};

}  // namespace mrgp
