#include "mrgp/normal.hpp"

#include <cmath>
#include <numbers>

namespace mrgp {

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_logpdf(double x, double mean, double var) {
  const double r = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + r * r / var);
}

}  // namespace mrgp
