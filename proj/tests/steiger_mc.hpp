#pragma once

#include <cmath>
#include <cstddef>

#include "mrgp/normal.hpp"
#include "mrgp/random.hpp"

namespace mrgp::testing {

struct SteigerCase {
  double r1;   // corr(reference, system 1)
  double r2;   // corr(reference, system 2)
  double r12;  // corr(system 1, system 2)
  std::size_t n;
};

/// Two-tailed p for the observed gap atanh(r1) - atanh(r2), with the spread of
/// that gap measured by simulating `draws` samples of n trivariate normals
/// whose population correlations equal the case.
inline double monte_carlo_z1_p(const SteigerCase& c, int draws, std::uint64_t seed) {
  // Lower Cholesky factor of [[1, r1, r2], [r1, 1, r12], [r2, r12, 1]].
  const double l10 = c.r1, l11 = std::sqrt(1 - c.r1 * c.r1);
  const double l20 = c.r2, l21 = (c.r12 - c.r1 * c.r2) / l11;
  const double l22 = std::sqrt(1 - l20 * l20 - l21 * l21);

  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  const double n = static_cast<double>(c.n);
  for (int d = 0; d < draws; ++d) {
    double s[3] = {0, 0, 0}, ss[3] = {0, 0, 0}, s01 = 0, s02 = 0;
    for (std::size_t i = 0; i < c.n; ++i) {
      const double e0 = rng.normal(), e1 = rng.normal(), e2 = rng.normal();
      const double v[3] = {e0, l10 * e0 + l11 * e1, l20 * e0 + l21 * e1 + l22 * e2};
      for (int k = 0; k < 3; ++k) {
        s[k] += v[k];
        ss[k] += v[k] * v[k];
      }
      s01 += v[0] * v[1];
      s02 += v[0] * v[2];
    }
    const double var0 = ss[0] - s[0] * s[0] / n, var1 = ss[1] - s[1] * s[1] / n, var2 = ss[2] - s[2] * s[2] / n;
    const double c1 = (s01 - s[0] * s[1] / n) / std::sqrt(var0 * var1);
    const double c2 = (s02 - s[0] * s[2] / n) / std::sqrt(var0 * var2);
    const double gap = std::atanh(c1) - std::atanh(c2);
    sum += gap;
    sum_sq += gap * gap;
  }
  const double mean = sum / draws;
  const double sd = std::sqrt((sum_sq - draws * mean * mean) / (draws - 1));
  const double z = (std::atanh(c.r1) - std::atanh(c.r2)) / sd;
  return 2.0 * std_normal_cdf(-std::abs(z));
}

}  // namespace mrgp::testing
