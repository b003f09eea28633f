#pragma once

#include <cstddef>
#include <span>

namespace mrgp {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;  // two-tailed
  std::size_t n = 0;
  /// Zero-variance input; p_value is a boundary value (0 or 1).
  bool degenerate = false;
};

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Student-t CDF with df degrees of freedom.
double t_cdf(double t, double df);

/// Two-tailed paired t-test on a - b, df = M - 1.
TestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// Compares corr(ref, sys1) = r1 with corr(ref, sys2) = r2 given
/// corr(sys1, sys2) = r12 over n items, using Steiger's Z1* statistic.
TestResult steiger_z1(double r1, double r2, double r12, std::size_t n);

}  // namespace mrgp
