#include "mrgp/stats.hpp"

#include <cmath>
#include <limits>

#include "mrgp/error.hpp"
#include "mrgp/normal.hpp"

namespace mrgp {

namespace {

// Continued fraction for I_x(a, b), modified Lentz. Converges fast for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericError("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("incomplete_beta: a and b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double t_cdf(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("t_cdf: degrees of freedom must be positive");
  if (std::isnan(t)) throw ValidationError("t_cdf: NaN argument");
  if (t == 0.0) return 0.5;
  // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

TestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("paired_t_test: length mismatch");
  const std::size_t m = a.size();
  if (m < 2) throw ValidationError("paired_t_test: need at least 2 pairs");
  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = (a[i] - b[i]) - mean;
    ss += r * r;
  }
  TestResult res;
  res.n = m;
  const double sd = std::sqrt(ss / static_cast<double>(m - 1));
  if (sd == 0.0) {
    res.degenerate = true;
    if (mean == 0.0) {
      res.statistic = 0.0;
      res.p_value = 1.0;
    } else {
      res.statistic = std::copysign(std::numeric_limits<double>::infinity(), mean);
      res.p_value = 0.0;
    }
    return res;
  }
  res.statistic = mean / (sd / std::sqrt(static_cast<double>(m)));
  const double df = static_cast<double>(m - 1);
  // two-tailed: P(|T| > |t|)
  const double t = res.statistic;
  res.p_value = std::min(1.0, incomplete_beta(0.5 * df, 0.5, df / (df + t * t)));
  return res;
}

// Fisher z of both correlations; the covariance of z1 and z2 under the null
// uses the pooled correlation rb = (r1 + r2)/2:
//   psi  = r12 (1 - 2 rb^2) - rb^2 (1 - 2 rb^2 - r12^2) / 2
//   sbar = psi / (1 - rb^2)^2
//   Z    = (z1 - z2) sqrt((n - 3) / (2 - 2 sbar))
TestResult steiger_z1(double r1, double r2, double r12, std::size_t n) {
  if (n < 4) throw ValidationError("steiger_z1: need n >= 4");
  if (std::abs(r1) >= 1.0 || std::abs(r2) >= 1.0)
    throw ValidationError("steiger_z1: correlations with the reference must lie in (-1, 1)");
  TestResult res;
  res.n = n;
  if (r1 == r2) {
    res.statistic = 0.0;
    res.p_value = 1.0;
    res.degenerate = std::abs(r12) >= 1.0;
    return res;
  }
  if (std::abs(r12) >= 1.0) throw ValidationError("steiger_z1: correlation between systems must lie in (-1, 1)");
  const double rb = 0.5 * (r1 + r2);
  const double rb2 = rb * rb;
  const double psi = r12 * (1.0 - 2.0 * rb2) - 0.5 * rb2 * (1.0 - 2.0 * rb2 - r12 * r12);
  const double sbar = psi / ((1.0 - rb2) * (1.0 - rb2));
  const double denom = 2.0 - 2.0 * sbar;
  if (!(denom > 0.0)) throw NumericError("steiger_z1: non-positive variance term");
  res.statistic = (std::atanh(r1) - std::atanh(r2)) * std::sqrt((static_cast<double>(n) - 3.0) / denom);
  res.p_value = 2.0 * std_normal_cdf(-std::abs(res.statistic));
  return res;
}

}  // namespace mrgp
