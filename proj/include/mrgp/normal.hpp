#pragma once

namespace mrgp {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

/// Phi(z), computed from erfc so both tails keep full relative accuracy.
double std_normal_cdf(double z);

/// log N(x; mean, var) for a scalar.
double normal_logpdf(double x, double mean, double var);

}  // namespace mrgp
