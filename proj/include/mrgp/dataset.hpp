#pragma once

#include <cstddef>
#include <vector>

#include "mrgp/matrix.hpp"

namespace mrgp {

/// Inputs paired with one or more rater scores each. Rows may carry different
/// numbers of ratings.
struct Dataset {
  Matrix features;                  // N x D
  std::vector<Vector> ratings;      // N rows, R_i >= 1 entries each
  int score_min = 0;
  int score_max = 10;

  std::size_t size() const { return features.rows(); }
  std::size_t dim() const { return features.cols(); }
  std::size_t total_ratings() const;
  /// R when every row has the same count, 0 otherwise.
  std::size_t constant_raters() const;
  double range_midpoint() const { return 0.5 * (score_min + score_max); }

  /// Throws ValidationError naming the offending row.
  void validate() const;
};

/// Per-row empirical mean and biased standard deviation of the ratings.
struct RatingSummary {
  Vector mu_bar;
  Vector eta_bar;
  std::vector<std::size_t> r_counts;
};

RatingSummary summarize_ratings(const Dataset& ds);

/// Every input repeated once per rating, row-major: all samples of input 0,
/// then input 1, and so on.
Matrix repeated_inputs(const Dataset& ds);
/// Ratings flattened in the same order as repeated_inputs.
Vector flattened_ratings(const Dataset& ds);

/// Rows selected by index, preserving order.
Dataset subset(const Dataset& ds, const std::vector<std::size_t>& rows);

}  // namespace mrgp
