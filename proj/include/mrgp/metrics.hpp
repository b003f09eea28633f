#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mrgp/gp.hpp"
#include "mrgp/matrix.hpp"

namespace mrgp {

struct ScoreRange {
  int min = 0;
  int max = 10;
  std::size_t bins() const { return static_cast<std::size_t>(max - min + 1); }
};

/// Probability over the integer scores min..max.
struct DiscreteDistribution {
  ScoreRange range;
  Vector probs;

  double operator[](int score) const { return probs[static_cast<std::size_t>(score - range.min)]; }
};

/// Half-away-from-zero rounding, then clamped into the range.
int round_and_clamp(double y, ScoreRange range);

/// Sample Pearson correlation. Throws ValidationError on constant input.
double pcc(std::span<const double> a, std::span<const double> b);
double mse(std::span<const double> a, std::span<const double> b);

/// Fraction of raters that gave each score.
DiscreteDistribution reference_distribution(std::span<const double> ratings, ScoreRange range);

/// Gaussian mass in [c - 0.5, c + 0.5] per score, floored at 1e-12 and
/// renormalized over the range.
DiscreteDistribution discretize_predictive(double mean, double var, ScoreRange range);

/// sum_c ref(c) log(ref(c) / hyp(c)) in nats; zero-mass reference bins skipped.
double kl_divergence(const DiscreteDistribution& ref, const DiscreteDistribution& hyp);

struct EvalReport {
  /// Absent when either rounded score vector is constant.
  std::optional<double> pcc;
  double mse = 0.0;
  double kl = 0.0;
  Vector per_item_sq_err;
  Vector per_item_kl;
  std::vector<int> predicted_scores;
  std::vector<int> reference_scores;
};

/// Metrics of predicted means/variances against multi-rater references.
EvalReport evaluate(std::span<const double> mean, std::span<const double> var,
                    const std::vector<Vector>& test_ratings, ScoreRange range);
EvalReport evaluate(const PredictiveDensity& pd, const std::vector<Vector>& test_ratings, ScoreRange range);

}  // namespace mrgp
