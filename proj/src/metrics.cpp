#include "mrgp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrgp/normal.hpp"

namespace mrgp {

namespace {

void check_range(ScoreRange range) {
  if (!(range.min < range.max)) throw ValidationError("score range: min must be below max");
}

void check_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) throw ValidationError(std::string(what) + ": length mismatch");
}

}  // namespace

int round_and_clamp(double y, ScoreRange range) {
  if (!std::isfinite(y)) throw ValidationError("round_and_clamp: non-finite value");
  const double r = std::round(y);  // halfway cases away from zero
  return static_cast<int>(std::clamp(r, static_cast<double>(range.min), static_cast<double>(range.max)));
}

double pcc(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b, "pcc");
  const std::size_t n = a.size();
  if (n < 2) throw ValidationError("pcc: need at least 2 items");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw ValidationError("pcc: correlation undefined for constant input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double mse(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b, "mse");
  if (a.empty()) throw ValidationError("mse: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

DiscreteDistribution reference_distribution(std::span<const double> ratings, ScoreRange range) {
  check_range(range);
  if (ratings.empty()) throw ValidationError("reference_distribution: no ratings");
  DiscreteDistribution d{range, Vector(range.bins(), 0.0)};
  for (double y : ratings) {
    if (y != std::round(y) || y < range.min || y > range.max)
      throw ValidationError("reference_distribution: rating " + std::to_string(y) + " is not an in-range integer");
    d.probs[static_cast<std::size_t>(static_cast<int>(y) - range.min)] += 1.0;
  }
  for (double& p : d.probs) p /= static_cast<double>(ratings.size());
  return d;
}

DiscreteDistribution discretize_predictive(double mean, double var, ScoreRange range) {
  check_range(range);
  if (!(var > 0.0) || !std::isfinite(var)) throw ValidationError("discretize_predictive: variance must be positive");
  if (!std::isfinite(mean)) throw ValidationError("discretize_predictive: non-finite mean");
  constexpr double kFloor = 1e-12;
  const double sd = std::sqrt(var);
  DiscreteDistribution d{range, Vector(range.bins())};
  double total = 0.0;
  for (int c = range.min; c <= range.max; ++c) {
    const double lo = (c - 0.5 - mean) / sd;
    const double hi = (c + 0.5 - mean) / sd;
    // Difference taken on whichever tail keeps precision.
    const double mass = lo > 0.0 ? std_normal_cdf(-lo) - std_normal_cdf(-hi) : std_normal_cdf(hi) - std_normal_cdf(lo);
    const double p = std::max(mass, kFloor);
    d.probs[static_cast<std::size_t>(c - range.min)] = p;
    total += p;
  }
  for (double& p : d.probs) p /= total;
  return d;
}

double kl_divergence(const DiscreteDistribution& ref, const DiscreteDistribution& hyp) {
  if (ref.range.min != hyp.range.min || ref.range.max != hyp.range.max || ref.probs.size() != hyp.probs.size())
    throw ValidationError("kl_divergence: ranges differ");
  double kl = 0.0;
  for (std::size_t c = 0; c < ref.probs.size(); ++c) {
    const double p = ref.probs[c];
    if (p <= 0.0) continue;
    if (!(hyp.probs[c] > 0.0)) throw ValidationError("kl_divergence: hypothesis has zero mass where reference does not");
    kl += p * std::log(p / hyp.probs[c]);
  }
  return std::max(kl, 0.0);
}

EvalReport evaluate(std::span<const double> mean, std::span<const double> var,
                    const std::vector<Vector>& test_ratings, ScoreRange range) {
  check_range(range);
  const std::size_t m = mean.size();
  if (var.size() != m || test_ratings.size() != m)
    throw ValidationError("evaluate: " + std::to_string(m) + " predictions for " +
                          std::to_string(test_ratings.size()) + " reference rows");
  if (m == 0) throw ValidationError("evaluate: no items");

  EvalReport rep;
  rep.predicted_scores.resize(m);
  rep.reference_scores.resize(m);
  rep.per_item_sq_err.resize(m);
  rep.per_item_kl.resize(m);
  Vector pred(m), ref(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = test_ratings[i];
    if (row.empty()) throw ValidationError("evaluate: row " + std::to_string(i) + " has no ratings");
    double sum = 0.0;
    for (double y : row) sum += y;
    rep.predicted_scores[i] = round_and_clamp(mean[i], range);
    rep.reference_scores[i] = round_and_clamp(sum / static_cast<double>(row.size()), range);
    pred[i] = rep.predicted_scores[i];
    ref[i] = rep.reference_scores[i];
    rep.per_item_sq_err[i] = (pred[i] - ref[i]) * (pred[i] - ref[i]);
    rep.per_item_kl[i] = kl_divergence(reference_distribution(row, range), discretize_predictive(mean[i], var[i], range));
  }
  try {
    rep.pcc = pcc(pred, ref);
  } catch (const ValidationError&) {
    rep.pcc.reset();
  }
  double sq = 0.0, kl = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sq += rep.per_item_sq_err[i];
    kl += rep.per_item_kl[i];
  }
  rep.mse = sq / static_cast<double>(m);
  rep.kl = kl / static_cast<double>(m);
  return rep;
}

EvalReport evaluate(const PredictiveDensity& pd, const std::vector<Vector>& test_ratings, ScoreRange range) {
  return evaluate(pd.mean, pd.var, test_ratings, range);
}

}  // namespace mrgp
