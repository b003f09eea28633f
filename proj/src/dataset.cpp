#include "mrgp/dataset.hpp"

#include <cmath>
#include <string>

namespace mrgp {

std::size_t Dataset::total_ratings() const {
  std::size_t n = 0;
  for (const auto& r : ratings) n += r.size();
  return n;
}

std::size_t Dataset::constant_raters() const {
  if (ratings.empty()) return 0;
  const std::size_t r = ratings.front().size();
  for (const auto& row : ratings)
    if (row.size() != r) return 0;
  return r;
}

void Dataset::validate() const {
  if (size() == 0) throw ValidationError("dataset: no items");
  if (dim() == 0) throw ValidationError("dataset: features have zero dimension");
  if (ratings.size() != size())
    throw ValidationError("dataset: " + std::to_string(ratings.size()) + " rating rows for " +
                          std::to_string(size()) + " feature rows");
  if (!(score_min < score_max)) throw ValidationError("dataset: score_min must be below score_max");
  for (std::size_t i = 0; i < size(); ++i) {
    for (double x : features.row(i))
      if (!std::isfinite(x)) throw ValidationError("dataset: row " + std::to_string(i) + ": non-finite feature");
    if (ratings[i].empty()) throw ValidationError("dataset: row " + std::to_string(i) + ": no ratings");
    for (double y : ratings[i]) {
      if (!std::isfinite(y)) throw ValidationError("dataset: row " + std::to_string(i) + ": non-finite rating");
      if (y < score_min || y > score_max)
        throw ValidationError("dataset: row " + std::to_string(i) + ": rating " + std::to_string(y) +
                              " outside [" + std::to_string(score_min) + ", " + std::to_string(score_max) + "]");
    }
  }
}

RatingSummary summarize_ratings(const Dataset& ds) {
  RatingSummary s;
  const std::size_t n = ds.ratings.size();
  s.mu_bar.resize(n);
  s.eta_bar.resize(n);
  s.r_counts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = ds.ratings[i];
    if (row.empty()) throw ValidationError("summarize_ratings: row " + std::to_string(i) + " has no ratings");
    const double r = static_cast<double>(row.size());
    double sum = 0.0;
    for (double y : row) sum += y;
    const double mean = sum / r;
    double ss = 0.0;
    for (double y : row) ss += (y - mean) * (y - mean);
    s.mu_bar[i] = mean;
    s.eta_bar[i] = std::sqrt(ss / r);
    s.r_counts[i] = row.size();
  }
  return s;
}

Matrix repeated_inputs(const Dataset& ds) {
  Matrix x(ds.total_ratings(), ds.dim());
  std::size_t out = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t r = 0; r < ds.ratings[i].size(); ++r, ++out) {
      auto src = ds.features.row(i);
      std::copy(src.begin(), src.end(), x.row(out).begin());
    }
  }
  return x;
}

Vector flattened_ratings(const Dataset& ds) {
  Vector y;
  y.reserve(ds.total_ratings());
  for (const auto& row : ds.ratings) y.insert(y.end(), row.begin(), row.end());
  return y;
}

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.score_min = ds.score_min;
  out.score_max = ds.score_max;
  out.features = Matrix(rows.size(), ds.dim());
  out.ratings.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= ds.size()) throw ValidationError("subset: row index out of range");
    auto src = ds.features.row(rows[k]);
    std::copy(src.begin(), src.end(), out.features.row(k).begin());
    out.ratings.push_back(ds.ratings[rows[k]]);
  }
  return out;
}

}  // namespace mrgp
