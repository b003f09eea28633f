#include "mrgp/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "mrgp/cholesky.hpp"
#include "mrgp/kernel.hpp"
#include "mrgp/random.hpp"

namespace mrgp {

void SyntheticSpec::validate() const {
  if (n_train == 0 || dim == 0 || raters == 0) throw ValidationError("synthetic: counts must be positive");
  if (!(score_min < score_max)) throw ValidationError("synthetic: score_min must be below score_max");
  if (!std::isfinite(true_hp.log_s) || !std::isfinite(true_hp.log_l))
    throw ValidationError("synthetic: non-finite kernel hyperparameters");
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t n = spec.n_train + spec.n_test;
  Matrix x(n, spec.dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < spec.dim; ++c) x(i, c) = rng.uniform(-2.0, 2.0);

  const CholeskyFactor f = cholesky(kernel_matrix(x, x, spec.true_hp));
  Vector z(n);
  for (double& v : z) v = rng.normal();
  const double mid = 0.5 * (spec.score_min + spec.score_max);
  Vector latent(n);
  for (std::size_t i = 0; i < n; ++i) latent[i] = mid + dot(f.lower.row(i).first(i + 1), std::span(z).first(i + 1));

  // log_sigma = -inf encodes noise-free ratings.
  const double sigma = std::exp(spec.true_hp.log_sigma);
  SyntheticData out;
  for (Dataset* ds : {&out.train, &out.test}) {
    ds->score_min = spec.score_min;
    ds->score_max = spec.score_max;
  }
  out.train.features = Matrix(spec.n_train, spec.dim);
  out.test.features = Matrix(spec.n_test, spec.dim);
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_train = i < spec.n_train;
    Dataset& ds = is_train ? out.train : out.test;
    const std::size_t row = is_train ? i : i - spec.n_train;
    std::copy(x.row(i).begin(), x.row(i).end(), ds.features.row(row).begin());
    Vector ratings(spec.raters);
    for (double& y : ratings) {
      y = latent[i] + sigma * rng.normal();
      if (spec.round) y = std::round(y);
      y = std::clamp(y, static_cast<double>(spec.score_min), static_cast<double>(spec.score_max));
    }
    ds.ratings.push_back(std::move(ratings));
    (is_train ? out.latent_train : out.latent_test).push_back(latent[i]);
  }
  return out;
}

}  // namespace mrgp
