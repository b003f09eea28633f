#pragma once

#include <cstdint>

#include "mrgp/dataset.hpp"
#include "mrgp/hyperparameters.hpp"

namespace mrgp {

struct SyntheticSpec {
  std::size_t n_train = 300;
  std::size_t n_test = 200;
  std::size_t dim = 2;
  Hyperparameters true_hp = Hyperparameters::from_natural(2.0, 1.0, 0.8);
  std::size_t raters = 5;
  int score_min = 0;
  int score_max = 10;
  std::uint64_t seed = 0;
  /// Round ratings to integers. Clamping to the range always applies.
  bool round = true;

  void validate() const;
};

struct SyntheticData {
  Dataset train;
  Dataset test;
  /// Latent function values before noise, shifted to the range midpoint.
  Vector latent_train;
  Vector latent_test;
};

/// Inputs uniform in [-2, 2]^dim, one latent function drawn from the GP prior
/// over train and test inputs together, ratings = midpoint + latent + noise.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace mrgp
