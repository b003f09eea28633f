#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "mrgp/cholesky.hpp"
#include "mrgp/dataset.hpp"
#include "mrgp/hyperparameters.hpp"
#include "mrgp/matrix.hpp"

namespace mrgp {

/// base: one target per input (the rating mean).
/// repeat: every input duplicated per rating, kernel over N*R points.
/// joint: joint likelihood of all ratings through (mu_bar, eta_bar), N x N.
enum class Variant { base, repeat, joint };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);

/// Log-likelihood and gradient with respect to (log_s, log_l, log_sigma).
struct ObjectiveValue {
  double value = 0.0;
  std::array<double, 3> grad{};
  double jitter = 0.0;
};

/// log N(y; 0, K(X, X) + sigma^2 diag(noise_weights)).
ObjectiveValue gaussian_marginal(const Matrix& x, std::span<const double> y, std::span<const double> noise_weights,
                                 const Hyperparameters& hp, bool with_gradient);

/// log g(Y): the part of the joint likelihood that does not depend on the
/// inputs. Per row: log N(eta_i; 0, sigma^2/R_i) + (2 - R_i)/2 log(2 pi sigma^2) - log R_i.
double log_g(const RatingSummary& summary, double sigma);
/// d log g / d log sigma.
double log_g_dlogsigma(const RatingSummary& summary, double sigma);

double loglik_base(const Matrix& x, std::span<const double> y, const Hyperparameters& hp);

/// Ratings are shifted by -offset before entering the zero-mean GP.
double loglik_repeat(const Dataset& ds, const Hyperparameters& hp, double offset = 0.0);
double loglik_joint(const Dataset& ds, const Hyperparameters& hp, double offset = 0.0);

/// Immutable after fit. Predict is read-only and safe to call concurrently.
struct TrainedModel {
  Variant variant = Variant::joint;
  Hyperparameters hp;
  double target_offset = 0.0;
  /// Points the kernel is evaluated against: X, or X repeated for `repeat`.
  Matrix kernel_inputs;
  Vector effective_targets;
  Vector noise_scale;
  CholeskyFactor chol;
  Vector alpha;
};

TrainedModel fit(const Dataset& ds, Variant variant, const Hyperparameters& hp, double offset = 0.0);

struct PredictiveDensity {
  /// Output-space mean, target_offset included.
  Vector mean;
  Vector var;
  Vector latent_var;
  /// Full latent covariance; filled only on request.
  std::optional<Matrix> latent_cov;
  /// Latent variances that went negative from round-off and were set to 0.
  std::size_t clamped = 0;
  double noise_var = 0.0;
};

PredictiveDensity predict(const TrainedModel& model, const Matrix& x_test, bool full_covariance = false);

Vector point_scores(const PredictiveDensity& pd);

}  // namespace mrgp
