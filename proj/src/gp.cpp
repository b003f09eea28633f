#include "mrgp/gp.hpp"

#include <cmath>
#include <string>

#include "mrgp/kernel.hpp"
#include "mrgp/normal.hpp"

namespace mrgp {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::base: return "base";
    case Variant::repeat: return "repeat";
    case Variant::joint: return "joint";
  }
  return "unknown";
}

Variant parse_variant(std::string_view s) {
  if (s == "base") return Variant::base;
  if (s == "repeat") return Variant::repeat;
  if (s == "joint") return Variant::joint;
  throw ValidationError("unknown variant '" + std::string(s) + "' (expected base, joint or repeat)");
}

namespace {

Matrix noisy_covariance(const Matrix& k, std::span<const double> noise) {
  Matrix c = k;
  for (std::size_t i = 0; i < c.rows(); ++i) c(i, i) += noise[i];
  return c;
}

}  // namespace

ObjectiveValue gaussian_marginal(const Matrix& x, std::span<const double> y, std::span<const double> noise_weights,
                                 const Hyperparameters& hp, bool with_gradient) {
  const std::size_t n = x.rows();
  if (y.size() != n || noise_weights.size() != n) throw ValidationError("gaussian_marginal: shape mismatch");
  const double sigma2 = hp.sigma2();
  Vector noise(n);
  for (std::size_t i = 0; i < n; ++i) noise[i] = sigma2 * noise_weights[i];

  const Matrix d2 = squared_distances(x, x);
  const Matrix k = kernel_from_distances(d2, hp);
  const CholeskyFactor f = cholesky(noisy_covariance(k, noise));
  const Vector alpha = chol_solve(f, y);

  ObjectiveValue out;
  out.jitter = f.jitter;
  out.value = -0.5 * dot(y, alpha) - 0.5 * chol_logdet(f) - 0.5 * static_cast<double>(n) * kLog2Pi;
  if (!with_gradient) return out;

  // d/dtheta = 1/2 sum_ij W_ij dC_ij with W = alpha alpha^T - C^{-1}.
  // Row partials are summed serially so the result does not depend on the
  // thread count.
  const Matrix cinv = chol_inverse(f);
  const double inv_l2 = 1.0 / (hp.l() * hp.l());
  Vector row_s(n), row_l(n);
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < nn; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double gs = 0.0, gl = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = alpha[i] * alpha[j] - cinv(i, j);
      gs += w * k(i, j);
      gl += w * k(i, j) * d2(i, j);
    }
    row_s[i] = gs;
    row_l[i] = gl;
  }
  double gs = 0.0, gl = 0.0, gsig = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gs += row_s[i];
    gl += row_l[i];
    gsig += (alpha[i] * alpha[i] - cinv(i, i)) * noise[i];
  }
  out.grad = {gs, 0.5 * inv_l2 * gl, gsig};
  return out;
}

double log_g(const RatingSummary& summary, double sigma) {
  const double sigma2 = sigma * sigma;
  const double log_2pi_s2 = kLog2Pi + std::log(sigma2);
  double total = 0.0;
  for (std::size_t i = 0; i < summary.mu_bar.size(); ++i) {
    const double r = static_cast<double>(summary.r_counts[i]);
    total += normal_logpdf(summary.eta_bar[i], 0.0, sigma2 / r) + 0.5 * (2.0 - r) * log_2pi_s2 - std::log(r);
  }
  return total;
}

double log_g_dlogsigma(const RatingSummary& summary, double sigma) {
  const double sigma2 = sigma * sigma;
  double total = 0.0;
  for (std::size_t i = 0; i < summary.mu_bar.size(); ++i) {
    const double r = static_cast<double>(summary.r_counts[i]);
    const double eta = summary.eta_bar[i];
    total += -1.0 + r * eta * eta / sigma2 + (2.0 - r);
  }
  return total;
}

double loglik_base(const Matrix& x, std::span<const double> y, const Hyperparameters& hp) {
  const Vector ones(x.rows(), 1.0);
  return gaussian_marginal(x, y, ones, hp, false).value;
}

double loglik_repeat(const Dataset& ds, const Hyperparameters& hp, double offset) {
  Vector y = flattened_ratings(ds);
  for (double& v : y) v -= offset;
  const Vector ones(y.size(), 1.0);
  return gaussian_marginal(repeated_inputs(ds), y, ones, hp, false).value;
}

double loglik_joint(const Dataset& ds, const Hyperparameters& hp, double offset) {
  const RatingSummary s = summarize_ratings(ds);
  Vector targets(s.mu_bar);
  Vector weights(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    targets[i] -= offset;
    weights[i] = 1.0 / static_cast<double>(s.r_counts[i]);
  }
  return gaussian_marginal(ds.features, targets, weights, hp, false).value + log_g(s, hp.sigma());
}

TrainedModel fit(const Dataset& ds, Variant variant, const Hyperparameters& hp, double offset) {
  if (!hp.finite()) throw ValidationError("fit: non-finite hyperparameters");
  TrainedModel m;
  m.variant = variant;
  m.hp = hp;
  m.target_offset = offset;
  const double sigma2 = hp.sigma2();
  switch (variant) {
    case Variant::base: {
      const RatingSummary s = summarize_ratings(ds);
      m.kernel_inputs = ds.features;
      m.effective_targets = s.mu_bar;
      m.noise_scale.assign(ds.size(), sigma2);
      break;
    }
    case Variant::repeat: {
      m.kernel_inputs = repeated_inputs(ds);
      m.effective_targets = flattened_ratings(ds);
      m.noise_scale.assign(m.effective_targets.size(), sigma2);
      break;
    }
    case Variant::joint: {
      const RatingSummary s = summarize_ratings(ds);
      m.kernel_inputs = ds.features;
      m.effective_targets = s.mu_bar;
      m.noise_scale.resize(ds.size());
      for (std::size_t i = 0; i < ds.size(); ++i) m.noise_scale[i] = sigma2 / static_cast<double>(s.r_counts[i]);
      break;
    }
  }
  for (double& t : m.effective_targets) t -= offset;
  m.chol = cholesky(noisy_covariance(kernel_matrix(m.kernel_inputs, m.kernel_inputs, hp), m.noise_scale));
  m.alpha = chol_solve(m.chol, m.effective_targets);
  return m;
}

PredictiveDensity predict(const TrainedModel& model, const Matrix& x_test, bool full_covariance) {
  if (x_test.rows() > 0 && x_test.cols() != model.kernel_inputs.cols())
    throw ValidationError("predict: test inputs have " + std::to_string(x_test.cols()) + " columns, model expects " +
                          std::to_string(model.kernel_inputs.cols()));
  const std::size_t m = x_test.rows();
  PredictiveDensity pd;
  pd.noise_var = model.hp.sigma2();
  pd.mean.resize(m);
  pd.var.resize(m);
  pd.latent_var.resize(m);
  if (m == 0) return pd;

  const Matrix k_cross = kernel_matrix(x_test, model.kernel_inputs, model.hp);  // M x N
  const Matrix v = forward_substitute_rows(model.chol.lower, k_cross);          // rows L^{-1} k_i
  const double s2 = model.hp.s2();
  std::vector<char> clamped(m, 0);
  const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < mm; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    pd.mean[i] = dot(k_cross.row(i), model.alpha) + model.target_offset;
    double lv = s2 - dot(v.row(i), v.row(i));
    if (lv < 0.0) {
      lv = 0.0;
      clamped[i] = 1;
    }
    pd.latent_var[i] = lv;
    pd.var[i] = lv + pd.noise_var;
  }
  for (char c : clamped) pd.clamped += static_cast<std::size_t>(c);

  if (full_covariance) {
    Matrix cov = kernel_matrix(x_test, x_test, model.hp);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) cov(i, j) -= dot(v.row(i), v.row(j));
    for (std::size_t i = 0; i < m; ++i) cov(i, i) = pd.latent_var[i];
    pd.latent_cov = std::move(cov);
  }
  return pd;
}

Vector point_scores(const PredictiveDensity& pd) { return pd.mean; }

}  // namespace mrgp
