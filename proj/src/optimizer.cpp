#include "mrgp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrgp/random.hpp"

namespace mrgp {

void OptimizerConfig::validate() const {
  if (max_iters < 1) throw ValidationError("optimizer: max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw ValidationError("optimizer: grad_tol must be > 0");
  if (!(step_init > 0.0)) throw ValidationError("optimizer: step_init must be > 0");
  if (restarts < 1) throw ValidationError("optimizer: restarts must be >= 1");
}

namespace {

// Everything about the objective that does not depend on the hyperparameters.
struct Problem {
  Matrix x;
  Vector y;
  Vector weights;
  std::optional<RatingSummary> summary;  // joint only

  Problem(const Dataset& ds, Variant variant, double offset) {
    switch (variant) {
      case Variant::base: {
        const RatingSummary s = summarize_ratings(ds);
        x = ds.features;
        y = s.mu_bar;
        weights.assign(ds.size(), 1.0);
        break;
      }
      case Variant::repeat:
        x = repeated_inputs(ds);
        y = flattened_ratings(ds);
        weights.assign(y.size(), 1.0);
        break;
      case Variant::joint: {
        RatingSummary s = summarize_ratings(ds);
        x = ds.features;
        y = s.mu_bar;
        weights.resize(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) weights[i] = 1.0 / static_cast<double>(s.r_counts[i]);
        summary = std::move(s);
        break;
      }
    }
    for (double& v : y) v -= offset;
  }

  ObjectiveValue operator()(const Hyperparameters& hp, bool with_gradient) const {
    ObjectiveValue out = gaussian_marginal(x, y, weights, hp, with_gradient);
    if (summary) {
      out.value += log_g(*summary, hp.sigma());
      if (with_gradient) out.grad[2] += log_g_dlogsigma(*summary, hp.sigma());
    }
    return out;
  }
};

Hyperparameters from_array(const std::array<double, 3>& t) { return {t[0], t[1], t[2]}; }
std::array<double, 3> to_array(const Hyperparameters& hp) { return {hp.log_s, hp.log_l, hp.log_sigma}; }

double inf_norm(const std::array<double, 3>& g) {
  return std::max({std::abs(g[0]), std::abs(g[1]), std::abs(g[2])});
}

FitReport ascend(const Problem& problem, const Hyperparameters& start, const OptimizerConfig& cfg) {
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxBacktracks = 60;
  constexpr double kFlatTol = 1e-12;

  FitReport rep;
  std::array<double, 3> theta = to_array(start);
  ObjectiveValue cur = problem(start, true);
  auto note_jitter = [&rep](const ObjectiveValue& v) {
    if (v.jitter > 0.0) {
      ++rep.jitter_events;
      rep.max_jitter = std::max(rep.max_jitter, v.jitter);
    }
  };
  note_jitter(cur);
  rep.objective_trace.push_back(cur.value);

  double step = cfg.step_init / std::max(1.0, inf_norm(cur.grad));
  std::array<double, 3> prev_theta{}, prev_grad{};
  bool have_prev = false;

  for (int it = 0; it < cfg.max_iters; ++it) {
    if (inf_norm(cur.grad) <= cfg.grad_tol) {
      rep.converged = true;
      break;
    }
    // Barzilai-Borwein trial step, then backtrack until Armijo holds.
    if (have_prev) {
      double ss = 0.0, sy = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double s = theta[k] - prev_theta[k];
        const double y = cur.grad[k] - prev_grad[k];
        ss += s * s;
        sy += s * y;
      }
      if (sy < 0.0) step = std::clamp(ss / -sy, 1e-12, 1e6);
      else step = std::min(step * 2.0, 1e6);
    }
    const double g2 = cur.grad[0] * cur.grad[0] + cur.grad[1] * cur.grad[1] + cur.grad[2] * cur.grad[2];
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, step *= 0.5) {
      std::array<double, 3> trial{};
      for (int k = 0; k < 3; ++k) trial[k] = theta[k] + step * cur.grad[k];
      ObjectiveValue next;
      try {
        next = problem(from_array(trial), true);
      } catch (const NumericError&) {
        continue;
      }
      if (!std::isfinite(next.value)) continue;
      const bool armijo = next.value >= cur.value + kArmijo * step * g2;
      // Near the optimum the change in objective drops below its floating
      // resolution; there a step is taken if it keeps the objective within
      // that resolution and shrinks the gradient.
      const bool flat = next.value >= cur.value - kFlatTol * std::max(1.0, std::abs(cur.value)) &&
                        inf_norm(next.grad) < inf_norm(cur.grad);
      if (!armijo && !flat) continue;
      note_jitter(next);
      prev_theta = theta;
      prev_grad = cur.grad;
      have_prev = true;
      theta = trial;
      cur = next;
      accepted = true;
      break;
    }
    if (!accepted) break;
    rep.objective_trace.push_back(cur.value);
    rep.iterations = it + 1;
  }
  if (inf_norm(cur.grad) <= cfg.grad_tol) rep.converged = true;
  rep.final_hp = from_array(theta);
  rep.final_objective = cur.value;
  return rep;
}

}  // namespace

ObjectiveValue objective_and_gradient(const Dataset& ds, Variant variant, const Hyperparameters& hp, double offset,
                                      bool with_gradient) {
  return Problem(ds, variant, offset)(hp, with_gradient);
}

Hyperparameters default_init(const Dataset& ds) {
  if (ds.size() < 2) throw ValidationError("default_init: need at least 2 items");
  const RatingSummary s = summarize_ratings(ds);
  const std::size_t n = ds.size();

  double mean = 0.0;
  for (double m : s.mu_bar) mean += m;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double m : s.mu_bar) var += (m - mean) * (m - mean);
  const double scale = std::max(1e-3, std::sqrt(var / static_cast<double>(n)));

  constexpr std::size_t kMaxSample = 1000;
  std::vector<std::size_t> idx;
  if (n <= kMaxSample) {
    for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
  } else {
    for (std::size_t k = 0; k < kMaxSample; ++k) idx.push_back(k * n / kMaxSample);
  }
  std::vector<double> dists;
  dists.reserve(idx.size() * (idx.size() - 1) / 2);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < ds.dim(); ++c) {
        const double d = ds.features(idx[a], c) - ds.features(idx[b], c);
        d2 += d * d;
      }
      dists.push_back(std::sqrt(d2));
    }
  }
  const std::size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
  double median = dists[mid];
  if (dists.size() % 2 == 0) {
    const double lower = *std::max_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  const double length = std::max(1e-3, median);

  double noise = 0.1 * scale;
  double ss = 0.0, count = 0.0;
  bool multi = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = static_cast<double>(s.r_counts[i]);
    ss += r * s.eta_bar[i] * s.eta_bar[i];
    count += r;
    multi = multi || s.r_counts[i] > 1;
  }
  if (multi) noise = std::max(noise, std::sqrt(ss / count));
  return Hyperparameters::from_natural(scale, length, noise);
}

FitReport maximize(const Dataset& ds, Variant variant, const OptimizerConfig& cfg, std::optional<Hyperparameters> init,
                   double offset) {
  cfg.validate();
  ds.validate();
  if (variant == Variant::repeat && ds.total_ratings() > cfg.repeat_limit && !cfg.force_repeat) {
    throw ValidationError("repeat variant on " + std::to_string(ds.total_ratings()) +
                          " repeated inputs exceeds the limit of " + std::to_string(cfg.repeat_limit) +
                          "; its cost grows as O(N^3 R^3). Use the joint variant or force it.");
  }
  const Hyperparameters start = init ? *init : default_init(ds);
  if (!start.finite()) throw ValidationError("maximize: non-finite initial hyperparameters");
  const Problem problem(ds, variant, offset);

  Rng rng(cfg.seed);
  std::optional<FitReport> best;
  std::string last_error;
  for (int r = 0; r < cfg.restarts; ++r) {
    Hyperparameters hp = start;
    if (r > 0) {
      hp.log_s += rng.uniform(-1.0, 1.0);
      hp.log_l += rng.uniform(-1.0, 1.0);
      hp.log_sigma += rng.uniform(-1.0, 1.0);
    }
    try {
      FitReport rep = ascend(problem, hp, cfg);
      rep.best_restart = r;
      if (!best || rep.final_objective > best->final_objective) best = std::move(rep);
    } catch (const NumericError& e) {
      last_error = e.what();
    }
  }
  if (!best) throw NumericError("maximize: every restart failed: " + last_error);
  return *best;
}

}  // namespace mrgp
