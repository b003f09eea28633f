// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "commands.hpp"
#include "mrgp/gp.hpp"
#include "mrgp/io.hpp"
#include "mrgp/metrics.hpp"
#include "mrgp/normal.hpp"
#include "mrgp/optimizer.hpp"
#include "mrgp/pipeline.hpp"
#include "mrgp/stats.hpp"
#include "mrgp/synthetic.hpp"
#include "oracles/paired_t_fixtures.hpp"
#include "steiger_mc.hpp"
#include "test_helpers.hpp"

using namespace mrgp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void expect(Outcome& o, bool ok, const std::string& what) {
  if (!ok && o.pass) o.detail = what;
  o.pass = o.pass && ok;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome equivalence() {
  Outcome o;
  Rng rng(1001);
  const std::size_t raters[] = {1, 2, 3, 5};
  double worst_ll = 0, worst_pred = 0;
  constexpr int kInstances = 240;
  for (int t = 0; t < kInstances; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 12);
    const std::size_t d = 1 + static_cast<std::size_t>(rng.uniform() * 3);
    const Dataset ds = testing::random_dataset(rng, n, d, raters[t % 4]);
    const auto hp = testing::random_hp(rng, -2.0, 1.0);
    const double rep = loglik_repeat(ds, hp), joint = loglik_joint(ds, hp);
    worst_ll = std::max(worst_ll, std::abs(joint - rep) / std::max(1.0, std::abs(rep)));

    const Matrix xt = testing::random_matrix(rng, 1 + t % 5, d);
    const PredictiveDensity pj = predict(fit(ds, Variant::joint, hp), xt);
    const PredictiveDensity pr = predict(fit(ds, Variant::repeat, hp), xt);
    for (std::size_t i = 0; i < xt.rows(); ++i)
      worst_pred = std::max({worst_pred, std::abs(pj.mean[i] - pr.mean[i]), std::abs(pj.var[i] - pr.var[i])});
  }
  expect(o, worst_ll <= 1e-8, "loglik gap");
  expect(o, worst_pred <= 1e-8, "prediction gap");
  o.detail = fmt("%.0f instances, max relative loglik gap %.2e, max prediction gap %.2e", kInstances, worst_ll, worst_pred) +
             (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

Outcome reduction() {
  Outcome o;
  Rng rng(1002);
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const Dataset ds = testing::random_dataset(rng, 1 + t % 12, 1 + t % 3, 1);
    const auto hp = testing::random_hp(rng);
    const double offset = ds.range_midpoint();
    const ObjectiveValue j = objective_and_gradient(ds, Variant::joint, hp, offset);
    const ObjectiveValue b = objective_and_gradient(ds, Variant::base, hp, offset);
    worst = std::max(worst, rel(j.value, b.value));
    for (int k = 0; k < 3; ++k) worst = std::max(worst, rel(j.grad[k], b.grad[k]));
    const Matrix xt = testing::random_matrix(rng, 4, ds.dim());
    const PredictiveDensity pj = predict(fit(ds, Variant::joint, hp, offset), xt);
    const PredictiveDensity pb = predict(fit(ds, Variant::base, hp, offset), xt);
    for (std::size_t i = 0; i < 4; ++i)
      worst = std::max({worst, std::abs(pj.mean[i] - pb.mean[i]), std::abs(pj.var[i] - pb.var[i])});
  }
  expect(o, worst <= 1e-10, "gap");
  o.detail = fmt("50 instances, max gap %.2e", worst);
  return o;
}

Outcome product_identity() {
  Outcome o;
  Rng rng(1003);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 5);
    const std::size_t r = 1 + static_cast<std::size_t>(rng.uniform() * 6);
    const double sigma = std::exp(rng.uniform(-2, 1));
    Dataset ds;
    ds.features = Matrix(n, 1);
    Vector f(n);
    double lhs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = rng.uniform(-5, 5);
      Vector row(r);
      for (double& y : row) {
        y = f[i] + 2.0 * rng.normal();
        lhs += normal_logpdf(y, f[i], sigma * sigma);
      }
      ds.ratings.push_back(row);
    }
    const RatingSummary s = summarize_ratings(ds);
    double rhs = log_g(s, sigma);
    for (std::size_t i = 0; i < n; ++i) rhs += normal_logpdf(s.mu_bar[i], f[i], sigma * sigma / static_cast<double>(r));
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  expect(o, worst <= 1e-10, "gap");
  o.detail = fmt("100 draws, max relative gap %.2e", worst);
  return o;
}

Outcome gradients() {
  Outcome o;
  Rng rng(1004);
  double worst = 0;
  for (Variant v : {Variant::base, Variant::joint, Variant::repeat}) {
    for (int t = 0; t < 50; ++t) {
      const std::size_t r = (t % 5 == 0) ? 0 : static_cast<std::size_t>(1 + t % 4);
      const Dataset ds = testing::random_dataset(rng, 1 + t % 10, 1 + t % 3, r);
      const auto hp = testing::random_hp(rng, -1.0, 1.0);
      const double offset = ds.range_midpoint();
      constexpr double h = 1e-5;
      const ObjectiveValue g = objective_and_gradient(ds, v, hp, offset);
      double fd[3], scale = 1.0, err = 0.0;
      for (int k = 0; k < 3; ++k) {
        Hyperparameters p = hp, m = hp;
        (k == 0 ? p.log_s : k == 1 ? p.log_l : p.log_sigma) += h;
        (k == 0 ? m.log_s : k == 1 ? m.log_l : m.log_sigma) -= h;
        fd[k] = (objective_and_gradient(ds, v, p, offset, false).value -
                 objective_and_gradient(ds, v, m, offset, false).value) / (2 * h);
        scale = std::max(scale, std::abs(fd[k]));
      }
      for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(g.grad[k] - fd[k]));
      worst = std::max(worst, err / scale);
    }
  }
  expect(o, worst <= 1e-5, "gradient");
  o.detail = fmt("150 instances, max relative error %.2e", worst);
  return o;
}

Outcome sigma_recovery() {
  Outcome o;
  std::vector<double> joint, base;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec;
    spec.n_train = 300;
    spec.n_test = 1;
    spec.raters = 5;
    spec.seed = 500 + seed;
    spec.round = false;
    spec.score_min = -20;
    spec.score_max = 20;
    const SyntheticData d = generate_synthetic(spec);
    TrainOptions opts;
    opts.optimizer.seed = seed;
    opts.variant = Variant::joint;
    joint.push_back(train(d.train, opts).model.hp.sigma());
    opts.variant = Variant::base;
    base.push_back(train(d.train, opts).model.hp.sigma());
  }
  const double mj = median(joint), mb = median(base), target_b = 0.8 / std::sqrt(5.0);
  expect(o, std::abs(mj - 0.8) <= 0.15 * 0.8, "joint sigma");
  expect(o, std::abs(mb - target_b) <= 0.15 * target_b, "base sigma");
  o.detail = fmt("median joint sigma %.4f (target 0.8), median base sigma %.4f (target %.4f)", mj, mb, target_b);
  return o;
}

Outcome kl_direction() {
  Outcome o;
  int joint_wins = 0;
  Vector pooled_joint, pooled_base;
  double sum_j = 0, sum_b = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec;
    spec.n_train = 300;
    spec.n_test = 200;
    spec.raters = 5;
    spec.seed = 700 + seed;
    const SyntheticData d = generate_synthetic(spec);
    const ScoreRange range{spec.score_min, spec.score_max};
    double kl[2];
    int k = 0;
    for (Variant v : {Variant::joint, Variant::base}) {
      TrainOptions opts;
      opts.variant = v;
      opts.optimizer.seed = seed;
      const TrainResult res = train(d.train, opts);
      const PredictiveDensity pd = predict_raw(res.model, res.model.build(), d.test.features);
      const EvalReport rep = evaluate(pd, d.test.ratings, range);
      kl[k++] = rep.kl;
      Vector& pool = v == Variant::joint ? pooled_joint : pooled_base;
      pool.insert(pool.end(), rep.per_item_kl.begin(), rep.per_item_kl.end());
    }
    if (kl[0] <= kl[1]) ++joint_wins;
    sum_j += kl[0];
    sum_b += kl[1];
  }
  const TestResult t = paired_t_test(pooled_joint, pooled_base);
  expect(o, joint_wins >= 8, "wins");
  expect(o, sum_j < sum_b, "mean");
  expect(o, t.p_value < 0.05, "significance");
  o.detail = fmt("joint lower on %.0f/10 seeds, mean KL joint %.4f vs base %.4f, paired t p = %.3g", joint_wins,
                 sum_j / 10, sum_b / 10, t.p_value);
  return o;
}

Outcome cost_gap() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "mrgp_acceptance_bench";
  fs::create_directories(dir);
  cli::BenchCmdOptions b;
  b.bench.grid_n = {200};
  b.bench.grid_r = {1, 5};
  b.bench.repeats = 5;
  b.bench.threads = 1;
  b.out = dir / "bench.json";
  const nlohmann::json rep = cli::cmd_bench(b);
  fs::remove_all(dir);
  double ratio5 = 0, joint1 = 0, joint5 = 0;
  for (const auto& r : rep["ratios"])
    if (r["r"] == 5) ratio5 = r["repeat_over_joint"].get<double>();
  for (const auto& c : rep["grid"])
    if (c["variant"] == "joint") (c["r"] == 1 ? joint1 : joint5) = c["total"]["mean_s"].get<double>();
  const double spread = std::max(joint1, joint5) / std::min(joint1, joint5);
  expect(o, ratio5 > 5.0, "ratio");
  expect(o, spread < 2.0, "joint spread");
  o.detail = fmt("N=200 R=5 repeat/joint %.1f, joint time R=1 %.4fs vs R=5 %.4fs (x%.2f)", ratio5, joint1, joint5, spread);
  return o;
}

Outcome metrics_suite() {
  Outcome o;
  Rng rng(1008);
  const ScoreRange range{0, 10};
  double worst_norm = 0, min_kl = 0, min_prob = 0;
  for (int t = 0; t < 5000; ++t) {
    Vector ratings(1 + t % 8);
    for (double& r : ratings) r = std::floor(rng.uniform(0, 11));
    const DiscreteDistribution ref = reference_distribution(ratings, range);
    const DiscreteDistribution hyp = discretize_predictive(rng.uniform(-10, 20), std::exp(rng.uniform(-20, 5)), range);
    for (const auto* d : {&ref, &hyp}) {
      double s = 0;
      for (double p : d->probs) {
        s += p;
        min_prob = std::min(min_prob, p);
      }
      worst_norm = std::max(worst_norm, std::abs(s - 1.0));
    }
    min_kl = std::min(min_kl, kl_divergence(ref, hyp));
  }
  const double bin5 = discretize_predictive(5, 1, range)[5];
  const double expected5 = std_normal_cdf(0.5) - std_normal_cdf(-0.5);
  const DiscreteDistribution r = reference_distribution(Vector{8, 8, 9, 9, 10}, range);
  const bool exact = r[8] == 0.4 && r[9] == 0.4 && r[10] == 0.2;
  expect(o, worst_norm <= 1e-10 && min_prob >= 0, "normalization");
  expect(o, min_kl >= 0, "kl sign");
  expect(o, std::abs(bin5 - expected5) <= 1e-6, "bin 5");
  expect(o, exact, "reference distribution");
  o.detail = fmt("max normalization error %.1e, min KL %.1e, bin-5 mass %.8f", worst_norm, min_kl, bin5) +
             (exact ? ", reference (0.4, 0.4, 0.2) exact" : ", reference distribution mismatch");
  return o;
}

Outcome stats_suite() {
  Outcome o;
  double worst_fixture = 0;
  bool antisym = true;
  for (const auto& f : testdata::paired_t_fixtures()) {
    const TestResult r = paired_t_test(f.a, f.b), s = paired_t_test(f.b, f.a);
    worst_fixture = std::max(worst_fixture, std::abs(r.p_value - f.p_value) / f.p_value);
    antisym = antisym && s.statistic == -r.statistic && s.p_value == r.p_value;
  }

  const testing::SteigerCase cases[] = {
      {0.6, 0.4, 0.5, 50}, {0.5, 0.3, 0.8, 40}, {0.7, 0.55, 0.6, 80}, {0.3, 0.1, 0.2, 60}, {0.8, 0.7, 0.85, 30}};
  double worst_mc = 0;
  std::uint64_t seed = 90;
  for (const auto& c : cases) {
    const double p = steiger_z1(c.r1, c.r2, c.r12, c.n).p_value;
    const double p_mc = testing::monte_carlo_z1_p(c, 100000, seed++);
    worst_mc = std::max(worst_mc, std::abs(p - p_mc) / p_mc);
    const TestResult a = steiger_z1(c.r1, c.r2, c.r12, c.n), b = steiger_z1(c.r2, c.r1, c.r12, c.n);
    antisym = antisym && std::abs(a.statistic + b.statistic) <= 1e-12 && std::abs(a.p_value - b.p_value) <= 1e-12;
  }

  Rng rng(1009);
  int rejected = 0;
  constexpr int kSims = 10000;
  for (int s = 0; s < kSims; ++s) {
    Vector a(30), b(30);
    for (std::size_t i = 0; i < 30; ++i) {
      const double item = rng.normal();
      a[i] = item + rng.normal();
      b[i] = item + rng.normal();
    }
    if (paired_t_test(a, b).p_value < 0.05) ++rejected;
  }
  const double rate = static_cast<double>(rejected) / kSims;
  expect(o, worst_fixture <= 0.10, "fixtures");
  expect(o, worst_mc <= 0.15, "simulation");
  expect(o, antisym, "antisymmetry");
  expect(o, std::abs(rate - 0.05) <= 0.015, "null calibration");
  o.detail = fmt("fixture p max rel error %.1e, Z1* vs simulation max rel error %.3f, null rejection rate %.4f", worst_fixture,
                 worst_mc, rate) +
             (antisym ? ", antisymmetric" : ", antisymmetry broken");
  return o;
}

struct Artifacts {
  std::vector<std::string> files;
};

Artifacts pipeline_run(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  cli::SynthOptions s;
  s.out = dir / "data";
  s.spec.n_train = 80;
  s.spec.n_test = 40;
  s.spec.seed = 21;
  cli::cmd_synth(s);
  cli::TrainCmdOptions t;
  t.data = dir / "data" / "train.json";
  t.out = dir / "model.json";
  t.train.optimizer.seed = 3;
  cli::cmd_train(t);
  cli::PredictOptions p;
  p.model = t.out;
  p.data = dir / "data" / "test.json";
  p.out = dir / "pred.jsonl";
  cli::cmd_predict(p);
  cli::EvaluateOptions e;
  e.predictions = p.out;
  e.data = p.data;
  e.out = dir / "eval.json";
  e.csv = dir / "eval.csv";
  cli::cmd_evaluate(e);
  Artifacts a;
  for (const char* f : {"data/train.json", "data/test.json", "data/truth.json", "model.json", "model.json.report.json",
                        "pred.jsonl", "eval.json", "eval.csv"})
    a.files.push_back(read_text(dir / f));
  return a;
}

Outcome reproducibility() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "mrgp_acceptance_repro";
  const Artifacts a = pipeline_run(dir);
  const Artifacts b = pipeline_run(dir);
  fs::remove_all(dir);
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.files.size(); ++i) same += (a.files[i] == b.files[i] && !a.files[i].empty());
  expect(o, same == a.files.size(), "bytes differ");
  o.detail = fmt("%.0f of %.0f artifacts byte-identical across two runs", static_cast<double>(same),
                 static_cast<double>(a.files.size()));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"joint/repeat equivalence", equivalence},
      {"single-rater reduction", reduction},
      {"gaussian product identity", product_identity},
      {"gradient correctness", gradients},
      {"noise recovery", sigma_recovery},
      {"KL direction", kl_direction},
      {"cost gap", cost_gap},
      {"metrics suite", metrics_suite},
      {"statistics suite", stats_suite},
      {"reproducibility", reproducibility},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d %s: %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", index, name, out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", index - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
