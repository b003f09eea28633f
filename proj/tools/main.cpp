#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace mrgp;
using namespace mrgp::cli;

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-process regression on multi-rater scores"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string format = "json";
  auto add_format = [&format](CLI::App* sub) {
    sub->add_option("--format", format, "Dataset format")->check(CLI::IsMember({"json", "csv"}));
  };

  // synth
  SynthOptions synth;
  double s = 2.0, l = 1.0, sigma = 0.8;
  bool no_round = false;
  auto* c_synth = app.add_subcommand("synth", "Generate seeded synthetic multi-rater train/test sets");
  c_synth->add_option("--n-train", synth.spec.n_train)->capture_default_str();
  c_synth->add_option("--n-test", synth.spec.n_test)->capture_default_str();
  c_synth->add_option("--dim", synth.spec.dim)->capture_default_str();
  c_synth->add_option("--raters", synth.spec.raters)->capture_default_str();
  c_synth->add_option("--s", s, "Kernel scale")->capture_default_str();
  c_synth->add_option("--l", l, "Kernel length")->capture_default_str();
  c_synth->add_option("--sigma", sigma, "Rater noise std")->capture_default_str()->check(CLI::NonNegativeNumber);
  c_synth->add_option("--score-min", synth.spec.score_min)->capture_default_str();
  c_synth->add_option("--score-max", synth.spec.score_max)->capture_default_str();
  c_synth->add_option("--seed", synth.spec.seed)->capture_default_str();
  c_synth->add_flag("--no-round", no_round, "Keep real-valued ratings");
  c_synth->add_option("--out", synth.out, "Output directory")->capture_default_str();
  add_format(c_synth);

  // train
  TrainCmdOptions tr;
  std::string variant = "joint";
  bool no_whiten = false;
  auto* c_train = app.add_subcommand("train", "Fit hyperparameters by marginal-likelihood maximization");
  c_train->add_option("--data", tr.data)->required();
  c_train->add_option("--variant", variant)->check(CLI::IsMember({"base", "joint", "repeat"}))->capture_default_str();
  c_train->add_option("--max-iters", tr.train.optimizer.max_iters)->capture_default_str();
  c_train->add_option("--restarts", tr.train.optimizer.restarts)->capture_default_str();
  c_train->add_option("--grad-tol", tr.train.optimizer.grad_tol)->capture_default_str();
  c_train->add_option("--step-init", tr.train.optimizer.step_init)->capture_default_str();
  c_train->add_option("--seed", tr.train.optimizer.seed)->capture_default_str();
  c_train->add_option("--repeat-limit", tr.train.optimizer.repeat_limit)->capture_default_str();
  c_train->add_flag("--force-repeat", tr.train.optimizer.force_repeat, "Allow the repeat variant beyond the size limit");
  c_train->add_flag("--no-whiten", no_whiten, "Skip PCA whitening of the inputs");
  c_train->add_option("--score-min", tr.score_min, "Score range for csv input")->capture_default_str();
  c_train->add_option("--score-max", tr.score_max, "Score range for csv input")->capture_default_str();
  c_train->add_option("--out", tr.out, "Model file")->capture_default_str();
  c_train->add_option("--report", tr.report, "Fit report (default <out>.report.json)");
  add_format(c_train);

  // predict
  PredictOptions pr;
  auto* c_predict = app.add_subcommand("predict", "Predictive densities as JSON lines");
  c_predict->add_option("--model", pr.model)->required();
  c_predict->add_option("--data", pr.data)->required();
  c_predict->add_option("--out", pr.out)->capture_default_str();
  add_format(c_predict);

  // evaluate
  EvaluateOptions ev;
  auto* c_eval = app.add_subcommand("evaluate", "PCC, MSE and discrete KL against multi-rater references");
  c_eval->add_option("--predictions", ev.predictions)->required();
  c_eval->add_option("--data", ev.data)->required();
  c_eval->add_option("--score-min", ev.score_min)->capture_default_str();
  c_eval->add_option("--score-max", ev.score_max)->capture_default_str();
  c_eval->add_option("--out", ev.out)->capture_default_str();
  c_eval->add_option("--csv", ev.csv, "Per-item table");
  add_format(c_eval);

  // compare
  CompareOptions cmp;
  auto* c_cmp = app.add_subcommand("compare", "Significance of the difference between two evaluated systems");
  c_cmp->add_option("--report-a", cmp.report_a)->required();
  c_cmp->add_option("--report-b", cmp.report_b)->required();
  c_cmp->add_option("--predictions-a", cmp.predictions_a)->required();
  c_cmp->add_option("--predictions-b", cmp.predictions_b)->required();
  c_cmp->add_option("--data", cmp.data)->required();
  c_cmp->add_option("--score-min", cmp.score_min)->capture_default_str();
  c_cmp->add_option("--score-max", cmp.score_max)->capture_default_str();
  c_cmp->add_option("--out", cmp.out)->capture_default_str();
  add_format(c_cmp);

  // bench
  BenchCmdOptions bn;
  std::vector<std::string> bench_variants{"base", "joint", "repeat"};
  auto* c_bench = app.add_subcommand("bench", "Inference-time comparison of the variants");
  c_bench->add_option("--grid-n", bn.bench.grid_n)->delimiter(',')->capture_default_str();
  c_bench->add_option("--grid-r", bn.bench.grid_r)->delimiter(',')->capture_default_str();
  c_bench->add_option("--variants", bench_variants)->delimiter(',')->check(CLI::IsMember({"base", "joint", "repeat"}));
  c_bench->add_option("--repeats", bn.bench.repeats)->capture_default_str()->check(CLI::Range(3, 1000000));
  c_bench->add_option("--threads", bn.bench.threads)->capture_default_str()->check(CLI::PositiveNumber);
  c_bench->add_option("--n-test", bn.bench.n_test)->capture_default_str();
  c_bench->add_option("--dim", bn.bench.dim)->capture_default_str();
  c_bench->add_option("--seed", bn.bench.seed)->capture_default_str();
  c_bench->add_option("--out", bn.out)->capture_default_str();
  c_bench->add_option("--csv", bn.csv, "Tidy per-cell table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  return run_guarded([&] {
    const DataFormat fmt = parse_format(format);
    if (*c_synth) {
      synth.format = fmt;
      synth.spec.true_hp = Hyperparameters::from_natural(s, l, sigma);
      synth.spec.round = !no_round;
      cmd_synth(synth);
    } else if (*c_train) {
      tr.format = fmt;
      tr.train.variant = parse_variant(variant);
      tr.train.whiten = !no_whiten;
      const auto report = cmd_train(tr);
      std::cout << "objective " << report["final_objective"].get<double>() << ", iterations "
                << report["iterations"].get<int>() << '\n';
    } else if (*c_predict) {
      pr.format = fmt;
      cmd_predict(pr);
    } else if (*c_eval) {
      ev.format = fmt;
      const auto report = cmd_evaluate(ev);
      std::cout << "pcc " << report["pcc"] << " mse " << report["mse"] << " kl " << report["kl"] << '\n';
    } else if (*c_cmp) {
      cmp.format = fmt;
      cmd_compare(cmp);
    } else if (*c_bench) {
      bn.bench.variants.clear();
      for (const auto& v : bench_variants) bn.bench.variants.push_back(parse_variant(v));
      const auto report = cmd_bench(bn);
      for (const auto& r : report["ratios"])
        std::cout << "N=" << r["n"] << " R=" << r["r"] << " repeat/joint " << r["repeat_over_joint"] << '\n';
    }
  });
}
