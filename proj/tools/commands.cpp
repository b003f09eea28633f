#include "commands.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include "mrgp/stats.hpp"

namespace mrgp::cli {

using nlohmann::json;

namespace {

json hp_json(const Hyperparameters& hp) {
  return {{"log_s", hp.log_s},   {"log_l", hp.log_l}, {"log_sigma", hp.log_sigma},
          {"s", hp.s()},         {"l", hp.l()},       {"sigma", hp.sigma()}};
}

json optimizer_json(const OptimizerConfig& c) {
  return {{"max_iters", c.max_iters}, {"grad_tol", c.grad_tol},         {"step_init", c.step_init},
          {"seed", c.seed},           {"restarts", c.restarts},         {"repeat_limit", c.repeat_limit},
          {"force_repeat", c.force_repeat}};
}

std::string format_name(DataFormat f) { return f == DataFormat::csv ? "csv" : "json"; }

std::filesystem::path with_ext(const std::filesystem::path& dir, const std::string& stem, DataFormat f) {
  return dir / (stem + (f == DataFormat::csv ? ".csv" : ".json"));
}

json test_result_json(const TestResult& t) {
  json j = {{"p_value", t.p_value}, {"n", t.n}, {"degenerate", t.degenerate}};
  j["statistic"] = std::isfinite(t.statistic) ? json(t.statistic) : json(t.statistic > 0 ? "inf" : "-inf");
  return j;
}

std::vector<double> get_vector(const json& j, const char* key, const std::filesystem::path& from) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ValidationError(from.string() + ": missing array '" + key + "'");
  return j.at(key).get<std::vector<double>>();
}

}  // namespace

json cmd_synth(const SynthOptions& o) {
  const SyntheticData data = generate_synthetic(o.spec);
  std::filesystem::create_directories(o.out);
  const auto train_path = with_ext(o.out, "train", o.format);
  const auto test_path = with_ext(o.out, "test", o.format);
  save_dataset(data.train, train_path, o.format);
  save_dataset(data.test, test_path, o.format);

  const auto& s = o.spec;
  json truth = {
      {"version", kVersion},
      {"config",
       {{"n_train", s.n_train}, {"n_test", s.n_test}, {"dim", s.dim}, {"raters", s.raters},
        {"score_min", s.score_min}, {"score_max", s.score_max}, {"seed", s.seed}, {"round", s.round},
        {"format", format_name(o.format)}}},
      {"true_hyperparameters", hp_json(s.true_hp)},
      {"latent_offset", 0.5 * (s.score_min + s.score_max)},
      {"latent_train", data.latent_train},
      {"latent_test", data.latent_test},
      {"train_checksum", dataset_checksum(data.train)},
      {"test_checksum", dataset_checksum(data.test)},
  };
  write_json(truth, o.out / "truth.json");
  return truth;
}

json cmd_train(const TrainCmdOptions& o) {
  const Dataset ds = load_dataset(o.data, o.format, o.score_min, o.score_max);
  const TrainResult res = train(ds, o.train);
  write_json(model_to_json(res.model), o.out);

  const FitReport& r = res.report;
  json report = {
      {"version", kVersion},
      {"config",
       {{"data", o.data.string()}, {"format", format_name(o.format)}, {"variant", std::string(to_string(o.train.variant))},
        {"whiten", o.train.whiten}, {"whiten_eps", o.train.whiten_eps}, {"optimizer", optimizer_json(o.train.optimizer)},
        {"out", o.out.string()}}},
      {"dataset_checksum", dataset_checksum(ds)},
      {"final_objective", r.final_objective},
      {"hyperparameters", hp_json(r.final_hp)},
      {"iterations", r.iterations},
      {"converged", r.converged},
      {"best_restart", r.best_restart},
      {"objective_trace", r.objective_trace},
      {"jitter_events", r.jitter_events},
      {"max_jitter", r.max_jitter},
      {"target_offset", res.model.target_offset},
      {"whitened_dim", res.model.train.dim()},
      {"whitening_dropped", res.model.whitening ? res.model.whitening->dropped : 0},
  };
  const auto report_path = o.report.empty() ? std::filesystem::path(o.out.string() + ".report.json") : o.report;
  write_json(report, report_path);
  return report;
}

json cmd_predict(const PredictOptions& o) {
  const ModelFile mf = model_from_json(read_json(o.model));
  const ScoreRange range{mf.train.score_min, mf.train.score_max};
  const Dataset ds = load_dataset(o.data, o.format, range.min, range.max);
  const TrainedModel model = mf.build();
  const PredictiveDensity pd = predict_raw(mf, model, ds.features);

  std::ostringstream lines;
  for (std::size_t i = 0; i < pd.mean.size(); ++i) {
    const DiscreteDistribution dist = discretize_predictive(pd.mean[i], pd.var[i], range);
    json line = {{"index", i},
                 {"mean", pd.mean[i]},
                 {"latent_mean", pd.mean[i] - model.target_offset},
                 {"var", pd.var[i]},
                 {"latent_var", pd.latent_var[i]},
                 {"score", round_and_clamp(pd.mean[i], range)},
                 {"score_min", range.min},
                 {"probs", dist.probs}};
    lines << line.dump() << '\n';
  }
  write_text(lines.str(), o.out);
  return {{"version", kVersion},
          {"config", {{"model", o.model.string()}, {"data", o.data.string()}, {"out", o.out.string()}}},
          {"dataset_checksum", dataset_checksum(ds)},
          {"items", pd.mean.size()},
          {"clamped_latent_var", pd.clamped}};
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      out.push_back({j.at("mean").get<double>(), j.at("var").get<double>(), j.at("score").get<int>()});
    } catch (const json::exception& e) {
      throw ValidationError(path.string() + ": line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

json cmd_evaluate(const EvaluateOptions& o) {
  const Dataset ds = load_dataset(o.data, o.format, o.score_min, o.score_max);
  const auto preds = read_predictions(o.predictions);
  Vector mean, var;
  for (const auto& p : preds) {
    mean.push_back(p.mean);
    var.push_back(p.var);
  }
  const ScoreRange range{ds.score_min, ds.score_max};
  const EvalReport rep = evaluate(mean, var, ds.ratings, range);
  json report = {
      {"version", kVersion},
      {"config", {{"predictions", o.predictions.string()}, {"data", o.data.string()}, {"format", format_name(o.format)}}},
      {"dataset_checksum", dataset_checksum(ds)},
      {"n", mean.size()},
      {"pcc", rep.pcc ? json(*rep.pcc) : json(nullptr)},
      {"mse", rep.mse},
      {"kl", rep.kl},
      {"per_item_sq_err", rep.per_item_sq_err},
      {"per_item_kl", rep.per_item_kl},
      {"predicted_scores", rep.predicted_scores},
      {"reference_scores", rep.reference_scores},
  };
  write_json(report, o.out);
  if (!o.csv.empty()) {
    std::ostringstream csv;
    csv << "index,predicted_score,reference_score,sq_err,kl\n";
    csv.precision(17);
    for (std::size_t i = 0; i < mean.size(); ++i)
      csv << i << ',' << rep.predicted_scores[i] << ',' << rep.reference_scores[i] << ',' << rep.per_item_sq_err[i]
          << ',' << rep.per_item_kl[i] << '\n';
    write_text(csv.str(), o.csv);
  }
  return report;
}

json cmd_compare(const CompareOptions& o) {
  const Dataset ds = load_dataset(o.data, o.format, o.score_min, o.score_max);
  const json ra = read_json(o.report_a);
  const json rb = read_json(o.report_b);
  const auto pa = read_predictions(o.predictions_a);
  const auto pb = read_predictions(o.predictions_b);
  const std::size_t n = ds.size();
  if (pa.size() != n || pb.size() != n)
    throw ValidationError("compare: prediction files must have one line per data row (" + std::to_string(n) + ")");
  const std::string checksum = dataset_checksum(ds);
  for (const json* r : {&ra, &rb})
    if (r->value("dataset_checksum", std::string()) != checksum)
      throw ValidationError("compare: an evaluation report was computed on different data");

  const auto se_a = get_vector(ra, "per_item_sq_err", o.report_a);
  const auto se_b = get_vector(rb, "per_item_sq_err", o.report_b);
  const auto kl_a = get_vector(ra, "per_item_kl", o.report_a);
  const auto kl_b = get_vector(rb, "per_item_kl", o.report_b);

  json out = {
      {"version", kVersion},
      {"config",
       {{"report_a", o.report_a.string()}, {"report_b", o.report_b.string()},
        {"predictions_a", o.predictions_a.string()}, {"predictions_b", o.predictions_b.string()},
        {"data", o.data.string()}}},
      {"dataset_checksum", checksum},
      {"mse_a", ra.at("mse")}, {"mse_b", rb.at("mse")}, {"kl_a", ra.at("kl")}, {"kl_b", rb.at("kl")},
      {"pcc_a", ra.at("pcc")}, {"pcc_b", rb.at("pcc")},
      {"paired_t_mse", test_result_json(paired_t_test(se_a, se_b))},
      {"paired_t_kl", test_result_json(paired_t_test(kl_a, kl_b))},
  };

  Vector sa(n), sb(n);
  for (std::size_t i = 0; i < n; ++i) {
    sa[i] = pa[i].score;
    sb[i] = pb[i].score;
  }
  json z = nullptr;
  if (!ra.at("pcc").is_null() && !rb.at("pcc").is_null()) {
    const double r1 = ra.at("pcc").get<double>(), r2 = rb.at("pcc").get<double>();
    try {
      const double r12 = pcc(sa, sb);
      z = test_result_json(steiger_z1(r1, r2, r12, n));
      z["r_12"] = r12;
    } catch (const ValidationError& e) {
      z = {{"error", e.what()}};
    }
  }
  out["z1_pcc"] = z;
  write_json(out, o.out);
  return out;
}

json cmd_bench(const BenchCmdOptions& o) {
  const auto cells = run_bench(o.bench);
  json grid = json::array();
  std::map<std::pair<std::size_t, std::size_t>, std::map<Variant, double>> totals;
  std::ostringstream csv;
  csv << "n,r,variant,factor_mean_s,factor_std_s,predict_mean_s,predict_std_s,total_mean_s,total_std_s,repeats,threads\n";
  csv.precision(9);
  for (const auto& c : cells) {
    auto stats = [](const TimingStats& t) { return json{{"mean_s", t.mean}, {"std_s", t.std}}; };
    grid.push_back({{"n", c.n}, {"r", c.r}, {"variant", std::string(to_string(c.variant))},
                    {"factorization", stats(c.factorization)}, {"prediction", stats(c.prediction)},
                    {"total", stats(c.total)}, {"repeats", c.repeats}, {"threads", c.threads}});
    totals[{c.n, c.r}][c.variant] = c.total.mean;
    csv << c.n << ',' << c.r << ',' << to_string(c.variant) << ',' << c.factorization.mean << ','
        << c.factorization.std << ',' << c.prediction.mean << ',' << c.prediction.std << ',' << c.total.mean << ','
        << c.total.std << ',' << c.repeats << ',' << c.threads << '\n';
  }
  json ratios = json::array();
  for (const auto& [key, by_variant] : totals) {
    if (by_variant.count(Variant::repeat) && by_variant.count(Variant::joint))
      ratios.push_back({{"n", key.first}, {"r", key.second},
                        {"repeat_over_joint", by_variant.at(Variant::repeat) / by_variant.at(Variant::joint)}});
  }
  json variants = json::array();
  for (Variant v : o.bench.variants) variants.push_back(std::string(to_string(v)));
  json report = {{"version", kVersion},
                 {"config",
                  {{"grid_n", o.bench.grid_n}, {"grid_r", o.bench.grid_r}, {"variants", variants},
                   {"repeats", o.bench.repeats}, {"threads", o.bench.threads}, {"n_test", o.bench.n_test},
                   {"dim", o.bench.dim}, {"seed", o.bench.seed}}},
                 {"grid", grid},
                 {"ratios", ratios}};
  write_json(report, o.out);
  if (!o.csv.empty()) write_text(csv.str(), o.csv);
  return report;
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace mrgp::cli
