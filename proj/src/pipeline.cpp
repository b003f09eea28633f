#include "mrgp/pipeline.hpp"

#include <chrono>
#include <cmath>

#include <omp.h>

#include "mrgp/synthetic.hpp"

namespace mrgp {

TrainResult train(const Dataset& train_set, const TrainOptions& opts) {
  train_set.validate();
  TrainResult out;
  out.model.variant = opts.variant;
  out.model.target_offset = train_set.range_midpoint();
  out.model.train = train_set;
  if (opts.whiten) {
    out.model.whitening = fit_whitening(train_set.features, opts.whiten_eps);
    out.model.train.features = apply_whitening(*out.model.whitening, train_set.features);
  }
  out.report = maximize(out.model.train, opts.variant, opts.optimizer, opts.init, out.model.target_offset);
  out.model.hp = out.report.final_hp;
  return out;
}

PredictiveDensity predict_raw(const ModelFile& model, const TrainedModel& fitted, const Matrix& raw_inputs) {
  return predict(fitted, model.prepare_inputs(raw_inputs));
}

namespace {

TimingStats summarize(const std::vector<double>& xs) {
  TimingStats s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.std = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return s;
}

}  // namespace

std::vector<BenchCell> run_bench(const BenchOptions& opts) {
  if (opts.repeats < 3) throw ValidationError("bench: repeats must be >= 3");
  if (opts.threads < 1) throw ValidationError("bench: threads must be >= 1");
  const int saved_threads = omp_get_max_threads();
  omp_set_num_threads(opts.threads);
  using clock = std::chrono::steady_clock;
  const Hyperparameters hp = Hyperparameters::from_natural(1.0, 1.0, 0.5);

  std::vector<BenchCell> cells;
  for (std::size_t n : opts.grid_n) {
    for (std::size_t r : opts.grid_r) {
      SyntheticSpec spec;
      spec.n_train = n;
      spec.n_test = opts.n_test;
      spec.dim = opts.dim;
      spec.raters = r;
      spec.true_hp = hp;
      spec.seed = opts.seed;
      const SyntheticData data = generate_synthetic(spec);
      const double offset = data.train.range_midpoint();
      for (Variant v : opts.variants) {
        BenchCell cell{n, r, v, {}, {}, {}, opts.repeats, opts.threads};
        std::vector<double> tf, tp, tt;
        for (int rep = -1; rep < opts.repeats; ++rep) {
          const auto t0 = clock::now();
          const TrainedModel model = fit(data.train, v, hp, offset);
          const auto t1 = clock::now();
          const PredictiveDensity pd = predict(model, data.test.features);
          const auto t2 = clock::now();
          if (pd.mean.size() != opts.n_test) throw NumericError("bench: prediction size mismatch");
          if (rep < 0) continue;  // warm-up
          tf.push_back(std::chrono::duration<double>(t1 - t0).count());
          tp.push_back(std::chrono::duration<double>(t2 - t1).count());
          tt.push_back(std::chrono::duration<double>(t2 - t0).count());
        }
        cell.factorization = summarize(tf);
        cell.prediction = summarize(tp);
        cell.total = summarize(tt);
        cells.push_back(cell);
      }
    }
  }
  omp_set_num_threads(saved_threads);
  return cells;
}

}  // namespace mrgp
