#pragma once

#include <optional>
#include <vector>

#include "mrgp/io.hpp"
#include "mrgp/metrics.hpp"
#include "mrgp/optimizer.hpp"

namespace mrgp {

struct TrainOptions {
  Variant variant = Variant::joint;
  OptimizerConfig optimizer;
  bool whiten = true;
  double whiten_eps = 1e-8;
  std::optional<Hyperparameters> init;
};

struct TrainResult {
  ModelFile model;
  FitReport report;
};

/// Whitening fit on the training features, then likelihood maximization with
/// ratings centred on the score-range midpoint.
TrainResult train(const Dataset& train_set, const TrainOptions& opts);

/// Whitens raw test inputs with the model's transform and predicts.
PredictiveDensity predict_raw(const ModelFile& model, const TrainedModel& fitted, const Matrix& raw_inputs);

struct BenchOptions {
  std::vector<std::size_t> grid_n{100, 200};
  std::vector<std::size_t> grid_r{1, 5};
  std::vector<Variant> variants{Variant::base, Variant::joint, Variant::repeat};
  int repeats = 5;
  int threads = 1;
  std::size_t n_test = 200;
  std::size_t dim = 4;
  std::uint64_t seed = 0;
};

struct TimingStats {
  double mean = 0.0;
  double std = 0.0;
};

struct BenchCell {
  std::size_t n = 0;
  std::size_t r = 0;
  Variant variant = Variant::joint;
  TimingStats factorization;
  TimingStats prediction;
  TimingStats total;
  int repeats = 0;
  int threads = 0;
};

/// Times fit (kernel + Cholesky + weights) and prediction of a fixed test
/// block, `repeats` times per cell, after one untimed warm-up.
std::vector<BenchCell> run_bench(const BenchOptions& opts);

}  // namespace mrgp
