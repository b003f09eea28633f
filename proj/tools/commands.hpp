#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrgp/pipeline.hpp"
#include "mrgp/synthetic.hpp"

namespace mrgp::cli {

inline constexpr const char* kVersion = "mrgp 1.0.0";

enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kNumeric = 3, kIo = 4 };

struct SynthOptions {
  SyntheticSpec spec;
  std::filesystem::path out = "synth";
  DataFormat format = DataFormat::json;
};

struct TrainCmdOptions {
  std::filesystem::path data;
  DataFormat format = DataFormat::json;
  int score_min = 0;  // csv only
  int score_max = 10;
  TrainOptions train;
  std::filesystem::path out = "model.json";
  std::filesystem::path report;  // defaults to <out>.report.json
};

struct PredictOptions {
  std::filesystem::path model;
  std::filesystem::path data;
  DataFormat format = DataFormat::json;
  std::filesystem::path out = "predictions.jsonl";
};

struct EvaluateOptions {
  std::filesystem::path predictions;
  std::filesystem::path data;
  DataFormat format = DataFormat::json;
  int score_min = 0;  // csv only
  int score_max = 10;
  std::filesystem::path out = "eval.json";
  std::filesystem::path csv;  // optional per-item table
};

struct CompareOptions {
  std::filesystem::path report_a, report_b;
  std::filesystem::path predictions_a, predictions_b;
  std::filesystem::path data;
  DataFormat format = DataFormat::json;
  int score_min = 0;
  int score_max = 10;
  std::filesystem::path out = "compare.json";
};

struct BenchCmdOptions {
  BenchOptions bench;
  std::filesystem::path out = "bench.json";
  std::filesystem::path csv;
};

/// Each command writes its files and returns the report it wrote.
nlohmann::json cmd_synth(const SynthOptions& o);
nlohmann::json cmd_train(const TrainCmdOptions& o);
nlohmann::json cmd_predict(const PredictOptions& o);
nlohmann::json cmd_evaluate(const EvaluateOptions& o);
nlohmann::json cmd_compare(const CompareOptions& o);
nlohmann::json cmd_bench(const BenchCmdOptions& o);

/// One parsed line of a predictions file.
struct PredictionRecord {
  double mean = 0.0;
  double var = 0.0;
  int score = 0;
};
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);

/// Maps exceptions to exit codes and prints the message to stderr.
int run_guarded(const std::function<void()>& body);

}  // namespace mrgp::cli
