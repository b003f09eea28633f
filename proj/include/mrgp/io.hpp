#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mrgp/dataset.hpp"
#include "mrgp/gp.hpp"
#include "mrgp/whitening.hpp"

namespace mrgp {

enum class DataFormat { json, csv };
DataFormat parse_format(std::string_view s);
/// json unless the extension is .csv.
DataFormat format_from_path(const std::filesystem::path& p);

/// CSV files carry no score range; it is supplied by the caller.
Dataset load_dataset(const std::filesystem::path& path, DataFormat format, int csv_score_min = 0,
                     int csv_score_max = 10);
void save_dataset(const Dataset& ds, const std::filesystem::path& path, DataFormat format);

nlohmann::json dataset_to_json(const Dataset& ds);
Dataset dataset_from_json(const nlohmann::json& j);

/// FNV-1a 64 over the canonical JSON form, as 16 hex digits.
std::string dataset_checksum(const Dataset& ds);

nlohmann::json whitening_to_json(const WhiteningTransform& t);
WhiteningTransform whitening_from_json(const nlohmann::json& j);

/// Everything needed to rebuild a TrainedModel deterministically.
struct ModelFile {
  static constexpr int kVersion = 1;
  Variant variant = Variant::joint;
  Hyperparameters hp;
  double target_offset = 0.0;
  std::optional<WhiteningTransform> whitening;
  /// Training set with features already whitened.
  Dataset train;

  TrainedModel build() const { return fit(train, variant, hp, target_offset); }
  /// Applies the stored whitening, if any.
  Matrix prepare_inputs(const Matrix& raw) const;
};

nlohmann::json model_to_json(const ModelFile& m);
ModelFile model_from_json(const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);
/// Pretty-printed with sorted keys and a trailing newline.
void write_json(const nlohmann::json& j, const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

}  // namespace mrgp
