#include "mrgp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace mrgp {

using nlohmann::json;

DataFormat parse_format(std::string_view s) {
  if (s == "json") return DataFormat::json;
  if (s == "csv") return DataFormat::csv;
  throw ValidationError("unknown format '" + std::string(s) + "' (expected json or csv)");
}

DataFormat format_from_path(const std::filesystem::path& p) {
  return p.extension() == ".csv" ? DataFormat::csv : DataFormat::json;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json(const json& j, const std::filesystem::path& path) { write_text(j.dump(2) + "\n", path); }

namespace {

json number(double v) {
  if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 9e15) return json(static_cast<std::int64_t>(v));
  return json(v);
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError(where + ": expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) throw ValidationError("missing integer field '" + key + "'");
  return j.at(key).get<int>();
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, const std::string& where) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ValidationError(where + ": cannot parse '" + std::string(s) + "' as a number");
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + ": expected an array of rows");
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& r = j[i];
    if (!r.is_array()) throw ValidationError(what + ": row " + std::to_string(i) + " is not an array");
    Vector row;
    for (const auto& v : r) row.push_back(get_number(v, what + ": row " + std::to_string(i)));
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(rows);
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(json(std::vector<double>(m.row(i).begin(), m.row(i).end())));
  return rows;
}

}  // namespace

json dataset_to_json(const Dataset& ds) {
  json items = json::array();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    json ratings = json::array();
    for (double y : ds.ratings[i]) ratings.push_back(number(y));
    items.push_back({{"features", std::vector<double>(ds.features.row(i).begin(), ds.features.row(i).end())},
                     {"ratings", std::move(ratings)}});
  }
  return {{"score_min", ds.score_min}, {"score_max", ds.score_max}, {"items", std::move(items)}};
}

Dataset dataset_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("dataset: top level must be an object");
  Dataset ds;
  ds.score_min = get_int(j, "score_min");
  ds.score_max = get_int(j, "score_max");
  if (!j.contains("items") || !j.at("items").is_array()) throw ValidationError("dataset: missing array 'items'");
  const auto& items = j.at("items");
  std::vector<Vector> features;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    const std::string where = "dataset: item " + std::to_string(i);
    if (!it.is_object()) throw ValidationError(where + ": not an object");
    if (!it.contains("features") || !it.at("features").is_array())
      throw ValidationError(where + ": missing array 'features'");
    if (!it.contains("ratings") || !it.at("ratings").is_array())
      throw ValidationError(where + ": missing array 'ratings'");
    Vector f, r;
    for (const auto& v : it.at("features")) f.push_back(get_number(v, where + " field 'features'"));
    for (const auto& v : it.at("ratings")) r.push_back(get_number(v, where + " field 'ratings'"));
    if (!features.empty() && f.size() != features.front().size())
      throw ValidationError(where + ": expected " + std::to_string(features.front().size()) + " features, got " +
                            std::to_string(f.size()));
    features.push_back(std::move(f));
    ds.ratings.push_back(std::move(r));
  }
  ds.features = Matrix::from_rows(features);
  ds.validate();
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format, int csv_score_min, int csv_score_max) {
  if (format == DataFormat::json) {
    try {
      return dataset_from_json(read_json(path));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
  }
  const std::string text = read_text(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty csv");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  std::size_t d = 0, r = 0;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(header[c]);
    if (r == 0 && name == "f" + std::to_string(d)) {
      ++d;
    } else if (name == "r" + std::to_string(r)) {
      ++r;
    } else {
      throw ValidationError(path.string() + ": unexpected header column '" + name + "' at position " +
                            std::to_string(c));
    }
  }
  if (d == 0 || r == 0) throw ValidationError(path.string() + ": header needs f0.. and r0.. columns");
  Dataset ds;
  ds.score_min = csv_score_min;
  ds.score_max = csv_score_max;
  std::vector<Vector> features;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    const std::string where = path.string() + ": row " + std::to_string(features.size()) + " (line " +
                              std::to_string(lineno) + ")";
    if (cells.size() != d + r)
      throw ValidationError(where + ": expected " + std::to_string(d + r) + " fields, got " +
                            std::to_string(cells.size()));
    Vector f(d), y(r);
    for (std::size_t c = 0; c < d; ++c) f[c] = parse_double(cells[c], where + " field f" + std::to_string(c));
    for (std::size_t c = 0; c < r; ++c) y[c] = parse_double(cells[d + c], where + " field r" + std::to_string(c));
    features.push_back(std::move(f));
    ds.ratings.push_back(std::move(y));
  }
  ds.features = Matrix::from_rows(features);
  try {
    ds.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path, DataFormat format) {
  if (format == DataFormat::json) {
    write_json(dataset_to_json(ds), path);
    return;
  }
  const std::size_t r = ds.constant_raters();
  if (r == 0) throw ValidationError("save_dataset: csv needs the same number of ratings on every row");
  std::string out;
  for (std::size_t c = 0; c < ds.dim(); ++c) out += "f" + std::to_string(c) + ",";
  for (std::size_t c = 0; c < r; ++c) out += "r" + std::to_string(c) + (c + 1 < r ? "," : "\n");
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.features.row(i)) out += format_double(v) + ",";
    for (std::size_t c = 0; c < r; ++c) out += format_double(ds.ratings[i][c]) + (c + 1 < r ? "," : "\n");
  }
  write_text(out, path);
}

std::string dataset_checksum(const Dataset& ds) {
  const std::string canonical = dataset_to_json(ds).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json whitening_to_json(const WhiteningTransform& t) {
  return {{"mean", t.mean}, {"basis", matrix_to_json(t.basis)}, {"eps", t.eps}, {"dropped", t.dropped}};
}

WhiteningTransform whitening_from_json(const json& j) {
  WhiteningTransform t;
  try {
    t.mean = j.at("mean").get<Vector>();
    t.basis = matrix_from_json(j.at("basis"), "whitening basis");
    t.eps = j.at("eps").get<double>();
    t.dropped = j.at("dropped").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("whitening: ") + e.what());
  }
  if (t.basis.cols() != t.mean.size()) throw ValidationError("whitening: basis and mean disagree in dimension");
  return t;
}

Matrix ModelFile::prepare_inputs(const Matrix& raw) const {
  return whitening ? apply_whitening(*whitening, raw) : raw;
}

json model_to_json(const ModelFile& m) {
  return {{"format", "mrgp-model"},
          {"version", ModelFile::kVersion},
          {"variant", std::string(to_string(m.variant))},
          {"hyperparameters", {{"log_s", m.hp.log_s}, {"log_l", m.hp.log_l}, {"log_sigma", m.hp.log_sigma}}},
          {"target_offset", m.target_offset},
          {"whitening", m.whitening ? whitening_to_json(*m.whitening) : json(nullptr)},
          {"train", dataset_to_json(m.train)}};
}

ModelFile model_from_json(const json& j) {
  ModelFile m;
  try {
    if (j.at("format") != "mrgp-model") throw ValidationError("model: not a model file");
    const int version = j.at("version").get<int>();
    if (version != ModelFile::kVersion) throw ValidationError("model: unsupported version " + std::to_string(version));
    m.variant = parse_variant(j.at("variant").get<std::string>());
    const auto& hp = j.at("hyperparameters");
    m.hp = {hp.at("log_s").get<double>(), hp.at("log_l").get<double>(), hp.at("log_sigma").get<double>()};
    m.target_offset = j.at("target_offset").get<double>();
    if (!j.at("whitening").is_null()) m.whitening = whitening_from_json(j.at("whitening"));
    m.train = dataset_from_json(j.at("train"));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model: ") + e.what());
  }
  return m;
}

}  // namespace mrgp
