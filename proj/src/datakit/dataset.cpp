#include "gzsl/datakit/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "gzsl/errors.hpp"
#include "gzsl/numkit/binary_io.hpp"

namespace gzsl::datakit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormat = "gzsl-dataset";
constexpr int kVersion = 1;

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void write_matrix(const Matrix& m, const fs::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  numkit::write_f32_le(os, m.values());
  if (!os) throw IoError("write failed for " + path.string());
}

Matrix read_matrix(const fs::path& path, std::size_t rows, std::size_t cols) {
  std::error_code ec;
  const auto bytes = fs::file_size(path, ec);
  if (ec) throw IoError("cannot stat " + path.string());
  if (bytes != rows * cols * 4) {
    throw ValidationError(path.filename().string() + " holds " + std::to_string(bytes) +
                          " bytes; manifest declares " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " float32");
  }
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return Matrix(rows, cols, numkit::read_f32_le(is, rows * cols));
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("manifest is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("manifest field '") + key + "': " + e.what());
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    cell.erase(0, cell.find_first_not_of(" \t\r"));
    cell.erase(cell.find_last_not_of(" \t\r") + 1);
    cells.push_back(cell);
  }
  return cells;
}

float parse_float(const std::string& cell, const fs::path& file) {
  try {
    std::size_t used = 0;
    const float v = std::stof(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(file.string() + ": '" + cell + "' is not a number");
  }
}

}  // namespace

bool ZslDataset::is_seen(int cls) const { return contains(seen_classes, cls); }

bool ZslDataset::is_unseen(int cls) const { return contains(unseen_classes, cls); }

std::vector<std::size_t> ZslDataset::train_rows_of(int cls) const {
  std::vector<std::size_t> rows;
  for (std::size_t i : train_index) {
    if (labels[i] == cls) rows.push_back(i);
  }
  return rows;
}

void ZslDataset::validate() const {
  const std::size_t n = visual.rows();
  const int c = static_cast<int>(attributes.rows());
  if (labels.size() != n) {
    throw ValidationError("label count " + std::to_string(labels.size()) +
                          " does not match sample count " + std::to_string(n));
  }
  std::set<int> seen(seen_classes.begin(), seen_classes.end());
  std::set<int> unseen(unseen_classes.begin(), unseen_classes.end());
  if (seen.size() != seen_classes.size() || unseen.size() != unseen_classes.size()) {
    throw ValidationError("duplicate class id in seen/unseen lists");
  }
  for (int s : seen) {
    if (unseen.count(s) != 0) {
      throw ValidationError("class " + std::to_string(s) + " is both seen and unseen");
    }
  }
  if (seen.size() + unseen.size() != static_cast<std::size_t>(c)) {
    throw ValidationError("seen + unseen class count does not equal attribute rows");
  }
  for (int cls : seen) {
    if (cls < 0 || cls >= c) throw ValidationError("seen class id out of range");
  }
  for (int cls : unseen) {
    if (cls < 0 || cls >= c) throw ValidationError("unseen class id out of range");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= c) {
      throw ValidationError("label " + std::to_string(labels[i]) + " at row " +
                            std::to_string(i) + " is out of range");
    }
  }
  std::vector<char> used(n, 0);
  for (std::size_t i : train_index) {
    if (i >= n) throw ValidationError("train index out of range");
    if (used[i] != 0) throw ValidationError("row listed twice in train/test indices");
    used[i] = 1;
    if (seen.count(labels[i]) == 0) {
      throw ValidationError("train row " + std::to_string(i) + " belongs to an unseen class");
    }
  }
  for (std::size_t i : test_index) {
    if (i >= n) throw ValidationError("test index out of range");
    if (used[i] != 0) throw ValidationError("row listed twice in train/test indices");
    used[i] = 1;
  }
  if (!visual.all_finite() || !attributes.all_finite()) {
    throw ValidationError("dataset contains non-finite values");
  }
}

void save_dataset(const ZslDataset& ds, const fs::path& dir) {
  ds.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  json manifest = {
      {"format", kFormat},
      {"version", kVersion},
      {"num_samples", ds.num_samples()},
      {"visual_dim", ds.visual_dim()},
      {"num_classes", ds.num_classes()},
      {"attribute_dim", ds.attribute_dim()},
      {"seen_classes", ds.seen_classes},
      {"unseen_classes", ds.unseen_classes},
      {"train_index", ds.train_index},
      {"test_index", ds.test_index},
      {"labels", ds.labels},
      {"files", {{"visual", "visual.f32"}, {"attributes", "attributes.f32"}}},
  };
  write_matrix(ds.visual, dir / "visual.f32");
  write_matrix(ds.attributes, dir / "attributes.f32");
  std::ofstream os(dir / "manifest.json", std::ios::trunc);
  if (!os) throw IoError("cannot write manifest in " + dir.string());
  os << manifest.dump(2) << "\n";
}

ZslDataset load_dataset(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  std::ifstream is(manifest_path);
  if (!is) throw IoError("cannot open " + manifest_path.string());
  json m;
  try {
    is >> m;
  } catch (const json::exception& e) {
    throw ValidationError("malformed manifest: " + std::string(e.what()));
  }
  if (m.value("format", std::string()) != kFormat) {
    throw ValidationError("manifest format is not '" + std::string(kFormat) + "'");
  }
  if (m.value("version", 0) != kVersion) throw ValidationError("unsupported manifest version");

  const auto n = required<std::size_t>(m, "num_samples");
  const auto d = required<std::size_t>(m, "visual_dim");
  const auto c = required<std::size_t>(m, "num_classes");
  const auto a = required<std::size_t>(m, "attribute_dim");
  const json files = m.value("files", json::object());
  const std::string visual_file = files.value("visual", "visual.f32");
  const std::string attr_file = files.value("attributes", "attributes.f32");

  ZslDataset ds;
  ds.visual = read_matrix(dir / visual_file, n, d);
  ds.attributes = read_matrix(dir / attr_file, c, a);
  ds.labels = required<std::vector<int>>(m, "labels");
  ds.seen_classes = required<std::vector<int>>(m, "seen_classes");
  ds.unseen_classes = required<std::vector<int>>(m, "unseen_classes");
  ds.train_index = required<std::vector<std::size_t>>(m, "train_index");
  ds.test_index = required<std::vector<std::size_t>>(m, "test_index");
  ds.validate();
  return ds;
}

ZslDataset import_csv(const fs::path& samples_csv, const fs::path& attributes_csv,
                      const std::vector<int>& seen_classes) {
  std::ifstream samples(samples_csv);
  if (!samples) throw IoError("cannot open " + samples_csv.string());
  std::ifstream attrs(attributes_csv);
  if (!attrs) throw IoError("cannot open " + attributes_csv.string());

  std::string line;
  if (!std::getline(samples, line)) throw ValidationError(samples_csv.string() + " is empty");
  const auto header = split_csv_line(line);
  std::ptrdiff_t label_col = -1, split_col = -1;
  std::vector<std::size_t> feature_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "label") {
      label_col = static_cast<std::ptrdiff_t>(i);
    } else if (header[i] == "split") {
      split_col = static_cast<std::ptrdiff_t>(i);
    } else {
      feature_cols.push_back(i);
    }
  }
  if (label_col < 0) throw ValidationError(samples_csv.string() + " has no 'label' column");

  std::vector<float> visual;
  std::vector<int> labels;
  std::vector<int> is_train;
  while (std::getline(samples, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ValidationError(samples_csv.string() + ": row has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(header.size()));
    }
    for (std::size_t col : feature_cols) visual.push_back(parse_float(cells[col], samples_csv));
    labels.push_back(static_cast<int>(parse_float(cells[static_cast<std::size_t>(label_col)],
                                                  samples_csv)));
    if (split_col >= 0) {
      const std::string& s = cells[static_cast<std::size_t>(split_col)];
      if (s != "train" && s != "test") {
        throw ValidationError(samples_csv.string() + ": split must be train or test");
      }
      is_train.push_back(s == "train" ? 1 : 0);
    }
  }

  std::vector<float> attr_values;
  std::size_t attr_rows = 0, attr_cols = 0;
  if (!std::getline(attrs, line)) throw ValidationError(attributes_csv.string() + " is empty");
  attr_cols = split_csv_line(line).size();
  while (std::getline(attrs, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != attr_cols) throw ValidationError(attributes_csv.string() + ": ragged row");
    for (const auto& cell : cells) attr_values.push_back(parse_float(cell, attributes_csv));
    ++attr_rows;
  }

  ZslDataset ds;
  ds.visual = Matrix(labels.size(), feature_cols.size(), std::move(visual));
  ds.attributes = Matrix(attr_rows, attr_cols, std::move(attr_values));
  ds.labels = labels;
  ds.seen_classes = seen_classes;
  std::sort(ds.seen_classes.begin(), ds.seen_classes.end());
  for (int c = 0; c < static_cast<int>(attr_rows); ++c) {
    if (!contains(ds.seen_classes, c)) ds.unseen_classes.push_back(c);
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool train = split_col >= 0 ? is_train[i] != 0 : contains(ds.seen_classes, labels[i]);
    (train ? ds.train_index : ds.test_index).push_back(i);
  }
  ds.validate();
  return ds;
}

}  // namespace gzsl::datakit
