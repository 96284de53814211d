#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "gzsl/numkit/matrix.hpp"

namespace gzsl::datakit {

using numkit::Matrix;

/// Precomputed visual features with per-class attribute rows and a
/// seen/unseen class split. Class ids are 0 .. num_classes() - 1 and index the
/// attribute rows.
struct ZslDataset {
  Matrix visual;      // N x D
  Matrix attributes;  // C x A
  std::vector<int> labels;
  std::vector<int> seen_classes;
  std::vector<int> unseen_classes;
  std::vector<std::size_t> train_index;
  std::vector<std::size_t> test_index;

  std::size_t num_samples() const { return visual.rows(); }
  std::size_t num_classes() const { return attributes.rows(); }
  std::size_t visual_dim() const { return visual.cols(); }
  std::size_t attribute_dim() const { return attributes.cols(); }

  bool is_seen(int cls) const;
  bool is_unseen(int cls) const;

  /// Training rows of `cls`, in train_index order.
  std::vector<std::size_t> train_rows_of(int cls) const;

  /// Throws ValidationError on any broken invariant: disjoint split covering
  /// every class, labels in range, train rows only from seen classes.
  void validate() const;

  friend bool operator==(const ZslDataset&, const ZslDataset&) = default;
};

/// Writes manifest.json plus visual.f32 and attributes.f32 (raw little-endian
/// float32, row-major) into `dir`, creating it when needed.
void save_dataset(const ZslDataset& ds, const std::filesystem::path& dir);

/// Reads a dataset directory written by save_dataset (or by hand). Throws
/// IoError for missing files and ValidationError for inconsistent content.
ZslDataset load_dataset(const std::filesystem::path& dir);

/// Builds a dataset from two small CSV files. `samples_csv` has a header row,
/// a column named "label", an optional "split" column (train|test) and numeric
/// feature columns. `attributes_csv` has a header row and one numeric row per
/// class in class-id order. Without a split column, seen rows train and unseen
/// rows test.
ZslDataset import_csv(const std::filesystem::path& samples_csv,
                      const std::filesystem::path& attributes_csv,
                      const std::vector<int>& seen_classes);

}  // namespace gzsl::datakit
