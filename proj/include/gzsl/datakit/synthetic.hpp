#pragma once

#include <cstddef>
#include <cstdint>

#include "gzsl/datakit/dataset.hpp"

namespace gzsl::datakit {

/// Gaussian-cluster dataset with a tunable seen/unseen overlap.
///
/// Class centroids are drawn so every pair sits more than
/// `4 * cluster_spread` apart. Each unseen centroid is then moved toward its
/// nearest seen centroid by the `overlap` fraction (0 keeps it, 1 lands on
/// it). Attribute rows are a fixed random linear map of the final centroid
/// plus a small per-class perturbation, so attributes carry the information
/// needed to place unseen classes.
struct SyntheticSpec {
  std::size_t seen_count = 8;
  std::size_t unseen_count = 4;
  std::size_t visual_dim = 32;
  std::size_t attribute_dim = 16;
  std::size_t samples_per_class = 100;
  float cluster_spread = 1.0f;
  float overlap = 0.0f;
  float test_fraction = 0.2f;  // of each seen class; unseen rows are all test
  float attribute_noise = 0.05f;
  std::uint64_t seed = 0;

  void validate() const;
};

ZslDataset make_synthetic(const SyntheticSpec& spec);

/// Per-class centroids as generated (rows in class-id order); exposed for
/// measuring the overlap construction.
Matrix synthetic_centroids(const SyntheticSpec& spec);

}  // namespace gzsl::datakit
