#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gzsl/datakit/dataset.hpp"
#include "gzsl/gml/dual_vae.hpp"
#include "gzsl/numkit/rng.hpp"

namespace gzsl::evalkit {

using numkit::Matrix;

/// Average precision of a ranked list: sum of precision@k over relevant
/// positions k, divided by min(list length, total_relevant). Returns 0 when
/// nothing is relevant.
double average_precision(std::span<const bool> relevant_ranked, std::size_t total_relevant);
double average_precision(const std::vector<bool>& relevant_ranked, std::size_t total_relevant);

/// Throws UsageError unless ratio is 25, 50 or 100 (percent).
void validate_ratio(int ratio_percent);

struct RetrievalResult {
  std::vector<std::size_t> ranked;  // gallery row positions, truncated
  std::vector<bool> relevant;       // parallel to ranked
  std::size_t relevant_total = 0;   // relevant items in the whole gallery
  double average_precision = 0.0;
};

/// Ranks gallery latents by ascending Euclidean distance to `query` (ties by
/// gallery order) and keeps ceil(ratio% of the relevant count) items.
RetrievalResult rank_gallery(std::span<const float> query, const Matrix& gallery_latents,
                             std::span<const int> gallery_labels, int target_class,
                             int ratio_percent);

/// Query latent = mean of n_generate codes sampled from the semantic encoder
/// for `class_attribute`; the gallery is mean-encoded by the visual encoder.
RetrievalResult retrieve(const gml::DualVae& vae, std::span<const float> class_attribute,
                         const Matrix& gallery_visual, std::span<const int> gallery_labels,
                         int target_class, std::size_t n_generate, int ratio_percent,
                         numkit::Rng& rng);

struct RetrievalReport {
  std::vector<int> classes;
  std::vector<double> average_precision;  // per class
  double mean_average_precision = 0.0;
};

/// Retrieval over the dataset's test rows for each class in `classes`.
RetrievalReport retrieve_classes(const gml::DualVae& vae, const datakit::ZslDataset& dataset,
                                 std::span<const int> classes, std::size_t n_generate,
                                 int ratio_percent, numkit::Rng& rng);

}  // namespace gzsl::evalkit
