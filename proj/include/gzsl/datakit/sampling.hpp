#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "gzsl/datakit/dataset.hpp"
#include "gzsl/gml/types.hpp"
#include "gzsl/numkit/rng.hpp"

namespace gzsl::datakit {

/// Draws triplet batches from the training split. Anchors are uniform over
/// training rows; the positive is another training row of the anchor's class
/// (the anchor itself only when the class has a single row); the negative
/// comes from a class drawn uniformly among the other seen classes. Semantic
/// parts are the attribute rows of each member's class.
class TripletSampler {
 public:
  /// Throws UsageError with fewer than 2 seen classes and SamplingError when
  /// a seen class has no training rows.
  explicit TripletSampler(const ZslDataset& dataset);

  gml::TripletBatch sample(std::size_t batch_size, numkit::Rng& rng) const;

 private:
  const ZslDataset* dataset_;
  std::vector<int> classes_;
  std::map<int, std::vector<std::size_t>> rows_by_class_;
};

gml::TripletBatch sample_triplet_batch(const ZslDataset& dataset, std::size_t batch_size,
                                       numkit::Rng& rng);

}  // namespace gzsl::datakit
