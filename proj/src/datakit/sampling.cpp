#include "gzsl/datakit/sampling.hpp"

#include <string>

#include "gzsl/errors.hpp"

namespace gzsl::datakit {

TripletSampler::TripletSampler(const ZslDataset& dataset)
    : dataset_(&dataset), classes_(dataset.seen_classes) {
  if (classes_.size() < 2) {
    throw UsageError("triplet sampling needs at least 2 seen classes for negatives");
  }
  for (int c : classes_) rows_by_class_[c] = {};
  for (std::size_t i : dataset.train_index) rows_by_class_[dataset.labels[i]].push_back(i);
  for (int c : classes_) {
    if (rows_by_class_[c].empty()) {
      throw SamplingError("seen class " + std::to_string(c) + " has no training rows");
    }
  }
}

gml::TripletBatch TripletSampler::sample(std::size_t batch_size, numkit::Rng& rng) const {
  const ZslDataset& ds = *dataset_;
  std::vector<std::size_t> anchor_rows, positive_rows, negative_rows;
  for (std::size_t b = 0; b < batch_size; ++b) {
    const std::size_t a = ds.train_index[numkit::uniform_index(ds.train_index.size(), rng)];
    const int cls = ds.labels[a];
    const auto& same = rows_by_class_.at(cls);
    std::size_t p = a;
    if (same.size() > 1) {
      do {
        p = same[numkit::uniform_index(same.size(), rng)];
      } while (p == a);
    }
    std::size_t k = numkit::uniform_index(classes_.size() - 1, rng);
    // skip over the anchor class
    int neg_cls = classes_[k];
    if (neg_cls == cls) neg_cls = classes_.back();
    const auto& other = rows_by_class_.at(neg_cls);
    anchor_rows.push_back(a);
    positive_rows.push_back(p);
    negative_rows.push_back(other[numkit::uniform_index(other.size(), rng)]);
  }

  auto build = [&](const std::vector<std::size_t>& rows) {
    gml::TripletPart part;
    part.visual = numkit::gather_rows(ds.visual, rows);
    std::vector<std::size_t> classes;
    for (std::size_t r : rows) {
      part.labels.push_back(ds.labels[r]);
      classes.push_back(static_cast<std::size_t>(ds.labels[r]));
    }
    part.semantic = numkit::gather_rows(ds.attributes, classes);
    return part;
  };
  return {build(anchor_rows), build(positive_rows), build(negative_rows)};
}

gml::TripletBatch sample_triplet_batch(const ZslDataset& dataset, std::size_t batch_size,
                                       numkit::Rng& rng) {
  return TripletSampler(dataset).sample(batch_size, rng);
}

}  // namespace gzsl::datakit
