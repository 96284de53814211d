#include "gzsl/evalkit/metrics.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "gzsl/errors.hpp"

namespace gzsl::evalkit {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw UsageError(std::string(what) + ": " + std::to_string(a) + " predictions for " +
                     std::to_string(b) + " labels");
  }
}

}  // namespace

double per_class_top1(std::span<const int> predictions, std::span<const int> labels,
                      std::span<const int> class_set) {
  require_same_length(predictions.size(), labels.size(), "per_class_top1");
  if (class_set.empty()) throw UsageError("per_class_top1: empty class set");
  double sum = 0.0;
  for (int cls : class_set) {
    std::size_t total = 0, correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != cls) continue;
      ++total;
      if (predictions[i] == cls) ++correct;
    }
    if (total == 0) {
      throw UsageError("per_class_top1: class " + std::to_string(cls) + " has no samples");
    }
    sum += static_cast<double>(correct) / static_cast<double>(total);
  }
  return sum / static_cast<double>(class_set.size());
}

double harmonic_mean(double acc_seen, double acc_unseen) {
  const double denom = acc_seen + acc_unseen;
  if (denom == 0.0) return 0.0;
  return 2.0 * acc_seen * acc_unseen / denom;
}

MetricsReport compute_metrics(std::span<const int> predictions, std::span<const int> labels,
                              std::span<const int> seen_classes,
                              std::span<const int> unseen_classes) {
  require_same_length(predictions.size(), labels.size(), "compute_metrics");
  MetricsReport r;
  for (auto group : {seen_classes, unseen_classes}) {
    for (int cls : group) {
      const int one[] = {cls};
      r.per_class_acc[cls] = per_class_top1(predictions, labels, one);
    }
  }
  r.acc_seen = per_class_top1(predictions, labels, seen_classes);
  r.acc_unseen = per_class_top1(predictions, labels, unseen_classes);
  r.harmonic = harmonic_mean(r.acc_seen, r.acc_unseen);
  return r;
}

std::vector<std::vector<double>> confusion_matrix(std::span<const int> predictions,
                                                  std::span<const int> labels,
                                                  std::span<const int> class_order) {
  require_same_length(predictions.size(), labels.size(), "confusion_matrix");
  std::unordered_map<int, std::size_t> pos;
  for (std::size_t i = 0; i < class_order.size(); ++i) pos.emplace(class_order[i], i);
  const std::size_t k = class_order.size();
  std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
  std::vector<std::size_t> totals(k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto row = pos.find(labels[i]);
    const auto col = pos.find(predictions[i]);
    if (row == pos.end()) {
      throw ValidationError("confusion_matrix: unknown label " + std::to_string(labels[i]));
    }
    if (col == pos.end()) {
      throw ValidationError("confusion_matrix: unknown predicted class " +
                            std::to_string(predictions[i]));
    }
    m[row->second][col->second] += 1.0;
    ++totals[row->second];
  }
  for (std::size_t r = 0; r < k; ++r) {
    if (totals[r] == 0) continue;
    for (double& v : m[r]) v /= static_cast<double>(totals[r]);
  }
  return m;
}

EntropyHistogram entropy_histogram(std::span<const double> entropies,
                                   const std::vector<bool>& is_seen, std::size_t bin_count) {
  if (bin_count == 0) throw UsageError("entropy_histogram: bin_count must be >= 1");
  if (entropies.size() != is_seen.size()) {
    throw UsageError("entropy_histogram: entropies and flags differ in length");
  }
  EntropyHistogram h;
  if (entropies.empty()) return h;
  const double top = std::max(0.0, *std::max_element(entropies.begin(), entropies.end()));
  const double width = top / static_cast<double>(bin_count);
  for (std::size_t b = 0; b <= bin_count; ++b) h.edges.push_back(width * static_cast<double>(b));
  h.edges.back() = top;
  h.seen.assign(bin_count, 0);
  h.unseen.assign(bin_count, 0);
  for (std::size_t i = 0; i < entropies.size(); ++i) {
    std::size_t bin = 0;
    if (width > 0.0 && entropies[i] > 0.0) {
      bin = std::min(bin_count - 1, static_cast<std::size_t>(entropies[i] / width));
    }
    ++(is_seen[i] ? h.seen : h.unseen)[bin];
  }
  return h;
}

}  // namespace gzsl::evalkit
