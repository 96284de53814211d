#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace gzsl::evalkit {

/// Mean over `class_set` of the fraction of each class's samples predicted
/// correctly. Throws UsageError when a class has no samples or the spans
/// differ in length.
double per_class_top1(std::span<const int> predictions, std::span<const int> labels,
                      std::span<const int> class_set);

/// 2ab / (a + b); 0 when both are 0.
double harmonic_mean(double acc_seen, double acc_unseen);

struct MetricsReport {
  std::map<int, double> per_class_acc;
  double acc_seen = 0.0;
  double acc_unseen = 0.0;
  double harmonic = 0.0;
  std::optional<double> zsl_acc;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Generalized protocol: predictions range over all classes; seen and unseen
/// accuracies are per-class top-1 over the respective label groups.
MetricsReport compute_metrics(std::span<const int> predictions, std::span<const int> labels,
                              std::span<const int> seen_classes,
                              std::span<const int> unseen_classes);

/// Row-normalized confusion matrix, rows and columns in `class_order`. A row
/// whose class has no samples stays zero. Throws ValidationError when a
/// prediction or label is not in class_order.
std::vector<std::vector<double>> confusion_matrix(std::span<const int> predictions,
                                                  std::span<const int> labels,
                                                  std::span<const int> class_order);

struct EntropyHistogram {
  std::vector<double> edges;  // bin_count + 1 values over [0, max entropy]
  std::vector<std::size_t> seen;
  std::vector<std::size_t> unseen;
};

/// Seen and unseen histograms with shared edges. Bins are half-open except the
/// last, which includes the maximum. Empty input yields empty vectors.
EntropyHistogram entropy_histogram(std::span<const double> entropies,
                                   const std::vector<bool>& is_seen, std::size_t bin_count);

}  // namespace gzsl::evalkit
