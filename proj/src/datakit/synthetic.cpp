#include "gzsl/datakit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gzsl/errors.hpp"
#include "gzsl/numkit/rng.hpp"

namespace gzsl::datakit {

namespace {

// Typical pairwise centroid distance in units of cluster_spread.
constexpr double kTypicalSeparation = 8.0;
constexpr double kMinSeparation = 4.0;
constexpr int kMaxDrawAttempts = 10000;

double distance(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

// Raw centroids, pairwise separated by more than kMinSeparation * spread.
Matrix draw_raw_centroids(const SyntheticSpec& spec, numkit::Rng& rng) {
  const std::size_t classes = spec.seen_count + spec.unseen_count;
  const double sigma =
      kTypicalSeparation * spec.cluster_spread / std::sqrt(2.0 * static_cast<double>(spec.visual_dim));
  const double min_gap = kMinSeparation * spec.cluster_spread;
  std::normal_distribution<double> normal(0.0, sigma);
  Matrix centroids(classes, spec.visual_dim);
  for (std::size_t c = 0; c < classes; ++c) {
    int attempts = 0;
    for (;;) {
      for (float& v : centroids.row(c)) v = static_cast<float>(normal(rng));
      bool ok = true;
      for (std::size_t k = 0; k < c && ok; ++k) ok = distance(centroids.row(c), centroids.row(k)) > min_gap;
      if (ok) break;
      if (++attempts >= kMaxDrawAttempts) {
        throw UsageError("make_synthetic: cannot place separated centroids; raise visual_dim");
      }
    }
  }
  return centroids;
}

// Moves each unseen centroid (rows seen_count..) toward its nearest seen one.
void apply_overlap(const SyntheticSpec& spec, Matrix& centroids) {
  for (std::size_t u = spec.seen_count; u < centroids.rows(); ++u) {
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < spec.seen_count; ++s) {
      const double d = distance(centroids.row(u), centroids.row(s));
      if (d < best) {
        best = d;
        nearest = s;
      }
    }
    auto target = centroids.row(nearest);
    auto row = centroids.row(u);
    for (std::size_t i = 0; i < row.size(); ++i) {
      row[i] = static_cast<float>((1.0 - spec.overlap) * row[i] + spec.overlap * target[i]);
    }
  }
}

}  // namespace

void SyntheticSpec::validate() const {
  if (seen_count < 2) throw UsageError("synthetic data needs at least 2 seen classes");
  if (unseen_count < 1 || visual_dim < 1 || attribute_dim < 1 || samples_per_class < 1) {
    throw UsageError("synthetic counts and dims must be >= 1");
  }
  if (!(overlap >= 0.0f && overlap <= 1.0f)) throw UsageError("overlap must lie in [0, 1]");
  if (!(cluster_spread > 0.0f)) throw UsageError("cluster_spread must be positive");
  if (!(test_fraction >= 0.0f && test_fraction < 1.0f)) {
    throw UsageError("test_fraction must lie in [0, 1)");
  }
  if (!(attribute_noise >= 0.0f)) throw UsageError("attribute_noise must be >= 0");
}

Matrix synthetic_centroids(const SyntheticSpec& spec) {
  spec.validate();
  numkit::Rng rng(spec.seed);
  Matrix centroids = draw_raw_centroids(spec, rng);
  apply_overlap(spec, centroids);
  return centroids;
}

ZslDataset make_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  numkit::Rng rng(spec.seed);
  Matrix centroids = draw_raw_centroids(spec, rng);
  apply_overlap(spec, centroids);
  const std::size_t classes = centroids.rows();

  // attributes = centroid * G + noise, G ~ N(0, 1/D)
  std::normal_distribution<double> g_dist(0.0, 1.0 / std::sqrt(static_cast<double>(spec.visual_dim)));
  Matrix g(spec.visual_dim, spec.attribute_dim);
  for (float& v : g.values()) v = static_cast<float>(g_dist(rng));
  Matrix attributes = numkit::matmul(centroids, g);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (float& v : attributes.values()) v = static_cast<float>(v + spec.attribute_noise * unit(rng));

  ZslDataset ds;
  ds.attributes = std::move(attributes);
  ds.visual = Matrix(classes * spec.samples_per_class, spec.visual_dim);
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t k = 0; k < spec.samples_per_class; ++k) {
      const std::size_t r = c * spec.samples_per_class + k;
      auto row = ds.visual.row(r);
      auto centre = centroids.row(c);
      for (std::size_t i = 0; i < row.size(); ++i) {
        row[i] = static_cast<float>(centre[i] + spec.cluster_spread * unit(rng));
      }
      ds.labels.push_back(static_cast<int>(c));
    }
  }

  for (std::size_t c = 0; c < classes; ++c) {
    const std::size_t first = c * spec.samples_per_class;
    std::vector<std::size_t> rows(spec.samples_per_class);
    for (std::size_t k = 0; k < rows.size(); ++k) rows[k] = first + k;
    if (c >= spec.seen_count) {
      ds.unseen_classes.push_back(static_cast<int>(c));
      ds.test_index.insert(ds.test_index.end(), rows.begin(), rows.end());
      continue;
    }
    ds.seen_classes.push_back(static_cast<int>(c));
    std::shuffle(rows.begin(), rows.end(), rng);
    std::size_t n_test = static_cast<std::size_t>(
        std::lround(spec.test_fraction * static_cast<double>(rows.size())));
    if (spec.test_fraction > 0.0f) n_test = std::max<std::size_t>(n_test, 1);
    n_test = std::min(n_test, rows.size() - 1);
    std::vector<std::size_t> test(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::vector<std::size_t> train(rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
    std::sort(test.begin(), test.end());
    std::sort(train.begin(), train.end());
    ds.train_index.insert(ds.train_index.end(), train.begin(), train.end());
    ds.test_index.insert(ds.test_index.end(), test.begin(), test.end());
  }
  std::sort(ds.test_index.begin(), ds.test_index.end());
  ds.validate();
  return ds;
}

}  // namespace gzsl::datakit
