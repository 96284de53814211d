#include "gzsl/evalkit/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gzsl/errors.hpp"
#include "gzsl/gml/losses.hpp"

namespace gzsl::evalkit {

namespace {

template <typename Flags>
double ap_impl(const Flags& relevant_ranked, std::size_t total_relevant) {
  const std::size_t denom = std::min<std::size_t>(relevant_ranked.size(), total_relevant);
  if (denom == 0) return 0.0;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < relevant_ranked.size(); ++k) {
    if (!relevant_ranked[k]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(denom);
}

}  // namespace

double average_precision(std::span<const bool> relevant_ranked, std::size_t total_relevant) {
  return ap_impl(relevant_ranked, total_relevant);
}

double average_precision(const std::vector<bool>& relevant_ranked, std::size_t total_relevant) {
  return ap_impl(relevant_ranked, total_relevant);
}

void validate_ratio(int ratio_percent) {
  if (ratio_percent != 25 && ratio_percent != 50 && ratio_percent != 100) {
    throw UsageError("retrieval ratio must be 25, 50 or 100, got " +
                     std::to_string(ratio_percent));
  }
}

RetrievalResult rank_gallery(std::span<const float> query, const Matrix& gallery_latents,
                             std::span<const int> gallery_labels, int target_class,
                             int ratio_percent) {
  validate_ratio(ratio_percent);
  if (gallery_latents.rows() == 0) throw UsageError("retrieve: empty gallery");
  if (gallery_labels.size() != gallery_latents.rows()) {
    throw UsageError("retrieve: gallery labels do not match gallery rows");
  }
  if (query.size() != gallery_latents.cols()) {
    throw ShapeError("retrieve: query width does not match gallery latents");
  }
  std::vector<double> dist(gallery_latents.rows());
  for (std::size_t r = 0; r < dist.size(); ++r) {
    auto row = gallery_latents.row(r);
    double acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const double d = static_cast<double>(row[i]) - query[i];
      acc += d * d;
    }
    dist[r] = std::sqrt(acc);
  }
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  RetrievalResult res;
  res.relevant_total = static_cast<std::size_t>(
      std::count(gallery_labels.begin(), gallery_labels.end(), target_class));
  if (res.relevant_total == 0) {
    throw UsageError("retrieve: class " + std::to_string(target_class) +
                     " has no gallery items");
  }
  const std::size_t keep = std::min<std::size_t>(
      order.size(), (res.relevant_total * static_cast<std::size_t>(ratio_percent) + 99) / 100);
  res.ranked.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
  for (std::size_t pos : res.ranked) res.relevant.push_back(gallery_labels[pos] == target_class);
  res.average_precision = average_precision(res.relevant, res.relevant_total);
  return res;
}

RetrievalResult retrieve(const gml::DualVae& vae, std::span<const float> class_attribute,
                         const Matrix& gallery_visual, std::span<const int> gallery_labels,
                         int target_class, std::size_t n_generate, int ratio_percent,
                         numkit::Rng& rng) {
  validate_ratio(ratio_percent);
  if (n_generate == 0) throw UsageError("retrieve: n_generate must be >= 1");
  if (class_attribute.size() != vae.attribute_dim()) {
    throw UsageError("retrieve: attribute width does not match the model");
  }
  if (gallery_visual.rows() > 0 && gallery_visual.cols() != vae.visual_dim()) {
    throw UsageError("retrieve: gallery width does not match the model");
  }
  Matrix attrs(n_generate, class_attribute.size());
  for (std::size_t r = 0; r < n_generate; ++r) {
    std::copy(class_attribute.begin(), class_attribute.end(), attrs.row(r).begin());
  }
  const gml::GaussianParams gp = gml::encode(vae.q_s, attrs);
  const Matrix noise = numkit::standard_normal(n_generate, vae.latent_dim, rng);
  const Matrix z = gml::reparameterize(gp, noise, gml::Modality::Semantic).z;
  std::vector<float> query(vae.latent_dim, 0.0f);
  for (std::size_t c = 0; c < vae.latent_dim; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < n_generate; ++r) acc += z(r, c);
    query[c] = static_cast<float>(acc / static_cast<double>(n_generate));
  }
  if (gallery_visual.rows() == 0) throw UsageError("retrieve: empty gallery");
  const Matrix gallery = gml::encode(vae.q_v, gallery_visual).mean;
  return rank_gallery(query, gallery, gallery_labels, target_class, ratio_percent);
}

RetrievalReport retrieve_classes(const gml::DualVae& vae, const datakit::ZslDataset& dataset,
                                 std::span<const int> classes, std::size_t n_generate,
                                 int ratio_percent, numkit::Rng& rng) {
  validate_ratio(ratio_percent);
  if (classes.empty()) throw UsageError("retrieve: no query classes");
  const Matrix gallery = numkit::gather_rows(dataset.visual, dataset.test_index);
  std::vector<int> labels;
  for (std::size_t i : dataset.test_index) labels.push_back(dataset.labels[i]);
  RetrievalReport rep;
  double sum = 0.0;
  for (int cls : classes) {
    if (cls < 0 || static_cast<std::size_t>(cls) >= dataset.num_classes()) {
      throw UsageError("retrieve: unknown class " + std::to_string(cls));
    }
    const auto res = retrieve(vae, dataset.attributes.row(static_cast<std::size_t>(cls)), gallery,
                              labels, cls, n_generate, ratio_percent, rng);
    rep.classes.push_back(cls);
    rep.average_precision.push_back(res.average_precision);
    sum += res.average_precision;
  }
  rep.mean_average_precision = sum / static_cast<double>(classes.size());
  return rep;
}

}  // namespace gzsl::evalkit
