#pragma once

// Seeded generators and small fixtures shared by the test suites.

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "gzsl/datakit/dataset.hpp"
#include "gzsl/gml/dual_vae.hpp"
#include "gzsl/gml/losses.hpp"
#include "gzsl/gml/objective.hpp"
#include "gzsl/numkit/matrix.hpp"
#include "gzsl/numkit/rng.hpp"

namespace testing {

using gzsl::numkit::Matrix;
using gzsl::numkit::Rng;

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, float lo = -1.0f,
                            float hi = 1.0f) {
  std::uniform_real_distribution<float> d(lo, hi);
  Matrix m(rows, cols);
  for (float& v : m.values()) v = d(rng);
  return m;
}

inline std::size_t random_size(std::size_t lo, std::size_t hi, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double random_double(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<double> to_double(std::span<const float> v) {
  return {v.begin(), v.end()};
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gzsl_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Dual VAE small enough for finite-difference checks (26 parameters):
// visual 2, attributes 2, hidden 1, latent 1.
inline gzsl::gml::DualVae tiny_vae(Rng& rng, std::size_t visual = 2, std::size_t attrs = 2,
                                   std::size_t hidden = 1, std::size_t latent = 1) {
  gzsl::gml::DualVaeShape shape;
  shape.visual_dim = visual;
  shape.attribute_dim = attrs;
  shape.latent_dim = latent;
  shape.hidden_qv = shape.hidden_qs = shape.hidden_pv = shape.hidden_ps = hidden;
  return gzsl::gml::DualVae::create(shape, rng);
}

// Hand-built dataset: `classes` classes, first `seen` of them seen, `per_class`
// rows each, visual row = class index on every column plus a tiny offset.
inline gzsl::datakit::ZslDataset toy_dataset(int classes, int seen, std::size_t per_class,
                                             std::size_t visual_dim = 3,
                                             std::size_t attr_dim = 2) {
  gzsl::datakit::ZslDataset ds;
  ds.visual = Matrix(static_cast<std::size_t>(classes) * per_class, visual_dim);
  ds.attributes = Matrix(static_cast<std::size_t>(classes), attr_dim);
  for (int c = 0; c < classes; ++c) {
    for (std::size_t a = 0; a < attr_dim; ++a) {
      ds.attributes(static_cast<std::size_t>(c), a) = static_cast<float>(c + 0.1 * a);
    }
    (c < seen ? ds.seen_classes : ds.unseen_classes).push_back(c);
    for (std::size_t k = 0; k < per_class; ++k) {
      const std::size_t r = static_cast<std::size_t>(c) * per_class + k;
      for (std::size_t j = 0; j < visual_dim; ++j) {
        ds.visual(r, j) = static_cast<float>(c) + 0.01f * static_cast<float>(k + j);
      }
      ds.labels.push_back(c);
      (c < seen && k + 1 < per_class ? ds.train_index : ds.test_index).push_back(r);
    }
  }
  return ds;
}

// Distance from the objective's inputs to its nearest nondifferentiable point:
// ReLU preactivations, L1 residuals and triplet hinge arguments. Finite
// differences are only meaningful when this exceeds the step size.
inline double kink_distance(const gzsl::gml::DualVae& vae, const gzsl::gml::TripletBatch& batch,
                            const gzsl::gml::GmlNoise& noise, double margin) {
  using namespace gzsl;
  double best = INFINITY;
  auto scan = [&](const Matrix& m) {
    for (float v : m.values()) best = std::min(best, std::abs(static_cast<double>(v)));
  };
  auto forward = [&](const numkit::MlpNet& net, const Matrix& in) {
    auto f = numkit::mlp_forward(net, in);
    for (std::size_t k = 0; k + 1 < f.cache.preactivations.size(); ++k) scan(f.cache.preactivations[k]);
    return f.output;
  };
  const std::array<Matrix, 3> xs{batch.anchor.visual, batch.positive.visual, batch.negative.visual};
  const std::array<Matrix, 3> ss{batch.anchor.semantic, batch.positive.semantic, batch.negative.semantic};
  const Matrix x = numkit::vstack(xs), s = numkit::vstack(ss);
  const std::size_t l = vae.latent_dim;
  const Matrix ov = forward(vae.q_v, x), os = forward(vae.q_s, s);
  const Matrix zv = gml::reparameterize({numkit::slice_cols(ov, 0, l), numkit::slice_cols(ov, l, l)},
                                        noise.visual, gml::Modality::Visual).z;
  const Matrix zs = gml::reparameterize({numkit::slice_cols(os, 0, l), numkit::slice_cols(os, l, l)},
                                        noise.semantic, gml::Modality::Semantic).z;
  scan(numkit::subtract(forward(vae.p_v, zv), x));
  scan(numkit::subtract(forward(vae.p_v, zs), x));
  scan(numkit::subtract(forward(vae.p_s, zs), s));
  scan(numkit::subtract(forward(vae.p_s, zv), s));
  const std::size_t b = batch.size();
  const std::array<const Matrix*, 2> z{&zv, &zs};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int m = 0; m < 2; ++m)
        for (std::size_t r = 0; r < b; ++r) {
          double dp = 0, dn = 0;
          for (std::size_t c = 0; c < l; ++c) {
            const double a = (*z[i])(r, c);
            dp += (a - (*z[j])(b + r, c)) * (a - (*z[j])(b + r, c));
            dn += (a - (*z[m])(2 * b + r, c)) * (a - (*z[m])(2 * b + r, c));
          }
          best = std::min(best, std::abs(dp - dn + margin));
        }
  return best;
}

}  // namespace testing
