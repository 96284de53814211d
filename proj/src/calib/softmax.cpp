#include "gzsl/calib/softmax.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "gzsl/errors.hpp"
#include "gzsl/numkit/binary_io.hpp"
#include "gzsl/numkit/rng.hpp"

namespace gzsl::calib {

std::ptrdiff_t SoftmaxClassifier::position_of(int cls) const {
  auto it = std::find(class_ids.begin(), class_ids.end(), cls);
  return it == class_ids.end() ? -1 : it - class_ids.begin();
}

void SoftmaxClassifier::validate() const {
  if (weight.cols() != class_ids.size() || bias.size() != class_ids.size()) {
    throw ShapeError("SoftmaxClassifier: output dimension does not match class list");
  }
  std::set<int> unique(class_ids.begin(), class_ids.end());
  if (unique.size() != class_ids.size()) throw ValidationError("SoftmaxClassifier: duplicate class id");
}

namespace {

// Row-wise softmax of logits in double.
void softmax_row(std::span<const float> logit, std::vector<double>& out) {
  out.resize(logit.size());
  double peak = -INFINITY;
  for (float v : logit) peak = std::max(peak, static_cast<double>(v));
  double sum = 0.0;
  for (std::size_t k = 0; k < logit.size(); ++k) {
    out[k] = std::exp(static_cast<double>(logit[k]) - peak);
    sum += out[k];
  }
  for (double& p : out) p /= sum;
}

}  // namespace

Matrix logits(const SoftmaxClassifier& clf, const Matrix& x) {
  if (x.cols() != clf.input_dim()) {
    throw ShapeError("softmax: input width " + std::to_string(x.cols()) + " vs classifier " +
                     std::to_string(clf.input_dim()));
  }
  Matrix z = numkit::matmul(x, clf.weight);
  for (std::size_t r = 0; r < z.rows(); ++r) {
    auto row = z.row(r);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] += clf.bias[k];
  }
  return z;
}

std::vector<double> softmax_probs(const SoftmaxClassifier& clf, std::span<const float> x) {
  Matrix row(1, x.size(), std::vector<float>(x.begin(), x.end()));
  const Matrix z = logits(clf, row);
  std::vector<double> p;
  softmax_row(z.row(0), p);
  return p;
}

std::vector<int> predict(const SoftmaxClassifier& clf, const Matrix& x) {
  const Matrix z = logits(clf, x);
  std::vector<int> out(z.rows());
  for (std::size_t r = 0; r < z.rows(); ++r) {
    auto row = z.row(r);
    const auto best = std::max_element(row.begin(), row.end()) - row.begin();
    out[r] = clf.class_ids[static_cast<std::size_t>(best)];
  }
  return out;
}

SoftmaxClassifier train_softmax(const Matrix& features, std::span<const int> labels,
                                std::span<const int> class_ids, const SoftmaxTrainConfig& config) {
  if (class_ids.size() < 2) throw UsageError("train_softmax: need at least two classes");
  if (labels.size() != features.rows()) throw ShapeError("train_softmax: label count mismatch");
  SoftmaxClassifier clf;
  clf.class_ids.assign(class_ids.begin(), class_ids.end());
  clf.weight = Matrix(features.cols(), class_ids.size());
  clf.bias.assign(class_ids.size(), 0.0f);
  try {
    clf.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }

  std::vector<std::size_t> target(labels.size());
  std::vector<std::size_t> per_class(class_ids.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto pos = clf.position_of(labels[i]);
    if (pos < 0) {
      throw ValidationError("train_softmax: label " + std::to_string(labels[i]) +
                            " is not among the classifier's classes");
    }
    target[i] = static_cast<std::size_t>(pos);
    ++per_class[target[i]];
  }
  for (std::size_t k = 0; k < per_class.size(); ++k) {
    if (per_class[k] == 0) {
      throw UsageError("train_softmax: class " + std::to_string(class_ids[k]) + " has no samples");
    }
  }

  const std::size_t n = features.rows(), d = features.cols(), kc = class_ids.size();
  std::vector<std::span<float>> params{clf.weight.values(), std::span<float>(clf.bias)};
  auto state = numkit::AdamState::for_blocks(config.adam, params);
  Matrix grad_w(d, kc);
  std::vector<float> grad_b(kc);
  std::vector<std::span<const float>> grads{grad_w.values(), std::span<const float>(grad_b)};
  std::vector<double> acc_w(d * kc), acc_b(kc), prob;
  numkit::Rng rng(config.seed);
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);

  for (std::size_t step = 0; step < config.steps; ++step) {
    std::span<const std::size_t> batch(rows);
    std::vector<std::size_t> picked;
    if (config.batch_size > 0 && config.batch_size < n) {
      picked.resize(config.batch_size);
      for (auto& r : picked) r = numkit::uniform_index(n, rng);
      batch = picked;
    }
    std::fill(acc_w.begin(), acc_w.end(), 0.0);
    std::fill(acc_b.begin(), acc_b.end(), 0.0);
    const double inv = 1.0 / static_cast<double>(batch.size());
    std::vector<float> z(kc);
    for (std::size_t r : batch) {
      auto x = features.row(r);
      for (std::size_t k = 0; k < kc; ++k) {
        double s = clf.bias[k];
        for (std::size_t p = 0; p < d; ++p) s += static_cast<double>(x[p]) * clf.weight(p, k);
        z[k] = static_cast<float>(s);
      }
      softmax_row(z, prob);
      prob[target[r]] -= 1.0;
      for (std::size_t p = 0; p < d; ++p) {
        const double xp = x[p];
        if (xp == 0.0) continue;
        for (std::size_t k = 0; k < kc; ++k) acc_w[p * kc + k] += xp * prob[k];
      }
      for (std::size_t k = 0; k < kc; ++k) acc_b[k] += prob[k];
    }
    for (std::size_t i = 0; i < acc_w.size(); ++i) grad_w.values()[i] = static_cast<float>(acc_w[i] * inv);
    for (std::size_t k = 0; k < kc; ++k) grad_b[k] = static_cast<float>(acc_b[k] * inv);
    numkit::adam_step(params, grads, state);
  }
  if (!clf.weight.all_finite()) throw NumericError("train_softmax: weights diverged");
  return clf;
}

gml::CheckpointSection encode_classifier(const std::string& role, const SoftmaxClassifier& clf) {
  clf.validate();
  std::ostringstream os(std::ios::binary);
  numkit::write_u32_le(os, static_cast<std::uint32_t>(role.size()));
  os.write(role.data(), static_cast<std::streamsize>(role.size()));
  numkit::write_u32_le(os, static_cast<std::uint32_t>(clf.input_dim()));
  numkit::write_u32_le(os, static_cast<std::uint32_t>(clf.class_count()));
  for (int c : clf.class_ids) numkit::write_i32_le(os, c);
  numkit::write_f32_le(os, clf.weight.values());
  numkit::write_f32_le(os, clf.bias);
  const std::string bytes = os.str();
  return {"CLF1", std::vector<char>(bytes.begin(), bytes.end())};
}

std::pair<std::string, SoftmaxClassifier> decode_classifier(const gml::CheckpointSection& section) {
  if (section.tag != "CLF1") throw ValidationError("not a CLF1 section");
  std::istringstream is(std::string(section.payload.begin(), section.payload.end()),
                        std::ios::binary);
  try {
    const std::uint32_t name_len = numkit::read_u32_le(is);
    if (name_len > 256) throw ValidationError("CLF1: role name too long");
    std::string role(name_len, '\0');
    if (!is.read(role.data(), name_len)) throw IoError("CLF1: truncated role");
    const std::uint32_t in = numkit::read_u32_le(is);
    const std::uint32_t classes = numkit::read_u32_le(is);
    if (in > (1u << 24) || classes > (1u << 20)) throw ValidationError("CLF1: bad dims");
    SoftmaxClassifier clf;
    for (std::uint32_t k = 0; k < classes; ++k) clf.class_ids.push_back(numkit::read_i32_le(is));
    clf.weight = Matrix(in, classes, numkit::read_f32_le(is, std::size_t{in} * classes));
    clf.bias = numkit::read_f32_le(is, classes);
    clf.validate();
    return {role, std::move(clf)};
  } catch (const IoError& e) {
    throw ValidationError(std::string("CLF1: ") + e.what());
  }
}

}  // namespace gzsl::calib
