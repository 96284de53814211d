#include "gzsl/numkit/finite_diff.hpp"

#include <cmath>
#include <string>

#include "gzsl/errors.hpp"

namespace gzsl::numkit {

std::vector<double> finite_diff_grad(const ScalarFn& loss_fn, std::span<const float> params,
                                     float h) {
  if (!(h > 0.0f)) throw UsageError("finite_diff_grad: step must be positive");
  std::vector<float> probe(params.begin(), params.end());
  std::vector<double> grad(params.size(), 0.0);
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const float original = probe[i];
    const float up = original + h;
    const float down = original - h;
    probe[i] = up;
    const double f_up = loss_fn(probe);
    probe[i] = down;
    const double f_down = loss_fn(probe);
    probe[i] = original;
    if (!std::isfinite(f_up) || !std::isfinite(f_down)) {
      throw NumericError("finite_diff_grad: non-finite loss at coordinate " + std::to_string(i));
    }
    grad[i] = (f_up - f_down) / (static_cast<double>(up) - static_cast<double>(down));
  }
  return grad;
}

double relative_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("relative_error: length mismatch");
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double denom = std::sqrt(std::max(na, nb));
  if (denom == 0.0) return 0.0;
  return std::sqrt(diff) / denom;
}

namespace {
template <typename Blocks>
std::vector<float> flatten_impl(const Blocks& blocks) {
  std::vector<float> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}
}  // namespace

std::vector<float> flatten(std::span<const std::span<const float>> blocks) {
  return flatten_impl(blocks);
}

std::vector<float> flatten(std::span<const std::span<float>> blocks) {
  return flatten_impl(blocks);
}

void unflatten(std::span<const float> flat, std::span<const std::span<float>> blocks) {
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    if (offset + b.size() > flat.size()) throw ShapeError("unflatten: vector too short");
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(offset),
              flat.begin() + static_cast<std::ptrdiff_t>(offset + b.size()), b.begin());
    offset += b.size();
  }
  if (offset != flat.size()) throw ShapeError("unflatten: vector too long");
}

}  // namespace gzsl::numkit
