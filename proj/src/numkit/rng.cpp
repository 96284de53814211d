#include "gzsl/numkit/rng.hpp"

#include "gzsl/errors.hpp"

namespace gzsl::numkit {

Matrix standard_normal(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<float> dist(0.0f, 1.0f);
  Matrix out(rows, cols);
  for (float& v : out.values()) v = dist(rng);
  return out;
}

float uniform(float lo, float hi, Rng& rng) {
  std::uniform_real_distribution<float> dist(lo, hi);
  return dist(rng);
}

std::size_t uniform_index(std::size_t n, Rng& rng) {
  if (n == 0) throw UsageError("uniform_index over an empty range");
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(rng);
}

}  // namespace gzsl::numkit
