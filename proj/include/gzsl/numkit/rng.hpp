#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "gzsl/numkit/matrix.hpp"

namespace gzsl::numkit {

// Every run owns exactly one of these, seeded explicitly.
using Rng = std::mt19937_64;

Matrix standard_normal(std::size_t rows, std::size_t cols, Rng& rng);
float uniform(float lo, float hi, Rng& rng);
// Uniform integer in [0, n).
std::size_t uniform_index(std::size_t n, Rng& rng);

}  // namespace gzsl::numkit
