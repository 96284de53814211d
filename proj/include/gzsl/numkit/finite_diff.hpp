#pragma once

#include <functional>
#include <span>
#include <vector>

namespace gzsl::numkit {

using ScalarFn = std::function<double(std::span<const float>)>;

/// Central-difference gradient estimate, one coordinate at a time. The
/// denominator is the step actually representable in float,
/// (p + h) - (p - h), not the nominal 2h.
std::vector<double> finite_diff_grad(const ScalarFn& loss_fn, std::span<const float> params,
                                     float h = 1e-3f);

/// ||a - b|| / max(||a||, ||b||); zero when both vectors are zero.
double relative_error(std::span<const double> a, std::span<const double> b);

/// Concatenates parameter blocks into one vector.
std::vector<float> flatten(std::span<const std::span<const float>> blocks);
std::vector<float> flatten(std::span<const std::span<float>> blocks);
/// Inverse of flatten: copies `flat` back into the blocks.
void unflatten(std::span<const float> flat, std::span<const std::span<float>> blocks);

}  // namespace gzsl::numkit
