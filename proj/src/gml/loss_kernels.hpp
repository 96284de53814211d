#pragma once

// Row-level loss kernels shared by the public loss functions and the full
// objective. Gradients are accumulated (+=) so several terms can feed the
// same buffer; pass nullptr to skip a gradient.

#include <cstddef>

#include "gzsl/numkit/matrix.hpp"

namespace gzsl::gml::detail {

using numkit::Matrix;

/// Mean over rows of sum_c |pred - target|; grad += scale * sign(pred - target) / rows.
double l1_rows(const Matrix& pred, const Matrix& target, double scale, Matrix* grad);

/// KL to N(0, I) averaged over rows.
double kl_rows(const Matrix& mean, const Matrix& log_var, double scale, Matrix* grad_mean,
               Matrix* grad_log_var);

/// Diagonal squared 2-Wasserstein averaged over rows.
double w2_rows(const Matrix& mean_a, const Matrix& log_var_a, const Matrix& mean_b,
               const Matrix& log_var_b, double scale, Matrix* grad_mean_a, Matrix* grad_log_var_a,
               Matrix* grad_mean_b, Matrix* grad_log_var_b);

/// Hinge triplet term over `count` rows; the three roles are row windows of
/// possibly shared matrices starting at the given offsets.
struct RowWindow {
  const Matrix* z;
  std::size_t offset;
  Matrix* grad;
};
double triplet_rows(RowWindow anchor, RowWindow positive, RowWindow negative, std::size_t count,
                    double alpha, double scale);

}  // namespace gzsl::gml::detail
