#include "loss_kernels.hpp"

#include <cmath>

#include "gzsl/errors.hpp"

namespace gzsl::gml::detail {

double l1_rows(const Matrix& pred, const Matrix& target, double scale, Matrix* grad) {
  numkit::require_same_shape(pred, target, "l1_rows");
  const std::size_t n = pred.rows();
  if (n == 0) return 0.0;
  const double inv = 1.0 / static_cast<double>(n);
  auto p = pred.values();
  auto t = target.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = static_cast<double>(p[i]) - static_cast<double>(t[i]);
    acc += std::abs(d);
    if (grad != nullptr && d != 0.0) {
      grad->values()[i] += static_cast<float>(scale * inv * (d > 0.0 ? 1.0 : -1.0));
    }
  }
  return acc * inv;
}

double kl_rows(const Matrix& mean, const Matrix& log_var, double scale, Matrix* grad_mean,
               Matrix* grad_log_var) {
  numkit::require_same_shape(mean, log_var, "kl_rows");
  const std::size_t n = mean.rows();
  if (n == 0) return 0.0;
  const double inv = 1.0 / static_cast<double>(n);
  auto mu = mean.values();
  auto lv = log_var.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double m = mu[i];
    const double l = lv[i];
    const double var = std::exp(l);
    acc += 0.5 * (m * m + var - 1.0 - l);
    if (grad_mean != nullptr) grad_mean->values()[i] += static_cast<float>(scale * inv * m);
    if (grad_log_var != nullptr) {
      grad_log_var->values()[i] += static_cast<float>(scale * inv * 0.5 * (var - 1.0));
    }
  }
  return acc * inv;
}

double w2_rows(const Matrix& mean_a, const Matrix& log_var_a, const Matrix& mean_b,
               const Matrix& log_var_b, double scale, Matrix* grad_mean_a, Matrix* grad_log_var_a,
               Matrix* grad_mean_b, Matrix* grad_log_var_b) {
  numkit::require_same_shape(mean_a, log_var_a, "w2_rows");
  numkit::require_same_shape(mean_a, mean_b, "w2_rows");
  numkit::require_same_shape(mean_b, log_var_b, "w2_rows");
  const std::size_t n = mean_a.rows();
  if (n == 0) return 0.0;
  const double inv = 1.0 / static_cast<double>(n);
  auto ma = mean_a.values();
  auto mb = mean_b.values();
  auto la = log_var_a.values();
  auto lb = log_var_b.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < ma.size(); ++i) {
    const double dm = static_cast<double>(ma[i]) - static_cast<double>(mb[i]);
    const double sa = std::exp(0.5 * la[i]);
    const double sb = std::exp(0.5 * lb[i]);
    const double ds = sa - sb;
    acc += dm * dm + ds * ds;
    const double k = scale * inv;
    if (grad_mean_a != nullptr) grad_mean_a->values()[i] += static_cast<float>(k * 2.0 * dm);
    if (grad_mean_b != nullptr) grad_mean_b->values()[i] -= static_cast<float>(k * 2.0 * dm);
    // d/d(lv) of sd = exp(lv / 2) is sd / 2
    if (grad_log_var_a != nullptr) grad_log_var_a->values()[i] += static_cast<float>(k * ds * sa);
    if (grad_log_var_b != nullptr) grad_log_var_b->values()[i] -= static_cast<float>(k * ds * sb);
  }
  return acc * inv;
}

double triplet_rows(RowWindow anchor, RowWindow positive, RowWindow negative, std::size_t count,
                    double alpha, double scale) {
  if (count == 0) return 0.0;
  const std::size_t dim = anchor.z->cols();
  if (positive.z->cols() != dim || negative.z->cols() != dim) {
    throw ShapeError("triplet: latent widths differ");
  }
  if (anchor.offset + count > anchor.z->rows() || positive.offset + count > positive.z->rows() ||
      negative.offset + count > negative.z->rows()) {
    throw ShapeError("triplet: row window out of range");
  }
  const double inv = 1.0 / static_cast<double>(count);
  double acc = 0.0;
  for (std::size_t r = 0; r < count; ++r) {
    auto a = anchor.z->row(anchor.offset + r);
    auto p = positive.z->row(positive.offset + r);
    auto n = negative.z->row(negative.offset + r);
    double d_ap = 0.0, d_an = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double u = static_cast<double>(a[c]) - p[c];
      const double v = static_cast<double>(a[c]) - n[c];
      d_ap += u * u;
      d_an += v * v;
    }
    const double hinge = d_ap - d_an + alpha;
    if (!(hinge > 0.0)) continue;
    acc += hinge;
    const double k = 2.0 * scale * inv;
    for (std::size_t c = 0; c < dim; ++c) {
      const double u = static_cast<double>(a[c]) - p[c];
      const double v = static_cast<double>(a[c]) - n[c];
      if (anchor.grad != nullptr) anchor.grad->row(anchor.offset + r)[c] += static_cast<float>(k * (u - v));
      if (positive.grad != nullptr) positive.grad->row(positive.offset + r)[c] -= static_cast<float>(k * u);
      if (negative.grad != nullptr) negative.grad->row(negative.offset + r)[c] += static_cast<float>(k * v);
    }
  }
  return acc * inv;
}

}  // namespace gzsl::gml::detail
