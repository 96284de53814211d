#pragma once

// Double-precision reimplementation of the combined objective, written
// straight from the term definitions. Used as the loss for finite differences
// so the oracle is free of float32 roundoff.

#include <array>
#include <cmath>
#include <vector>

#include "gzsl/gml/dual_vae.hpp"
#include "gzsl/gml/objective.hpp"

namespace testing {

using Rows = std::vector<std::vector<double>>;

inline Rows to_rows(const gzsl::numkit::Matrix& m) {
  Rows out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

inline Rows ref_forward(const gzsl::numkit::MlpNet& net, Rows x) {
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const auto& l = net.layers[k];
    const bool last = k + 1 == net.layers.size();
    const bool relu = (last ? net.output_activation : net.hidden_activation) ==
                      gzsl::numkit::Activation::Relu;
    Rows y(x.size(), std::vector<double>(l.output_dim()));
    for (std::size_t r = 0; r < x.size(); ++r)
      for (std::size_t o = 0; o < l.output_dim(); ++o) {
        double acc = l.bias[o];
        for (std::size_t i = 0; i < l.input_dim(); ++i) acc += x[r][i] * l.weight(i, o);
        y[r][o] = relu && acc < 0.0 ? 0.0 : acc;
      }
    x = std::move(y);
  }
  return x;
}

inline double ref_l1(const Rows& a, const Rows& b) {
  double acc = 0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a[r].size(); ++c) acc += std::abs(a[r][c] - b[r][c]);
  return acc / double(a.size());
}

inline double ref_objective(const gzsl::gml::DualVae& vae, const gzsl::gml::TripletBatch& batch,
                            const gzsl::gml::GmlNoise& noise,
                            const gzsl::gml::ObjectiveCoefficients& k) {
  const std::size_t b = batch.size(), l = vae.latent_dim;
  Rows x, s;
  for (const auto* part : {&batch.anchor, &batch.positive, &batch.negative}) {
    for (auto& row : to_rows(part->visual)) x.push_back(row);
    for (auto& row : to_rows(part->semantic)) s.push_back(row);
  }
  const std::size_t n = x.size();
  const Rows ev = ref_forward(vae.q_v, x), es = ref_forward(vae.q_s, s);
  const Rows nv = to_rows(noise.visual), ns = to_rows(noise.semantic);
  Rows zv(n, std::vector<double>(l)), zs = zv;
  double kl_v = 0, kl_s = 0, w2 = 0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < l; ++c) {
      const double mv = ev[r][c], lv = ev[r][l + c], ms = es[r][c], ls = es[r][l + c];
      zv[r][c] = mv + std::exp(0.5 * lv) * nv[r][c];
      zs[r][c] = ms + std::exp(0.5 * ls) * ns[r][c];
      kl_v += 0.5 * (mv * mv + std::exp(lv) - 1 - lv);
      kl_s += 0.5 * (ms * ms + std::exp(ls) - 1 - ls);
      const double dsd = std::exp(0.5 * lv) - std::exp(0.5 * ls);
      w2 += (mv - ms) * (mv - ms) + dsd * dsd;
    }
  const double rows = double(n);
  double total = k.v_recon * ref_l1(ref_forward(vae.p_v, zv), x) + k.v_kl * kl_v / rows +
                 k.s_recon * ref_l1(ref_forward(vae.p_s, zs), s) + k.s_kl * kl_s / rows +
                 k.wasserstein * w2 / rows +
                 k.cross_recon * (ref_l1(ref_forward(vae.p_v, zs), x) + ref_l1(ref_forward(vae.p_s, zv), s));
  const std::array<const Rows*, 2> z{&zv, &zs};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int m = 0; m < 2; ++m) {
        const double coeff = i == j && j == m ? (i == 0 ? k.v_triplet : k.s_triplet) : k.mul_triplet;
        double acc = 0;
        for (std::size_t r = 0; r < b; ++r) {
          double dp = 0, dn = 0;
          for (std::size_t c = 0; c < l; ++c) {
            const double a = (*z[i])[r][c], p = (*z[j])[b + r][c], q = (*z[m])[2 * b + r][c];
            dp += (a - p) * (a - p);
            dn += (a - q) * (a - q);
          }
          acc += std::max(0.0, dp - dn + k.margin);
        }
        total += coeff * acc / double(b);
      }
  return total;
}

}  // namespace testing
