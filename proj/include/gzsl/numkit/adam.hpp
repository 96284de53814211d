#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gzsl::numkit {

struct AdamHyper {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment accumulators for a fixed list of parameter blocks. One training loop
/// owns one state; the block sizes are frozen at construction.
class AdamState {
 public:
  AdamState() = default;
  AdamState(AdamHyper hyper, std::span<const std::size_t> block_sizes);

  template <typename Spans>
  static AdamState for_blocks(AdamHyper hyper, const Spans& blocks) {
    std::vector<std::size_t> sizes;
    for (const auto& b : blocks) sizes.push_back(b.size());
    return AdamState(hyper, sizes);
  }

  const AdamHyper& hyper() const { return hyper_; }
  AdamHyper& hyper() { return hyper_; }
  std::uint64_t step() const { return step_; }
  const std::vector<std::vector<float>>& first_moment() const { return m_; }
  const std::vector<std::vector<float>>& second_moment() const { return v_; }

 private:
  friend void adam_step(std::span<const std::span<float>>, std::span<const std::span<const float>>,
                        AdamState&);
  AdamHyper hyper_;
  std::uint64_t step_ = 0;
  std::vector<std::vector<float>> m_;
  std::vector<std::vector<float>> v_;
};

/// One bias-corrected Adam update over every block; increments the step count.
void adam_step(std::span<const std::span<float>> params,
               std::span<const std::span<const float>> grads, AdamState& state);

}  // namespace gzsl::numkit
