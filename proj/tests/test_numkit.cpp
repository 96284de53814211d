#include <cmath>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "gzsl/errors.hpp"
#include "gzsl/numkit/adam.hpp"
#include "gzsl/numkit/binary_io.hpp"
#include "gzsl/numkit/finite_diff.hpp"
#include "gzsl/numkit/mlp.hpp"

using namespace gzsl;
using namespace gzsl::numkit;
using testing::random_matrix;

namespace {

// Plain triple-loop product, independent of the library kernel.
std::vector<double> naive_product(const Matrix& a, const Matrix& b) {
  std::vector<double> out(a.rows() * b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t k = 0; k < a.cols(); ++k) out[i * b.cols() + j] += double(a(i, k)) * b(k, j);
  return out;
}

MlpNet linear_net(Matrix w, std::vector<float> b, Activation out = Activation::Identity) {
  MlpNet net;
  net.layers.push_back({std::move(w), std::move(b)});
  net.hidden_activation = Activation::Relu;
  net.output_activation = out;
  return net;
}

}  // namespace

TEST_SUITE("matrix") {
  TEST_CASE("construction checks the data length") {
    CHECK_THROWS_AS(Matrix(2, 2, std::vector<float>{1, 2, 3}), ShapeError);
    const Matrix m(2, 3, 1.5f);
    CHECK(m.size() == 6);
    CHECK(m(1, 2) == 1.5f);
    CHECK_THROWS_AS(Matrix::from_rows({{1, 2}, {3}}), ShapeError);
  }

  TEST_CASE("matmul matches a naive oracle on random shapes") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const auto n = testing::random_size(1, 6, rng), k = testing::random_size(1, 6, rng),
                 m = testing::random_size(1, 6, rng);
      const Matrix a = random_matrix(n, k, rng), b = random_matrix(k, m, rng);
      const Matrix c = matmul(a, b);
      const auto ref = naive_product(a, b);
      for (std::size_t i = 0; i < ref.size(); ++i) CHECK(c.values()[i] == doctest::Approx(ref[i]).epsilon(1e-6));
    }
  }

  TEST_CASE("transposed products agree with explicit transposes") {
    Rng rng(12);
    const Matrix a = random_matrix(4, 3, rng), b = random_matrix(4, 2, rng), c = random_matrix(5, 3, rng);
    Matrix at(3, 4), ct(3, 5);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) at(j, i) = a(i, j);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 3; ++j) ct(j, i) = c(i, j);
    CHECK(matmul_at_b(a, b) == matmul(at, b));
    CHECK(matmul_a_bt(a, c) == matmul(a, ct));
  }

  TEST_CASE("row results do not depend on batch composition") {
    Rng rng(13);
    const Matrix a = random_matrix(7, 5, rng), b = random_matrix(5, 3, rng);
    const Matrix full = matmul(a, b);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      const Matrix single = matmul(a.row_matrix(r), b);
      CHECK(std::equal(single.values().begin(), single.values().end(), full.row(r).begin()));
    }
  }

  TEST_CASE("shape errors") {
    CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), ShapeError);
    CHECK_THROWS_AS(add(Matrix(2, 3), Matrix(3, 2)), ShapeError);
    CHECK_THROWS_AS(hstack(Matrix(2, 1), Matrix(3, 1)), ShapeError);
    CHECK_THROWS_AS(slice_cols(Matrix(2, 2), 1, 2), ShapeError);
    const std::size_t bad[] = {5};
    CHECK_THROWS_AS(gather_rows(Matrix(2, 2), bad), ShapeError);
  }

  TEST_CASE("stacking and slicing round-trip") {
    Rng rng(14);
    const Matrix a = random_matrix(3, 4, rng), b = random_matrix(2, 4, rng);
    const Matrix parts[] = {a, b};
    const Matrix v = vstack(parts);
    CHECK(slice_rows(v, 0, 3) == a);
    CHECK(slice_rows(v, 3, 2) == b);
    const Matrix h = hstack(a, random_matrix(3, 2, rng));
    CHECK(slice_cols(h, 0, 4) == a);
  }

  TEST_CASE("non-finite detection") {
    Matrix m(1, 2);
    CHECK(m.all_finite());
    m(0, 1) = std::nanf("");
    CHECK_FALSE(m.all_finite());
  }
}

TEST_SUITE("mlp") {
  TEST_CASE("identity weights pass the batch through") {
    const auto net = linear_net(Matrix::identity(3), {0, 0, 0});
    Rng rng(1);
    const Matrix x = random_matrix(4, 3, rng);
    CHECK(mlp_forward(net, x).output == x);
  }

  TEST_CASE("zero weights output the bias on every row") {
    const auto net = linear_net(Matrix(3, 2), {0.5f, -2.0f});
    Rng rng(2);
    const Matrix y = mlp_apply(net, random_matrix(5, 3, rng));
    for (std::size_t r = 0; r < 5; ++r) {
      CHECK(y(r, 0) == 0.5f);
      CHECK(y(r, 1) == -2.0f);
    }
  }

  TEST_CASE("random 3-4-2 net matches a hand-rolled forward pass") {
    Rng rng(3);
    const std::size_t dims[] = {3, 4, 2};
    const auto net = MlpNet::create(dims, Activation::Relu, Activation::Identity, rng);
    const Matrix x = random_matrix(5, 3, rng);
    const Matrix y = mlp_forward(net, x).output;
    for (std::size_t r = 0; r < 5; ++r) {
      double hidden[4];
      for (std::size_t j = 0; j < 4; ++j) {
        double acc = net.layers[0].bias[j];
        for (std::size_t k = 0; k < 3; ++k) acc += double(x(r, k)) * net.layers[0].weight(k, j);
        hidden[j] = std::max(0.0, double(float(acc)));
      }
      for (std::size_t j = 0; j < 2; ++j) {
        double acc = net.layers[1].bias[j];
        for (std::size_t k = 0; k < 4; ++k) acc += hidden[k] * net.layers[1].weight(k, j);
        CHECK(y(r, j) == doctest::Approx(acc).epsilon(1e-5));
      }
    }
  }

  TEST_CASE("initialization stays within the fan-in bound and is seeded") {
    Rng a(4), b(4);
    const std::size_t dims[] = {9, 5, 3};
    const auto n1 = MlpNet::create(dims, Activation::Relu, Activation::Identity, a);
    const auto n2 = MlpNet::create(dims, Activation::Relu, Activation::Identity, b);
    CHECK(n1 == n2);
    for (float w : n1.layers[0].weight.values()) CHECK(std::abs(w) <= 1.0f / 3.0f);
    CHECK(n1.parameter_count() == 9 * 5 + 5 + 5 * 3 + 3);
  }

  TEST_CASE("forward is bitwise deterministic") {
    Rng rng(5);
    const std::size_t dims[] = {6, 8, 4};
    const auto net = MlpNet::create(dims, Activation::Relu, Activation::Identity, rng);
    const Matrix x = random_matrix(10, 6, rng);
    CHECK(mlp_apply(net, x) == mlp_apply(net, x));
  }

  TEST_CASE("input width mismatch is a shape error") {
    Rng rng(6);
    const std::size_t dims[] = {3, 2};
    const auto net = MlpNet::create(dims, Activation::Relu, Activation::Identity, rng);
    CHECK_THROWS_AS(mlp_forward(net, Matrix(2, 4)), ShapeError);
  }

  TEST_CASE("zero upstream gradient gives zero gradients") {
    Rng rng(7);
    const std::size_t dims[] = {3, 4, 2};
    const auto net = MlpNet::create(dims, Activation::Relu, Activation::Identity, rng);
    const auto fwd = mlp_forward(net, random_matrix(5, 3, rng));
    const auto back = mlp_backward(net, fwd.cache, Matrix(5, 2));
    for (auto block : back.param_grads.parameters())
      for (float g : block) CHECK(g == 0.0f);
    for (float g : back.grad_input.values()) CHECK(g == 0.0f);
  }

  TEST_CASE("quadratic loss on a linear layer has gradient 2(Wx - t)x^T") {
    // Row-vector convention: y = x W + b, L = ||y - t||^2, dL/dW = x^T 2(y - t).
    Rng rng(8);
    const Matrix w = random_matrix(3, 2, rng);
    const auto net = linear_net(w, {0, 0});
    const Matrix x = random_matrix(1, 3, rng), t = random_matrix(1, 2, rng);
    const auto fwd = mlp_forward(net, x);
    Matrix g(1, 2);
    for (std::size_t j = 0; j < 2; ++j) g(0, j) = 2.0f * (fwd.output(0, j) - t(0, j));
    const auto back = mlp_backward(net, fwd.cache, g);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(back.param_grads.layers[0].weight(i, j) == doctest::Approx(double(x(0, i)) * g(0, j)));
    for (std::size_t j = 0; j < 2; ++j) CHECK(back.param_grads.layers[0].bias[j] == doctest::Approx(g(0, j)));
  }

  TEST_CASE("backward matches finite differences on random small nets") {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t dims[] = {2, 3, 2};
      auto net = MlpNet::create(dims, Activation::Relu, Activation::Identity, rng);
      const Matrix x = random_matrix(3, 2, rng), w_out = random_matrix(3, 2, rng);
      // L = sum(y .* w_out): linear in y, so dL/dy = w_out.
      auto loss = [&](std::span<const float> flat) {
        MlpNet probe = net;
        unflatten(flat, probe.parameters());
        const Matrix y = mlp_apply(probe, x);
        double acc = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) acc += double(y.values()[i]) * w_out.values()[i];
        return acc;
      };
      const auto back = mlp_backward(net, mlp_forward(net, x).cache, w_out);
      const auto flat = flatten(std::as_const(net).parameters());
      const auto numeric = finite_diff_grad(loss, flat);
      const auto analytic = testing::to_double(flatten(std::as_const(back.param_grads).parameters()));
      CHECK(relative_error(analytic, numeric) < 1e-4);
    }
  }

  TEST_CASE("stale cache is rejected") {
    Rng rng(10);
    const std::size_t dims[] = {3, 4, 2};
    const std::size_t other[] = {3, 5, 2};
    const auto net = MlpNet::create(dims, Activation::Relu, Activation::Identity, rng);
    const auto net2 = MlpNet::create(other, Activation::Relu, Activation::Identity, rng);
    const auto fwd = mlp_forward(net2, random_matrix(2, 3, rng));
    CHECK_THROWS_AS(mlp_backward(net, fwd.cache, Matrix(2, 2)), ShapeError);
    const auto own = mlp_forward(net, random_matrix(2, 3, rng));
    CHECK_THROWS_AS(mlp_backward(net, own.cache, Matrix(3, 2)), ShapeError);
  }

  TEST_CASE("activation names round-trip") {
    CHECK(activation_from_string(to_string(Activation::Relu)) == Activation::Relu);
    CHECK(activation_from_string(to_string(Activation::Identity)) == Activation::Identity);
    CHECK_THROWS_AS(activation_from_string("tanh"), UsageError);
  }
}

TEST_SUITE("adam") {
  TEST_CASE("zero gradient leaves parameters unchanged") {
    std::vector<float> p{1.0f, -2.0f, 3.0f};
    const std::vector<float> g(3, 0.0f);
    auto state = AdamState::for_blocks(AdamHyper{}, std::vector<std::span<float>>{p});
    const std::span<float> ps[] = {p};
    const std::span<const float> gs[] = {g};
    adam_step(ps, gs, state);
    CHECK(p == std::vector<float>{1.0f, -2.0f, 3.0f});
    CHECK(state.step() == 1);
  }

  TEST_CASE("first step moves each coordinate by about lr * sign(g)") {
    std::vector<float> p{0.5f, 0.5f, 0.5f, 0.5f};
    const std::vector<float> g{3.0f, -0.02f, 1e-3f, -40.0f};
    AdamHyper h;
    h.learning_rate = 0.01;
    auto state = AdamState::for_blocks(h, std::vector<std::span<float>>{p});
    const std::span<float> ps[] = {p};
    const std::span<const float> gs[] = {g};
    adam_step(ps, gs, state);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double expected = 0.5 - 0.01 * (g[i] > 0 ? 1.0 : -1.0);
      CHECK(p[i] == doctest::Approx(expected).epsilon(1e-5));
    }
  }

  TEST_CASE("two steps follow the hand-simulated recurrence") {
    std::vector<float> p{1.0f};
    const std::vector<float> g{0.5f};
    AdamHyper h;
    auto state = AdamState::for_blocks(h, std::vector<std::span<float>>{p});
    const std::span<float> ps[] = {p};
    const std::span<const float> gs[] = {g};
    double m = 0, v = 0, x = 1.0;
    for (int t = 1; t <= 2; ++t) {
      adam_step(ps, gs, state);
      m = h.beta1 * m + (1 - h.beta1) * 0.5;
      v = h.beta2 * v + (1 - h.beta2) * 0.25;
      x -= h.learning_rate * (m / (1 - std::pow(h.beta1, t))) /
           (std::sqrt(v / (1 - std::pow(h.beta2, t))) + h.epsilon);
    }
    CHECK(state.step() == 2);
    CHECK(state.first_moment()[0][0] == doctest::Approx(m).epsilon(1e-6));
    CHECK(state.second_moment()[0][0] == doctest::Approx(v).epsilon(1e-6));
    CHECK(p[0] == doctest::Approx(x).epsilon(1e-6));
  }

  TEST_CASE("learning rate zero is the identity") {
    Rng rng(21);
    std::vector<float> p(10);
    for (float& x : p) x = testing::random_double(-1, 1, rng);
    const auto before = p;
    AdamHyper h;
    h.learning_rate = 0.0;
    auto state = AdamState::for_blocks(h, std::vector<std::span<float>>{p});
    std::vector<float> g(10);
    for (int s = 0; s < 5; ++s) {
      for (float& x : g) x = testing::random_double(-1, 1, rng);
      const std::span<float> ps[] = {p};
      const std::span<const float> gs[] = {g};
      adam_step(ps, gs, state);
    }
    CHECK(p == before);
    CHECK(state.step() == 5);
  }

  TEST_CASE("block shape mismatch is a shape error") {
    std::vector<float> p(3), g(2);
    auto state = AdamState::for_blocks(AdamHyper{}, std::vector<std::span<float>>{p});
    const std::span<float> ps[] = {p};
    const std::span<const float> gs[] = {g};
    CHECK_THROWS_AS(adam_step(ps, gs, state), ShapeError);
    CHECK(state.step() == 0);
  }
}

TEST_SUITE("finite_diff") {
  TEST_CASE("constant function has zero gradient") {
    const std::vector<float> p{0.3f, -1.0f};
    for (double g : finite_diff_grad([](std::span<const float>) { return 4.2; }, p)) CHECK(g == 0.0);
  }

  TEST_CASE("sum of squares at (1, 2) gives (2, 4)") {
    const std::vector<float> p{1.0f, 2.0f};
    const auto g = finite_diff_grad(
        [](std::span<const float> x) {
          double acc = 0;
          for (float v : x) acc += double(v) * v;
          return acc;
        },
        p);
    CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(g[1] == doctest::Approx(4.0).epsilon(1e-6));
  }

  TEST_CASE("sin at 0 gives 1") {
    const std::vector<float> p{0.0f};
    const auto g = finite_diff_grad([](std::span<const float> x) { return std::sin(double(x[0])); }, p);
    CHECK(std::abs(g[0] - 1.0) < 1e-6);
  }

  TEST_CASE("non-finite loss raises a numeric error") {
    const std::vector<float> p{1.0f};
    CHECK_THROWS_AS(finite_diff_grad([](std::span<const float>) { return std::nan(""); }, p),
                    NumericError);
  }

  TEST_CASE("relative error is norm-wise and symmetric") {
    const std::vector<double> a{3, 4}, b{3, 4}, z{0, 0};
    CHECK(relative_error(a, b) == 0.0);
    CHECK(relative_error(z, z) == 0.0);
    CHECK(relative_error(a, z) == doctest::Approx(1.0));
    const std::vector<double> c{3, 5};
    CHECK(relative_error(a, c) == doctest::Approx(relative_error(c, a)));
  }

  TEST_CASE("flatten and unflatten are inverse") {
    std::vector<float> a{1, 2}, b{3, 4, 5};
    const std::vector<std::span<float>> blocks{a, b};
    const auto flat = flatten(blocks);
    CHECK(flat == std::vector<float>{1, 2, 3, 4, 5});
    std::vector<float> changed{9, 8, 7, 6, 5};
    unflatten(changed, blocks);
    CHECK(a == std::vector<float>{9, 8});
    CHECK(b == std::vector<float>{7, 6, 5});
    CHECK_THROWS_AS(unflatten(std::vector<float>{1}, blocks), ShapeError);
  }
}

TEST_SUITE("binary_io") {
  TEST_CASE("little-endian round trip") {
    std::stringstream ss;
    write_u32_le(ss, 0x01020304u);
    write_i32_le(ss, -7);
    const std::vector<float> v{1.5f, -0.0f, 3e-20f};
    write_f32_le(ss, v);
    const std::string bytes = ss.str();
    CHECK(static_cast<unsigned char>(bytes[0]) == 0x04);
    CHECK(read_u32_le(ss) == 0x01020304u);
    CHECK(read_i32_le(ss) == -7);
    CHECK(read_f32_le(ss, 3) == v);
    CHECK_THROWS_AS(read_u32_le(ss), IoError);
  }
}
