#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "windcast/layers.hpp"
#include "windcast/rng.hpp"
#include "windcast/tensor.hpp"

using namespace windcast::nn;
using windcast::Rng;
using windcast::Tensor;

namespace {

constexpr double kEps = 1e-5;

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng,
                     double span = 0.5) {
  Tensor out(std::move(shape));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] = rng.uniform(-span, span);
  }
  return out;
}

// Fixed-weight scalar readout: loss = sum_i w[i] * value[i]. Differentiating
// it turns any tensor-valued layer into a scalar function, with the weights
// doubling as the upstream gradient.
double weighted_sum(const Tensor& value, const Tensor& weights) {
  double acc = 0.0;
  for (std::size_t i = 0; i < value.size(); ++i) {
    acc += value.data()[i] * weights.data()[i];
  }
  return acc;
}

void expect_gradients_match(const Tensor& analytic, Tensor& location,
                            const std::function<double()>& loss) {
  REQUIRE(analytic.size() == location.size());
  for (std::size_t i = 0; i < location.size(); ++i) {
    const double numeric =
        oracles::central_difference(loss, &location.data()[i], kEps);
    CHECK(oracles::relative_error(analytic.data()[i], numeric) < 1e-4);
  }
}

}  // namespace

TEST_CASE("conv1d forward reproduces a hand-worked cross-correlation") {
  Tensor input({1, 3, 1});
  input(0, 0, 0) = 1.0;
  input(0, 1, 0) = 2.0;
  input(0, 2, 0) = 3.0;
  Tensor kernel({2, 1, 1});
  kernel(0, 0, 0) = 10.0;
  kernel(1, 0, 0) = 20.0;
  Tensor bias({1});
  bias(0) = 1.0;
  const Tensor out = conv1d_forward(input, kernel, bias);
  REQUIRE(out.shape_string() == "[1, 2, 1]");
  CHECK(out(0, 0, 0) == doctest::Approx(51.0));
  CHECK(out(0, 1, 0) == doctest::Approx(81.0));
}

TEST_CASE("conv1d forward sums over input channels") {
  Tensor input({1, 2, 2});
  input(0, 0, 0) = 1.0;
  input(0, 0, 1) = 2.0;
  input(0, 1, 0) = 3.0;
  input(0, 1, 1) = 4.0;
  Tensor kernel({2, 2, 1});
  kernel(0, 0, 0) = 1.0;
  kernel(0, 1, 0) = 10.0;
  kernel(1, 0, 0) = 100.0;
  kernel(1, 1, 0) = 1000.0;
  Tensor bias({1});
  const Tensor out = conv1d_forward(input, kernel, bias);
  REQUIRE(out.shape_string() == "[1, 1, 1]");
  CHECK(out(0, 0, 0) == doctest::Approx(1.0 + 20.0 + 300.0 + 4000.0));
}

TEST_CASE("conv1d rejects malformed operands") {
  Tensor input({1, 3, 1});
  Tensor kernel({2, 1, 1});
  Tensor bias({1});
  CHECK_THROWS_AS(conv1d_forward(Tensor({3, 1}), kernel, bias),
                  std::invalid_argument);
  CHECK_THROWS_AS(conv1d_forward(input, Tensor({2, 2, 1}), bias),
                  std::invalid_argument);
  CHECK_THROWS_AS(conv1d_forward(input, kernel, Tensor({2})),
                  std::invalid_argument);
  CHECK_THROWS_WITH_AS(conv1d_forward(Tensor({1, 1, 1}), kernel, bias),
                       doctest::Contains("wider"), std::invalid_argument);
}

TEST_CASE("conv1d backward agrees with finite differences") {
  Rng rng(101);
  Tensor input = random_tensor({2, 5, 3}, rng);
  Tensor kernel = random_tensor({2, 3, 4}, rng);
  Tensor bias = random_tensor({4}, rng);
  const Tensor readout = random_tensor({2, 4, 4}, rng, 1.0);

  const auto loss = [&] {
    return weighted_sum(conv1d_forward(input, kernel, bias), readout);
  };
  const Conv1dGrads grads = conv1d_backward(readout, input, kernel);
  expect_gradients_match(grads.input, input, loss);
  expect_gradients_match(grads.kernel, kernel, loss);
  expect_gradients_match(grads.bias, bias, loss);
}

TEST_CASE("global max pool keeps the per-filter maximum") {
  Tensor input({1, 3, 2});
  input(0, 0, 0) = 5.0;
  input(0, 1, 0) = 9.0;
  input(0, 2, 0) = 2.0;
  input(0, 0, 1) = -3.0;
  input(0, 1, 1) = -8.0;
  input(0, 2, 1) = -1.0;
  const MaxPoolResult pooled = global_maxpool_forward(input);
  REQUIRE(pooled.output.shape_string() == "[1, 1, 2]");
  CHECK(pooled.output(0, 0, 0) == 9.0);
  CHECK(pooled.output(0, 0, 1) == -1.0);
  CHECK(pooled.argmax[0] == 1);
  CHECK(pooled.argmax[1] == 2);
  CHECK(pooled.steps == 3);
}

TEST_CASE("max pool ties resolve to the lowest step index") {
  Tensor input({1, 4, 1});
  input(0, 0, 0) = 1.0;
  input(0, 1, 0) = 7.0;
  input(0, 2, 0) = 7.0;
  input(0, 3, 0) = 7.0;
  const MaxPoolResult pooled = global_maxpool_forward(input);
  CHECK(pooled.output(0, 0, 0) == 7.0);
  CHECK(pooled.argmax[0] == 1);
}

TEST_CASE("max pool backward routes gradient only to the winning step") {
  Tensor input({2, 3, 2});
  double v = 0.0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    input.data()[i] = v;
    v += 1.0;  // strictly increasing, so the last step always wins
  }
  const MaxPoolResult pooled = global_maxpool_forward(input);
  Tensor upstream({2, 1, 2});
  upstream(0, 0, 0) = 10.0;
  upstream(0, 0, 1) = 20.0;
  upstream(1, 0, 0) = 30.0;
  upstream(1, 0, 1) = 40.0;
  const Tensor grad = maxpool_backward(upstream, pooled);
  REQUIRE(grad.same_shape(input));
  CHECK(grad(0, 2, 0) == 10.0);
  CHECK(grad(0, 2, 1) == 20.0);
  CHECK(grad(1, 2, 0) == 30.0);
  CHECK(grad(1, 2, 1) == 40.0);
  double total = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) total += std::fabs(grad.data()[i]);
  CHECK(total == doctest::Approx(100.0));
}

TEST_CASE("max pool backward agrees with finite differences away from ties") {
  Rng rng(55);
  Tensor input({2, 4, 3});
  // Comfortable gaps between entries keep the argmax stable under the probe.
  for (std::size_t i = 0; i < input.size(); ++i) {
    input.data()[i] = 0.01 * static_cast<double>(i * 7 % 23);
  }
  const Tensor readout = random_tensor({2, 1, 3}, rng, 1.0);
  const auto loss = [&] {
    return weighted_sum(global_maxpool_forward(input).output, readout);
  };
  const MaxPoolResult pooled = global_maxpool_forward(input);
  const Tensor analytic = maxpool_backward(readout, pooled);
  expect_gradients_match(analytic, input, loss);
}

TEST_CASE("single LSTM step matches the scalar gate equations") {
  const double x = 0.5;
  const double wi = 0.4, wf = 0.3, wg = 0.2, wo = 0.1;
  const double bi = 0.05, bf = 1.0, bg = 0.3, bo = 0.2;
  LstmParams params;
  params.w_input = Tensor({1, 4});
  params.w_input(0, 0) = wi;
  params.w_input(0, 1) = wf;
  params.w_input(0, 2) = wg;
  params.w_input(0, 3) = wo;
  params.w_recurrent = Tensor({1, 4});
  params.w_recurrent.fill(0.7);  // irrelevant at t=0: h0 = 0
  params.bias = Tensor({4});
  params.bias(0) = bi;
  params.bias(1) = bf;
  params.bias(2) = bg;
  params.bias(3) = bo;

  Tensor input({1, 1, 1});
  input(0, 0, 0) = x;
  const LstmForwardResult result = lstm_forward(input, params);

  const auto sigma = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  const double i_gate = sigma(x * wi + bi);
  const double g_gate = std::tanh(x * wg + bg);
  const double o_gate = sigma(x * wo + bo);
  const double c1 = i_gate * g_gate;
  const double h1 = o_gate * std::tanh(c1);
  REQUIRE(result.hidden.shape_string() == "[1, 1]");
  CHECK(result.hidden(0, 0) == doctest::Approx(h1).epsilon(1e-12));
  CHECK(result.cache.cell[0](0, 0) == doctest::Approx(c1).epsilon(1e-12));
}

TEST_CASE("two LSTM steps follow the recurrence") {
  LstmParams params;
  params.w_input = Tensor({1, 4});
  params.w_recurrent = Tensor({1, 4});
  params.bias = Tensor({4});
  const double win[4] = {0.4, -0.3, 0.6, 0.2};
  const double wrec[4] = {0.1, 0.5, -0.2, 0.3};
  const double b[4] = {0.0, 1.0, -0.1, 0.05};
  for (std::size_t g = 0; g < 4; ++g) {
    params.w_input(0, g) = win[g];
    params.w_recurrent(0, g) = wrec[g];
    params.bias(g) = b[g];
  }
  Tensor input({1, 2, 1});
  input(0, 0, 0) = 0.8;
  input(0, 1, 0) = -0.4;
  const LstmForwardResult result = lstm_forward(input, params);

  const auto sigma = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  double h = 0.0, c = 0.0;
  for (std::size_t t = 0; t < 2; ++t) {
    const double x = input(0, t, 0);
    const double i_gate = sigma(x * win[0] + h * wrec[0] + b[0]);
    const double f_gate = sigma(x * win[1] + h * wrec[1] + b[1]);
    const double g_gate = std::tanh(x * win[2] + h * wrec[2] + b[2]);
    const double o_gate = sigma(x * win[3] + h * wrec[3] + b[3]);
    c = f_gate * c + i_gate * g_gate;
    h = o_gate * std::tanh(c);
  }
  CHECK(result.hidden(0, 0) == doctest::Approx(h).epsilon(1e-12));
}

TEST_CASE("LSTM backpropagation through time agrees with finite differences") {
  Rng rng(202);
  LstmParams params;
  params.w_input = random_tensor({2, 12}, rng);
  params.w_recurrent = random_tensor({3, 12}, rng);
  params.bias = random_tensor({12}, rng);
  Tensor input = random_tensor({2, 3, 2}, rng);
  const Tensor readout = random_tensor({2, 3}, rng, 1.0);

  const auto loss = [&] {
    return weighted_sum(lstm_forward(input, params).hidden, readout);
  };
  const LstmForwardResult forward = lstm_forward(input, params);
  const LstmGrads grads = lstm_backward(readout, params, forward.cache);
  expect_gradients_match(grads.params.w_input, params.w_input, loss);
  expect_gradients_match(grads.params.w_recurrent, params.w_recurrent, loss);
  expect_gradients_match(grads.params.bias, params.bias, loss);
  expect_gradients_match(grads.input, input, loss);
}

TEST_CASE("dense forward computes an affine map and optional ReLU") {
  Tensor input = Tensor::from_rows({{1.0, 2.0}});
  Tensor weights = Tensor::from_rows({{3.0, -4.0}, {5.0, 6.0}});
  Tensor bias({2});
  bias(0) = 0.5;
  bias(1) = -10.0;
  const DenseResult linear = dense_forward(input, weights, bias, false);
  CHECK(linear.output(0, 0) == doctest::Approx(13.5));  // 1*3 + 2*5 + 0.5
  CHECK(linear.output(0, 1) == doctest::Approx(-2.0));  // -4 + 12 - 10
  const DenseResult rectified = dense_forward(input, weights, bias, true);
  CHECK(rectified.output(0, 0) == doctest::Approx(13.5));
  CHECK(rectified.output(0, 1) == 0.0);
  CHECK(rectified.preactivation(0, 1) == doctest::Approx(-2.0));
}

TEST_CASE("dense backward agrees with finite differences") {
  Rng rng(303);
  for (const bool relu : {false, true}) {
    CAPTURE(relu);
    Tensor input = random_tensor({3, 4}, rng, 1.0);
    Tensor weights = random_tensor({4, 2}, rng, 1.0);
    Tensor bias = random_tensor({2}, rng, 1.0);
    // Nudge any preactivation sitting near the ReLU kink.
    DenseResult probe = dense_forward(input, weights, bias, false);
    for (std::size_t j = 0; j < 2; ++j) {
      bool adjusted = false;
      for (std::size_t i = 0; i < 3; ++i) {
        if (std::fabs(probe.output(i, j)) < 0.05) adjusted = true;
      }
      if (adjusted) bias(j) += 0.2;
    }
    const Tensor readout = random_tensor({3, 2}, rng, 1.0);
    const auto loss = [&] {
      return weighted_sum(dense_forward(input, weights, bias, relu).output,
                          readout);
    };
    const DenseResult cache = dense_forward(input, weights, bias, relu);
    const DenseGrads grads =
        dense_backward(readout, input, weights, cache, relu);
    expect_gradients_match(grads.input, input, loss);
    expect_gradients_match(grads.weights, weights, loss);
    expect_gradients_match(grads.bias, bias, loss);
  }
}

TEST_CASE("ReLU gradient is zero behind inactive units") {
  Tensor input = Tensor::from_rows({{1.0}});
  Tensor weights = Tensor::from_rows({{-2.0}});
  Tensor bias({1});
  const DenseResult cache = dense_forward(input, weights, bias, true);
  REQUIRE(cache.output(0, 0) == 0.0);
  Tensor upstream = Tensor::from_rows({{5.0}});
  const DenseGrads grads = dense_backward(upstream, input, weights, cache, true);
  CHECK(grads.input(0, 0) == 0.0);
  CHECK(grads.weights(0, 0) == 0.0);
  CHECK(grads.bias(0) == 0.0);
}

TEST_CASE("mse loss value and gradient match the definition") {
  const Tensor pred = Tensor::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const Tensor target = Tensor::from_rows({{0.0, 2.0}, {3.0, 8.0}});
  const MseResult result = mse_loss(pred, target);
  CHECK(result.loss == doctest::Approx((1.0 + 0.0 + 0.0 + 16.0) / 4.0));
  CHECK(result.grad(0, 0) == doctest::Approx(2.0 * 1.0 / 4.0));
  CHECK(result.grad(0, 1) == 0.0);
  CHECK(result.grad(1, 1) == doctest::Approx(2.0 * -4.0 / 4.0));
}

TEST_CASE("mse gradient agrees with finite differences") {
  Rng rng(404);
  Tensor pred = random_tensor({3, 2}, rng, 2.0);
  const Tensor target = random_tensor({3, 2}, rng, 2.0);
  const auto loss = [&] { return mse_loss(pred, target).loss; };
  const MseResult result = mse_loss(pred, target);
  expect_gradients_match(result.grad, pred, loss);
}
