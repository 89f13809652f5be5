#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "windcast/network.hpp"
#include "windcast/rng.hpp"
#include "windcast/tensor.hpp"

using windcast::forward;
using windcast::forward_cached;
using windcast::ForwardCache;
using windcast::grad_check;
using windcast::GradCheckReport;
using windcast::init_network;
using windcast::NetworkSpec;
using windcast::NetworkState;
using windcast::Rng;
using windcast::Tensor;
using windcast::zeros_like;

namespace {

NetworkSpec small_spec() {
  NetworkSpec spec;
  spec.input_steps = 4;
  spec.input_features = 2;
  spec.conv_filters = 5;
  spec.conv_kernel = 2;
  spec.lstm_units = 6;
  spec.dense_hidden = 7;
  spec.output_features = 2;
  return spec;
}

Tensor random_batch(const NetworkSpec& spec, std::size_t n, Rng& rng) {
  Tensor x({n, spec.input_steps, spec.input_features});
  for (std::size_t i = 0; i < x.size(); ++i) {
    x.data()[i] = rng.uniform(-1.0, 1.0);
  }
  return x;
}

}  // namespace

TEST_CASE("spec validation accepts the defaults and rejects degenerate layouts") {
  NetworkSpec spec;
  CHECK_NOTHROW(spec.validate());
  NetworkSpec bad = small_spec();
  bad.conv_kernel = 5;  // wider than the 4-step window
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = small_spec();
  bad.lstm_units = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = small_spec();
  bad.output_features = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("initialization is seeded, bounded, and biases start at known values") {
  const NetworkSpec spec = small_spec();
  NetworkState a = init_network(spec, 42);
  NetworkState b = init_network(spec, 42);
  NetworkState c = init_network(spec, 43);
  CHECK(a.init_seed == 42);

  bool identical = true;
  bool differs_from_c = false;
  auto pa = a.parameters();
  auto pb = b.parameters();
  auto pc = c.parameters();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t p = 0; p < pa.size(); ++p) {
    const Tensor& ta = *pa[p].second;
    const Tensor& tb = *pb[p].second;
    const Tensor& tc = *pc[p].second;
    REQUIRE(ta.same_shape(tb));
    for (std::size_t i = 0; i < ta.size(); ++i) {
      if (ta.data()[i] != tb.data()[i]) identical = false;
      if (ta.data()[i] != tc.data()[i]) differs_from_c = true;
    }
  }
  CHECK(identical);
  CHECK(differs_from_c);

  // Fan-in scaled uniform weights stay within 1/sqrt(fan_in).
  const double conv_limit =
      1.0 / std::sqrt(static_cast<double>(spec.conv_kernel * spec.input_features));
  bool nonzero = false;
  for (std::size_t i = 0; i < a.conv_kernel.size(); ++i) {
    CHECK(std::fabs(a.conv_kernel.data()[i]) <= conv_limit);
    if (a.conv_kernel.data()[i] != 0.0) nonzero = true;
  }
  CHECK(nonzero);

  // Biases: zero everywhere except the LSTM forget-gate block at 1.0.
  for (std::size_t i = 0; i < a.conv_bias.size(); ++i) {
    CHECK(a.conv_bias.data()[i] == 0.0);
  }
  const std::size_t u = spec.lstm_units;
  for (std::size_t i = 0; i < 4 * u; ++i) {
    const bool forget_block = (i >= u && i < 2 * u);
    CHECK(a.lstm.bias(i) == (forget_block ? 1.0 : 0.0));
  }
  for (std::size_t i = 0; i < a.dense1_bias.size(); ++i) {
    CHECK(a.dense1_bias.data()[i] == 0.0);
  }
  for (std::size_t i = 0; i < a.dense2_bias.size(); ++i) {
    CHECK(a.dense2_bias.data()[i] == 0.0);
  }
}

TEST_CASE("parameter registry has a fixed traversal order") {
  NetworkState state = init_network(small_spec(), 1);
  const auto params = state.parameters();
  const std::vector<std::string> expected = {
      "conv_kernel",   "conv_bias",  "lstm_w_input",
      "lstm_w_recurrent", "lstm_bias", "dense1_weight",
      "dense1_bias",   "dense2_weight", "dense2_bias"};
  REQUIRE(params.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(params[i].first == expected[i]);
    CHECK(params[i].second != nullptr);
  }
  // Const overload exposes the same views.
  const NetworkState& view = state;
  const auto const_params = view.parameters();
  REQUIRE(const_params.size() == expected.size());
  CHECK(const_params[0].first == "conv_kernel");
}

TEST_CASE("zeros_like mirrors shapes with zero values") {
  NetworkState state = init_network(small_spec(), 9);
  NetworkState zero = zeros_like(state);
  auto ps = state.parameters();
  auto pz = zero.parameters();
  REQUIRE(ps.size() == pz.size());
  for (std::size_t p = 0; p < ps.size(); ++p) {
    REQUIRE(ps[p].second->same_shape(*pz[p].second));
    for (std::size_t i = 0; i < pz[p].second->size(); ++i) {
      CHECK(pz[p].second->data()[i] == 0.0);
    }
  }
}

TEST_CASE("forward produces the documented intermediate shapes") {
  const NetworkSpec spec = small_spec();
  NetworkState state = init_network(spec, 7);
  Rng rng(11);
  const Tensor x = random_batch(spec, 3, rng);
  ForwardCache cache;
  const Tensor pred = forward_cached(spec, state, x, cache);
  CHECK(pred.shape_string() == "[3, 2]");
  CHECK(cache.conv_out.shape_string() == "[3, 3, 5]");  // steps - k + 1 = 3
  CHECK(cache.pool.output.shape_string() == "[3, 1, 5]");
  CHECK(cache.lstm_input.shape_string() == "[3, 1, 5]");
  CHECK(cache.lstm_hidden.shape_string() == "[3, 6]");
  CHECK(cache.dense1.output.shape_string() == "[3, 7]");
  CHECK(cache.dense2.output.shape_string() == "[3, 2]");
}

TEST_CASE("forward and forward_cached agree") {
  const NetworkSpec spec = small_spec();
  NetworkState state = init_network(spec, 21);
  Rng rng(22);
  const Tensor x = random_batch(spec, 4, rng);
  ForwardCache cache;
  const Tensor a = forward(spec, state, x);
  const Tensor b = forward_cached(spec, state, x, cache);
  REQUIRE(a.same_shape(b));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.data()[i] == b.data()[i]);
  }
}

TEST_CASE("forward rejects inputs that do not match the spec") {
  const NetworkSpec spec = small_spec();
  NetworkState state = init_network(spec, 3);
  CHECK_THROWS_AS(forward(spec, state, Tensor({2, 3, 2})),
                  std::invalid_argument);
  CHECK_THROWS_AS(forward(spec, state, Tensor({2, 4})), std::invalid_argument);
}

TEST_CASE("composed analytic gradients pass the finite-difference check") {
  const NetworkSpec spec = small_spec();
  Rng rng(500);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    NetworkState state = init_network(spec, seed);
    const Tensor x = random_batch(spec, 3, rng);
    Tensor y({3, spec.output_features});
    for (std::size_t i = 0; i < y.size(); ++i) {
      y.data()[i] = rng.uniform(-1.0, 1.0);
    }
    const GradCheckReport report = grad_check(spec, state, x, y, 1e-5);
    CAPTURE(seed);
    CAPTURE(report.worst_parameter);
    CHECK(report.max_rel_error < 1e-4);
    CHECK_FALSE(report.worst_parameter.empty());
  }
}

TEST_CASE("gradient check flags a corrupted backward pass") {
  // Sanity-check the checker: a deliberately wrong gradient must be caught.
  const NetworkSpec spec = small_spec();
  NetworkState state = init_network(spec, 4);
  Rng rng(600);
  const Tensor x = random_batch(spec, 2, rng);
  Tensor y({2, spec.output_features});
  for (std::size_t i = 0; i < y.size(); ++i) {
    y.data()[i] = rng.uniform(-1.0, 1.0);
  }
  ForwardCache cache;
  const Tensor pred = forward_cached(spec, state, x, cache);
  const auto mse = windcast::nn::mse_loss(pred, y);
  NetworkState grads = windcast::backward(spec, state, cache, mse.grad);
  // Break one entry and verify the finite difference disagrees.
  const double analytic = grads.dense2_bias(0);
  const double broken = analytic + 1.0;
  double* location = &state.dense2_bias(0);
  const double numeric = oracles::central_difference(
      [&] {
        const Tensor p = forward(spec, state, x);
        return windcast::nn::mse_loss(p, y).loss;
      },
      location, 1e-5);
  CHECK(oracles::relative_error(analytic, numeric) < 1e-4);
  CHECK(oracles::relative_error(broken, numeric) > 1e-2);
}
