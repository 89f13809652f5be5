#include "windcast/network.hpp"

#include <cmath>
#include <stdexcept>

#include "windcast/rng.hpp"

namespace windcast {

void NetworkSpec::validate() const {
  if (input_steps < 1 || input_features < 1 || conv_filters < 1 ||
      conv_kernel < 1 || lstm_units < 1 || dense_hidden < 1 ||
      output_features < 1) {
    throw std::invalid_argument("NetworkSpec: all sizes must be >= 1");
  }
  if (conv_kernel > input_steps) {
    throw std::invalid_argument("NetworkSpec: conv_kernel must not exceed input_steps");
  }
}

std::vector<std::pair<std::string, Tensor*>> NetworkState::parameters() {
  return {
      {"conv_kernel", &conv_kernel},     {"conv_bias", &conv_bias},
      {"lstm_w_input", &lstm.w_input},   {"lstm_w_recurrent", &lstm.w_recurrent},
      {"lstm_bias", &lstm.bias},         {"dense1_weight", &dense1_weight},
      {"dense1_bias", &dense1_bias},     {"dense2_weight", &dense2_weight},
      {"dense2_bias", &dense2_bias},
  };
}

std::vector<std::pair<std::string, const Tensor*>> NetworkState::parameters()
    const {
  auto& self = const_cast<NetworkState&>(*this);
  std::vector<std::pair<std::string, const Tensor*>> out;
  for (auto& [name, tensor] : self.parameters()) {
    out.emplace_back(name, tensor);
  }
  return out;
}

bool NetworkState::all_finite() const {
  for (const auto& [name, tensor] : parameters()) {
    (void)name;
    if (!tensor->all_finite()) {
      return false;
    }
  }
  return true;
}

namespace {

void fill_uniform_fan_in(Tensor& t, std::size_t fan_in, Rng& rng) {
  const double limit = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (double& v : t.values()) {
    v = rng.uniform(-limit, limit);
  }
}

}  // namespace

NetworkState init_network(const NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  NetworkState state;
  state.init_seed = seed;

  state.conv_kernel =
      Tensor({spec.conv_kernel, spec.input_features, spec.conv_filters});
  fill_uniform_fan_in(state.conv_kernel, spec.conv_kernel * spec.input_features,
                      rng);
  state.conv_bias = Tensor({spec.conv_filters});

  state.lstm.w_input = Tensor({spec.conv_filters, 4 * spec.lstm_units});
  fill_uniform_fan_in(state.lstm.w_input, spec.conv_filters, rng);
  state.lstm.w_recurrent = Tensor({spec.lstm_units, 4 * spec.lstm_units});
  fill_uniform_fan_in(state.lstm.w_recurrent, spec.lstm_units, rng);
  state.lstm.bias = Tensor({4 * spec.lstm_units});
  for (std::size_t u = 0; u < spec.lstm_units; ++u) {
    state.lstm.bias(spec.lstm_units + u) = 1.0;  // forget gate starts open
  }

  state.dense1_weight = Tensor({spec.lstm_units, spec.dense_hidden});
  fill_uniform_fan_in(state.dense1_weight, spec.lstm_units, rng);
  state.dense1_bias = Tensor({spec.dense_hidden});
  state.dense2_weight = Tensor({spec.dense_hidden, spec.output_features});
  fill_uniform_fan_in(state.dense2_weight, spec.dense_hidden, rng);
  state.dense2_bias = Tensor({spec.output_features});
  return state;
}

NetworkState zeros_like(const NetworkState& state) {
  NetworkState zeros;
  zeros.conv_kernel = Tensor(state.conv_kernel.shape());
  zeros.conv_bias = Tensor(state.conv_bias.shape());
  zeros.lstm.w_input = Tensor(state.lstm.w_input.shape());
  zeros.lstm.w_recurrent = Tensor(state.lstm.w_recurrent.shape());
  zeros.lstm.bias = Tensor(state.lstm.bias.shape());
  zeros.dense1_weight = Tensor(state.dense1_weight.shape());
  zeros.dense1_bias = Tensor(state.dense1_bias.shape());
  zeros.dense2_weight = Tensor(state.dense2_weight.shape());
  zeros.dense2_bias = Tensor(state.dense2_bias.shape());
  return zeros;
}

Tensor forward_cached(const NetworkSpec& spec, const NetworkState& state,
                      const Tensor& x, ForwardCache& cache) {
  if (x.rank() != 3 || x.extent(1) != spec.input_steps ||
      x.extent(2) != spec.input_features) {
    throw std::invalid_argument("forward: input " + x.shape_string() +
                                " does not match spec window [n, " +
                                std::to_string(spec.input_steps) + ", " +
                                std::to_string(spec.input_features) + "]");
  }
  const std::size_t batch = x.extent(0);

  cache.input = x;
  cache.conv_out = nn::conv1d_forward(x, state.conv_kernel, state.conv_bias);
  cache.pool = nn::global_maxpool_forward(cache.conv_out);

  // Each window is one subsequence: flatten [n, 1, filters] and feed the
  // LSTM a length-1 sequence of filter activations.
  cache.lstm_input = Tensor({batch, 1, spec.conv_filters},
                            cache.pool.output.values());
  auto lstm = nn::lstm_forward(cache.lstm_input, state.lstm);
  cache.lstm = std::move(lstm.cache);
  cache.lstm_hidden = std::move(lstm.hidden);

  cache.dense1 = nn::dense_forward(cache.lstm_hidden, state.dense1_weight,
                                   state.dense1_bias, /*relu=*/true);
  cache.dense2 = nn::dense_forward(cache.dense1.output, state.dense2_weight,
                                   state.dense2_bias, /*relu=*/false);
  return cache.dense2.output;
}

Tensor forward(const NetworkSpec& spec, const NetworkState& state,
               const Tensor& x) {
  ForwardCache cache;
  return forward_cached(spec, state, x, cache);
}

NetworkState backward(const NetworkSpec& spec, const NetworkState& state,
                      const ForwardCache& cache, const Tensor& dpred) {
  NetworkState grads = zeros_like(state);

  const nn::DenseGrads d2 =
      nn::dense_backward(dpred, cache.dense1.output, state.dense2_weight,
                         cache.dense2, /*relu=*/false);
  grads.dense2_weight = d2.weights;
  grads.dense2_bias = d2.bias;

  const nn::DenseGrads d1 =
      nn::dense_backward(d2.input, cache.lstm_hidden, state.dense1_weight,
                         cache.dense1, /*relu=*/true);
  grads.dense1_weight = d1.weights;
  grads.dense1_bias = d1.bias;

  nn::LstmGrads dl = nn::lstm_backward(d1.input, state.lstm, cache.lstm);
  grads.lstm = std::move(dl.params);

  // Route the flattened gradient back through the pool to the conv stack.
  const std::size_t batch = cache.input.extent(0);
  Tensor dpool({batch, 1, spec.conv_filters}, dl.input.values());
  const Tensor dconv_out = nn::maxpool_backward(dpool, cache.pool);
  nn::Conv1dGrads dc =
      nn::conv1d_backward(dconv_out, cache.input, state.conv_kernel);
  grads.conv_kernel = std::move(dc.kernel);
  grads.conv_bias = std::move(dc.bias);
  return grads;
}

GradCheckReport grad_check(const NetworkSpec& spec, const NetworkState& state,
                           const Tensor& x, const Tensor& y, double epsilon) {
  ForwardCache cache;
  const Tensor pred = forward_cached(spec, state, x, cache);
  const nn::MseResult loss = nn::mse_loss(pred, y);
  const NetworkState analytic = backward(spec, state, cache, loss.grad);

  NetworkState probe = state;
  auto probe_params = probe.parameters();
  auto analytic_params = analytic.parameters();

  GradCheckReport report;
  for (std::size_t p = 0; p < probe_params.size(); ++p) {
    Tensor& tensor = *probe_params[p].second;
    const Tensor& grad = *analytic_params[p].second;
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      const double saved = tensor(i);
      tensor(i) = saved + epsilon;
      const double up = nn::mse_loss(forward(spec, probe, x), y).loss;
      tensor(i) = saved - epsilon;
      const double down = nn::mse_loss(forward(spec, probe, x), y).loss;
      tensor(i) = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double denom =
          std::max({std::fabs(numeric), std::fabs(grad(i)), 1e-6});
      const double rel = std::fabs(numeric - grad(i)) / denom;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_parameter =
            probe_params[p].first + "[" + std::to_string(i) + "]";
      }
    }
  }
  return report;
}

}  // namespace windcast
