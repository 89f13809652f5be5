#ifndef WINDCAST_NETWORK_HPP
#define WINDCAST_NETWORK_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "windcast/layers.hpp"
#include "windcast/tensor.hpp"

namespace windcast {

/**
 * CNN-LSTM architecture: time-distributed Conv1D over each input window,
 * global max pooling to a single step, flatten, an LSTM over the length-1
 * subsequence axis, a ReLU hidden dense layer, and a linear output layer.
 */
struct NetworkSpec {
  std::size_t input_steps = 4;     // lookback window length
  std::size_t input_features = 2;  // speed, power (direction optional)
  std::size_t conv_filters = 350;
  std::size_t conv_kernel = 2;
  std::size_t lstm_units = 350;
  std::size_t dense_hidden = 300;
  std::size_t output_features = 2;

  void validate() const;
};

/**
 * Trainable parameters. Gradient and optimizer buffers reuse this layout;
 * parameters() fixes the traversal order used by the optimizer, the
 * gradient check, and artifact serialization.
 */
struct NetworkState {
  Tensor conv_kernel;  // [k, in_features, conv_filters]
  Tensor conv_bias;    // [conv_filters]
  nn::LstmParams lstm;
  Tensor dense1_weight;  // [lstm_units, dense_hidden]
  Tensor dense1_bias;
  Tensor dense2_weight;  // [dense_hidden, output_features]
  Tensor dense2_bias;
  std::uint64_t init_seed = 0;

  std::vector<std::pair<std::string, Tensor*>> parameters();
  std::vector<std::pair<std::string, const Tensor*>> parameters() const;
  bool all_finite() const;
};

/// Fresh state: uniform fan-in scaled weights, biases zero except the
/// LSTM forget-gate block which starts at 1.0.
NetworkState init_network(const NetworkSpec& spec, std::uint64_t seed);

/// Zero tensors in the same layout, for gradients and moment buffers.
NetworkState zeros_like(const NetworkState& state);

struct ForwardCache {
  Tensor input;
  Tensor conv_out;
  nn::MaxPoolResult pool;
  Tensor lstm_input;  // [batch, 1, conv_filters]
  nn::LstmCache lstm;
  Tensor lstm_hidden;
  nn::DenseResult dense1;
  nn::DenseResult dense2;
};

/// Deterministic forward pass; x is [n, input_steps, input_features],
/// result is [n, output_features].
Tensor forward(const NetworkSpec& spec, const NetworkState& state,
               const Tensor& x);
Tensor forward_cached(const NetworkSpec& spec, const NetworkState& state,
                      const Tensor& x, ForwardCache& cache);

/// Parameter gradients for an upstream gradient on the predictions.
NetworkState backward(const NetworkSpec& spec, const NetworkState& state,
                      const ForwardCache& cache, const Tensor& dpred);

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_parameter;
};

/**
 * Compares analytic parameter gradients of the MSE loss on (x, y) against
 * central finite differences with the given epsilon.
 */
GradCheckReport grad_check(const NetworkSpec& spec, const NetworkState& state,
                           const Tensor& x, const Tensor& y, double epsilon);

}  // namespace windcast

#endif  // WINDCAST_NETWORK_HPP
