#ifndef WINDCAST_LAYERS_HPP
#define WINDCAST_LAYERS_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "windcast/tensor.hpp"

namespace windcast::nn {

// ---------------------------------------------------------------- Conv1D

/**
 * Valid (no-padding) 1-D cross-correlation, stride 1.
 *
 * input  [batch, steps, in_features]
 * kernel [k, in_features, filters]
 * bias   [filters]
 * output [batch, steps - k + 1, filters]
 *
 * out[b,t,f] = bias[f] + sum_{j,c} input[b,t+j,c] * kernel[j,c,f]
 */
Tensor conv1d_forward(const Tensor& input, const Tensor& kernel,
                      const Tensor& bias);

struct Conv1dGrads {
  Tensor input;
  Tensor kernel;
  Tensor bias;
};

Conv1dGrads conv1d_backward(const Tensor& upstream, const Tensor& input,
                            const Tensor& kernel);

// --------------------------------------------------------- Global max pool

/**
 * Per-filter maximum over the step axis; ties break toward the lowest
 * step index so the routed gradient is deterministic.
 */
struct MaxPoolResult {
  Tensor output;                    // [batch, 1, filters]
  std::vector<std::size_t> argmax;  // batch * filters entries, step index
  std::size_t steps = 0;            // input step extent, for backward
};

MaxPoolResult global_maxpool_forward(const Tensor& input);

/// Routes upstream [batch, 1, filters] back to the argmax positions.
Tensor maxpool_backward(const Tensor& upstream, const MaxPoolResult& cache);

// ------------------------------------------------------------------- LSTM

/**
 * LSTM parameters. The 4*units gate axis is blocked in the order
 * input gate, forget gate, cell candidate, output gate.
 */
struct LstmParams {
  Tensor w_input;      // [in_features, 4 * units]
  Tensor w_recurrent;  // [units, 4 * units]
  Tensor bias;         // [4 * units]
  std::size_t units() const { return w_recurrent.extent(0); }
};

struct LstmCache {
  Tensor input;                       // [batch, time, in]
  std::vector<Tensor> gate_i, gate_f, gate_g, gate_o;  // per step [batch, units]
  std::vector<Tensor> cell;           // c_t per step
  std::vector<Tensor> hidden;         // h_t per step
};

struct LstmForwardResult {
  Tensor hidden;  // last hidden state [batch, units]
  LstmCache cache;
};

/**
 * Standard LSTM over [batch, time, in] with zero initial hidden and cell
 * state. Gates use the logistic sigmoid, the candidate and cell output
 * use tanh; returns the final hidden state.
 */
LstmForwardResult lstm_forward(const Tensor& input, const LstmParams& params);

struct LstmGrads {
  LstmParams params;
  Tensor input;
};

/// Full backpropagation through time for an upstream gradient on the
/// final hidden state.
LstmGrads lstm_backward(const Tensor& upstream, const LstmParams& params,
                        const LstmCache& cache);

// ------------------------------------------------------------------ Dense

struct DenseResult {
  Tensor output;       // [batch, out]
  Tensor preactivation;  // only populated when relu is applied
};

/// output = input * weights + bias, optionally followed by ReLU.
DenseResult dense_forward(const Tensor& input, const Tensor& weights,
                          const Tensor& bias, bool relu);

struct DenseGrads {
  Tensor input;
  Tensor weights;
  Tensor bias;
};

DenseGrads dense_backward(const Tensor& upstream, const Tensor& input,
                          const Tensor& weights, const DenseResult& cache,
                          bool relu);

// -------------------------------------------------------------------- MSE

struct MseResult {
  double loss = 0.0;
  Tensor grad;  // d loss / d pred = 2 (pred - target) / (batch * out)
};

MseResult mse_loss(const Tensor& pred, const Tensor& target);

}  // namespace windcast::nn

#endif  // WINDCAST_LAYERS_HPP
