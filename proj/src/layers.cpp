#include "windcast/layers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace windcast::nn {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) {
    throw std::invalid_argument(message);
  }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

// ---------------------------------------------------------------- Conv1D

Tensor conv1d_forward(const Tensor& input, const Tensor& kernel,
                      const Tensor& bias) {
  require(input.rank() == 3, "conv1d_forward: input must be [batch, steps, in]");
  require(kernel.rank() == 3, "conv1d_forward: kernel must be [k, in, filters]");
  const std::size_t batch = input.extent(0);
  const std::size_t steps = input.extent(1);
  const std::size_t in_features = input.extent(2);
  const std::size_t k = kernel.extent(0);
  const std::size_t filters = kernel.extent(2);
  require(kernel.extent(1) == in_features,
          "conv1d_forward: kernel in_features mismatch");
  require(bias.rank() == 1 && bias.extent(0) == filters,
          "conv1d_forward: bias must be [filters]");
  require(k <= steps, "conv1d_forward: kernel wider than input steps");

  const std::size_t out_steps = steps - k + 1;
  Tensor out({batch, out_steps, filters});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < out_steps; ++t) {
      for (std::size_t f = 0; f < filters; ++f) {
        double acc = bias(f);
        for (std::size_t j = 0; j < k; ++j) {
          for (std::size_t c = 0; c < in_features; ++c) {
            acc += input(b, t + j, c) * kernel(j, c, f);
          }
        }
        out(b, t, f) = acc;
      }
    }
  }
  return out;
}

Conv1dGrads conv1d_backward(const Tensor& upstream, const Tensor& input,
                            const Tensor& kernel) {
  const std::size_t batch = input.extent(0);
  const std::size_t steps = input.extent(1);
  const std::size_t in_features = input.extent(2);
  const std::size_t k = kernel.extent(0);
  const std::size_t filters = kernel.extent(2);
  const std::size_t out_steps = steps - k + 1;
  require(upstream.rank() == 3 && upstream.extent(0) == batch &&
              upstream.extent(1) == out_steps && upstream.extent(2) == filters,
          "conv1d_backward: upstream shape mismatch");

  Conv1dGrads grads;
  grads.input = Tensor(input.shape());
  grads.kernel = Tensor(kernel.shape());
  grads.bias = Tensor({filters});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < out_steps; ++t) {
      for (std::size_t f = 0; f < filters; ++f) {
        const double up = upstream(b, t, f);
        if (up == 0.0) continue;
        grads.bias(f) += up;
        for (std::size_t j = 0; j < k; ++j) {
          for (std::size_t c = 0; c < in_features; ++c) {
            grads.kernel(j, c, f) += up * input(b, t + j, c);
            grads.input(b, t + j, c) += up * kernel(j, c, f);
          }
        }
      }
    }
  }
  return grads;
}

// --------------------------------------------------------- Global max pool

MaxPoolResult global_maxpool_forward(const Tensor& input) {
  require(input.rank() == 3, "global_maxpool_forward: input must be [batch, steps, filters]");
  const std::size_t batch = input.extent(0);
  const std::size_t steps = input.extent(1);
  const std::size_t filters = input.extent(2);

  MaxPoolResult result;
  result.output = Tensor({batch, 1, filters});
  result.argmax.assign(batch * filters, 0);
  result.steps = steps;
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t f = 0; f < filters; ++f) {
      double best = input(b, 0, f);
      std::size_t best_t = 0;
      for (std::size_t t = 1; t < steps; ++t) {
        if (input(b, t, f) > best) {
          best = input(b, t, f);
          best_t = t;
        }
      }
      result.output(b, 0, f) = best;
      result.argmax[b * filters + f] = best_t;
    }
  }
  return result;
}

Tensor maxpool_backward(const Tensor& upstream, const MaxPoolResult& cache) {
  const std::size_t batch = cache.output.extent(0);
  const std::size_t filters = cache.output.extent(2);
  require(upstream.rank() == 3 && upstream.extent(0) == batch &&
              upstream.extent(1) == 1 && upstream.extent(2) == filters,
          "maxpool_backward: upstream shape mismatch");
  Tensor grad({batch, cache.steps, filters});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t f = 0; f < filters; ++f) {
      grad(b, cache.argmax[b * filters + f], f) = upstream(b, 0, f);
    }
  }
  return grad;
}

// ------------------------------------------------------------------- LSTM

LstmForwardResult lstm_forward(const Tensor& input, const LstmParams& params) {
  require(input.rank() == 3, "lstm_forward: input must be [batch, time, in]");
  const std::size_t batch = input.extent(0);
  const std::size_t time = input.extent(1);
  const std::size_t in_features = input.extent(2);
  const std::size_t units = params.units();
  require(params.w_input.rank() == 2 && params.w_input.extent(0) == in_features &&
              params.w_input.extent(1) == 4 * units,
          "lstm_forward: w_input must be [in, 4*units]");
  require(params.w_recurrent.extent(1) == 4 * units,
          "lstm_forward: w_recurrent must be [units, 4*units]");
  require(params.bias.rank() == 1 && params.bias.extent(0) == 4 * units,
          "lstm_forward: bias must be [4*units]");

  LstmForwardResult result;
  LstmCache& cache = result.cache;
  cache.input = input;

  Tensor h({batch, units});
  Tensor c({batch, units});
  for (std::size_t t = 0; t < time; ++t) {
    // z = x_t W + h_{t-1} U + b, blocked [i | f | g | o].
    Tensor x_t({batch, in_features});
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t j = 0; j < in_features; ++j) {
        x_t(b, j) = input(b, t, j);
      }
    }
    Tensor z = matmul(x_t, params.w_input);
    const Tensor zh = matmul(h, params.w_recurrent);
    for (std::size_t i = 0; i < z.size(); ++i) {
      z(i) += zh(i);
    }
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t u = 0; u < 4 * units; ++u) {
        z(b, u) += params.bias(u);
      }
    }

    Tensor gi({batch, units}), gf({batch, units}), gg({batch, units}),
        go({batch, units});
    Tensor c_next({batch, units}), h_next({batch, units});
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t u = 0; u < units; ++u) {
        const double iv = sigmoid(z(b, u));
        const double fv = sigmoid(z(b, units + u));
        const double gv = std::tanh(z(b, 2 * units + u));
        const double ov = sigmoid(z(b, 3 * units + u));
        const double cv = fv * c(b, u) + iv * gv;
        gi(b, u) = iv;
        gf(b, u) = fv;
        gg(b, u) = gv;
        go(b, u) = ov;
        c_next(b, u) = cv;
        h_next(b, u) = ov * std::tanh(cv);
      }
    }
    cache.gate_i.push_back(gi);
    cache.gate_f.push_back(gf);
    cache.gate_g.push_back(gg);
    cache.gate_o.push_back(go);
    cache.cell.push_back(c_next);
    cache.hidden.push_back(h_next);
    h = std::move(h_next);
    c = std::move(c_next);
  }
  result.hidden = h;
  return result;
}

LstmGrads lstm_backward(const Tensor& upstream, const LstmParams& params,
                        const LstmCache& cache) {
  const Tensor& input = cache.input;
  const std::size_t batch = input.extent(0);
  const std::size_t time = input.extent(1);
  const std::size_t in_features = input.extent(2);
  const std::size_t units = params.units();
  require(upstream.rank() == 2 && upstream.extent(0) == batch &&
              upstream.extent(1) == units,
          "lstm_backward: upstream must be [batch, units]");

  LstmGrads grads;
  grads.params.w_input = Tensor(params.w_input.shape());
  grads.params.w_recurrent = Tensor(params.w_recurrent.shape());
  grads.params.bias = Tensor(params.bias.shape());
  grads.input = Tensor(input.shape());

  Tensor dh = upstream;        // gradient flowing into h_t
  Tensor dc({batch, units});   // gradient flowing into c_t
  for (std::size_t t = time; t-- > 0;) {
    const Tensor& gi = cache.gate_i[t];
    const Tensor& gf = cache.gate_f[t];
    const Tensor& gg = cache.gate_g[t];
    const Tensor& go = cache.gate_o[t];
    const Tensor& ct = cache.cell[t];

    Tensor dz({batch, 4 * units});
    Tensor dc_prev({batch, units});
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t u = 0; u < units; ++u) {
        const double tanh_c = std::tanh(ct(b, u));
        const double dct = dc(b, u) + dh(b, u) * go(b, u) * (1.0 - tanh_c * tanh_c);
        const double c_prev = (t > 0) ? cache.cell[t - 1](b, u) : 0.0;
        const double di = dct * gg(b, u);
        const double df = dct * c_prev;
        const double dg = dct * gi(b, u);
        const double dout = dh(b, u) * tanh_c;
        dz(b, u) = di * gi(b, u) * (1.0 - gi(b, u));
        dz(b, units + u) = df * gf(b, u) * (1.0 - gf(b, u));
        dz(b, 2 * units + u) = dg * (1.0 - gg(b, u) * gg(b, u));
        dz(b, 3 * units + u) = dout * go(b, u) * (1.0 - go(b, u));
        dc_prev(b, u) = dct * gf(b, u);
      }
    }

    Tensor x_t({batch, in_features});
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t j = 0; j < in_features; ++j) {
        x_t(b, j) = input(b, t, j);
      }
    }
    const Tensor dw = matmul_transpose_a(x_t, dz);
    for (std::size_t i = 0; i < dw.size(); ++i) {
      grads.params.w_input(i) += dw(i);
    }
    if (t > 0) {
      const Tensor du = matmul_transpose_a(cache.hidden[t - 1], dz);
      for (std::size_t i = 0; i < du.size(); ++i) {
        grads.params.w_recurrent(i) += du(i);
      }
    }
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t u = 0; u < 4 * units; ++u) {
        grads.params.bias(u) += dz(b, u);
      }
    }
    const Tensor dx = matmul_transpose_b(dz, params.w_input);
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t j = 0; j < in_features; ++j) {
        grads.input(b, t, j) = dx(b, j);
      }
    }
    dh = matmul_transpose_b(dz, params.w_recurrent);
    dc = std::move(dc_prev);
  }
  return grads;
}

// ------------------------------------------------------------------ Dense

DenseResult dense_forward(const Tensor& input, const Tensor& weights,
                          const Tensor& bias, bool relu) {
  require(input.rank() == 2 && weights.rank() == 2 &&
              input.cols() == weights.rows(),
          "dense_forward: input " + input.shape_string() + " vs weights " +
              weights.shape_string());
  require(bias.rank() == 1 && bias.extent(0) == weights.cols(),
          "dense_forward: bias width mismatch");

  DenseResult result;
  Tensor out = matmul(input, weights);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      out(i, j) += bias(j);
    }
  }
  if (relu) {
    result.preactivation = out;
    for (double& v : out.values()) {
      if (v < 0.0) v = 0.0;
    }
  }
  result.output = std::move(out);
  return result;
}

DenseGrads dense_backward(const Tensor& upstream, const Tensor& input,
                          const Tensor& weights, const DenseResult& cache,
                          bool relu) {
  require(upstream.rank() == 2 && upstream.rows() == input.rows() &&
              upstream.cols() == weights.cols(),
          "dense_backward: upstream shape mismatch");
  Tensor up = upstream;
  if (relu) {
    for (std::size_t i = 0; i < up.size(); ++i) {
      if (cache.preactivation(i) < 0.0) {
        up(i) = 0.0;
      }
    }
  }
  DenseGrads grads;
  grads.weights = matmul_transpose_a(input, up);
  grads.input = matmul_transpose_b(up, weights);
  grads.bias = Tensor({weights.cols()});
  for (std::size_t i = 0; i < up.rows(); ++i) {
    for (std::size_t j = 0; j < up.cols(); ++j) {
      grads.bias(j) += up(i, j);
    }
  }
  return grads;
}

// -------------------------------------------------------------------- MSE

MseResult mse_loss(const Tensor& pred, const Tensor& target) {
  require(pred.same_shape(target) && pred.rank() == 2,
          "mse_loss: pred " + pred.shape_string() + " vs target " +
              target.shape_string());
  MseResult result;
  result.grad = Tensor(pred.shape());
  const double inv = 1.0 / static_cast<double>(pred.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred(i) - target(i);
    acc += diff * diff;
    result.grad(i) = 2.0 * diff * inv;
  }
  result.loss = acc * inv;
  return result;
}

}  // namespace windcast::nn
