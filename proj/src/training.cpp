#include "windcast/training.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "windcast/rng.hpp"

namespace windcast {

void TrainConfig::validate() const {
  if (batch_size < 1) {
    throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("TrainConfig: learning_rate must be positive");
  }
  if (patience < 1) {
    throw std::invalid_argument("TrainConfig: patience must be >= 1");
  }
}

std::string to_string(TrainStatus status) {
  return status == TrainStatus::Ok ? "ok" : "diverged";
}

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

struct AdamState {
  NetworkState m;
  NetworkState v;
  std::size_t step = 0;
};

void adam_update(NetworkState& state, const NetworkState& grads,
                 AdamState& adam, double lr) {
  ++adam.step;
  const double bias1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(adam.step));
  const double bias2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(adam.step));
  auto params = state.parameters();
  auto gparams = grads.parameters();
  auto mparams = adam.m.parameters();
  auto vparams = adam.v.parameters();
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& theta = *params[p].second;
    const Tensor& g = *gparams[p].second;
    Tensor& m = *mparams[p].second;
    Tensor& v = *vparams[p].second;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m(i) = kAdamBeta1 * m(i) + (1.0 - kAdamBeta1) * g(i);
      v(i) = kAdamBeta2 * v(i) + (1.0 - kAdamBeta2) * g(i) * g(i);
      theta(i) -= lr * (m(i) / bias1) / (std::sqrt(v(i) / bias2) + kAdamEpsilon);
    }
  }
}

void sgd_update(NetworkState& state, const NetworkState& grads, double lr) {
  auto params = state.parameters();
  auto gparams = grads.parameters();
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& theta = *params[p].second;
    const Tensor& g = *gparams[p].second;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta(i) -= lr * g(i);
    }
  }
}

Tensor gather_batch(const Tensor& x, const std::vector<std::size_t>& order,
                    std::size_t begin, std::size_t end) {
  const std::size_t steps = x.extent(1);
  const std::size_t features = x.extent(2);
  Tensor out({end - begin, steps, features});
  for (std::size_t i = begin; i < end; ++i) {
    const std::size_t src = order[i];
    for (std::size_t j = 0; j < steps; ++j) {
      for (std::size_t f = 0; f < features; ++f) {
        out(i - begin, j, f) = x(src, j, f);
      }
    }
  }
  return out;
}

Tensor gather_rows(const Tensor& y, const std::vector<std::size_t>& order,
                   std::size_t begin, std::size_t end) {
  const std::size_t cols = y.cols();
  Tensor out({end - begin, cols});
  for (std::size_t i = begin; i < end; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      out(i - begin, j) = y(order[i], j);
    }
  }
  return out;
}

}  // namespace

TrainResult train(const NetworkSpec& spec, const WindowedDataset& train_set,
                  const WindowedDataset& val_set, const TrainConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (train_set.sample_count() == 0 || val_set.sample_count() == 0) {
    throw std::invalid_argument("train: datasets must be nonempty");
  }
  if (train_set.y.cols() != spec.output_features ||
      val_set.y.cols() != spec.output_features) {
    throw std::invalid_argument("train: target width does not match spec");
  }

  TrainResult result;
  result.state = init_network(spec, cfg.seed);
  if (cfg.max_epochs == 0) {
    return result;
  }

  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  AdamState adam;
  if (cfg.optimizer == OptimizerKind::Adam) {
    adam.m = zeros_like(result.state);
    adam.v = zeros_like(result.state);
  }

  NetworkState current = result.state;
  NetworkState best = current;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0;
  std::size_t epochs_since_best = 0;

  const std::size_t n = train_set.sample_count();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < n; begin += cfg.batch_size) {
      const std::size_t end = std::min(begin + cfg.batch_size, n);
      const Tensor bx = gather_batch(train_set.x, order, begin, end);
      const Tensor by = gather_rows(train_set.y, order, begin, end);

      ForwardCache cache;
      const Tensor pred = forward_cached(spec, current, bx, cache);
      const nn::MseResult loss = nn::mse_loss(pred, by);
      if (!std::isfinite(loss.loss)) {
        result.state = best;
        result.curve.best_epoch = best_epoch;
        result.status = TrainStatus::Diverged;
        return result;
      }
      epoch_loss += loss.loss * static_cast<double>(end - begin);

      const NetworkState grads = backward(spec, current, cache, loss.grad);
      if (cfg.optimizer == OptimizerKind::Adam) {
        adam_update(current, grads, adam, cfg.learning_rate);
      } else {
        sgd_update(current, grads, cfg.learning_rate);
      }
    }
    if (!current.all_finite()) {
      result.state = best;
      result.curve.best_epoch = best_epoch;
      result.status = TrainStatus::Diverged;
      return result;
    }
    epoch_loss /= static_cast<double>(n);

    const Tensor val_pred = forward(spec, current, val_set.x);
    const double val_loss = nn::mse_loss(val_pred, val_set.y).loss;
    if (!std::isfinite(val_loss)) {
      result.state = best;
      result.curve.best_epoch = best_epoch;
      result.status = TrainStatus::Diverged;
      return result;
    }

    result.curve.train_loss.push_back(epoch_loss);
    result.curve.val_loss.push_back(val_loss);

    if (val_loss < best_val) {
      best_val = val_loss;
      best = current;
      best_epoch = epoch;
      epochs_since_best = 0;
    } else {
      ++epochs_since_best;
      if (epochs_since_best >= cfg.patience) {
        break;
      }
    }
  }

  result.state = best;
  result.curve.best_epoch = best_epoch;
  return result;
}

}  // namespace windcast
