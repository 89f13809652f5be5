#include <cmath>
#include <cstddef>
#include <stdexcept>

#include <doctest.h>

#include "windcast/network.hpp"
#include "windcast/rng.hpp"
#include "windcast/tensor.hpp"
#include "windcast/training.hpp"
#include "windcast/windowing.hpp"

using namespace windcast;

namespace {

NetworkSpec tiny_spec() {
  NetworkSpec spec;
  spec.input_steps = 4;
  spec.input_features = 2;
  spec.conv_filters = 6;
  spec.conv_kernel = 2;
  spec.lstm_units = 8;
  spec.dense_hidden = 8;
  spec.output_features = 2;
  return spec;
}

// Smooth bounded bivariate series, scaled roughly into [0, 1].
Tensor wave_matrix(std::size_t length, double phase = 0.0) {
  Tensor out({length, 2});
  for (std::size_t i = 0; i < length; ++i) {
    const double t = static_cast<double>(i);
    out(i, 0) = 0.5 + 0.4 * std::sin(0.21 * t + phase);
    out(i, 1) = 0.5 + 0.3 * std::cos(0.13 * t + phase);
  }
  return out;
}

bool states_identical(const NetworkState& a, const NetworkState& b) {
  const auto pa = a.parameters();
  const auto pb = b.parameters();
  if (pa.size() != pb.size()) return false;
  for (std::size_t p = 0; p < pa.size(); ++p) {
    if (!pa[p].second->same_shape(*pb[p].second)) return false;
    for (std::size_t i = 0; i < pa[p].second->size(); ++i) {
      if (pa[p].second->data()[i] != pb[p].second->data()[i]) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("train config validation") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.patience = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.max_epochs = 0;  // allowed: "evaluate the initial state"
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("identical seeds reproduce training bit for bit") {
  const NetworkSpec spec = tiny_spec();
  const WindowedDataset train_set = make_supervised(wave_matrix(80), 4, 1);
  const WindowedDataset val_set = make_supervised(wave_matrix(30, 1.0), 4, 1);
  TrainConfig cfg;
  cfg.max_epochs = 4;
  cfg.batch_size = 8;
  cfg.seed = 77;

  const TrainResult a = train(spec, train_set, val_set, cfg);
  const TrainResult b = train(spec, train_set, val_set, cfg);
  CHECK(states_identical(a.state, b.state));
  REQUIRE(a.curve.train_loss.size() == b.curve.train_loss.size());
  for (std::size_t i = 0; i < a.curve.train_loss.size(); ++i) {
    CHECK(a.curve.train_loss[i] == b.curve.train_loss[i]);
    CHECK(a.curve.val_loss[i] == b.curve.val_loss[i]);
  }

  TrainConfig other = cfg;
  other.seed = 78;
  const TrainResult c = train(spec, train_set, val_set, other);
  CHECK_FALSE(states_identical(a.state, c.state));
}

TEST_CASE("training drives the loss down on a constant target") {
  const NetworkSpec spec = tiny_spec();
  Tensor flat({60, 2});
  for (std::size_t i = 0; i < 60; ++i) {
    flat(i, 0) = 0.4;
    flat(i, 1) = 0.6;
  }
  const WindowedDataset train_set = make_supervised(flat, 4, 1);
  Tensor flat_val({20, 2});
  for (std::size_t i = 0; i < 20; ++i) {
    flat_val(i, 0) = 0.4;
    flat_val(i, 1) = 0.6;
  }
  const WindowedDataset val_set = make_supervised(flat_val, 4, 1);
  TrainConfig cfg;
  cfg.max_epochs = 50;
  cfg.batch_size = 16;
  cfg.learning_rate = 5e-3;
  const TrainResult result = train(spec, train_set, val_set, cfg);
  CHECK(result.status == TrainStatus::Ok);
  CHECK(result.curve.val_loss[result.curve.best_epoch] < 1e-3);
  CHECK(result.curve.val_loss[result.curve.best_epoch] <
        result.curve.val_loss.front());
}

TEST_CASE("max_epochs zero returns the freshly initialized network") {
  const NetworkSpec spec = tiny_spec();
  const WindowedDataset train_set = make_supervised(wave_matrix(40), 4, 1);
  TrainConfig cfg;
  cfg.max_epochs = 0;
  cfg.seed = 5;
  const TrainResult result = train(spec, train_set, train_set, cfg);
  CHECK(result.status == TrainStatus::Ok);
  CHECK(result.curve.train_loss.empty());
  CHECK(states_identical(result.state, init_network(spec, 5)));
}

TEST_CASE("an absurd learning rate is reported as divergence") {
  const NetworkSpec spec = tiny_spec();
  // Large raw values plus a huge SGD step overflow quickly.
  Tensor wild({40, 2});
  for (std::size_t i = 0; i < 40; ++i) {
    wild(i, 0) = 1e4 * std::sin(0.9 * static_cast<double>(i));
    wild(i, 1) = 1e4;
  }
  const WindowedDataset train_set = make_supervised(wild, 4, 1);
  TrainConfig cfg;
  cfg.max_epochs = 30;
  cfg.batch_size = 8;
  cfg.learning_rate = 1e12;
  cfg.optimizer = OptimizerKind::Sgd;
  const TrainResult result = train(spec, train_set, train_set, cfg);
  CHECK(result.status == TrainStatus::Diverged);
  CHECK(result.state.all_finite());  // best snapshot predates the blow-up
}

TEST_CASE("early stopping halts after patience epochs without improvement") {
  const NetworkSpec spec = tiny_spec();
  const WindowedDataset train_set = make_supervised(wave_matrix(60), 4, 1);
  // Validation targets unrelated to the training series: no generalization,
  // so the validation loss stops improving early.
  Rng noise(9);
  Tensor random_val({30, 2});
  for (std::size_t i = 0; i < random_val.size(); ++i) {
    random_val.data()[i] = noise.uniform();
  }
  const WindowedDataset val_set = make_supervised(random_val, 4, 1);
  TrainConfig cfg;
  cfg.max_epochs = 200;
  cfg.batch_size = 8;
  cfg.patience = 3;
  const TrainResult result = train(spec, train_set, val_set, cfg);
  CHECK(result.curve.train_loss.size() < 200);
  CHECK(result.curve.best_epoch + 3 + 1 >= result.curve.train_loss.size());
  // Returned parameters are the best-epoch snapshot, not the last epoch's.
  const double best = result.curve.val_loss[result.curve.best_epoch];
  for (double v : result.curve.val_loss) {
    CHECK(best <= v);
  }
}

TEST_CASE("both optimizers make progress and stay deterministic") {
  const NetworkSpec spec = tiny_spec();
  const WindowedDataset train_set = make_supervised(wave_matrix(80), 4, 1);
  const WindowedDataset val_set = make_supervised(wave_matrix(30, 0.5), 4, 1);
  for (OptimizerKind kind : {OptimizerKind::Adam, OptimizerKind::Sgd}) {
    TrainConfig cfg;
    cfg.max_epochs = 8;
    cfg.batch_size = 8;
    cfg.optimizer = kind;
    cfg.learning_rate = kind == OptimizerKind::Adam ? 2e-3 : 5e-2;
    const TrainResult a = train(spec, train_set, val_set, cfg);
    const TrainResult b = train(spec, train_set, val_set, cfg);
    CHECK(a.status == TrainStatus::Ok);
    CHECK(states_identical(a.state, b.state));
    CHECK(a.curve.val_loss[a.curve.best_epoch] <= a.curve.val_loss.front());
  }
}

TEST_CASE("curves keep one entry per completed epoch") {
  const NetworkSpec spec = tiny_spec();
  const WindowedDataset train_set = make_supervised(wave_matrix(50), 4, 1);
  TrainConfig cfg;
  cfg.max_epochs = 6;
  cfg.patience = 100;
  const TrainResult result = train(spec, train_set, train_set, cfg);
  CHECK(result.curve.train_loss.size() == 6);
  CHECK(result.curve.val_loss.size() == 6);
  CHECK(result.curve.best_epoch < 6);
}

TEST_CASE("train status names") {
  CHECK(to_string(TrainStatus::Ok) == "ok");
  CHECK(to_string(TrainStatus::Diverged) == "diverged");
}
