#ifndef WINDCAST_TRAINING_HPP
#define WINDCAST_TRAINING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "windcast/network.hpp"
#include "windcast/windowing.hpp"

namespace windcast {

enum class OptimizerKind { Adam, Sgd };

struct TrainConfig {
  std::size_t max_epochs = 100;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::Adam;
  std::size_t patience = 10;  // epochs without validation improvement
  std::uint64_t seed = 42;

  void validate() const;
};

/// Per-epoch loss trace (MSE, scaled units) with the best-validation epoch.
struct LearningCurve {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  std::size_t best_epoch = 0;  // index into the loss vectors
};

enum class TrainStatus { Ok, Diverged };

struct TrainResult {
  NetworkState state;  // parameters at the best validation epoch
  LearningCurve curve;
  TrainStatus status = TrainStatus::Ok;
};

/**
 * Mini-batch training of the MSE objective with early stopping.
 *
 * Sample order is reshuffled each epoch by a generator seeded from
 * cfg.seed, so identical inputs and seed reproduce the run bit for bit.
 * A non-finite loss or parameter aborts with TrainStatus::Diverged.
 * max_epochs == 0 returns the freshly initialized state unchanged.
 */
TrainResult train(const NetworkSpec& spec, const WindowedDataset& train_set,
                  const WindowedDataset& val_set, const TrainConfig& cfg);

std::string to_string(TrainStatus status);

}  // namespace windcast

#endif  // WINDCAST_TRAINING_HPP
