#ifndef WINDCAST_EXPERIMENT_HPP
#define WINDCAST_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "windcast/config.hpp"
#include "windcast/hybrid.hpp"
#include "windcast/metrics.hpp"

namespace windcast {

/**
 * One table row: a (step, model, approach) cell of the comparison.
 * Metric fields are present only when status is "ok", except that a
 * degenerate scoring target ("degenerate_target") keeps the RMSE fields
 * and drops only R²/accuracy, which are undefined there.
 */
struct StepReport {
  std::size_t step = 0;
  std::string model;          // CNN_LSTM | AR | CNN_LSTM_AR
  std::string approach;       // "1" | "2" | "n/a" for individual models
  std::string status = "ok";  // ok | insufficient_samples | diverged |
                              // missing_artifact | degenerate_target
  std::size_t rows = 0;       // evaluable target rows scored
  std::optional<double> rmse_combined;
  std::optional<double> rmse_speed;
  std::optional<double> rmse_power;
  std::optional<double> r2_combined;
  std::optional<double> accuracy_percent;  // exactly 100 * r2_combined
};

struct NamedCurve {
  std::string name;
  LearningCurve curve;
};

struct ExperimentResult {
  std::map<std::string, std::string> config;  // snapshot, defaults resolved
  std::uint64_t seed = 0;
  std::vector<StepReport> reports;
  std::vector<NamedCurve> curves;
};

/// Split segments in scaled space plus the raw test rows used as the
/// observed side of every metric.
struct PreparedData {
  ScalerParams scaler;
  Tensor train_scaled;
  Tensor val_scaled;
  Tensor test_scaled;
  Tensor test_raw;
  std::size_t feature_count = 2;  // network inputs (2, or 3 with direction)
  std::size_t target_count = 2;   // speed, power
};

PreparedData prepare_data(const RunConfig& config);

/// A fitted linear model or the reason it is absent.
struct ArSlot {
  std::optional<ArModel> model;
  StepStatus status = StepStatus::Ok;
};

struct TrainedModels {
  NetworkSpec spec;  // input_features resolved against the data
  ScalerParams scaler;
  std::vector<std::size_t> steps;
  std::vector<StepModel> stage1;       // aligned with steps
  std::vector<ArSlot> ar_baseline;     // aligned with steps
  bool has_approach1 = false;
  bool has_approach2 = false;
  std::vector<ArSlot> stage2_approach1;  // aligned with steps
  ArSlot stage2_approach2;               // single shared one-step model
};

/// Trains the stage-1 bank, the standalone lag baseline, and the selected
/// second stages. Deterministic under config.train.seed.
TrainedModels train_pipeline(const RunConfig& config,
                             const PreparedData& data);

/// Scores every (step, model, approach) cell on aligned target rows after
/// inverse scaling.
ExperimentResult evaluate_pipeline(const RunConfig& config,
                                   const PreparedData& data,
                                   const TrainedModels& models);

/// prepare + train + evaluate in one call.
ExperimentResult run_experiment(const RunConfig& config);

/// CSV table, one row per StepReport; absent metrics render "--".
std::string table_csv(const ExperimentResult& result);

/// JSON mirror of the result; result_from_json(result_json(r)) == r with
/// bit-exact metric values.
nlohmann::json result_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& j);

/// Writes the step-metric charts (per approach, plus an approach overlay
/// when both are present) into out_dir; returns the file names written,
/// in a fixed order. Identical results produce identical bytes.
std::vector<std::string> emit_curves(const ExperimentResult& result,
                                     const std::string& out_dir);

}  // namespace windcast

#endif  // WINDCAST_EXPERIMENT_HPP
