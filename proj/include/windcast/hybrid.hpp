#ifndef WINDCAST_HYBRID_HPP
#define WINDCAST_HYBRID_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "windcast/ar.hpp"
#include "windcast/scaler.hpp"
#include "windcast/training.hpp"

namespace windcast {

/**
 * How stage-1 predictions are reshaped before the second stage.
 *
 * EqualShaping (approach 1): the stage-2 window uses the stage-1 lookback
 * and a target offset equal to the horizon step, with a separate linear
 * model per step.
 *
 * OneStepSecondStage (approach 2): the stage-1 horizon grows per step
 * while a single shared linear model maps a window of recent predictions
 * one step ahead.
 */
enum class ShapingApproach { EqualShaping, OneStepSecondStage };

/// Final prediction: the second stage's output alone (Replace, default),
/// or the stage-1 forecast plus the second stage's output (Residual).
enum class Stage2Mode { Replace, Residual };

enum class StepStatus { Ok, InsufficientSamples, Diverged, MissingArtifact };

std::string to_string(ShapingApproach approach);
std::string to_string(Stage2Mode mode);
std::string to_string(StepStatus status);
StepStatus step_status_from_string(const std::string& text);

/// One direct-strategy first-stage model, trained for a single horizon.
struct StepModel {
  std::size_t step = 0;
  StepStatus status = StepStatus::Ok;
  NetworkState network;  // best-epoch weights; meaningful unless
                         // status == InsufficientSamples/MissingArtifact
  LearningCurve curve;
};

/**
 * Direct multistep bank: one first-stage network per horizon step, plus
 * the second-stage model(s). EqualShaping keeps one ArModel per step
 * (stage2 aligned with steps); OneStepSecondStage keeps exactly one
 * shared ArModel (stage2 has a single entry). Empty optionals mark
 * unavailable steps.
 */
struct HorizonBank {
  std::vector<std::size_t> steps;
  std::vector<StepModel> stage1;
  std::vector<std::optional<ArModel>> stage2;
};

struct HybridModel {
  ShapingApproach approach = ShapingApproach::EqualShaping;
  HorizonBank bank;
  ScalerParams scaler;  // fitted on the training segment
  std::size_t stage1_lookback = 0;
  std::size_t stage2_lookback = 0;  // equals stage1_lookback; the two
                                    // approaches differ in target offset
  Stage2Mode stage2_mode = Stage2Mode::Replace;
};

/// Default horizon list, in 10-minute increments.
std::vector<std::size_t> default_steps();

/**
 * Trains one independent network per horizon step on (window -> value at
 * t + step). Per-step seed = cfg.seed + step, so the bank entries are
 * fully independent. A step whose train or validation segment yields no
 * samples is recorded as InsufficientSamples, never thrown.
 */
std::vector<StepModel> train_stage1_bank(const Tensor& train_features,
                                         const Tensor& val_features,
                                         const NetworkSpec& spec,
                                         const TrainConfig& cfg,
                                         const std::vector<std::size_t>& steps);

/// Stage-2 target offset: the horizon step under EqualShaping, 1 under
/// OneStepSecondStage.
std::size_t stage2_offset(ShapingApproach approach, std::size_t step);

/// Final-prediction rows obtainable from m1_rows stage-1 prediction rows.
std::size_t evaluable_rows(std::size_t m1_rows, std::size_t stage2_lookback,
                           std::size_t offset);

/// Rows on which stage 1 alone, the lag baseline, and the hybrid can all
/// be scored for one step over a segment of the given length: the hybrid
/// consumes leading stage-1 rows for its own window, so the shared set is
/// its suffix.
std::size_t evaluate_alignment(ShapingApproach approach, std::size_t step,
                               std::size_t segment_length,
                               std::size_t stage1_lookback);

/**
 * Fits the second stage on stage-1 predictions over the validation
 * segment. pred1_val[i] and truth_val[i] are the step steps[i] prediction
 * matrix and the row-aligned observed targets (equal shapes); an empty
 * tensor marks a step with no stage-1 output.
 *
 * EqualShaping returns one entry per step (empty where fitting was not
 * possible); OneStepSecondStage returns a single shared model fitted on
 * the smallest available step. Throws when no step has usable
 * predictions.
 */
std::vector<std::optional<ArModel>> train_stage2(
    ShapingApproach approach, const std::vector<std::size_t>& steps,
    const std::vector<Tensor>& pred1_val, const std::vector<Tensor>& truth_val,
    std::size_t stage2_lookback);

/**
 * Final predictions for one step: stage-1 test-segment predictions are
 * rewindowed per the approach and passed through the second stage.
 *
 * predictions[i] targets the same row as stage-1 prediction row
 * first_row + i; callers align observed values the same way. Replace mode
 * emits the second stage's output; Residual mode adds it to the stage-1
 * forecast of the target row.
 */
struct HybridPrediction {
  Tensor predictions;         // [n, features]
  std::size_t first_row = 0;  // offset into the stage-1 prediction rows
};

HybridPrediction predict_hybrid(const HybridModel& model, std::size_t step,
                                const Tensor& stage1_preds_test,
                                const Tensor& truth_test);

}  // namespace windcast

#endif  // WINDCAST_HYBRID_HPP
