#ifndef WINDCAST_STORE_HPP
#define WINDCAST_STORE_HPP

#include <string>

#include "windcast/artifact.hpp"
#include "windcast/experiment.hpp"

namespace windcast {

/// File names inside an artifact directory, one model per file.
std::string network_artifact_name(std::size_t step);
std::string ar_artifact_name(std::size_t step);
/// EqualShaping keeps one second-stage file per step; the shared
/// OneStepSecondStage model ignores the step argument.
std::string stage2_artifact_name(ShapingApproach approach, std::size_t step);
std::string curve_csv_name(std::size_t step);

/// "epoch,train_loss,val_loss" rows; the best epoch is artifact metadata.
std::string curve_csv(const LearningCurve& curve);

/// Persists every model of the bundle (including unavailable steps, which
/// become stub files carrying only their status) plus one learning-curve
/// CSV per trained network. Reruns with identical inputs are
/// byte-identical.
void save_trained_models(const TrainedModels& models, const RunConfig& config,
                         const std::string& dir);

/**
 * Rebuilds the bundle from an artifact directory. Missing files become
 * MissingArtifact slots (soft failure); a corrupt or version-mismatched
 * file throws. When no network artifact is present the scaler falls back
 * to `fallback_scaler` (refitted from the data).
 */
TrainedModels load_trained_models(const RunConfig& config,
                                  const std::string& dir,
                                  const ScalerParams& fallback_scaler);

}  // namespace windcast

#endif  // WINDCAST_STORE_HPP
