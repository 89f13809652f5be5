#include "windcast/hybrid.hpp"

#include <algorithm>
#include <stdexcept>

namespace windcast {

std::string to_string(ShapingApproach approach) {
  return approach == ShapingApproach::EqualShaping ? "1" : "2";
}

std::string to_string(Stage2Mode mode) {
  return mode == Stage2Mode::Replace ? "replace" : "residual";
}

std::string to_string(StepStatus status) {
  switch (status) {
    case StepStatus::Ok:
      return "ok";
    case StepStatus::InsufficientSamples:
      return "insufficient_samples";
    case StepStatus::Diverged:
      return "diverged";
    case StepStatus::MissingArtifact:
      return "missing_artifact";
  }
  return "unknown";
}

StepStatus step_status_from_string(const std::string& text) {
  if (text == "ok") {
    return StepStatus::Ok;
  }
  if (text == "insufficient_samples") {
    return StepStatus::InsufficientSamples;
  }
  if (text == "diverged") {
    return StepStatus::Diverged;
  }
  if (text == "missing_artifact") {
    return StepStatus::MissingArtifact;
  }
  throw std::invalid_argument("unknown step status: " + text);
}

std::vector<std::size_t> default_steps() {
  return {1, 3, 6, 12, 24, 48, 96, 192, 384};
}

std::vector<StepModel> train_stage1_bank(
    const Tensor& train_features, const Tensor& val_features,
    const NetworkSpec& spec, const TrainConfig& cfg,
    const std::vector<std::size_t>& steps) {
  spec.validate();
  cfg.validate();
  if (steps.empty()) {
    throw std::invalid_argument("train_stage1_bank: empty step list");
  }
  std::vector<StepModel> bank;
  bank.reserve(steps.size());
  for (const std::size_t step : steps) {
    StepModel entry;
    entry.step = step;
    if (supervised_sample_count(train_features.rows(), spec.input_steps,
                                step) == 0 ||
        supervised_sample_count(val_features.rows(), spec.input_steps,
                                step) == 0) {
      entry.status = StepStatus::InsufficientSamples;
      bank.push_back(std::move(entry));
      continue;
    }
    WindowedDataset train_set =
        make_supervised(train_features, spec.input_steps, step);
    WindowedDataset val_set =
        make_supervised(val_features, spec.input_steps, step);
    if (train_set.feature_count() != spec.output_features) {
      train_set = restrict_targets(std::move(train_set), spec.output_features);
      val_set = restrict_targets(std::move(val_set), spec.output_features);
    }
    TrainConfig step_cfg = cfg;
    step_cfg.seed = cfg.seed + step;
    TrainResult result = train(spec, train_set, val_set, step_cfg);
    entry.network = std::move(result.state);
    entry.curve = std::move(result.curve);
    entry.status = result.status == TrainStatus::Diverged ? StepStatus::Diverged
                                                          : StepStatus::Ok;
    bank.push_back(std::move(entry));
  }
  return bank;
}

std::size_t stage2_offset(ShapingApproach approach, std::size_t step) {
  return approach == ShapingApproach::EqualShaping ? step : 1;
}

std::size_t evaluable_rows(std::size_t m1_rows, std::size_t stage2_lookback,
                           std::size_t offset) {
  const std::size_t consumed = stage2_lookback + offset - 1;
  return m1_rows > consumed ? m1_rows - consumed : 0;
}

std::size_t evaluate_alignment(ShapingApproach approach, std::size_t step,
                               std::size_t segment_length,
                               std::size_t stage1_lookback) {
  const std::size_t m1 =
      supervised_sample_count(segment_length, stage1_lookback, step);
  return evaluable_rows(m1, stage1_lookback, stage2_offset(approach, step));
}

std::vector<std::optional<ArModel>> train_stage2(
    ShapingApproach approach, const std::vector<std::size_t>& steps,
    const std::vector<Tensor>& pred1_val, const std::vector<Tensor>& truth_val,
    std::size_t stage2_lookback) {
  if (steps.size() != pred1_val.size() || steps.size() != truth_val.size()) {
    throw std::invalid_argument(
        "train_stage2: steps and prediction lists must align");
  }
  bool any = false;
  for (const Tensor& p : pred1_val) {
    any = any || !p.empty();
  }
  if (!any) {
    throw std::invalid_argument("train_stage2: no validation predictions");
  }

  if (approach == ShapingApproach::EqualShaping) {
    std::vector<std::optional<ArModel>> models(steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (pred1_val[i].empty()) {
        continue;
      }
      const std::size_t offset = stage2_offset(approach, steps[i]);
      if (supervised_sample_count(pred1_val[i].rows(), stage2_lookback,
                                  offset) == 0) {
        continue;  // step stays unavailable, mirrors the bank contract
      }
      models[i] = fit_ols(
          reshape_stage2(pred1_val[i], truth_val[i], stage2_lookback, offset));
    }
    return models;
  }

  // Shared one-step model, fitted on the smallest step with enough rows.
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (pred1_val[i].empty() ||
        supervised_sample_count(pred1_val[i].rows(), stage2_lookback, 1) ==
            0) {
      continue;
    }
    std::vector<std::optional<ArModel>> models(1);
    models[0] =
        fit_ols(reshape_stage2(pred1_val[i], truth_val[i], stage2_lookback, 1));
    return models;
  }
  throw std::invalid_argument(
      "train_stage2: insufficient samples for the shared one-step model");
}

HybridPrediction predict_hybrid(const HybridModel& model, std::size_t step,
                                const Tensor& stage1_preds_test,
                                const Tensor& truth_test) {
  const auto it =
      std::find(model.bank.steps.begin(), model.bank.steps.end(), step);
  if (it == model.bank.steps.end()) {
    throw std::invalid_argument("predict_hybrid: step " +
                                std::to_string(step) + " not in the bank");
  }
  const std::size_t index =
      static_cast<std::size_t>(it - model.bank.steps.begin());
  const std::size_t stage2_index =
      model.approach == ShapingApproach::EqualShaping ? index : 0;
  if (stage2_index >= model.bank.stage2.size() ||
      !model.bank.stage2[stage2_index].has_value()) {
    throw std::invalid_argument("predict_hybrid: step " +
                                std::to_string(step) +
                                " has no second-stage model");
  }
  const ArModel& stage2 = *model.bank.stage2[stage2_index];

  const std::size_t offset = stage2_offset(model.approach, step);
  if (supervised_sample_count(stage1_preds_test.rows(), model.stage2_lookback,
                              offset) == 0) {
    throw std::invalid_argument(
        "predict_hybrid: insufficient stage-1 predictions for step " +
        std::to_string(step));
  }
  const WindowedDataset shaped = reshape_stage2(
      stage1_preds_test, truth_test, model.stage2_lookback, offset);

  HybridPrediction result;
  result.predictions = stage2.predict(shaped.x);
  result.first_row = model.stage2_lookback - 1 + offset;
  if (model.stage2_mode == Stage2Mode::Residual) {
    const std::size_t cols = result.predictions.cols();
    for (std::size_t i = 0; i < result.predictions.rows(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        result.predictions(i, j) +=
            stage1_preds_test(result.first_row + i, j);
      }
    }
  }
  return result;
}

}  // namespace windcast
