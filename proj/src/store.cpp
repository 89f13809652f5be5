#include "windcast/store.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace windcast {

namespace {

namespace fs = std::filesystem;

nlohmann::json spec_to_json(const NetworkSpec& spec) {
  return {{"input_steps", spec.input_steps},
          {"input_features", spec.input_features},
          {"conv_filters", spec.conv_filters},
          {"conv_kernel", spec.conv_kernel},
          {"lstm_units", spec.lstm_units},
          {"dense_hidden", spec.dense_hidden},
          {"output_features", spec.output_features}};
}

NetworkSpec spec_from_json(const nlohmann::json& j) {
  NetworkSpec spec;
  spec.input_steps = j.at("input_steps").get<std::size_t>();
  spec.input_features = j.at("input_features").get<std::size_t>();
  spec.conv_filters = j.at("conv_filters").get<std::size_t>();
  spec.conv_kernel = j.at("conv_kernel").get<std::size_t>();
  spec.lstm_units = j.at("lstm_units").get<std::size_t>();
  spec.dense_hidden = j.at("dense_hidden").get<std::size_t>();
  spec.output_features = j.at("output_features").get<std::size_t>();
  return spec;
}

nlohmann::json curve_to_json(const LearningCurve& curve) {
  return {{"train_loss", curve.train_loss},
          {"val_loss", curve.val_loss},
          {"best_epoch", curve.best_epoch}};
}

LearningCurve curve_from_json(const nlohmann::json& j) {
  LearningCurve curve;
  curve.train_loss = j.at("train_loss").get<std::vector<double>>();
  curve.val_loss = j.at("val_loss").get<std::vector<double>>();
  curve.best_epoch = j.at("best_epoch").get<std::size_t>();
  return curve;
}

std::string format_curve_value(double value);

void append_scaler(ModelArtifact& artifact, const ScalerParams& scaler) {
  const std::size_t f = scaler.feature_count();
  Tensor mins({f});
  Tensor maxs({f});
  for (std::size_t i = 0; i < f; ++i) {
    mins(i) = scaler.min(i);
    maxs(i) = scaler.max(i);
  }
  artifact.tensors.push_back({"scaler_min", std::move(mins)});
  artifact.tensors.push_back({"scaler_max", std::move(maxs)});
}

ScalerParams scaler_from_artifact(const ModelArtifact& artifact) {
  const Tensor& mins = artifact.tensor("scaler_min").values;
  const Tensor& maxs = artifact.tensor("scaler_max").values;
  return ScalerParams::from_raw(mins.values(), maxs.values());
}

nlohmann::json base_meta(const std::string& model, std::size_t step,
                         StepStatus status, const RunConfig& config) {
  nlohmann::json meta;
  meta["model"] = model;
  meta["step"] = step;
  meta["status"] = to_string(status);
  meta["seed"] = config.train.seed;
  meta["config"] = config.snapshot();
  return meta;
}

void append_ar_model(ModelArtifact& artifact, const ArModel& model) {
  artifact.meta["n_steps"] = model.n_steps();
  artifact.meta["n_features"] = model.n_features();
  artifact.meta["rank_deficient"] = model.rank_deficient();
  artifact.tensors.push_back({"coefficients", model.coefficients()});
  artifact.tensors.push_back({"intercept", model.intercept()});
}

ArModel ar_from_artifact(const ModelArtifact& artifact) {
  return ArModel::from_raw(artifact.tensor("coefficients").values,
                           artifact.tensor("intercept").values,
                           artifact.meta.at("n_steps").get<std::size_t>(),
                           artifact.meta.at("n_features").get<std::size_t>());
}

void save_ar_slot(const ArSlot& slot, nlohmann::json meta,
                  const ScalerParams& scaler, const std::string& path) {
  ModelArtifact artifact;
  artifact.meta = std::move(meta);
  if (slot.model.has_value()) {
    append_ar_model(artifact, *slot.model);
  }
  append_scaler(artifact, scaler);
  save_artifact(artifact, path);
}

ArSlot load_ar_slot(const std::string& path) {
  ArSlot slot;
  if (!fs::exists(path)) {
    slot.status = StepStatus::MissingArtifact;
    return slot;
  }
  const ModelArtifact artifact = load_artifact(path);
  slot.status =
      step_status_from_string(artifact.meta.at("status").get<std::string>());
  if (artifact.has_tensor("coefficients")) {
    slot.model = ar_from_artifact(artifact);
  }
  return slot;
}

}  // namespace

std::string network_artifact_name(std::size_t step) {
  return "cnn_lstm_step_" + std::to_string(step) + ".wca";
}

std::string ar_artifact_name(std::size_t step) {
  return "ar_step_" + std::to_string(step) + ".wca";
}

std::string stage2_artifact_name(ShapingApproach approach, std::size_t step) {
  if (approach == ShapingApproach::EqualShaping) {
    return "stage2_a1_step_" + std::to_string(step) + ".wca";
  }
  return "stage2_a2.wca";
}

std::string curve_csv_name(std::size_t step) {
  return "curve_cnn_lstm_step_" + std::to_string(step) + ".csv";
}

std::string curve_csv(const LearningCurve& curve) {
  std::string csv = "epoch,train_loss,val_loss\n";
  for (std::size_t epoch = 0; epoch < curve.train_loss.size(); ++epoch) {
    csv += std::to_string(epoch);
    csv += ',' + format_curve_value(curve.train_loss[epoch]);
    csv += ',' + format_curve_value(curve.val_loss[epoch]);
    csv += '\n';
  }
  return csv;
}

namespace {

std::string format_curve_value(double value) {
  char buf[32];
  const int written = std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf, buf + (written > 0 ? written : 0));
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace

void save_trained_models(const TrainedModels& models, const RunConfig& config,
                         const std::string& dir) {
  fs::create_directories(dir);
  const auto path = [&](const std::string& name) { return dir + "/" + name; };

  for (std::size_t i = 0; i < models.steps.size(); ++i) {
    const std::size_t step = models.steps[i];
    const StepModel& entry = models.stage1[i];

    ModelArtifact artifact;
    artifact.meta = base_meta("CNN_LSTM", step, entry.status, config);
    artifact.meta["spec"] = spec_to_json(models.spec);
    if (entry.status != StepStatus::InsufficientSamples) {
      artifact.meta["init_seed"] = entry.network.init_seed;
      artifact.meta["curve"] = curve_to_json(entry.curve);
      for (const auto& [name, tensor] : entry.network.parameters()) {
        artifact.tensors.push_back({name, *tensor});
      }
      write_file(path(curve_csv_name(step)), curve_csv(entry.curve));
    }
    append_scaler(artifact, models.scaler);
    save_artifact(artifact, path(network_artifact_name(step)));

    save_ar_slot(models.ar_baseline[i],
                 base_meta("AR", step, models.ar_baseline[i].status, config),
                 models.scaler, path(ar_artifact_name(step)));

    if (models.has_approach1) {
      nlohmann::json meta =
          base_meta("CNN_LSTM_AR", step, models.stage2_approach1[i].status,
                    config);
      meta["approach"] = "1";
      save_ar_slot(models.stage2_approach1[i], std::move(meta), models.scaler,
                   path(stage2_artifact_name(ShapingApproach::EqualShaping,
                                             step)));
    }
  }
  if (models.has_approach2) {
    nlohmann::json meta =
        base_meta("CNN_LSTM_AR", 0, models.stage2_approach2.status, config);
    meta["approach"] = "2";
    save_ar_slot(models.stage2_approach2, std::move(meta), models.scaler,
                 path(stage2_artifact_name(ShapingApproach::OneStepSecondStage,
                                           0)));
  }
}

TrainedModels load_trained_models(const RunConfig& config,
                                  const std::string& dir,
                                  const ScalerParams& fallback_scaler) {
  TrainedModels models;
  models.steps = config.steps;
  models.spec = config.network;
  models.spec.input_features = config.use_direction ? 3 : 2;
  models.spec.output_features = 2;
  models.scaler = fallback_scaler;
  models.has_approach1 = selects(config.approach, ShapingApproach::EqualShaping);
  models.has_approach2 =
      selects(config.approach, ShapingApproach::OneStepSecondStage);

  const auto path = [&](const std::string& name) { return dir + "/" + name; };
  bool spec_loaded = false;
  bool scaler_loaded = false;

  for (const std::size_t step : config.steps) {
    StepModel entry;
    entry.step = step;
    const std::string file = path(network_artifact_name(step));
    if (!fs::exists(file)) {
      entry.status = StepStatus::MissingArtifact;
      models.stage1.push_back(std::move(entry));
      continue;
    }
    const ModelArtifact artifact = load_artifact(file);
    entry.status =
        step_status_from_string(artifact.meta.at("status").get<std::string>());
    const NetworkSpec spec = spec_from_json(artifact.meta.at("spec"));
    if (spec_loaded) {
      const nlohmann::json previous = spec_to_json(models.spec);
      if (previous != spec_to_json(spec)) {
        throw std::runtime_error("artifact spec mismatch: " + file);
      }
    } else {
      models.spec = spec;
      spec_loaded = true;
    }
    if (!scaler_loaded) {
      models.scaler = scaler_from_artifact(artifact);
      scaler_loaded = true;
    }
    if (entry.status != StepStatus::InsufficientSamples) {
      entry.network = init_network(spec, 0);
      entry.network.init_seed =
          artifact.meta.at("init_seed").get<std::uint64_t>();
      for (auto& [name, tensor] : entry.network.parameters()) {
        const Tensor& stored = artifact.tensor(name).values;
        if (!stored.same_shape(*tensor)) {
          throw std::runtime_error("artifact tensor " + name +
                                   " has unexpected shape in " + file);
        }
        *tensor = stored;
      }
      entry.curve = curve_from_json(artifact.meta.at("curve"));
    }
    models.stage1.push_back(std::move(entry));
  }

  for (const std::size_t step : config.steps) {
    models.ar_baseline.push_back(load_ar_slot(path(ar_artifact_name(step))));
  }
  if (models.has_approach1) {
    for (const std::size_t step : config.steps) {
      models.stage2_approach1.push_back(load_ar_slot(
          path(stage2_artifact_name(ShapingApproach::EqualShaping, step))));
    }
  }
  if (models.has_approach2) {
    models.stage2_approach2 = load_ar_slot(
        path(stage2_artifact_name(ShapingApproach::OneStepSecondStage, 0)));
  }
  return models;
}

}  // namespace windcast
