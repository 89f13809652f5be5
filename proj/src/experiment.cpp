#include "windcast/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "windcast/svg.hpp"

namespace windcast {

namespace {

constexpr const char* kCsvHeader =
    "step,model,approach,status,rows,rmse_combined,rmse_speed,rmse_power,"
    "r2_combined,accuracy_percent";

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    return "nan";
  }
  return std::string(buf, end);
}

std::string cell(const std::optional<double>& value) {
  return value.has_value() ? format_double(*value) : "--";
}

/// Copy of the last `count` rows of a rank-2 tensor.
Tensor suffix_rows(const Tensor& matrix, std::size_t count) {
  const std::size_t rows = matrix.rows();
  const std::size_t cols = matrix.cols();
  Tensor out({count, cols});
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      out(i, j) = matrix(rows - count + i, j);
    }
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

/// A scored model's scaled predictions over the step's aligned suffix.
struct Candidate {
  std::string model;
  std::string approach;
  Tensor pred_scaled;  // rows end at the step's final target row
};

StepReport unavailable_row(std::size_t step, const std::string& model,
                           const std::string& approach, StepStatus status) {
  StepReport row;
  row.step = step;
  row.model = model;
  row.approach = approach;
  row.status = to_string(status == StepStatus::Ok
                             ? StepStatus::InsufficientSamples
                             : status);
  return row;
}

}  // namespace

PreparedData prepare_data(const RunConfig& config) {
  config.validate();
  BivariateSeries series = [&] {
    if (config.data_path.empty()) {
      SynthConfig synth = config.synth;
      synth.include_direction = config.use_direction;
      return generate_synthetic(synth);
    }
    return load_csv(config.data_path, config.schema).series;
  }();
  if (config.use_direction && !series.has_direction()) {
    throw std::runtime_error("config requests a direction column but \"" +
                             config.data_path + "\" has none");
  }

  const Split split = chronological_split(series.size(), config.split);
  PreparedData data;
  data.feature_count = config.use_direction ? 3 : 2;
  data.target_count = 2;
  const Tensor train_raw = series.features(split.train.begin, split.train.end,
                                           config.use_direction);
  const Tensor val_raw =
      series.features(split.val.begin, split.val.end, config.use_direction);
  data.test_raw =
      series.features(split.test.begin, split.test.end, config.use_direction);
  data.scaler = fit_minmax(train_raw);
  data.train_scaled = data.scaler.transform(train_raw);
  data.val_scaled = data.scaler.transform(val_raw);
  data.test_scaled = data.scaler.transform(data.test_raw);
  return data;
}

TrainedModels train_pipeline(const RunConfig& config,
                             const PreparedData& data) {
  TrainedModels models;
  models.spec = config.network;
  models.spec.input_features = data.feature_count;
  models.spec.output_features = data.target_count;
  models.scaler = data.scaler;
  models.steps = config.steps;

  models.stage1 = train_stage1_bank(data.train_scaled, data.val_scaled,
                                    models.spec, config.train, config.steps);

  const std::size_t lookback = models.spec.input_steps;
  models.ar_baseline.resize(config.steps.size());
  for (std::size_t i = 0; i < config.steps.size(); ++i) {
    const std::size_t step = config.steps[i];
    if (supervised_sample_count(data.train_scaled.rows(), lookback, step) ==
        0) {
      models.ar_baseline[i].status = StepStatus::InsufficientSamples;
      continue;
    }
    WindowedDataset train_set =
        make_supervised(data.train_scaled, lookback, step);
    if (train_set.feature_count() != data.target_count) {
      train_set = restrict_targets(std::move(train_set), data.target_count);
    }
    models.ar_baseline[i].model = fit_ols(train_set);
  }

  // Second stages consume stage-1 predictions over the validation segment.
  std::vector<Tensor> pred1_val(config.steps.size());
  std::vector<Tensor> truth_val(config.steps.size());
  bool any_stage1 = false;
  for (std::size_t i = 0; i < config.steps.size(); ++i) {
    if (models.stage1[i].status != StepStatus::Ok) {
      continue;
    }
    WindowedDataset val_set =
        make_supervised(data.val_scaled, lookback, config.steps[i]);
    if (val_set.feature_count() != data.target_count) {
      val_set = restrict_targets(std::move(val_set), data.target_count);
    }
    pred1_val[i] =
        forward(models.spec, models.stage1[i].network, val_set.x);
    truth_val[i] = val_set.y;
    any_stage1 = true;
  }

  models.has_approach1 = selects(config.approach, ShapingApproach::EqualShaping);
  models.has_approach2 =
      selects(config.approach, ShapingApproach::OneStepSecondStage);

  if (models.has_approach1) {
    models.stage2_approach1.resize(config.steps.size());
    if (any_stage1) {
      std::vector<std::optional<ArModel>> fitted =
          train_stage2(ShapingApproach::EqualShaping, config.steps, pred1_val,
                       truth_val, lookback);
      for (std::size_t i = 0; i < fitted.size(); ++i) {
        if (fitted[i].has_value()) {
          models.stage2_approach1[i].model = std::move(fitted[i]);
        } else {
          models.stage2_approach1[i].status =
              models.stage1[i].status == StepStatus::Ok
                  ? StepStatus::InsufficientSamples
                  : models.stage1[i].status;
        }
      }
    } else {
      for (std::size_t i = 0; i < config.steps.size(); ++i) {
        models.stage2_approach1[i].status = models.stage1[i].status;
      }
    }
  }
  if (models.has_approach2) {
    bool fitted = false;
    if (any_stage1) {
      try {
        std::vector<std::optional<ArModel>> shared =
            train_stage2(ShapingApproach::OneStepSecondStage, config.steps,
                         pred1_val, truth_val, lookback);
        models.stage2_approach2.model = std::move(shared[0]);
        fitted = true;
      } catch (const std::invalid_argument&) {
        // fall through to the unavailable marker below
      }
    }
    if (!fitted) {
      models.stage2_approach2.status = StepStatus::InsufficientSamples;
    }
  }
  return models;
}

ExperimentResult evaluate_pipeline(const RunConfig& config,
                                   const PreparedData& data,
                                   const TrainedModels& models) {
  ExperimentResult result;
  result.config = config.snapshot();
  result.seed = config.train.seed;

  const std::size_t lookback = models.spec.input_steps;
  const ScalerParams target_scaler = models.scaler.head(data.target_count);

  for (std::size_t i = 0; i < models.steps.size(); ++i) {
    const std::size_t step = models.steps[i];
    const std::size_t m1 =
        supervised_sample_count(data.test_scaled.rows(), lookback, step);

    // Approach order is fixed: individual models first, then hybrids.
    std::vector<Candidate> candidates;
    std::vector<StepReport> unavailable;

    if (m1 == 0) {
      unavailable.push_back(unavailable_row(
          step, "CNN_LSTM", "n/a",
          models.stage1[i].status == StepStatus::Ok
              ? StepStatus::InsufficientSamples
              : models.stage1[i].status));
      unavailable.push_back(unavailable_row(step, "AR", "n/a",
                                            StepStatus::InsufficientSamples));
      if (models.has_approach1) {
        unavailable.push_back(unavailable_row(
            step, "CNN_LSTM_AR", "1", StepStatus::InsufficientSamples));
      }
      if (models.has_approach2) {
        unavailable.push_back(unavailable_row(
            step, "CNN_LSTM_AR", "2", StepStatus::InsufficientSamples));
      }
      for (StepReport& row : unavailable) {
        result.reports.push_back(std::move(row));
      }
      continue;
    }

    WindowedDataset test_set =
        make_supervised(data.test_scaled, lookback, step);
    if (test_set.feature_count() != data.target_count) {
      test_set = restrict_targets(std::move(test_set), data.target_count);
    }

    Tensor pred1_test;
    if (models.stage1[i].status == StepStatus::Ok ||
        models.stage1[i].status == StepStatus::Diverged) {
      if (models.stage1[i].network.all_finite() &&
          models.stage1[i].status == StepStatus::Ok) {
        pred1_test = forward(models.spec, models.stage1[i].network, test_set.x);
        candidates.push_back({"CNN_LSTM", "n/a", pred1_test});
      } else {
        unavailable.push_back(
            unavailable_row(step, "CNN_LSTM", "n/a", models.stage1[i].status));
      }
    } else {
      unavailable.push_back(
          unavailable_row(step, "CNN_LSTM", "n/a", models.stage1[i].status));
    }

    if (models.ar_baseline[i].model.has_value()) {
      candidates.push_back(
          {"AR", "n/a", models.ar_baseline[i].model->predict(test_set.x)});
    } else {
      unavailable.push_back(
          unavailable_row(step, "AR", "n/a", models.ar_baseline[i].status));
    }

    const auto add_hybrid = [&](ShapingApproach approach, const ArSlot& slot) {
      const std::string label = to_string(approach);
      if (models.stage1[i].status != StepStatus::Ok || pred1_test.empty()) {
        unavailable.push_back(unavailable_row(step, "CNN_LSTM_AR", label,
                                              models.stage1[i].status));
        return;
      }
      if (!slot.model.has_value()) {
        unavailable.push_back(
            unavailable_row(step, "CNN_LSTM_AR", label, slot.status));
        return;
      }
      const std::size_t offset = stage2_offset(approach, step);
      if (evaluable_rows(m1, lookback, offset) == 0) {
        unavailable.push_back(unavailable_row(
            step, "CNN_LSTM_AR", label, StepStatus::InsufficientSamples));
        return;
      }
      HybridModel hybrid;
      hybrid.approach = approach;
      hybrid.bank.steps = models.steps;
      hybrid.bank.stage1 = {};  // predictions already materialized
      hybrid.scaler = models.scaler;
      hybrid.stage1_lookback = lookback;
      hybrid.stage2_lookback = lookback;
      hybrid.stage2_mode = config.stage2_mode;
      if (approach == ShapingApproach::EqualShaping) {
        hybrid.bank.stage2.assign(models.steps.size(), std::nullopt);
        hybrid.bank.stage2[i] = slot.model;
      } else {
        hybrid.bank.stage2.assign(1, slot.model);
      }
      const HybridPrediction prediction =
          predict_hybrid(hybrid, step, pred1_test, test_set.y);
      candidates.push_back(
          {"CNN_LSTM_AR", label, prediction.predictions});
    };
    if (models.has_approach1) {
      add_hybrid(ShapingApproach::EqualShaping, models.stage2_approach1[i]);
    }
    if (models.has_approach2) {
      add_hybrid(ShapingApproach::OneStepSecondStage, models.stage2_approach2);
    }

    // Score every available model on the shared suffix of target rows.
    std::size_t aligned = m1;
    for (const Candidate& candidate : candidates) {
      aligned = std::min(aligned, candidate.pred_scaled.rows());
    }
    Tensor observed({aligned, data.target_count});
    for (std::size_t r = 0; r < aligned; ++r) {
      const std::size_t origin = test_set.origin_indices[m1 - aligned + r];
      for (std::size_t c = 0; c < data.target_count; ++c) {
        observed(r, c) = data.test_raw(origin, c);
      }
    }
    for (const Candidate& candidate : candidates) {
      const Tensor predicted = target_scaler.inverse_transform(
          suffix_rows(candidate.pred_scaled, aligned));
      StepReport row;
      row.step = step;
      row.model = candidate.model;
      row.approach = candidate.approach;
      row.rows = aligned;
      const RmseReport rmse_report = rmse(observed, predicted);
      row.rmse_combined = rmse_report.combined;
      row.rmse_speed = rmse_report.per_column[0];
      row.rmse_power = rmse_report.per_column[1];
      const RSquaredReport r2_report = r_squared(observed, predicted);
      if (r2_report.degenerate) {
        row.status = "degenerate_target";
      } else {
        row.r2_combined = r2_report.combined;
        row.accuracy_percent = 100.0 * r2_report.combined;
      }
      result.reports.push_back(std::move(row));
    }
    for (StepReport& row : unavailable) {
      result.reports.push_back(std::move(row));
    }

    // Keep the table ordering stable: individual models, then hybrids.
    const auto begin =
        result.reports.end() -
        static_cast<std::ptrdiff_t>(candidates.size() + unavailable.size());
    std::stable_sort(begin, result.reports.end(),
                     [](const StepReport& a, const StepReport& b) {
                       const auto rank = [](const StepReport& r) {
                         if (r.model == "CNN_LSTM") return 0;
                         if (r.model == "AR") return 1;
                         return r.approach == "1" ? 2 : 3;
                       };
                       return rank(a) < rank(b);
                     });
  }

  for (std::size_t i = 0; i < models.steps.size(); ++i) {
    if (models.stage1[i].status == StepStatus::Ok ||
        models.stage1[i].status == StepStatus::Diverged) {
      result.curves.push_back(
          {"CNN_LSTM_step_" + std::to_string(models.steps[i]),
           models.stage1[i].curve});
    }
  }
  return result;
}

ExperimentResult run_experiment(const RunConfig& config) {
  const PreparedData data = prepare_data(config);
  const TrainedModels models = train_pipeline(config, data);
  return evaluate_pipeline(config, data, models);
}

std::string table_csv(const ExperimentResult& result) {
  std::string csv = kCsvHeader;
  csv += '\n';
  for (const StepReport& row : result.reports) {
    csv += std::to_string(row.step);
    csv += ',' + row.model;
    csv += ',' + row.approach;
    csv += ',' + row.status;
    csv += ',' + std::to_string(row.rows);
    csv += ',' + cell(row.rmse_combined);
    csv += ',' + cell(row.rmse_speed);
    csv += ',' + cell(row.rmse_power);
    csv += ',' + cell(row.r2_combined);
    csv += ',' + cell(row.accuracy_percent);
    csv += '\n';
  }
  return csv;
}

namespace {

nlohmann::json optional_to_json(const std::optional<double>& value) {
  if (value.has_value()) {
    return *value;
  }
  return nullptr;
}

std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) {
    return std::nullopt;
  }
  return j.get<double>();
}

}  // namespace

nlohmann::json result_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["seed"] = result.seed;
  j["config"] = result.config;
  j["reports"] = nlohmann::json::array();
  for (const StepReport& row : result.reports) {
    j["reports"].push_back({{"step", row.step},
                            {"model", row.model},
                            {"approach", row.approach},
                            {"status", row.status},
                            {"rows", row.rows},
                            {"rmse_combined", optional_to_json(row.rmse_combined)},
                            {"rmse_speed", optional_to_json(row.rmse_speed)},
                            {"rmse_power", optional_to_json(row.rmse_power)},
                            {"r2_combined", optional_to_json(row.r2_combined)},
                            {"accuracy_percent",
                             optional_to_json(row.accuracy_percent)}});
  }
  j["curves"] = nlohmann::json::array();
  for (const NamedCurve& curve : result.curves) {
    j["curves"].push_back({{"name", curve.name},
                           {"train_loss", curve.curve.train_loss},
                           {"val_loss", curve.curve.val_loss},
                           {"best_epoch", curve.curve.best_epoch}});
  }
  return j;
}

ExperimentResult result_from_json(const nlohmann::json& j) {
  ExperimentResult result;
  result.seed = j.at("seed").get<std::uint64_t>();
  result.config =
      j.at("config").get<std::map<std::string, std::string>>();
  for (const auto& entry : j.at("reports")) {
    StepReport row;
    row.step = entry.at("step").get<std::size_t>();
    row.model = entry.at("model").get<std::string>();
    row.approach = entry.at("approach").get<std::string>();
    row.status = entry.at("status").get<std::string>();
    row.rows = entry.at("rows").get<std::size_t>();
    row.rmse_combined = optional_from_json(entry.at("rmse_combined"));
    row.rmse_speed = optional_from_json(entry.at("rmse_speed"));
    row.rmse_power = optional_from_json(entry.at("rmse_power"));
    row.r2_combined = optional_from_json(entry.at("r2_combined"));
    row.accuracy_percent = optional_from_json(entry.at("accuracy_percent"));
    result.reports.push_back(std::move(row));
  }
  for (const auto& entry : j.at("curves")) {
    NamedCurve curve;
    curve.name = entry.at("name").get<std::string>();
    curve.curve.train_loss =
        entry.at("train_loss").get<std::vector<double>>();
    curve.curve.val_loss = entry.at("val_loss").get<std::vector<double>>();
    curve.curve.best_epoch = entry.at("best_epoch").get<std::size_t>();
    result.curves.push_back(std::move(curve));
  }
  return result;
}

namespace {

struct MetricPoint {
  double rmse = std::numeric_limits<double>::quiet_NaN();
  double accuracy = std::numeric_limits<double>::quiet_NaN();
  bool present = false;
};

ChartSeries metric_series(
    const std::string& label, const std::vector<std::size_t>& steps,
    const std::map<std::size_t, MetricPoint>& points, bool accuracy) {
  ChartSeries series;
  series.label = label;
  for (const std::size_t step : steps) {
    series.x.push_back(static_cast<double>(step));
    const auto it = points.find(step);
    if (it == points.end()) {
      series.y.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      series.y.push_back(accuracy ? it->second.accuracy : it->second.rmse);
    }
  }
  return series;
}

}  // namespace

std::vector<std::string> emit_curves(const ExperimentResult& result,
                                     const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);

  std::vector<std::size_t> steps;
  // keyed by (model, approach)
  std::map<std::pair<std::string, std::string>,
           std::map<std::size_t, MetricPoint>>
      table;
  bool any_missing = false;
  for (const StepReport& row : result.reports) {
    if (std::find(steps.begin(), steps.end(), row.step) == steps.end()) {
      steps.push_back(row.step);
    }
    MetricPoint point;
    if (row.rmse_combined.has_value()) {
      point.rmse = *row.rmse_combined;
      point.present = true;
    }
    if (row.accuracy_percent.has_value()) {
      point.accuracy = *row.accuracy_percent;
    }
    if (!row.rmse_combined.has_value() || !row.accuracy_percent.has_value()) {
      any_missing = true;
    }
    table[{row.model, row.approach}][row.step] = point;
  }

  const std::string note =
      any_missing ? "steps without metrics omitted" : "";
  std::vector<std::string> files;

  const auto write_chart = [&](const std::string& name, const ChartSpec& spec) {
    write_text_file(out_dir + "/" + name, render_line_chart(spec));
    files.push_back(name);
  };

  if (result.reports.empty()) {
    for (const char* name : {"rmse.svg", "accuracy.svg"}) {
      ChartSpec spec;
      spec.title = name == std::string("rmse.svg") ? "RMSE by step"
                                                   : "Accuracy by step";
      spec.x_label = "step (10-minute increments)";
      spec.y_label = name == std::string("rmse.svg") ? "RMSE" : "accuracy (%)";
      spec.log_x = true;
      write_chart(name, spec);
    }
    return files;
  }

  const auto approach_charts = [&](const std::string& approach) {
    for (const bool accuracy : {false, true}) {
      ChartSpec spec;
      spec.title = std::string(accuracy ? "Accuracy" : "RMSE") +
                   " by step (approach " + approach + ")";
      spec.x_label = "step (10-minute increments)";
      spec.y_label = accuracy ? "accuracy (%)" : "RMSE";
      spec.log_x = true;
      spec.note = note;
      const std::vector<std::pair<std::string, std::string>> wanted = {
          {"CNN_LSTM", "n/a"}, {"AR", "n/a"}, {"CNN_LSTM_AR", approach}};
      for (const auto& key : wanted) {
        const auto it = table.find(key);
        if (it != table.end()) {
          const std::string label =
              key.first == "CNN_LSTM_AR" ? "CNN_LSTM_AR (approach " +
                                               approach + ")"
                                         : key.first;
          spec.series.push_back(
              metric_series(label, steps, it->second, accuracy));
        }
      }
      write_chart(std::string(accuracy ? "accuracy" : "rmse") + "_approach" +
                      approach + ".svg",
                  spec);
    }
  };

  const bool has_a1 = table.count({"CNN_LSTM_AR", "1"}) > 0;
  const bool has_a2 = table.count({"CNN_LSTM_AR", "2"}) > 0;
  if (has_a1) {
    approach_charts("1");
  }
  if (has_a2) {
    approach_charts("2");
  }
  if (has_a1 && has_a2) {
    for (const bool accuracy : {false, true}) {
      ChartSpec spec;
      spec.title = std::string("Hybrid ") + (accuracy ? "accuracy" : "RMSE") +
                   " by step: approach 1 vs 2";
      spec.x_label = "step (10-minute increments)";
      spec.y_label = accuracy ? "accuracy (%)" : "RMSE";
      spec.log_x = true;
      spec.note = note;
      spec.series.push_back(metric_series("approach 1", steps,
                                          table[{"CNN_LSTM_AR", "1"}],
                                          accuracy));
      spec.series.push_back(metric_series("approach 2", steps,
                                          table[{"CNN_LSTM_AR", "2"}],
                                          accuracy));
      write_chart(std::string(accuracy ? "accuracy" : "rmse") + "_overlay.svg",
                  spec);
    }
  }
  if (!has_a1 && !has_a2) {
    // Individual models only (e.g. a report assembled by hand).
    for (const bool accuracy : {false, true}) {
      ChartSpec spec;
      spec.title = std::string(accuracy ? "Accuracy" : "RMSE") + " by step";
      spec.x_label = "step (10-minute increments)";
      spec.y_label = accuracy ? "accuracy (%)" : "RMSE";
      spec.log_x = true;
      spec.note = note;
      for (const auto& [key, points] : table) {
        spec.series.push_back(metric_series(key.first, steps, points, accuracy));
      }
      write_chart(std::string(accuracy ? "accuracy" : "rmse") + ".svg", spec);
    }
  }
  return files;
}

}  // namespace windcast
