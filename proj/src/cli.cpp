#include "windcast/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "windcast/experiment.hpp"
#include "windcast/store.hpp"
#include "windcast/svg.hpp"
#include "windcast/synth.hpp"

namespace windcast {

namespace {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    return "nan";
  }
  return std::string(buf, end);
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

/// Shared --config/--seed/--approach/--steps/--out handling.
struct ConfigOptions {
  std::string config_path;
  std::string out_dir;
  std::string seed;
  std::string approach;
  std::string steps;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file");
    cmd->add_option("--out", out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", seed, "master seed (overrides config)");
    cmd->add_option("--approach", approach,
                    "shaping approach: 1, 2 or both (overrides config)");
    cmd->add_option("--steps", steps,
                    "comma-separated horizon steps (overrides config)");
  }

  RunConfig resolve() const {
    RunConfig config = config_path.empty() ? RunConfig{}
                                           : parse_config_file(config_path);
    if (!seed.empty()) {
      apply_config_entry(config, "run.seed", seed);
    }
    if (!approach.empty()) {
      apply_config_entry(config, "run.approach", approach);
    }
    if (!steps.empty()) {
      apply_config_entry(config, "run.steps", steps);
    }
    if (!out_dir.empty()) {
      apply_config_entry(config, "run.output_dir", out_dir);
    }
    config.validate();
    return config;
  }
};

void channel_summary(std::ostream& out, const std::string& name,
                     const std::vector<double>& values) {
  double lo = values[0];
  double hi = values[0];
  double sum = 0.0;
  for (const double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  out << name << ": min " << format_double(lo) << " mean "
      << format_double(sum / static_cast<double>(values.size())) << " max "
      << format_double(hi) << "\n";
}

int cmd_inspect(const std::string& data_path, bool plot,
                const std::string& out_dir) {
  const LoadResult loaded = load_csv(data_path);
  const BivariateSeries& series = loaded.series;
  const ValidationReport report = validate_series(series);

  std::cout << "file: " << data_path << "\n";
  std::cout << "rows: " << series.size() << "\n";
  std::cout << "rejected_rows: " << loaded.rejected.size() << "\n";
  std::cout << "start: " << format_timestamp(series.timestamps().front())
            << "\n";
  std::cout << "end: " << format_timestamp(series.timestamps().back()) << "\n";
  std::cout << "cadence_seconds: " << report.modal_delta_seconds << "\n";
  std::cout << "gaps: " << report.gaps.size() << "\n";
  for (std::size_t i = 0; i < report.gaps.size() && i < 5; ++i) {
    std::cout << "  gap at row " << report.gaps[i].index << ": "
              << report.gaps[i].delta_seconds << "s\n";
  }
  std::cout << "range_violations: " << report.range_violations.size() << "\n";
  for (std::size_t i = 0; i < report.range_violations.size() && i < 5; ++i) {
    std::cout << "  " << report.range_violations[i].channel << " at row "
              << report.range_violations[i].row << ": "
              << format_double(report.range_violations[i].value) << "\n";
  }
  channel_summary(std::cout, "wind_speed", series.speed());
  channel_summary(std::cout, "wind_power", series.power());
  if (series.has_direction()) {
    channel_summary(std::cout, "wind_direction", series.direction());
  }

  if (plot) {
    fs::create_directories(out_dir);
    ChartSpec spec;
    spec.title = "Raw series";
    spec.x_label = "row";
    spec.y_label = "value";
    ChartSeries speed{"wind_speed", {}, {}};
    ChartSeries power{"wind_power", {}, {}};
    for (std::size_t i = 0; i < series.size(); ++i) {
      speed.x.push_back(static_cast<double>(i));
      speed.y.push_back(series.speed()[i]);
      power.x.push_back(static_cast<double>(i));
      power.y.push_back(series.power()[i]);
    }
    spec.series.push_back(std::move(speed));
    spec.series.push_back(std::move(power));
    const std::string path = out_dir + "/series.svg";
    write_file(path, render_line_chart(spec));
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int cmd_train(const ConfigOptions& options) {
  const RunConfig config = options.resolve();
  const PreparedData data = prepare_data(config);
  const TrainedModels models = train_pipeline(config, data);
  save_trained_models(models, config, config.output_dir);

  std::size_t trained = 0;
  for (const StepModel& entry : models.stage1) {
    trained += entry.status == StepStatus::Ok ? 1 : 0;
    if (entry.status != StepStatus::Ok) {
      std::cout << "step " << entry.step << ": " << to_string(entry.status)
                << "\n";
    }
  }
  std::cout << "trained " << trained << "/" << models.steps.size()
            << " first-stage models\n";
  std::cout << "artifacts: " << config.output_dir << "\n";
  return 0;
}

int cmd_evaluate(const ConfigOptions& options,
                 const std::string& artifacts_dir) {
  const RunConfig config = options.resolve();
  const PreparedData data = prepare_data(config);
  const std::string dir =
      artifacts_dir.empty() ? config.output_dir : artifacts_dir;
  const TrainedModels models = load_trained_models(config, dir, data.scaler);
  const ExperimentResult result = evaluate_pipeline(config, data, models);

  fs::create_directories(config.output_dir);
  const std::string csv = table_csv(result);
  write_file(config.output_dir + "/report.csv", csv);
  write_file(config.output_dir + "/report.json", result_json(result).dump(2));
  std::cout << csv;
  std::cout << "wrote " << config.output_dir << "/report.csv\n";
  std::cout << "wrote " << config.output_dir << "/report.json\n";
  return 0;
}

int cmd_plot(const std::string& report_path, const std::string& out_dir) {
  std::ifstream in(report_path);
  if (!in) {
    throw std::runtime_error("cannot open report: " + report_path);
  }
  nlohmann::json parsed;
  in >> parsed;
  const ExperimentResult result = result_from_json(parsed);
  for (const std::string& name : emit_curves(result, out_dir)) {
    std::cout << "wrote " << out_dir << "/" << name << "\n";
  }
  return 0;
}

int cmd_synth(const SynthConfig& synth, const std::string& out_path) {
  const BivariateSeries series = generate_synthetic(synth);
  if (const fs::path parent = fs::path(out_path).parent_path();
      !parent.empty()) {
    fs::create_directories(parent);
  }
  write_series_csv(series, out_path);
  std::cout << "wrote " << out_path << " (" << series.size() << " rows)\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "Bivariate multistep wind speed/power forecasting: direct-strategy "
      "CNN-LSTM, lag regression, and their two-stage hybrid"};
  app.require_subcommand(1);

  // inspect
  auto* inspect = app.add_subcommand("inspect", "summarize a dataset CSV");
  std::string inspect_path;
  bool inspect_plot = false;
  std::string inspect_out = ".";
  inspect->add_option("data", inspect_path, "CSV file")->required();
  inspect->add_flag("--plot", inspect_plot, "write a raw-series SVG");
  inspect->add_option("--out", inspect_out, "directory for the SVG");

  // train
  auto* train_cmd =
      app.add_subcommand("train", "train all models and persist artifacts");
  ConfigOptions train_options;
  train_options.attach(train_cmd);

  // evaluate
  auto* evaluate =
      app.add_subcommand("evaluate", "score persisted models, emit reports");
  ConfigOptions evaluate_options;
  evaluate_options.attach(evaluate);
  std::string artifacts_dir;
  evaluate->add_option("--artifacts", artifacts_dir,
                       "artifact directory (default: the output directory)");

  // plot
  auto* plot = app.add_subcommand("plot", "render SVG curves from a report");
  std::string report_path;
  std::string plot_out = ".";
  plot->add_option("report", report_path, "report.json path")->required();
  plot->add_option("--out", plot_out, "directory for the SVGs");

  // synth
  auto* synth_cmd =
      app.add_subcommand("synth", "write a synthetic dataset CSV");
  SynthConfig synth;
  std::string synth_out = "synthetic.csv";
  synth_cmd->add_option("--out", synth_out, "output CSV path");
  synth_cmd->add_option("--length", synth.length, "row count");
  synth_cmd->add_option("--seed", synth.seed, "generator seed");
  synth_cmd->add_option("--cadence-seconds", synth.cadence_seconds,
                        "sampling interval");
  synth_cmd->add_flag("--direction", synth.include_direction,
                      "include a wind-direction channel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (inspect->parsed()) {
      return cmd_inspect(inspect_path, inspect_plot, inspect_out);
    }
    if (train_cmd->parsed()) {
      return cmd_train(train_options);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(evaluate_options, artifacts_dir);
    }
    if (plot->parsed()) {
      return cmd_plot(report_path, plot_out);
    }
    if (synth_cmd->parsed()) {
      return cmd_synth(synth, synth_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& arg : args) {
    argv.push_back(arg.c_str());
  }
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace windcast
