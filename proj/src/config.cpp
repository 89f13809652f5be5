#include "windcast/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace windcast {

namespace {

std::string trim(const std::string& text) {
  const std::size_t begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const std::size_t end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("invalid value for config key " + key + ": \"" +
                              value + "\"");
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t consumed = 0;
    const double parsed = std::stod(value, &consumed);
    if (consumed != value.size()) {
      bad_value(key, value);
    }
    return parsed;
  } catch (const std::logic_error&) {
    bad_value(key, value);
  }
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  try {
    std::size_t consumed = 0;
    const unsigned long long parsed = std::stoull(value, &consumed);
    if (consumed != value.size() || value.empty() || value[0] == '-') {
      bad_value(key, value);
    }
    return parsed;
  } catch (const std::logic_error&) {
    bad_value(key, value);
  }
}

std::vector<std::size_t> parse_step_list(const std::string& key,
                                         const std::string& value) {
  std::vector<std::size_t> steps;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      bad_value(key, value);
    }
    steps.push_back(parse_unsigned(key, item));
  }
  if (steps.empty()) {
    bad_value(key, value);
  }
  return steps;
}

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    return "nan";
  }
  return std::string(buf, end);
}

std::string join_steps(const std::vector<std::size_t>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += std::to_string(steps[i]);
  }
  return out;
}

}  // namespace

std::string to_string(ApproachSelection approach) {
  switch (approach) {
    case ApproachSelection::One:
      return "1";
    case ApproachSelection::Two:
      return "2";
    case ApproachSelection::Both:
      return "both";
  }
  return "unknown";
}

bool selects(ApproachSelection selection, ShapingApproach approach) {
  if (selection == ApproachSelection::Both) {
    return true;
  }
  return (selection == ApproachSelection::One) ==
         (approach == ShapingApproach::EqualShaping);
}

void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "data.path") {
    config.data_path = value;
  } else if (key == "data.timestamp_column") {
    config.schema.timestamp = value;
  } else if (key == "data.speed_column") {
    config.schema.speed = value;
  } else if (key == "data.power_column") {
    config.schema.power = value;
  } else if (key == "data.direction_column") {
    config.schema.direction = value;
    config.use_direction = !value.empty();
  } else if (key == "split.train") {
    config.split.train = parse_double(key, value);
  } else if (key == "split.val") {
    config.split.val = parse_double(key, value);
  } else if (key == "split.test") {
    config.split.test = parse_double(key, value);
  } else if (key == "model.lookback") {
    config.network.input_steps = parse_unsigned(key, value);
  } else if (key == "network.conv_filters") {
    config.network.conv_filters = parse_unsigned(key, value);
  } else if (key == "network.conv_kernel") {
    config.network.conv_kernel = parse_unsigned(key, value);
  } else if (key == "network.lstm_units") {
    config.network.lstm_units = parse_unsigned(key, value);
  } else if (key == "network.dense_hidden") {
    config.network.dense_hidden = parse_unsigned(key, value);
  } else if (key == "train.max_epochs") {
    config.train.max_epochs = parse_unsigned(key, value);
  } else if (key == "train.batch_size") {
    config.train.batch_size = parse_unsigned(key, value);
  } else if (key == "train.learning_rate") {
    config.train.learning_rate = parse_double(key, value);
  } else if (key == "train.optimizer") {
    if (value == "adam") {
      config.train.optimizer = OptimizerKind::Adam;
    } else if (value == "sgd") {
      config.train.optimizer = OptimizerKind::Sgd;
    } else {
      bad_value(key, value);
    }
  } else if (key == "train.patience") {
    config.train.patience = parse_unsigned(key, value);
  } else if (key == "run.seed") {
    config.train.seed = parse_unsigned(key, value);
  } else if (key == "run.approach") {
    if (value == "1") {
      config.approach = ApproachSelection::One;
    } else if (value == "2") {
      config.approach = ApproachSelection::Two;
    } else if (value == "both") {
      config.approach = ApproachSelection::Both;
    } else {
      bad_value(key, value);
    }
  } else if (key == "run.steps") {
    config.steps = parse_step_list(key, value);
  } else if (key == "run.stage2_mode") {
    if (value == "replace") {
      config.stage2_mode = Stage2Mode::Replace;
    } else if (value == "residual") {
      config.stage2_mode = Stage2Mode::Residual;
    } else {
      bad_value(key, value);
    }
  } else if (key == "run.output_dir") {
    config.output_dir = value;
  } else if (key == "synth.length") {
    config.synth.length = parse_unsigned(key, value);
  } else if (key == "synth.seed") {
    config.synth.seed = parse_unsigned(key, value);
  } else if (key == "synth.cadence_seconds") {
    config.synth.cadence_seconds =
        static_cast<std::int64_t>(parse_unsigned(key, value));
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::stringstream stream(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') {
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_number) +
                                  " is not key=value: \"" + stripped + "\"");
    }
    apply_config_entry(config, trim(stripped.substr(0, eq)),
                       trim(stripped.substr(eq + 1)));
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void RunConfig::validate() const {
  split.validate();
  network.validate();
  train.validate();
  if (steps.empty()) {
    throw std::invalid_argument("config: step list is empty");
  }
  std::size_t previous = 0;
  for (const std::size_t step : steps) {
    if (step == 0 || step <= previous) {
      throw std::invalid_argument(
          "config: run.steps must be strictly increasing positive integers");
    }
    previous = step;
  }
  if (synth.length < 2) {
    throw std::invalid_argument("config: synth.length must be >= 2");
  }
}

std::map<std::string, std::string> RunConfig::snapshot() const {
  std::map<std::string, std::string> view;
  view["data.path"] = data_path;
  view["data.timestamp_column"] = schema.timestamp;
  view["data.speed_column"] = schema.speed;
  view["data.power_column"] = schema.power;
  view["data.direction_column"] = use_direction ? schema.direction : "";
  view["split.train"] = format_double(split.train);
  view["split.val"] = format_double(split.val);
  view["split.test"] = format_double(split.test);
  view["model.lookback"] = std::to_string(network.input_steps);
  view["network.conv_filters"] = std::to_string(network.conv_filters);
  view["network.conv_kernel"] = std::to_string(network.conv_kernel);
  view["network.lstm_units"] = std::to_string(network.lstm_units);
  view["network.dense_hidden"] = std::to_string(network.dense_hidden);
  view["train.max_epochs"] = std::to_string(train.max_epochs);
  view["train.batch_size"] = std::to_string(train.batch_size);
  view["train.learning_rate"] = format_double(train.learning_rate);
  view["train.optimizer"] =
      train.optimizer == OptimizerKind::Adam ? "adam" : "sgd";
  view["train.patience"] = std::to_string(train.patience);
  view["run.seed"] = std::to_string(train.seed);
  view["run.approach"] = to_string(approach);
  view["run.steps"] = join_steps(steps);
  view["run.stage2_mode"] = to_string(stage2_mode);
  view["run.output_dir"] = output_dir;
  view["synth.length"] = std::to_string(synth.length);
  view["synth.seed"] = std::to_string(synth.seed);
  view["synth.cadence_seconds"] = std::to_string(synth.cadence_seconds);
  return view;
}

}  // namespace windcast
