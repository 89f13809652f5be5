#ifndef WINDCAST_CONFIG_HPP
#define WINDCAST_CONFIG_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "windcast/hybrid.hpp"
#include "windcast/network.hpp"
#include "windcast/series.hpp"
#include "windcast/synth.hpp"
#include "windcast/training.hpp"

namespace windcast {

enum class ApproachSelection { One, Two, Both };

std::string to_string(ApproachSelection approach);

/// True when the selection includes the given shaping approach.
bool selects(ApproachSelection selection, ShapingApproach approach);

/**
 * Every knob of a run, with defaults chosen so an empty config file is a
 * valid full-scale run on the bundled synthetic generator (data.path
 * empty means "generate synthetic data in memory").
 *
 * The master seed lives in train.seed; per-step training seeds derive
 * from it.
 */
struct RunConfig {
  std::string data_path;  // empty: synthesize
  ColumnSchema schema;    // schema.direction empty: no direction channel
  bool use_direction = false;
  SplitSpec split;
  NetworkSpec network;
  TrainConfig train;
  ApproachSelection approach = ApproachSelection::One;
  std::vector<std::size_t> steps = default_steps();
  Stage2Mode stage2_mode = Stage2Mode::Replace;
  std::string output_dir = "out";
  SynthConfig synth;

  /// Structural checks: split fractions, positive network sizes, strictly
  /// increasing positive steps.
  void validate() const;

  /// Flat key=value view with every default resolved; the stable,
  /// diff-friendly form embedded in reports and artifacts.
  std::map<std::string, std::string> snapshot() const;
};

/// Parses the flat key=value format ('#' comment lines, blank lines
/// allowed). Unknown keys and unparseable values are errors naming the
/// key. Missing file is an error.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Applies one key=value assignment (also used for CLI overrides).
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value);

}  // namespace windcast

#endif  // WINDCAST_CONFIG_HPP
