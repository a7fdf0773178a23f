#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nanostore/capacity.hpp"
#include "nanostore/channel_model.hpp"
#include "nanostore/codec.hpp"
#include "nanostore/detector.hpp"
#include "nanostore/trace_sim.hpp"

namespace nanostore {

struct SimSettings {
  double duration_s = 1.0;
  std::string molecule = "A50C100";
  std::string molecule_file;  // FASTA; overrides `molecule` when set
  int n_pores = 1;
  std::vector<ClogWindow> clog_schedule;
  EventOverrides force;
};

struct CodecSettings {
  Run symbol0{Base::A, 50};
  Run symbol1{Base::C, 100};
  int block_bits = 2;
  int n_blocks = 16;

  RunEncoding scheme() const { return RunEncoding(symbol0, symbol1); }
};

struct StatsSettings {
  std::vector<double> voltages_mv{90.0, 120.0, 150.0};
  double duration_s = 10.0;
  std::string molecule = "(AC)60";
};

/// Everything a pipeline run depends on besides the seed.
struct PipelineConfig {
  ChannelParams channel;
  SimSettings sim;
  DetectorConfig detector;
  CodecSettings codec;
  StatsSettings stats;
  CapacityInputs capacity;

  void validate() const;
};

/// Flat `section.key = value` text. '#' starts a comment. Unknown keys are
/// collected and reported together in one ConfigError.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::string& path);

/// Applies one key; throws ConfigError on unknown keys or bad values.
void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Every key at full precision; parse_config(to_config_text(c)) == c.
std::string to_config_text(const PipelineConfig& cfg);

/// Preset used for two-pore runs: 130 mV (140 pA per open pore) and the
/// 120-base alternating probe molecule.
PipelineConfig ensemble_preset();

}  // namespace nanostore
