#include "nanostore/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "nanostore/error.hpp"

namespace nanostore {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + v + "' is not a number");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + v + "' is not an integer");
  }
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Run to_run(const std::string& key, const std::string& v) {
  const auto parts = split(v, ':');
  if (parts.size() != 2 || parts[0].size() != 1) {
    throw ConfigError(key + ": expected BASE:COUNT, got '" + v + "'");
  }
  const auto n = to_int(key, parts[1]);
  if (n < 1) throw ConfigError(key + ": run length must be >= 1");
  return {base_from_char(parts[0][0]), static_cast<std::uint32_t>(n)};
}

std::string run_text(const Run& r) { return std::string(1, to_char(r.base)) + ":" + std::to_string(r.count); }

struct Field {
  std::function<void(PipelineConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

#define NS_DOUBLE(KEY, EXPR)                                                              \
  {                                                                                       \
    KEY, Field {                                                                          \
      [](PipelineConfig& c, const std::string& k, const std::string& v) {                 \
        c.EXPR = to_double(k, v);                                                         \
      },                                                                                  \
          [](const PipelineConfig& c) { return num(c.EXPR); }                             \
    }                                                                                     \
  }

#define NS_INT(KEY, EXPR, TYPE)                                                           \
  {                                                                                       \
    KEY, Field {                                                                          \
      [](PipelineConfig& c, const std::string& k, const std::string& v) {                 \
        const auto i = to_int(k, v);                                                      \
        if (i < 0) throw ConfigError(k + " must be >= 0");                                \
        c.EXPR = static_cast<TYPE>(i);                                                    \
      },                                                                                  \
          [](const PipelineConfig& c) { return std::to_string(c.EXPR); }                  \
    }                                                                                     \
  }

#define NS_STRING(KEY, EXPR)                                                              \
  {                                                                                       \
    KEY, Field {                                                                          \
      [](PipelineConfig& c, const std::string&, const std::string& v) { c.EXPR = v; },    \
          [](const PipelineConfig& c) { return c.EXPR; }                                  \
    }                                                                                     \
  }

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      NS_DOUBLE("channel.voltage_mv", channel.voltage_mv),
      NS_DOUBLE("channel.kcl_molarity", channel.kcl_molarity),
      {"channel.iv_anchors",
       Field{[](PipelineConfig& c, const std::string& k, const std::string& v) {
               std::vector<IVAnchor> anchors;
               for (const auto& item : split(v, ',')) {
                 const auto vi = split(item, ':');
                 if (vi.size() != 2) throw ConfigError(k + ": expected MV:PA pairs");
                 anchors.push_back({to_double(k, vi[0]), to_double(k, vi[1])});
               }
               c.channel.iv_curve = IVCurve(std::move(anchors));
             },
             [](const PipelineConfig& c) {
               std::string s;
               for (const auto& a : c.channel.iv_curve.anchors()) {
                 if (!s.empty()) s += ", ";
                 s += num(a.voltage_mv) + ":" + num(a.current_pa);
               }
               return s;
             }}},
      NS_DOUBLE("channel.blockade_slope_per_mv", channel.blockade_slope_per_mv),
      NS_DOUBLE("channel.blockade_ref_mv", channel.blockade_ref_mv),
      NS_DOUBLE("channel.noise_sigma_open_pa", channel.noise_sigma_open_pa),
      NS_DOUBLE("channel.noise_clog_multiplier", channel.noise_clog_multiplier),
      NS_DOUBLE("channel.rate_ref_per_s", channel.rate_ref_per_s),
      NS_DOUBLE("channel.rate_ref_mv", channel.rate_ref_mv),
      NS_DOUBLE("channel.rate_efold_mv", channel.rate_efold_mv),
      NS_DOUBLE("channel.dwell_ref_s", channel.dwell_ref_s),
      NS_DOUBLE("channel.dwell_ref_bases", channel.dwell_ref_bases),
      NS_DOUBLE("channel.dwell_ref_mv", channel.dwell_ref_mv),
      NS_DOUBLE("channel.dwell_lognormal_sigma", channel.dwell_lognormal_sigma),
      NS_DOUBLE("channel.p_orientation_3prime_first", channel.p_orientation_3prime_first),
      NS_DOUBLE("channel.p_bilevel", channel.p_bilevel),
      NS_DOUBLE("channel.p_complete", channel.p_complete),
      NS_DOUBLE("channel.v_bilevel_min_mv", channel.v_bilevel_min_mv),
      NS_DOUBLE("channel.gating_kcl_threshold_m", channel.gating.kcl_threshold_m),
      NS_DOUBLE("channel.gating_mean_open_s", channel.gating.mean_open_s),
      NS_DOUBLE("channel.gating_mean_closed_s", channel.gating.mean_closed_s),
      NS_DOUBLE("channel.cooperativity_gamma", channel.cooperativity_gamma),
      NS_DOUBLE("channel.capture_dead_time_s", channel.capture_dead_time_s),
      NS_DOUBLE("channel.clog_residual_fraction", channel.clog_residual_fraction),
      NS_DOUBLE("channel.clog_probability", channel.clog_probability),
      NS_DOUBLE("channel.clog_mean_duration_s", channel.clog_mean_duration_s),
      NS_DOUBLE("channel.sample_rate_hz", channel.sample_rate_hz),
      NS_DOUBLE("channel.amplifier_bandwidth_hz", channel.amplifier_bandwidth_hz),

      NS_DOUBLE("sim.duration_s", sim.duration_s),
      NS_STRING("sim.molecule", sim.molecule),
      NS_STRING("sim.molecule_file", sim.molecule_file),
      NS_INT("sim.n_pores", sim.n_pores, int),
      {"sim.clog_schedule",
       Field{[](PipelineConfig& c, const std::string& k, const std::string& v) {
               c.sim.clog_schedule.clear();
               for (const auto& item : split(v, ';')) {
                 const auto parts = split(item, ':');
                 if (parts.size() != 3) throw ConfigError(k + ": expected PORE:START:END entries");
                 c.sim.clog_schedule.push_back({static_cast<int>(to_int(k, parts[0])),
                                                to_double(k, parts[1]), to_double(k, parts[2])});
               }
             },
             [](const PipelineConfig& c) {
               std::string s;
               for (const auto& w : c.sim.clog_schedule) {
                 if (!s.empty()) s += "; ";
                 s += std::to_string(w.pore) + ":" + num(w.start_s) + ":" + num(w.end_s);
               }
               return s;
             }}},
      {"sim.force_kind",
       Field{[](PipelineConfig& c, const std::string&, const std::string& v) {
               if (v.empty()) {
                 c.sim.force.kind.reset();
               } else {
                 c.sim.force.kind = event_kind_from_string(v);
               }
             },
             [](const PipelineConfig& c) {
               return c.sim.force.kind ? std::string(to_string(*c.sim.force.kind)) : std::string();
             }}},
      {"sim.force_entry",
       Field{[](PipelineConfig& c, const std::string&, const std::string& v) {
               if (v.empty()) {
                 c.sim.force.entry_end.reset();
               } else {
                 c.sim.force.entry_end = entry_end_from_string(v);
               }
             },
             [](const PipelineConfig& c) {
               return c.sim.force.entry_end ? std::string(to_string(*c.sim.force.entry_end))
                                            : std::string();
             }}},

      NS_DOUBLE("detector.event_threshold_fraction", detector.event_threshold_fraction),
      NS_INT("detector.min_event_samples", detector.min_event_samples, std::size_t),
      NS_DOUBLE("detector.bic_penalty_multiplier", detector.bic_penalty_multiplier),
      NS_DOUBLE("detector.level_match_tolerance", detector.level_match_tolerance),
      NS_INT("detector.min_segment_samples", detector.min_segment_samples, std::size_t),
      NS_DOUBLE("detector.run_length_ambiguity", detector.run_length_ambiguity),

      {"codec.symbol0",
       Field{[](PipelineConfig& c, const std::string& k, const std::string& v) {
               c.codec.symbol0 = to_run(k, v);
             },
             [](const PipelineConfig& c) { return run_text(c.codec.symbol0); }}},
      {"codec.symbol1",
       Field{[](PipelineConfig& c, const std::string& k, const std::string& v) {
               c.codec.symbol1 = to_run(k, v);
             },
             [](const PipelineConfig& c) { return run_text(c.codec.symbol1); }}},
      NS_INT("codec.block_bits", codec.block_bits, int),
      NS_INT("codec.n_blocks", codec.n_blocks, int),

      {"stats.voltages_mv",
       Field{[](PipelineConfig& c, const std::string& k, const std::string& v) {
               c.stats.voltages_mv.clear();
               for (const auto& item : split(v, ',')) c.stats.voltages_mv.push_back(to_double(k, item));
             },
             [](const PipelineConfig& c) {
               std::string s;
               for (double v : c.stats.voltages_mv) {
                 if (!s.empty()) s += ", ";
                 s += num(v);
               }
               return s;
             }}},
      NS_DOUBLE("stats.duration_s", stats.duration_s),
      NS_STRING("stats.molecule", stats.molecule),

      NS_DOUBLE("capacity.n_parking_spots", capacity.layout.n_parking_spots),
      NS_DOUBLE("capacity.spot_area_total_cm2", capacity.layout.spot_area_total_cm2),
      NS_DOUBLE("capacity.n_stations", capacity.layout.n_stations),
      NS_DOUBLE("capacity.station_area_total_cm2", capacity.layout.station_area_total_cm2),
      NS_DOUBLE("capacity.plumbing_area_cm2", capacity.layout.plumbing_area_cm2),
      NS_DOUBLE("capacity.chip_area_cm2", capacity.layout.chip_area_cm2),
      NS_DOUBLE("capacity.bytes_per_block", capacity.layout.bytes_per_block),
      NS_DOUBLE("capacity.layer_thickness_um", capacity.layout.layer_thickness_um),
      NS_DOUBLE("capacity.bits_per_molecule", capacity.bits_per_molecule),
      NS_DOUBLE("capacity.molecule_dwell_s", capacity.molecule_dwell_s),
      NS_DOUBLE("capacity.bases_per_s", capacity.bases_per_s),
      NS_DOUBLE("capacity.bits_per_base", capacity.bits_per_base),
      NS_DOUBLE("capacity.transport_distance_m", capacity.transport_distance_m),
      NS_DOUBLE("capacity.transport_voltage_v", capacity.transport_voltage_v),
      NS_DOUBLE("capacity.mobility_m2_per_vs", capacity.mobility_m2_per_vs),
      NS_DOUBLE("capacity.dvd_total_bytes", capacity.dvd_total_bytes),
      NS_DOUBLE("capacity.dvd_bytes_per_disc", capacity.dvd_bytes_per_disc),
      NS_DOUBLE("capacity.dvd_thickness_m", capacity.dvd_thickness_m),
  };
  return table;
}

#undef NS_DOUBLE
#undef NS_INT
#undef NS_STRING

constexpr std::string_view kBlockadePrefix = "channel.blockade.";

// channel.blockade.C_3prime -> (C, 3')
std::optional<std::pair<Base, EntryEnd>> blockade_key(const std::string& key) {
  if (key.rfind(kBlockadePrefix, 0) != 0) return std::nullopt;
  const std::string rest = key.substr(kBlockadePrefix.size());
  if (rest.size() < 3 || rest[1] != '_') return std::nullopt;
  try {
    return std::make_pair(base_from_char(rest[0]), entry_end_from_string(rest.substr(2)));
  } catch (const ConfigError&) {
    return std::nullopt;
  }
}

BlockadeStats to_blockade(const std::string& key, const std::string& v) {
  const auto parts = split(v, ':');
  if (parts.size() != 2) throw ConfigError(key + ": expected MEAN:SIGMA");
  return {to_double(key, parts[0]), to_double(key, parts[1])};
}

const Field* find_field(const std::string& key) {
  for (const auto& [k, f] : fields()) {
    if (k == key) return &f;
  }
  return nullptr;
}

}  // namespace

void PipelineConfig::validate() const {
  channel.validate();
  detector.validate();
  capacity.layout.validate();
  (void)codec.scheme();
  if (!(sim.duration_s > 0.0)) throw ConfigError("sim.duration_s must be > 0");
  if (sim.n_pores < 1) throw ConfigError("sim.n_pores must be >= 1");
  if (codec.block_bits < 1) throw ConfigError("codec.block_bits must be >= 1");
  if (codec.n_blocks < 1) throw ConfigError("codec.n_blocks must be >= 1");
  if (!(stats.duration_s > 0.0)) throw ConfigError("stats.duration_s must be > 0");
  if (stats.voltages_mv.empty()) throw ConfigError("stats.voltages_mv is empty");
}

void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  if (auto bk = blockade_key(key)) {
    auto entries = cfg.channel.blockade.entries();
    entries[*bk] = to_blockade(key, value);
    cfg.channel.blockade = BlockadeTable(std::move(entries));
    return;
  }
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown config key: " + key);
  f->set(cfg, key, value);
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  std::vector<std::string> unknown;
  std::map<std::pair<Base, EntryEnd>, BlockadeStats> blockade = cfg.channel.blockade.entries();
  bool blockade_touched = false;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'section.key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (auto bk = blockade_key(key)) {
      blockade[*bk] = to_blockade(key, value);
      blockade_touched = true;
      continue;
    }
    const Field* f = find_field(key);
    if (!f) {
      unknown.push_back(key);
      continue;
    }
    try {
      f->set(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  if (blockade_touched) cfg.channel.blockade = BlockadeTable(std::move(blockade));
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_config_text(const PipelineConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& [key, f] : fields()) {
    const std::string sec = key.substr(0, key.find('.'));
    if (sec != section) {
      if (!section.empty()) out += "\n";
      out += "# " + sec + "\n";
      section = sec;
    }
    out += key + " = " + f.get(cfg) + "\n";
    if (key == "channel.iv_anchors") {
      for (const auto& [k, s] : cfg.channel.blockade.entries()) {
        out += std::string(kBlockadePrefix) + to_char(k.first) + "_" + to_string(k.second) +
               " = " + num(s.mean) + ":" + num(s.sigma) + "\n";
      }
    }
  }
  return out;
}

PipelineConfig ensemble_preset() {
  PipelineConfig cfg;
  cfg.channel.voltage_mv = 130.0;
  cfg.sim.molecule = "(AC)60";
  cfg.sim.n_pores = 2;
  return cfg;
}

}  // namespace nanostore
