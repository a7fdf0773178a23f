#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "nanostore/codec.hpp"
#include "nanostore/rng.hpp"

namespace nanostore {

enum class EntryEnd { FivePrime, ThreePrime };

const char* to_string(EntryEnd e);  // "5prime" / "3prime"
EntryEnd entry_end_from_string(const std::string& s);

struct IVAnchor {
  double voltage_mv;
  double current_pa;
};

/// Piecewise-linear current-voltage curve through measured anchors.
class IVCurve {
 public:
  struct Point {
    double current_pa;
    bool extrapolated;
  };

  IVCurve() = default;
  explicit IVCurve(std::vector<IVAnchor> anchors);  // throws ConfigError

  // Outside the anchor range the end segment's slope is continued and the
  // result is flagged as extrapolated.
  Point evaluate(double voltage_mv) const;
  const std::vector<IVAnchor>& anchors() const { return anchors_; }

 private:
  std::vector<IVAnchor> anchors_;
};

IVCurve default_iv_curve();

struct BlockadeStats {
  double mean;   // normalized residual current I_blocked / I_open
  double sigma;
};

class BlockadeTable {
 public:
  BlockadeTable() = default;
  explicit BlockadeTable(std::map<std::pair<Base, EntryEnd>, BlockadeStats> entries);

  bool contains(Base b, EntryEnd e) const;
  const BlockadeStats& at(Base b, EntryEnd e) const;  // throws ConfigError
  const std::map<std::pair<Base, EntryEnd>, BlockadeStats>& entries() const {
    return entries_;
  }

 private:
  std::map<std::pair<Base, EntryEnd>, BlockadeStats> entries_;
};

BlockadeTable default_blockade_table();

struct GatingParams {
  double kcl_threshold_m = 2.0;
  double mean_open_s = 20e-3;
  double mean_closed_s = 10e-3;
};

/// Complete calibration of the stochastic pore channel. Immutable once
/// validated; every sampling routine takes its RNG explicitly.
struct ChannelParams {
  double voltage_mv = 210.0;
  double kcl_molarity = 1.0;
  IVCurve iv_curve = default_iv_curve();
  BlockadeTable blockade = default_blockade_table();
  // Optional linear drift of blockade means with voltage (per mV, relative
  // to blockade_ref_mv). Zero keeps the table voltage-independent.
  double blockade_slope_per_mv = 0.0;
  double blockade_ref_mv = 210.0;

  double noise_sigma_open_pa = 5.0;
  double noise_clog_multiplier = 1.5;

  double rate_ref_per_s = 12.0;
  double rate_ref_mv = 120.0;
  double rate_efold_mv = 27.30717679880512;  // 30 / ln 3

  double dwell_ref_s = 150e-6;
  double dwell_ref_bases = 150.0;
  double dwell_ref_mv = 210.0;
  double dwell_lognormal_sigma = 0.3;

  double p_orientation_3prime_first = 0.75;
  double p_bilevel = 0.29;
  double p_complete = 0.37;
  double v_bilevel_min_mv = 200.0;

  GatingParams gating;
  double cooperativity_gamma = 3.79;

  double capture_dead_time_s = 20e-6;
  double clog_residual_fraction = 10.0 / 140.0;
  double clog_probability = 0.0;
  double clog_mean_duration_s = 1.0;

  double sample_rate_hz = 500e3;
  double amplifier_bandwidth_hz = 100e3;

  void validate() const;  // throws ConfigError
};

double open_current(const ChannelParams& p, double voltage_mv);

/// Total capture rate (events/s) over n_open_pores open pores.
double capture_rate(const ChannelParams& p, double voltage_mv, int n_open_pores);
/// Rate for one open pore while n_open_pores (including itself) are open.
double per_pore_capture_rate(const ChannelParams& p, double voltage_mv, int n_open_pores);

double mean_dwell(const ChannelParams& p, double voltage_mv, double n_bases);
double dwell_time(const ChannelParams& p, double voltage_mv, double n_bases, Rng& rng);

double blockade_mean(const ChannelParams& p, Base b, EntryEnd e, double voltage_mv);
double blockade_level(const ChannelParams& p, Base b, EntryEnd e, Rng& rng);

struct GatingInterval {
  bool open;
  double dwell_s;
};

/// Alternating open/closed telegraph intervals covering exactly `duration_s`.
std::vector<GatingInterval> gating_sequence(const ChannelParams& p, double duration_s, Rng& rng);
double open_fraction(const std::vector<GatingInterval>& seq);

}  // namespace nanostore
