#include "nanostore/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nanostore/error.hpp"

namespace nanostore {

const char* to_string(EntryEnd e) {
  return e == EntryEnd::FivePrime ? "5prime" : "3prime";
}

EntryEnd entry_end_from_string(const std::string& s) {
  if (s == "5prime" || s == "5'" || s == "5") return EntryEnd::FivePrime;
  if (s == "3prime" || s == "3'" || s == "3") return EntryEnd::ThreePrime;
  throw ConfigError("unknown entry end '" + s + "'");
}

IVCurve::IVCurve(std::vector<IVAnchor> anchors) : anchors_(std::move(anchors)) {
  if (anchors_.size() < 2) throw ConfigError("I-V curve needs at least two anchors");
  bool has_zero = false;
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    const auto& a = anchors_[i];
    if (i > 0 && !(a.voltage_mv > anchors_[i - 1].voltage_mv)) {
      throw ConfigError("I-V anchors must have strictly increasing voltage");
    }
    if (a.voltage_mv == 0.0) {
      if (a.current_pa != 0.0) throw ConfigError("I-V curve must pass through (0, 0)");
      has_zero = true;
    }
    if ((a.voltage_mv > 0 && a.current_pa <= 0) || (a.voltage_mv < 0 && a.current_pa >= 0)) {
      throw ConfigError("I-V anchor current must share the sign of its voltage");
    }
    if (i > 0 && a.current_pa < anchors_[i - 1].current_pa) {
      throw ConfigError("I-V current must be nondecreasing in voltage");
    }
  }
  if (!has_zero) throw ConfigError("I-V curve must include the (0, 0) anchor");
}

IVCurve::Point IVCurve::evaluate(double v) const {
  const auto& a = anchors_;
  auto segment = [&](std::size_t i) {
    const double t = (v - a[i].voltage_mv) / (a[i + 1].voltage_mv - a[i].voltage_mv);
    return a[i].current_pa + t * (a[i + 1].current_pa - a[i].current_pa);
  };
  if (v < a.front().voltage_mv) return {segment(0), true};
  if (v > a.back().voltage_mv) return {segment(a.size() - 2), true};
  auto it = std::upper_bound(a.begin(), a.end(), v,
                             [](double x, const IVAnchor& an) { return x < an.voltage_mv; });
  std::size_t i = static_cast<std::size_t>(std::distance(a.begin(), it));
  if (i >= a.size()) return {a.back().current_pa, false};
  return {segment(i - 1), false};
}

IVCurve default_iv_curve() {
  return IVCurve({{-210, -200}, {0, 0}, {90, 90}, {120, 130}, {150, 160}, {210, 250}});
}

BlockadeTable::BlockadeTable(std::map<std::pair<Base, EntryEnd>, BlockadeStats> entries)
    : entries_(std::move(entries)) {
  for (const auto& [key, s] : entries_) {
    if (!(s.mean > 0.0 && s.mean < 1.0)) {
      throw ConfigError(std::string("blockade mean for ") + to_char(key.first) +
                        " must lie in (0, 1)");
    }
    if (s.sigma < 0.0) throw ConfigError("blockade sigma must be >= 0");
  }
  for (const auto& [key, s] : entries_) {
    if (key.second != EntryEnd::FivePrime) continue;
    auto other = entries_.find({key.first, EntryEnd::ThreePrime});
    if (other != entries_.end() && !(s.mean < other->second.mean)) {
      throw ConfigError(std::string("5'-entry blockade mean for ") + to_char(key.first) +
                        " must be below its 3'-entry mean");
    }
  }
}

bool BlockadeTable::contains(Base b, EntryEnd e) const {
  return entries_.count({b, e}) != 0;
}

const BlockadeStats& BlockadeTable::at(Base b, EntryEnd e) const {
  auto it = entries_.find({b, e});
  if (it == entries_.end()) {
    throw ConfigError(std::string("no blockade entry for ") + to_char(b) + " " + to_string(e));
  }
  return it->second;
}

BlockadeTable default_blockade_table() {
  return BlockadeTable({
      {{Base::C, EntryEnd::ThreePrime}, {0.37, 0.09}},
      {{Base::A, EntryEnd::ThreePrime}, {0.17, 0.04}},
      {{Base::C, EntryEnd::FivePrime}, {0.20, 0.03}},
      {{Base::A, EntryEnd::FivePrime}, {0.12, 0.04}},
  });
}

void ChannelParams::validate() const {
  auto prob = [](double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
  };
  prob(p_orientation_3prime_first, "p_orientation_3prime_first");
  prob(p_bilevel, "p_bilevel");
  prob(p_complete, "p_complete");
  prob(clog_probability, "clog_probability");
  prob(clog_residual_fraction, "clog_residual_fraction");
  positive(kcl_molarity, "kcl_molarity");
  positive(rate_efold_mv, "rate_efold_mv");
  positive(dwell_ref_s, "dwell_ref_s");
  positive(dwell_ref_bases, "dwell_ref_bases");
  positive(dwell_ref_mv, "dwell_ref_mv");
  positive(gating.mean_open_s, "gating mean_open_s");
  positive(gating.mean_closed_s, "gating mean_closed_s");
  positive(gating.kcl_threshold_m, "gating kcl_threshold");
  positive(clog_mean_duration_s, "clog_mean_duration_s");
  positive(sample_rate_hz, "sample_rate_hz");
  positive(amplifier_bandwidth_hz, "amplifier_bandwidth_hz");
  positive(cooperativity_gamma, "cooperativity_gamma");
  if (rate_ref_per_s < 0.0) throw ConfigError("rate_ref_per_s must be >= 0");
  if (dwell_lognormal_sigma < 0.0) throw ConfigError("dwell_lognormal_sigma must be >= 0");
  if (noise_sigma_open_pa < 0.0) throw ConfigError("noise_sigma_open_pa must be >= 0");
  if (noise_clog_multiplier < 0.0) throw ConfigError("noise_clog_multiplier must be >= 0");
  if (capture_dead_time_s < 0.0) throw ConfigError("capture_dead_time_s must be >= 0");
  if (sample_rate_hz < 2.0 * amplifier_bandwidth_hz) {
    throw ConfigError("sample_rate_hz must be at least twice the amplifier bandwidth");
  }
}

double open_current(const ChannelParams& p, double voltage_mv) {
  return p.iv_curve.evaluate(voltage_mv).current_pa;
}

double per_pore_capture_rate(const ChannelParams& p, double voltage_mv, int n_open_pores) {
  if (n_open_pores <= 0) return 0.0;
  return p.rate_ref_per_s * std::exp((voltage_mv - p.rate_ref_mv) / p.rate_efold_mv) *
         std::pow(p.cooperativity_gamma, n_open_pores - 1);
}

double capture_rate(const ChannelParams& p, double voltage_mv, int n_open_pores) {
  if (n_open_pores <= 0) return 0.0;
  return n_open_pores * per_pore_capture_rate(p, voltage_mv, n_open_pores);
}

double mean_dwell(const ChannelParams& p, double voltage_mv, double n_bases) {
  if (!(voltage_mv > 0.0)) {
    throw DomainError("no forward translocation at V = " + std::to_string(voltage_mv) + " mV");
  }
  if (!(n_bases >= 1.0)) throw DomainError("dwell needs at least one base");
  return p.dwell_ref_s * (p.dwell_ref_mv / voltage_mv) * (n_bases / p.dwell_ref_bases);
}

double dwell_time(const ChannelParams& p, double voltage_mv, double n_bases, Rng& rng) {
  const double mean = mean_dwell(p, voltage_mv, n_bases);
  const double s = p.dwell_lognormal_sigma;
  if (s == 0.0) return mean;
  // log-normal with E[X] = mean
  std::lognormal_distribution<double> dist(std::log(mean) - 0.5 * s * s, s);
  return dist(rng);
}

double blockade_mean(const ChannelParams& p, Base b, EntryEnd e, double voltage_mv) {
  return p.blockade.at(b, e).mean + p.blockade_slope_per_mv * (voltage_mv - p.blockade_ref_mv);
}

double blockade_level(const ChannelParams& p, Base b, EntryEnd e, Rng& rng) {
  const double mean = blockade_mean(p, b, e, p.voltage_mv);
  const double sigma = p.blockade.at(b, e).sigma;
  double x = mean;
  if (sigma > 0.0) {
    std::normal_distribution<double> dist(mean, sigma);
    x = dist(rng);
  }
  return std::clamp(x, 0.01, 0.99);
}

std::vector<GatingInterval> gating_sequence(const ChannelParams& p, double duration_s, Rng& rng) {
  if (!(duration_s > 0.0)) throw DomainError("gating duration must be > 0");
  if (p.kcl_molarity < p.gating.kcl_threshold_m) return {{true, duration_s}};

  std::exponential_distribution<double> open_dwell(1.0 / p.gating.mean_open_s);
  std::exponential_distribution<double> closed_dwell(1.0 / p.gating.mean_closed_s);
  std::vector<GatingInterval> seq;
  double t = 0.0;
  bool open = true;
  while (t < duration_s) {
    const double d = open ? open_dwell(rng) : closed_dwell(rng);
    if (d >= duration_s - t) {
      seq.push_back({open, duration_s - t});
      break;
    }
    seq.push_back({open, d});
    t += d;
    open = !open;
  }
  return seq;
}

double open_fraction(const std::vector<GatingInterval>& seq) {
  double open = 0.0;
  double total = 0.0;
  for (const auto& g : seq) {
    total += g.dwell_s;
    if (g.open) open += g.dwell_s;
  }
  return total > 0.0 ? open / total : 1.0;
}

}  // namespace nanostore
