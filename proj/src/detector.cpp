#include "nanostore/detector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "nanostore/error.hpp"

namespace nanostore {

void DetectorConfig::validate() const {
  if (!(event_threshold_fraction > 0.0 && event_threshold_fraction < 1.0)) {
    throw ConfigError("event_threshold_fraction must lie in (0, 1)");
  }
  if (min_event_samples < 2) throw ConfigError("min_event_samples must be >= 2");
  if (min_segment_samples < 1) throw ConfigError("min_segment_samples must be >= 1");
  if (bic_penalty_multiplier < 0.0) throw ConfigError("bic_penalty_multiplier must be >= 0");
  if (!(level_match_tolerance > 0.0)) throw ConfigError("level_match_tolerance must be > 0");
  if (!(run_length_ambiguity > 0.0 && run_length_ambiguity <= 0.5)) {
    throw ConfigError("run_length_ambiguity must lie in (0, 0.5]");
  }
}

const char* to_string(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::NotAttempted: return "not_attempted";
    case DecodeStatus::Decoded: return "decoded";
    case DecodeStatus::NoLevelMatch: return "rejected_no_level_match";
    case DecodeStatus::AmbiguousRunLength: return "rejected_ambiguous_run_length";
    case DecodeStatus::SchemeMismatch: return "rejected_scheme_mismatch";
  }
  return "?";
}

DecodeStatus decode_status_from_string(const std::string& s) {
  for (auto st : {DecodeStatus::NotAttempted, DecodeStatus::Decoded, DecodeStatus::NoLevelMatch,
                  DecodeStatus::AmbiguousRunLength, DecodeStatus::SchemeMismatch}) {
    if (s == to_string(st)) return st;
  }
  throw ConfigError("unknown decode status '" + s + "'");
}

double estimate_baseline(const Trace& trace) {
  const auto& x = trace.samples;
  if (x.empty()) throw DomainError("cannot estimate the baseline of an empty trace");

  const float mx = *std::max_element(x.begin(), x.end());
  const double lo = mx > 0.0f ? 0.5 * mx : *std::min_element(x.begin(), x.end());
  std::vector<float> upper;
  upper.reserve(x.size());
  for (float v : x) {
    if (v >= lo) upper.push_back(v);
  }
  const auto [mn_it, mx_it] = std::minmax_element(upper.begin(), upper.end());
  if (*mn_it == *mx_it) return *mn_it;

  constexpr std::size_t kBins = 512;
  const double base = *mn_it;
  const double width = (static_cast<double>(*mx_it) - base) / kBins;
  std::vector<double> counts(kBins, 0.0);
  for (float v : upper) {
    auto b = static_cast<std::size_t>((v - base) / width);
    counts[std::min(b, kBins - 1)] += 1.0;
  }
  std::size_t best = 0;
  double best_count = -1.0;
  for (std::size_t b = 0; b < kBins; ++b) {
    double c = 0.0;
    for (std::size_t j = (b >= 2 ? b - 2 : 0); j <= std::min(kBins - 1, b + 2); ++j) c += counts[j];
    if (c > best_count) {
      best_count = c;
      best = b;
    }
  }

  double centre = base + (static_cast<double>(best) + 0.5) * width;
  const double h = 8.0 * width;
  for (int iter = 0; iter < 50; ++iter) {
    double sum = 0.0;
    std::size_t n = 0;
    for (float v : upper) {
      if (std::abs(v - centre) <= h) {
        sum += v;
        ++n;
      }
    }
    if (n == 0) break;
    const double next = sum / static_cast<double>(n);
    const bool done = std::abs(next - centre) < 1e-9;
    centre = next;
    if (done) break;
  }
  return centre;
}

std::vector<SampleInterval> detect_events(const Trace& trace, double baseline_pa,
                                          const DetectorConfig& cfg) {
  if (!(baseline_pa > 0.0)) throw DomainError("event detection needs a positive baseline");
  const double thr = cfg.event_threshold_fraction * baseline_pa;
  const auto& x = trace.samples;

  std::vector<SampleInterval> raw;
  std::size_t i = 0;
  while (i < x.size()) {
    if (x[i] < thr) {
      std::size_t j = i;
      while (j < x.size() && x[j] < thr) ++j;
      raw.push_back({i, j});
      i = j;
    } else {
      ++i;
    }
  }

  std::vector<SampleInterval> merged;
  for (const auto& iv : raw) {
    if (!merged.empty() && iv.begin - merged.back().end < cfg.min_event_samples) {
      merged.back().end = iv.end;
    } else {
      merged.push_back(iv);
    }
  }
  std::erase_if(merged, [&](const SampleInterval& iv) { return iv.size() < cfg.min_event_samples; });
  return merged;
}

SplitResult best_split(std::span<const float> samples, std::size_t min_segment) {
  const std::size_t n = samples.size();
  min_segment = std::max<std::size_t>(min_segment, 1);
  SplitResult best{0, std::numeric_limits<double>::infinity()};
  if (n < 2 * min_segment) return best;

  // Centre on the first sample to limit cancellation in the prefix sums.
  const double shift = samples[0];
  std::vector<double> s(n + 1, 0.0);
  std::vector<double> q(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = samples[i] - shift;
    s[i + 1] = s[i] + v;
    q[i + 1] = q[i] + v * v;
  }
  for (std::size_t k = min_segment; k + min_segment <= n; ++k) {
    const double nl = static_cast<double>(k);
    const double nr = static_cast<double>(n - k);
    const double sr = s[n] - s[k];
    const double sse = (q[k] - s[k] * s[k] / nl) + ((q[n] - q[k]) - sr * sr / nr);
    if (sse < best.sse) best = {k, sse};
  }
  return best;
}

namespace {

double mean_of(std::span<const float> x) {
  double sum = 0.0;
  for (float v : x) sum += v;
  return x.empty() ? 0.0 : sum / static_cast<double>(x.size());
}

double sse_about(std::span<const float> x, double m) {
  double sse = 0.0;
  for (float v : x) sse += (v - m) * (v - m);
  return sse;
}

}  // namespace

LevelFit segment_event(std::span<const float> samples, const DetectorConfig& cfg) {
  LevelFit fit;
  const std::size_t n = samples.size();
  fit.mean[0] = mean_of(samples);
  fit.sse_one = sse_about(samples, fit.mean[0]);
  if (n < 2 * cfg.min_event_samples || n < 2 * cfg.min_segment_samples) {
    fit.low_confidence = true;
    return fit;
  }

  const SplitResult split = best_split(samples, cfg.min_segment_samples);
  const auto left = samples.first(split.k);
  const auto right = samples.subspan(split.k);
  const double m0 = mean_of(left);
  const double m1 = mean_of(right);
  fit.sse_two = sse_about(left, m0) + sse_about(right, m1);

  const double dn = static_cast<double>(n);
  const double floor = 1e-12 * std::max(1.0, fit.mean[0] * fit.mean[0]);
  const double log_n = std::log(dn);
  fit.bic_one = dn * std::log(fit.sse_one / dn + floor) + cfg.bic_penalty_multiplier * 2.0 * log_n;
  fit.bic_two = dn * std::log(fit.sse_two / dn + floor) + cfg.bic_penalty_multiplier * 4.0 * log_n;
  fit.pooled_sd = std::sqrt(fit.sse_two / (dn - 2.0));

  const double separation = std::abs(m0 - m1);
  if (fit.bic_two < fit.bic_one && separation > 0.0 && separation > 3.0 * fit.pooled_sd) {
    fit.n_levels = 2;
    fit.change_point = split.k;
    fit.mean[0] = m0;
    fit.mean[1] = m1;
  }
  return fit;
}

DetectedEvent make_detected_event(const Trace& trace, SampleInterval iv, double baseline_pa,
                                  const DetectorConfig& cfg) {
  DetectedEvent ev;
  const double fs = trace.sample_rate_hz;
  ev.start_index = iv.begin;
  ev.end_index = iv.end;
  ev.start_s = trace.time_of(iv.begin);
  ev.duration_s = static_cast<double>(iv.size()) / fs;
  ev.baseline_pa = baseline_pa;

  const std::span<const float> window(trace.samples.data() + iv.begin, iv.size());
  const LevelFit fit = segment_event(window, cfg);
  ev.low_confidence = fit.low_confidence;

  auto level = [&](double mean, std::size_t count) {
    return DetectedLevel{mean, static_cast<double>(count) / fs,
                         std::clamp(mean / baseline_pa, 1e-6, 1.0 - 1e-6)};
  };
  if (fit.n_levels == 2) {
    ev.change_index = iv.begin + fit.change_point;
    ev.levels.push_back(level(fit.mean[0], fit.change_point));
    ev.levels.push_back(level(fit.mean[1], iv.size() - fit.change_point));
  } else {
    ev.levels.push_back(level(fit.mean[0], iv.size()));
  }
  return ev;
}

std::vector<DetectedEvent> detect_and_segment(const Trace& trace, const DetectorConfig& cfg) {
  const double baseline = estimate_baseline(trace);
  std::vector<DetectedEvent> out;
  for (const auto& iv : detect_events(trace, baseline, cfg)) {
    out.push_back(make_detected_event(trace, iv, baseline, cfg));
  }
  return out;
}

void classify_and_decode(DetectedEvent& ev, const ChannelParams& p, const RunEncoding& scheme,
                         const DetectorConfig& cfg) {
  ev.entry_end.reset();
  ev.bases.clear();
  ev.bits = BitBlock{};
  if (ev.levels.empty()) {
    ev.status = DecodeStatus::NoLevelMatch;
    return;
  }

  struct Assignment {
    EntryEnd end;
    std::vector<Base> bases;
    double cost;
  };
  std::optional<Assignment> best;
  for (EntryEnd end : {EntryEnd::ThreePrime, EntryEnd::FivePrime}) {
    Assignment a{end, {}, 0.0};
    bool ok = true;
    for (const auto& lv : ev.levels) {
      double best_dist = std::numeric_limits<double>::infinity();
      Base best_base = Base::A;
      for (const auto& [key, stats] : p.blockade.entries()) {
        if (key.second != end) continue;
        const double d =
            std::abs(lv.normalized - blockade_mean(p, key.first, end, p.voltage_mv));
        if (d < best_dist) {
          best_dist = d;
          best_base = key.first;
        }
      }
      if (best_dist > cfg.level_match_tolerance) {
        ok = false;
        break;
      }
      if (!a.bases.empty() && a.bases.back() == best_base) {
        ok = false;
        break;
      }
      a.bases.push_back(best_base);
      a.cost += best_dist * best_dist;
    }
    if (ok && (!best || a.cost < best->cost)) best = std::move(a);
  }
  if (!best) {
    ev.status = DecodeStatus::NoLevelMatch;
    return;
  }
  ev.entry_end = best->end;
  ev.bases = best->bases;

  // Canonical 5'->3' order.
  std::vector<std::size_t> order(ev.levels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (best->end == EntryEnd::ThreePrime) std::reverse(order.begin(), order.end());

  const double seconds_per_base = mean_dwell(p, p.voltage_mv, 1.0);
  std::vector<Run> runs;
  for (auto i : order) {
    const int bit = scheme.bit_for_base(ev.bases[i]);
    if (bit < 0) {
      ev.status = DecodeStatus::SchemeMismatch;
      return;
    }
    const auto unit = static_cast<double>(scheme.symbol(static_cast<std::uint8_t>(bit)).count);
    const double multiples = ev.levels[i].duration_s / seconds_per_base / unit;
    const double k = std::round(multiples);
    if (k < 1.0 || std::abs(multiples - k) > cfg.run_length_ambiguity) {
      ev.status = DecodeStatus::AmbiguousRunLength;
      return;
    }
    runs.push_back({ev.bases[i], static_cast<std::uint32_t>(k * unit)});
  }
  try {
    ev.bits = decode_runs(MoleculeSpec(std::move(runs)), scheme);
    ev.status = DecodeStatus::Decoded;
  } catch (const DecodeError&) {
    ev.status = DecodeStatus::SchemeMismatch;
  }
}

}  // namespace nanostore
