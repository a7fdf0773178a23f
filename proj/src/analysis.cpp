#include "nanostore/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "nanostore/error.hpp"

namespace nanostore {

double open_fraction(const Trace& trace, double baseline_pa, double threshold_fraction) {
  if (!(baseline_pa > 0.0)) throw DomainError("open fraction needs a positive baseline");
  if (trace.samples.empty()) return 1.0;
  const double thr = threshold_fraction * baseline_pa;
  const auto open = std::count_if(trace.samples.begin(), trace.samples.end(),
                                  [thr](float v) { return v >= thr; });
  return static_cast<double>(open) / static_cast<double>(trace.samples.size());
}

EventRates event_rates(std::span<const EventRecord> events, double duration_s) {
  if (!(duration_s > 0.0)) throw DomainError("rate duration must be > 0");
  std::size_t complete = 0;
  for (const auto& e : events) {
    if (is_complete(e.kind)) ++complete;
  }
  const std::size_t incomplete = events.size() - complete;
  return {static_cast<double>(complete) / duration_s,
          static_cast<double>(incomplete) / duration_s,
          static_cast<double>(events.size()) / duration_s};
}

std::vector<ScatterPoint> dwell_blockage_scatter(std::span<const DetectedEvent> events) {
  std::vector<ScatterPoint> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    double w = 0.0;
    double d = 0.0;
    for (const auto& lv : e.levels) {
      w += lv.normalized * lv.duration_s;
      d += lv.duration_s;
    }
    const double level = d > 0.0 ? w / d : 1.0;
    out.push_back({std::clamp(100.0 * (1.0 - level), 0.0, 100.0), e.duration_s});
  }
  return out;
}

std::vector<ScatterPoint> dwell_blockage_scatter(std::span<const EventRecord> events,
                                                 double open_current_pa) {
  std::vector<ScatterPoint> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    double w = 0.0;
    for (const auto& s : e.segments) w += s.level_pa / open_current_pa * s.duration_s;
    const double level = e.duration_s > 0.0 ? w / e.duration_s : 1.0;
    out.push_back({std::clamp(100.0 * (1.0 - level), 0.0, 100.0), e.duration_s});
  }
  return out;
}

ScatterPoint centroid(std::span<const ScatterPoint> points) {
  if (points.empty()) return {0.0, 0.0};
  double b = 0.0;
  double d = 0.0;
  for (const auto& p : points) {
    b += p.blockage_pct;
    d += p.dwell_s;
  }
  const auto n = static_cast<double>(points.size());
  return {b / n, d / n};
}

DetectionScore score_detection(std::span<const EventRecord> truth,
                               std::span<const DetectedEvent> detected,
                               double match_tolerance_s) {
  DetectionScore sc;
  sc.n_truth = truth.size();
  sc.n_detected = detected.size();

  std::vector<bool> used(detected.size(), false);
  double sq = 0.0;
  std::size_t n_levels = 0;
  std::size_t lo = 0;
  for (std::size_t ti = 0; ti < truth.size(); ++ti) {
    const auto& gt = truth[ti];
    while (lo < detected.size() &&
           detected[lo].start_s + detected[lo].duration_s < gt.start_s - match_tolerance_s) {
      ++lo;
    }
    std::size_t best = detected.size();
    double best_overlap = -1.0;
    for (std::size_t di = lo; di < detected.size(); ++di) {
      const auto& d = detected[di];
      if (d.start_s > gt.end_s() + match_tolerance_s) break;
      if (used[di]) continue;
      const double d_end = d.start_s + d.duration_s;
      const double overlap = std::min(gt.end_s(), d_end) - std::max(gt.start_s, d.start_s);
      const bool by_overlap = overlap >= 0.5 * std::max(gt.duration_s, d.duration_s);
      const bool by_edges = std::abs(gt.start_s - d.start_s) <= match_tolerance_s &&
                            std::abs(gt.end_s() - d_end) <= match_tolerance_s;
      if ((by_overlap || by_edges) && overlap > best_overlap) {
        best_overlap = overlap;
        best = di;
      }
    }
    if (best == detected.size()) continue;
    used[best] = true;
    sc.matches.emplace_back(ti, best);

    const auto& d = detected[best];
    if (d.levels.size() == gt.segments.size()) {
      for (std::size_t k = 0; k < d.levels.size(); ++k) {
        const double diff = d.levels[k].mean_pa - gt.segments[k].level_pa;
        sq += diff * diff;
        ++n_levels;
      }
    } else {
      double gw = 0.0;
      for (const auto& s : gt.segments) gw += s.level_pa * s.duration_s;
      double dw = 0.0;
      double dd = 0.0;
      for (const auto& lv : d.levels) {
        dw += lv.mean_pa * lv.duration_s;
        dd += lv.duration_s;
      }
      const double diff = (dd > 0 ? dw / dd : 0.0) - (gt.duration_s > 0 ? gw / gt.duration_s : 0.0);
      sq += diff * diff;
      ++n_levels;
    }
  }

  sc.n_matched = sc.matches.size();
  sc.recall = truth.empty() ? 1.0
                            : static_cast<double>(sc.n_matched) / static_cast<double>(truth.size());
  if (detected.empty()) {
    sc.no_detections = true;
    sc.precision = 1.0;
  } else {
    sc.precision = static_cast<double>(sc.n_matched) / static_cast<double>(detected.size());
  }
  sc.level_rms_pa = n_levels ? std::sqrt(sq / static_cast<double>(n_levels)) : 0.0;
  return sc;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_open_fraction_csv(std::ostream& out, const VoltageSweepResult& sweep) {
  out << "voltage_mV,open_fraction\n";
  for (const auto& p : sweep) out << fmt(p.voltage_mv) << ',' << fmt(p.open_fraction) << '\n';
}

void write_event_rate_csv(std::ostream& out, const VoltageSweepResult& sweep) {
  out << "voltage_mV,complete_per_s,incomplete_per_s,total_per_s\n";
  for (const auto& p : sweep) {
    out << fmt(p.voltage_mv) << ',' << fmt(p.complete_rate) << ',' << fmt(p.incomplete_rate)
        << ',' << fmt(p.total_rate) << '\n';
  }
}

void write_dwell_blockage_csv(std::ostream& out, const VoltageSweepResult& sweep) {
  out << "voltage_mV,blockage_pct,dwell_s\n";
  for (const auto& p : sweep) {
    for (const auto& s : p.scatter) {
      out << fmt(p.voltage_mv) << ',' << fmt(s.blockage_pct) << ',' << fmt(s.dwell_s) << '\n';
    }
  }
}

}  // namespace nanostore
