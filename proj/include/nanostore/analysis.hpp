#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "nanostore/detector.hpp"
#include "nanostore/trace_sim.hpp"

namespace nanostore {

/// Fraction of samples at or above threshold_fraction * baseline.
double open_fraction(const Trace& trace, double baseline_pa, double threshold_fraction = 0.65);

struct EventRates {
  double complete_per_s = 0.0;
  double incomplete_per_s = 0.0;
  double total_per_s = 0.0;
};

EventRates event_rates(std::span<const EventRecord> events, double duration_s);

struct ScatterPoint {
  double blockage_pct;  // 100 * (1 - duration-weighted normalized level)
  double dwell_s;
};

std::vector<ScatterPoint> dwell_blockage_scatter(std::span<const DetectedEvent> events);
// Ground-truth variant; levels are normalized by the open current.
std::vector<ScatterPoint> dwell_blockage_scatter(std::span<const EventRecord> events,
                                                 double open_current_pa);

ScatterPoint centroid(std::span<const ScatterPoint> points);

struct DetectionScore {
  double precision = 1.0;
  double recall = 0.0;
  double level_rms_pa = 0.0;
  std::size_t n_truth = 0;
  std::size_t n_detected = 0;
  std::size_t n_matched = 0;
  bool no_detections = false;  // precision reported as 1.0 by convention
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (truth, detected)
};

/// Greedy time-ordered matching. A pair matches when the overlap covers at
/// least half of the longer interval, or both edges agree within
/// match_tolerance_s.
DetectionScore score_detection(std::span<const EventRecord> truth,
                               std::span<const DetectedEvent> detected,
                               double match_tolerance_s);

struct SweepPoint {
  double voltage_mv = 0.0;
  double open_fraction = 1.0;
  double complete_rate = 0.0;
  double incomplete_rate = 0.0;
  double total_rate = 0.0;
  double mean_dwell_s = 0.0;
  double mean_blockage_pct = 0.0;
  std::vector<ScatterPoint> scatter;
};

using VoltageSweepResult = std::vector<SweepPoint>;

void write_open_fraction_csv(std::ostream& out, const VoltageSweepResult& sweep);
void write_event_rate_csv(std::ostream& out, const VoltageSweepResult& sweep);
void write_dwell_blockage_csv(std::ostream& out, const VoltageSweepResult& sweep);

}  // namespace nanostore
