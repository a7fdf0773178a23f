#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nanostore/channel_model.hpp"
#include "nanostore/codec.hpp"
#include "nanostore/trace_sim.hpp"

namespace nanostore {

struct DetectorConfig {
  double event_threshold_fraction = 0.65;
  std::size_t min_event_samples = 5;
  double bic_penalty_multiplier = 1.0;
  double level_match_tolerance = 0.08;
  // Shortest segment either side of a change point.
  std::size_t min_segment_samples = 2;
  // Largest allowed |estimated/scheme run length - nearest integer multiple|.
  double run_length_ambiguity = 0.4;

  void validate() const;  // throws ConfigError
};

/// Half-open sample range [begin, end).
struct SampleInterval {
  std::size_t begin;
  std::size_t end;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const SampleInterval&, const SampleInterval&) = default;
};

/// Open-channel current: mode of the sample histogram above half the maximum,
/// refined by a mean shift. Throws DomainError on an empty trace.
double estimate_baseline(const Trace& trace);

std::vector<SampleInterval> detect_events(const Trace& trace, double baseline_pa,
                                          const DetectorConfig& cfg);

struct LevelFit {
  int n_levels = 1;
  std::size_t change_point = 0;  // first sample of the second level
  double mean[2] = {0.0, 0.0};
  double sse_one = 0.0;          // residual sum of squares, 1-level model
  double sse_two = 0.0;          // best 2-level split
  double bic_one = 0.0;
  double bic_two = 0.0;
  double pooled_sd = 0.0;
  bool low_confidence = false;
};

// Best split of samples into [0, k) and [k, n) by total squared error.
struct SplitResult {
  std::size_t k = 0;
  double sse = 0.0;
};
SplitResult best_split(std::span<const float> samples, std::size_t min_segment);

LevelFit segment_event(std::span<const float> samples, const DetectorConfig& cfg);

enum class DecodeStatus {
  NotAttempted,
  Decoded,
  NoLevelMatch,
  AmbiguousRunLength,
  SchemeMismatch,
};

const char* to_string(DecodeStatus s);
DecodeStatus decode_status_from_string(const std::string& s);

struct DetectedLevel {
  double mean_pa = 0.0;
  double duration_s = 0.0;
  double normalized = 0.0;  // mean / baseline, inside (0, 1)
};

struct DetectedEvent {
  std::size_t start_index = 0;
  std::size_t end_index = 0;
  double start_s = 0.0;
  double duration_s = 0.0;
  double baseline_pa = 0.0;
  std::vector<DetectedLevel> levels;  // temporal order
  std::size_t change_index = 0;      // absolute sample index, bilevel only
  bool low_confidence = false;

  // Filled by classify_and_decode.
  std::optional<EntryEnd> entry_end;
  std::vector<Base> bases;  // temporal order, one per level
  DecodeStatus status = DecodeStatus::NotAttempted;
  BitBlock bits;

  bool bilevel() const { return levels.size() == 2; }
};

/// Baseline estimation, thresholding and per-event level fitting.
std::vector<DetectedEvent> detect_and_segment(const Trace& trace, const DetectorConfig& cfg);

DetectedEvent make_detected_event(const Trace& trace, SampleInterval iv, double baseline_pa,
                                  const DetectorConfig& cfg);

/// Matches levels to the blockade table, infers orientation and run lengths,
/// and decodes the canonical 5'->3' molecule. Updates `ev` in place.
void classify_and_decode(DetectedEvent& ev, const ChannelParams& p, const RunEncoding& scheme,
                         const DetectorConfig& cfg);

}  // namespace nanostore
