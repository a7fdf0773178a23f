#pragma once

// Batch kernels with a serial reference path and an OpenMP path. Both paths
// derive one RNG stream per work item from the seed, so they return
// identical results regardless of thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nanostore/analysis.hpp"
#include "nanostore/channel_model.hpp"
#include "nanostore/detector.hpp"
#include "nanostore/trace_sim.hpp"

namespace nanostore::kernels {

enum class Backend { Serial, OpenMP };

/// Exhaustive split recomputing every candidate's squared error from
/// scratch: O(n^2). Reference for best_split.
SplitResult best_split_reference(std::span<const float> samples, std::size_t min_segment);

/// n independent translocations; item i uses stream ("event", i).
std::vector<EventRecord> draw_events(const MoleculeSpec& mol, const ChannelParams& p,
                                     std::size_t n, std::uint64_t seed,
                                     const EventOverrides& force, Backend backend);

std::vector<DetectedEvent> segment_intervals(const Trace& trace,
                                             std::span<const SampleInterval> intervals,
                                             double baseline_pa, const DetectorConfig& cfg,
                                             Backend backend);

struct Trial {
  std::vector<EventRecord> truth;
  std::vector<DetectedEvent> detected;
  double duration_s = 0.0;
};

/// Simulate-then-detect over independent traces; trace i uses stream ("trial", i).
std::vector<Trial> run_trials(const ChannelParams& p, std::span<const MoleculeSpec> molecules,
                              std::size_t n_traces, double duration_s, std::uint64_t seed,
                              const EventOverrides& force, const DetectorConfig& cfg,
                              Backend backend);

/// One simulated recording per voltage; point i uses stream ("sweep", i).
VoltageSweepResult voltage_sweep(const ChannelParams& p, std::span<const double> voltages_mv,
                                 double duration_s, const MoleculeSpec& mol, std::uint64_t seed,
                                 const DetectorConfig& cfg, Backend backend);

int max_threads();

}  // namespace nanostore::kernels
