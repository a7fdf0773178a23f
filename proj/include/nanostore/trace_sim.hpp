#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nanostore/channel_model.hpp"
#include "nanostore/codec.hpp"
#include "nanostore/rng.hpp"

namespace nanostore {

enum class EventKind { BilevelComplete, CompleteUnresolved, Incomplete };

const char* to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);
inline bool is_complete(EventKind k) { return k != EventKind::Incomplete; }

/// Uniformly sampled current record.
struct Trace {
  double sample_rate_hz = 500e3;
  double start_time_s = 0.0;
  std::vector<float> samples;  // pA

  double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
  double time_of(std::size_t i) const {
    return start_time_s + static_cast<double>(i) / sample_rate_hz;
  }
};

/// Index of the first sample whose timestamp is >= t.
std::size_t first_sample_at_or_after(double t, double start_time_s, double sample_rate_hz);

struct Segment {
  Base base;
  double level_pa;
  double duration_s;
};

/// Ground truth for one translocation. Segments are in temporal order.
struct EventRecord {
  double start_s = 0.0;
  double duration_s = 0.0;
  EventKind kind = EventKind::Incomplete;
  EntryEnd entry_end = EntryEnd::ThreePrime;
  std::vector<Segment> segments;
  int molecule_id = 0;
  int pore = 0;

  double end_s() const { return start_s + duration_s; }
};

/// Forces applied on top of the sampled event mix (testing and roundtrips).
struct EventOverrides {
  std::optional<EventKind> kind;
  std::optional<EntryEnd> entry_end;
};

/// Draws one translocation (start at 0) without rendering it.
EventRecord draw_event(const MoleculeSpec& mol, const ChannelParams& p, Rng& rng,
                       const EventOverrides& force = {});

struct SimulatedEvent {
  EventRecord record;
  std::vector<float> fragment;  // event samples, first sample at t = 0
};

SimulatedEvent simulate_event(const MoleculeSpec& mol, const ChannelParams& p, Rng& rng,
                              const EventOverrides& force = {});

/// Writes the event's piecewise-constant current into `current`, whose
/// first element is the sample at `trace_start_s`. Segments shorter than
/// two samples are merged into a duration-weighted level.
void render_event(const EventRecord& ev, double trace_start_s, double sample_rate_hz,
                  std::span<double> current);

enum class PoreStatus { Open, Translocating, Clogged, GatingClosed };

const char* to_string(PoreStatus s);

struct PoreEnsembleState {
  std::vector<PoreStatus> status;

  int n_pores() const { return static_cast<int>(status.size()); }
  int n_open() const;
};

struct ClogWindow {
  int pore = 0;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct EnsembleConfig {
  int n_pores = 1;
  std::vector<ClogWindow> clog_schedule;
};

struct TimeInterval {
  double start_s;
  double end_s;
};

/// Per-pore occupancy timeline. Intervals are sorted and non-overlapping
/// within each list.
struct PoreTimeline {
  std::vector<TimeInterval> gating_closed;
  std::vector<TimeInterval> clogged;
  std::vector<std::size_t> events;  // indices into Schedule::events
};

/// Event schedule of a simulated recording, before sample synthesis.
struct Schedule {
  double duration_s = 0.0;
  double voltage_mv = 0.0;
  std::vector<EventRecord> events;  // sorted by start
  std::vector<PoreTimeline> pores;

  PoreEnsembleState state_at(double t) const;
};

/// Poisson captures with per-pore cooperativity, gating and clogs. Each pore
/// owns its RNG streams derived from `seed`.
Schedule schedule_ensemble(const ChannelParams& p, const EnsembleConfig& ens, double duration_s,
                           std::span<const MoleculeSpec> molecules, std::uint64_t seed,
                           const EventOverrides& force = {});

/// Sums pore currents and adds Gaussian noise (inflated while any pore is clogged).
Trace render_trace(const Schedule& s, const ChannelParams& p, std::uint64_t seed);

struct SimulatedTrace {
  Trace trace;
  std::vector<EventRecord> events;
};

SimulatedTrace simulate_trace(const ChannelParams& p, double duration_s, const MoleculeSpec& mol,
                              Rng& rng, const EventOverrides& force = {});

SimulatedTrace simulate_trace(const ChannelParams& p, double duration_s,
                              std::span<const MoleculeSpec> molecules, Rng& rng,
                              const EventOverrides& force = {});

SimulatedTrace simulate_ensemble(const ChannelParams& p, const EnsembleConfig& ens,
                                 double duration_s, std::span<const MoleculeSpec> molecules,
                                 Rng& rng, const EventOverrides& force = {});

}  // namespace nanostore
