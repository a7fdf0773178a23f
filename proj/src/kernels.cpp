#include "nanostore/kernels.hpp"

#include <exception>
#include <limits>
#include <mutex>

#include <omp.h>

namespace nanostore::kernels {

namespace {

// Runs body(i) for i in [0, n), rethrowing the first exception on the caller.
template <typename Body>
void for_each_index(std::size_t n, Backend backend, Body&& body) {
  if (backend == Backend::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex m;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(m);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

SplitResult best_split_reference(std::span<const float> samples, std::size_t min_segment) {
  const std::size_t n = samples.size();
  if (min_segment < 1) min_segment = 1;
  SplitResult best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t k = min_segment; k + min_segment <= n; ++k) {
    double ml = 0.0;
    double mr = 0.0;
    for (std::size_t i = 0; i < k; ++i) ml += samples[i];
    for (std::size_t i = k; i < n; ++i) mr += samples[i];
    ml /= static_cast<double>(k);
    mr /= static_cast<double>(n - k);
    double sse = 0.0;
    for (std::size_t i = 0; i < k; ++i) sse += (samples[i] - ml) * (samples[i] - ml);
    for (std::size_t i = k; i < n; ++i) sse += (samples[i] - mr) * (samples[i] - mr);
    if (sse < best.sse) best = {k, sse};
  }
  return best;
}

std::vector<EventRecord> draw_events(const MoleculeSpec& mol, const ChannelParams& p,
                                     std::size_t n, std::uint64_t seed,
                                     const EventOverrides& force, Backend backend) {
  std::vector<EventRecord> out(n);
  for_each_index(n, backend, [&](std::size_t i) {
    Rng rng = make_stream(seed, "event", i);
    out[i] = draw_event(mol, p, rng, force);
  });
  return out;
}

std::vector<DetectedEvent> segment_intervals(const Trace& trace,
                                             std::span<const SampleInterval> intervals,
                                             double baseline_pa, const DetectorConfig& cfg,
                                             Backend backend) {
  std::vector<DetectedEvent> out(intervals.size());
  for_each_index(intervals.size(), backend, [&](std::size_t i) {
    out[i] = make_detected_event(trace, intervals[i], baseline_pa, cfg);
  });
  return out;
}

std::vector<Trial> run_trials(const ChannelParams& p, std::span<const MoleculeSpec> molecules,
                              std::size_t n_traces, double duration_s, std::uint64_t seed,
                              const EventOverrides& force, const DetectorConfig& cfg,
                              Backend backend) {
  std::vector<Trial> out(n_traces);
  for_each_index(n_traces, backend, [&](std::size_t i) {
    Rng rng = make_stream(seed, "trial", i);
    SimulatedTrace sim = simulate_trace(p, duration_s, molecules, rng, force);
    out[i].truth = std::move(sim.events);
    out[i].detected = detect_and_segment(sim.trace, cfg);
    out[i].duration_s = duration_s;
  });
  return out;
}

VoltageSweepResult voltage_sweep(const ChannelParams& p, std::span<const double> voltages_mv,
                                 double duration_s, const MoleculeSpec& mol, std::uint64_t seed,
                                 const DetectorConfig& cfg, Backend backend) {
  VoltageSweepResult out(voltages_mv.size());
  for_each_index(voltages_mv.size(), backend, [&](std::size_t i) {
    ChannelParams pv = p;
    pv.voltage_mv = voltages_mv[i];
    Rng rng = make_stream(seed, "sweep", i);
    SimulatedTrace sim = simulate_trace(pv, duration_s, mol, rng);
    const double baseline = estimate_baseline(sim.trace);
    const auto detected = detect_and_segment(sim.trace, cfg);

    SweepPoint& pt = out[i];
    pt.voltage_mv = pv.voltage_mv;
    pt.open_fraction = open_fraction(sim.trace, baseline, cfg.event_threshold_fraction);
    const EventRates r = event_rates(sim.events, duration_s);
    pt.complete_rate = r.complete_per_s;
    pt.incomplete_rate = r.incomplete_per_s;
    pt.total_rate = r.total_per_s;
    pt.scatter = dwell_blockage_scatter(detected);
    const ScatterPoint c = centroid(pt.scatter);
    pt.mean_dwell_s = c.dwell_s;
    pt.mean_blockage_pct = c.blockage_pct;
  });
  return out;
}

}  // namespace nanostore::kernels
