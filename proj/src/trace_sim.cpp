#include "nanostore/trace_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nanostore/error.hpp"

namespace nanostore {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::BilevelComplete: return "bilevel_complete";
    case EventKind::CompleteUnresolved: return "complete_unresolved";
    case EventKind::Incomplete: return "incomplete";
  }
  return "?";
}

EventKind event_kind_from_string(const std::string& s) {
  if (s == "bilevel_complete") return EventKind::BilevelComplete;
  if (s == "complete_unresolved") return EventKind::CompleteUnresolved;
  if (s == "incomplete") return EventKind::Incomplete;
  throw ConfigError("unknown event kind '" + s + "'");
}

const char* to_string(PoreStatus s) {
  switch (s) {
    case PoreStatus::Open: return "open";
    case PoreStatus::Translocating: return "translocating";
    case PoreStatus::Clogged: return "clogged";
    case PoreStatus::GatingClosed: return "gating_closed";
  }
  return "?";
}

int PoreEnsembleState::n_open() const {
  return static_cast<int>(std::count(status.begin(), status.end(), PoreStatus::Open));
}

std::size_t first_sample_at_or_after(double t, double start_time_s, double sample_rate_hz) {
  const double x = (t - start_time_s) * sample_rate_hz;
  if (x <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(x - 1e-7));
}

EventRecord draw_event(const MoleculeSpec& mol, const ChannelParams& p, Rng& rng,
                       const EventOverrides& force) {
  if (mol.empty()) throw DomainError("cannot translocate an empty molecule");

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double u_orient = u01(rng);
  const double u_kind = u01(rng);

  EventRecord ev;
  ev.entry_end = force.entry_end.value_or(
      u_orient < p.p_orientation_3prime_first ? EntryEnd::ThreePrime : EntryEnd::FivePrime);

  const double p_bi = p.voltage_mv >= p.v_bilevel_min_mv ? p.p_bilevel : 0.0;
  if (force.kind) {
    ev.kind = *force.kind;
  } else if (u_kind < p_bi) {
    ev.kind = EventKind::BilevelComplete;
  } else if (u_kind < std::max(p_bi, p.p_complete)) {
    ev.kind = EventKind::CompleteUnresolved;
  } else {
    ev.kind = EventKind::Incomplete;
  }
  if (ev.kind == EventKind::BilevelComplete && mol.run_count() < 2) {
    ev.kind = EventKind::CompleteUnresolved;
  }

  // Runs in the order they pass the constriction.
  std::vector<Run> order = mol.runs();
  if (ev.entry_end == EntryEnd::ThreePrime) std::reverse(order.begin(), order.end());

  const double i_open = open_current(p, p.voltage_mv);
  const auto n_bases = static_cast<double>(mol.base_count());

  if (ev.kind == EventKind::Incomplete) {
    const double traversed = 1.0 - u01(rng);  // (0, 1]
    const double n_trunc = std::max(1.0, std::ceil(traversed * n_bases));
    ev.duration_s = dwell_time(p, p.voltage_mv, n_trunc, rng);
    const Base entering = order.front().base;
    const double level = blockade_level(p, entering, ev.entry_end, rng);
    ev.segments.push_back({entering, i_open * level, ev.duration_s});
    return ev;
  }

  ev.duration_s = dwell_time(p, p.voltage_mv, n_bases, rng);
  ev.segments.reserve(order.size());
  double elapsed = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const double d = (i + 1 == order.size())
                         ? ev.duration_s - elapsed
                         : ev.duration_s * static_cast<double>(order[i].count) / n_bases;
    elapsed += d;
    const double level = blockade_level(p, order[i].base, ev.entry_end, rng);
    ev.segments.push_back({order[i].base, i_open * level, d});
  }
  if (ev.kind == EventKind::CompleteUnresolved) {
    double weighted = 0.0;
    for (const auto& s : ev.segments) weighted += s.level_pa * s.duration_s;
    const double mean = weighted / ev.duration_s;
    for (auto& s : ev.segments) s.level_pa = mean;
  }
  return ev;
}

void render_event(const EventRecord& ev, double trace_start_s, double fs,
                  std::span<double> current) {
  struct Group {
    std::size_t begin;
    std::size_t end;
    double weighted;  // sum level * duration
    double duration;
  };
  std::vector<Group> groups;
  Group open{0, 0, 0.0, 0.0};
  bool have_open = false;
  double t = ev.start_s;
  for (std::size_t i = 0; i < ev.segments.size(); ++i) {
    const auto& seg = ev.segments[i];
    const double b = (i + 1 == ev.segments.size()) ? ev.end_s() : t + seg.duration_s;
    const std::size_t s = first_sample_at_or_after(t, trace_start_s, fs);
    const std::size_t e = std::max(s, first_sample_at_or_after(b, trace_start_s, fs));
    t = b;
    if (!have_open) {
      open = {s, e, 0.0, 0.0};
      have_open = true;
    }
    open.end = e;
    open.weighted += seg.level_pa * seg.duration_s;
    open.duration += seg.duration_s;
    if (open.end - open.begin >= 2) {
      groups.push_back(open);
      have_open = false;
    }
  }
  if (have_open) {
    if (!groups.empty()) {
      auto& last = groups.back();
      last.end = open.end;
      last.weighted += open.weighted;
      last.duration += open.duration;
    } else {
      groups.push_back(open);
    }
  }
  for (const auto& g : groups) {
    if (g.duration <= 0.0) continue;
    const double level = g.weighted / g.duration;
    const std::size_t e = std::min(g.end, current.size());
    for (std::size_t i = g.begin; i < e; ++i) current[i] = level;
  }
}

SimulatedEvent simulate_event(const MoleculeSpec& mol, const ChannelParams& p, Rng& rng,
                              const EventOverrides& force) {
  SimulatedEvent out;
  out.record = draw_event(mol, p, rng, force);
  const auto n = first_sample_at_or_after(out.record.duration_s, 0.0, p.sample_rate_hz);
  std::vector<double> cur(n, 0.0);
  render_event(out.record, 0.0, p.sample_rate_hz, cur);
  out.fragment.resize(n);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double x = cur[i];
    if (p.noise_sigma_open_pa > 0.0) x += p.noise_sigma_open_pa * noise(rng);
    out.fragment[i] = static_cast<float>(x);
  }
  return out;
}

namespace {

// Index of the interval containing t, if any. Intervals sorted, disjoint.
std::optional<std::size_t> containing(const std::vector<TimeInterval>& v, double t) {
  auto it = std::upper_bound(v.begin(), v.end(), t,
                             [](double x, const TimeInterval& iv) { return x < iv.start_s; });
  if (it == v.begin()) return std::nullopt;
  --it;
  if (t < it->end_s) return static_cast<std::size_t>(it - v.begin());
  return std::nullopt;
}

double next_boundary(const std::vector<TimeInterval>& v, double t) {
  double next = std::numeric_limits<double>::infinity();
  if (auto i = containing(v, t)) next = v[*i].end_s;
  auto it = std::upper_bound(v.begin(), v.end(), t,
                             [](double x, const TimeInterval& iv) { return x < iv.start_s; });
  if (it != v.end()) next = std::min(next, it->start_s);
  return next;
}

void insert_interval(std::vector<TimeInterval>& v, TimeInterval iv) {
  if (!(iv.end_s > iv.start_s)) return;
  auto it = std::lower_bound(v.begin(), v.end(), iv.start_s,
                             [](const TimeInterval& a, double x) { return a.start_s < x; });
  v.insert(it, iv);
  std::vector<TimeInterval> merged;
  merged.reserve(v.size());
  for (const auto& x : v) {
    if (!merged.empty() && x.start_s <= merged.back().end_s) {
      merged.back().end_s = std::max(merged.back().end_s, x.end_s);
    } else {
      merged.push_back(x);
    }
  }
  v = std::move(merged);
}

struct PoreRuntime {
  Rng rng;
  double busy_until = -1.0;
  double dead_until = -1.0;
};

PoreStatus status_of(const PoreTimeline& tl, const PoreRuntime& rt, double t) {
  if (containing(tl.gating_closed, t)) return PoreStatus::GatingClosed;
  if (containing(tl.clogged, t)) return PoreStatus::Clogged;
  if (t < rt.busy_until) return PoreStatus::Translocating;
  return PoreStatus::Open;
}

}  // namespace

PoreEnsembleState Schedule::state_at(double t) const {
  PoreEnsembleState st;
  for (const auto& tl : pores) {
    PoreStatus s = PoreStatus::Open;
    if (containing(tl.gating_closed, t)) {
      s = PoreStatus::GatingClosed;
    } else if (containing(tl.clogged, t)) {
      s = PoreStatus::Clogged;
    } else {
      auto it = std::upper_bound(tl.events.begin(), tl.events.end(), t,
                                 [&](double x, std::size_t idx) { return x < events[idx].start_s; });
      if (it != tl.events.begin() && t < events[*std::prev(it)].end_s()) {
        s = PoreStatus::Translocating;
      }
    }
    st.status.push_back(s);
  }
  return st;
}

Schedule schedule_ensemble(const ChannelParams& p, const EnsembleConfig& ens, double duration_s,
                           std::span<const MoleculeSpec> molecules, std::uint64_t seed,
                           const EventOverrides& force) {
  if (!(duration_s > 0.0)) throw DomainError("trace duration must be > 0");
  if (ens.n_pores < 1) throw DomainError("ensemble needs at least one pore");
  if (molecules.empty()) throw DomainError("no molecules to translocate");
  for (const auto& m : molecules) {
    if (m.empty()) throw DomainError("cannot translocate an empty molecule");
  }

  Schedule s;
  s.duration_s = duration_s;
  s.voltage_mv = p.voltage_mv;
  const auto n = static_cast<std::size_t>(ens.n_pores);
  s.pores.resize(n);
  std::vector<PoreRuntime> rt;
  rt.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rt.push_back({make_stream(seed, "pore", i)});
    Rng gating_rng = make_stream(seed, "gating", i);
    double t = 0.0;
    for (const auto& g : gating_sequence(p, duration_s, gating_rng)) {
      if (!g.open) s.pores[i].gating_closed.push_back({t, t + g.dwell_s});
      t += g.dwell_s;
    }
  }
  for (const auto& c : ens.clog_schedule) {
    if (c.pore < 0 || c.pore >= ens.n_pores) {
      throw ConfigError("clog schedule names pore " + std::to_string(c.pore) + " of " +
                        std::to_string(ens.n_pores));
    }
    insert_interval(s.pores[static_cast<std::size_t>(c.pore)].clogged, {c.start_s, c.end_s});
  }

  const bool can_translocate = p.voltage_mv > 0.0;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<PoreStatus> status(n);
  double t = 0.0;
  while (t < duration_s) {
    int n_open = 0;
    double next = duration_s;
    for (std::size_t i = 0; i < n; ++i) {
      status[i] = status_of(s.pores[i], rt[i], t);
      if (status[i] == PoreStatus::Open) ++n_open;
      next = std::min({next, next_boundary(s.pores[i].gating_closed, t),
                       next_boundary(s.pores[i].clogged, t)});
      if (rt[i].busy_until > t) next = std::min(next, rt[i].busy_until);
      if (rt[i].dead_until > t) next = std::min(next, rt[i].dead_until);
    }

    int winner = -1;
    double t_capture = next;
    if (can_translocate) {
      const double rate = per_pore_capture_rate(p, p.voltage_mv, n_open);
      for (std::size_t i = 0; i < n; ++i) {
        if (status[i] != PoreStatus::Open || t < rt[i].dead_until || rate <= 0.0) continue;
        std::exponential_distribution<double> wait(rate);
        const double ta = t + wait(rt[i].rng);
        if (ta < t_capture) {
          t_capture = ta;
          winner = static_cast<int>(i);
        }
      }
    }
    if (winner < 0) {
      t = next;
      continue;
    }

    auto& pore = rt[static_cast<std::size_t>(winner)];
    std::size_t mol_index = 0;
    if (molecules.size() > 1) {
      std::uniform_int_distribution<std::size_t> pick(0, molecules.size() - 1);
      mol_index = pick(pore.rng);
    }
    EventRecord ev = draw_event(molecules[mol_index], p, pore.rng, force);
    ev.start_s = t_capture;
    ev.pore = winner;
    ev.molecule_id = static_cast<int>(mol_index);
    pore.busy_until = ev.end_s();
    pore.dead_until = ev.end_s() + p.capture_dead_time_s;
    if (p.clog_probability > 0.0 && u01(pore.rng) < p.clog_probability) {
      std::exponential_distribution<double> clog_len(1.0 / p.clog_mean_duration_s);
      insert_interval(s.pores[static_cast<std::size_t>(winner)].clogged,
                      {ev.end_s(), ev.end_s() + clog_len(pore.rng)});
    }
    s.pores[static_cast<std::size_t>(winner)].events.push_back(s.events.size());
    s.events.push_back(std::move(ev));
    t = t_capture;
  }
  return s;
}

Trace render_trace(const Schedule& s, const ChannelParams& p, std::uint64_t seed) {
  Trace tr;
  tr.sample_rate_hz = p.sample_rate_hz;
  tr.start_time_s = 0.0;
  const auto n = static_cast<std::size_t>(std::llround(s.duration_s * p.sample_rate_hz));
  const double i_open = open_current(p, s.voltage_mv);

  std::vector<double> total(n, 0.0);
  std::vector<std::uint8_t> clog_mask(n, 0);
  std::vector<double> pore(n);
  auto fill = [&](const TimeInterval& iv, double value, bool clog) {
    const auto a = std::min(n, first_sample_at_or_after(iv.start_s, 0.0, p.sample_rate_hz));
    const auto b = std::min(n, first_sample_at_or_after(iv.end_s, 0.0, p.sample_rate_hz));
    for (std::size_t i = a; i < b; ++i) {
      pore[i] = value;
      if (clog) clog_mask[i] = 1;
    }
  };
  for (const auto& tl : s.pores) {
    std::fill(pore.begin(), pore.end(), i_open);
    for (auto idx : tl.events) render_event(s.events[idx], 0.0, p.sample_rate_hz, pore);
    for (const auto& iv : tl.clogged) fill(iv, i_open * p.clog_residual_fraction, true);
    for (const auto& iv : tl.gating_closed) fill(iv, 0.0, false);
    for (std::size_t i = 0; i < n; ++i) total[i] += pore[i];
  }

  tr.samples.resize(n);
  Rng rng = make_stream(seed, "noise");
  std::normal_distribution<double> noise(0.0, 1.0);
  const double sigma = p.noise_sigma_open_pa;
  for (std::size_t i = 0; i < n; ++i) {
    double x = total[i];
    if (sigma > 0.0) x += sigma * (clog_mask[i] ? p.noise_clog_multiplier : 1.0) * noise(rng);
    tr.samples[i] = static_cast<float>(x);
  }
  return tr;
}

SimulatedTrace simulate_ensemble(const ChannelParams& p, const EnsembleConfig& ens,
                                 double duration_s, std::span<const MoleculeSpec> molecules,
                                 Rng& rng, const EventOverrides& force) {
  const std::uint64_t seed = rng();
  Schedule s = schedule_ensemble(p, ens, duration_s, molecules, seed, force);
  SimulatedTrace out;
  out.trace = render_trace(s, p, seed);
  out.events = std::move(s.events);
  return out;
}

SimulatedTrace simulate_trace(const ChannelParams& p, double duration_s,
                              std::span<const MoleculeSpec> molecules, Rng& rng,
                              const EventOverrides& force) {
  return simulate_ensemble(p, EnsembleConfig{}, duration_s, molecules, rng, force);
}

SimulatedTrace simulate_trace(const ChannelParams& p, double duration_s, const MoleculeSpec& mol,
                              Rng& rng, const EventOverrides& force) {
  return simulate_trace(p, duration_s, std::span<const MoleculeSpec>(&mol, 1), rng, force);
}

}  // namespace nanostore
