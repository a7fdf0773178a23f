#include <cmath>

#include "doctest.h"
#include "nanostore/detector.hpp"
#include "nanostore/error.hpp"
#include "nanostore/kernels.hpp"

using namespace nanostore;

namespace {

Trace flat_trace(double level, std::size_t n, double fs = 500e3) {
  Trace t;
  t.sample_rate_hz = fs;
  t.samples.assign(n, static_cast<float>(level));
  return t;
}

EventRecord two_level(double start, double d1, double l1, double d2, double l2) {
  EventRecord ev;
  ev.start_s = start;
  ev.duration_s = d1 + d2;
  ev.kind = d2 > 0 ? EventKind::BilevelComplete : EventKind::CompleteUnresolved;
  ev.segments = {{Base::C, l1, d1}};
  if (d2 > 0) ev.segments.push_back({Base::A, l2, d2});
  return ev;
}

// Renders events over an open level and adds optional white noise.
Trace build_trace(const std::vector<EventRecord>& events, double open_pa, double duration_s,
                  double sigma, std::uint64_t seed) {
  const double fs = 500e3;
  std::vector<double> cur(static_cast<std::size_t>(duration_s * fs), open_pa);
  for (const auto& ev : events) render_event(ev, 0.0, fs, cur);
  Rng rng(seed);
  std::normal_distribution<double> n01;
  Trace t;
  t.sample_rate_hz = fs;
  for (double x : cur) t.samples.push_back(static_cast<float>(x + sigma * n01(rng)));
  return t;
}

DetectedEvent with_levels(std::initializer_list<std::pair<double, double>> lv) {
  DetectedEvent ev;
  ev.baseline_pa = 250;
  for (auto [norm, dur] : lv) {
    ev.levels.push_back({norm * 250, dur, norm});
    ev.duration_s += dur;
  }
  return ev;
}

}  // namespace

TEST_CASE("baseline of flat and sparse-event traces") {
  CHECK(estimate_baseline(flat_trace(250, 1000)) == doctest::Approx(250));
  const Trace one = build_trace({two_level(0.002, 100e-6, 92.5, 50e-6, 42.5)}, 250, 0.01, 0, 1);
  CHECK(estimate_baseline(one) == doctest::Approx(250));
  CHECK_THROWS_AS(estimate_baseline(Trace{}), DomainError);
}

TEST_CASE("baseline of a noisy simulated trace") {
  ChannelParams p;
  Rng rng(4);
  const auto sim = simulate_trace(p, 1.0, MoleculeSpec::parse("A50C100"), rng);
  CHECK(std::abs(estimate_baseline(sim.trace) - 250.0) <= 1.0);
}

TEST_CASE("pure baseline has no events") {
  const Trace t = build_trace({}, 250, 0.05, 5, 2);
  CHECK(detect_events(t, estimate_baseline(t), DetectorConfig{}).empty());
}

TEST_CASE("noiseless events are found with sample-exact boundaries") {
  const std::vector<EventRecord> evs = {
      two_level(0.0010, 100e-6, 92.5, 50e-6, 42.5), two_level(0.0030, 50e-6, 30, 100e-6, 50),
      two_level(0.0050, 150e-6, 60, 0, 0), two_level(0.00701, 64e-6, 80, 40e-6, 40)};
  const Trace t = build_trace(evs, 250, 0.01, 0, 0);
  const auto iv = detect_events(t, 250, DetectorConfig{});
  REQUIRE(iv.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(iv[i].begin == first_sample_at_or_after(evs[i].start_s, 0, 500e3));
    CHECK(iv[i].end == first_sample_at_or_after(evs[i].end_s(), 0, 500e3));
  }
}

TEST_CASE("short dips and short gaps") {
  DetectorConfig cfg;
  Trace t = flat_trace(250, 400);
  for (std::size_t i = 100; i < 103; ++i) t.samples[i] = 50;  // too short: dropped
  for (std::size_t i = 200; i < 230; ++i) t.samples[i] = 50;
  for (std::size_t i = 232; i < 260; ++i) t.samples[i] = 50;  // 2-sample gap: merged
  const auto iv = detect_events(t, 250, cfg);
  REQUIRE(iv.size() == 1);
  CHECK(iv[0] == SampleInterval{200, 260});
  CHECK_THROWS_AS(detect_events(t, 0, cfg), DomainError);
}

TEST_CASE("four closures, three of them bilevel") {
  const std::vector<EventRecord> evs = {
      two_level(0.002, 100e-6, 92.5, 50e-6, 42.5), two_level(0.004, 100e-6, 92.5, 50e-6, 42.5),
      two_level(0.006, 150e-6, 70, 0, 0), two_level(0.008, 50e-6, 30, 100e-6, 50)};
  const Trace t = build_trace(evs, 250, 0.01, 5, 3);
  const auto det = detect_and_segment(t, DetectorConfig{});
  REQUIRE(det.size() == 4);
  int bilevel = 0;
  for (const auto& d : det) bilevel += d.bilevel() ? 1 : 0;
  CHECK(bilevel == 3);
  CHECK_FALSE(det[2].bilevel());
}

TEST_CASE("exact two-plateau input splits at the boundary") {
  std::vector<float> x(50, 92.5f);
  x.insert(x.end(), 25, 42.5f);
  const LevelFit f = segment_event(x, DetectorConfig{});
  CHECK(f.n_levels == 2);
  CHECK(f.change_point == 50);
  CHECK(f.mean[0] == doctest::Approx(92.5));
  CHECK(f.mean[1] == doctest::Approx(42.5));
  const SplitResult ref = kernels::best_split_reference(x, 2);
  CHECK(ref.k == 50);
  CHECK(best_split(x, 2).k == ref.k);
}

TEST_CASE("constant input stays one level") {
  const std::vector<float> x(60, 70.0f);
  const LevelFit f = segment_event(x, DetectorConfig{});
  CHECK(f.n_levels == 1);
  CHECK(f.mean[0] == doctest::Approx(70.0));
}

TEST_CASE("plateaus closer than three standard deviations are rejected") {
  Rng rng(12);
  std::normal_distribution<double> n01;
  int two = 0;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<float> x;
    for (int i = 0; i < 200; ++i) x.push_back(static_cast<float>(60 + 5 * n01(rng)));
    for (int i = 0; i < 200; ++i) x.push_back(static_cast<float>(70 + 5 * n01(rng)));
    two += segment_event(x, DetectorConfig{}).n_levels == 2 ? 1 : 0;
  }
  CHECK(two == 0);
}

TEST_CASE("too few samples fall back to a low-confidence single level") {
  const std::vector<float> x = {90, 90, 40};
  const LevelFit f = segment_event(x, DetectorConfig{});
  CHECK(f.n_levels == 1);
  CHECK(f.low_confidence);
}

TEST_CASE("fast split matches the exhaustive oracle") {
  Rng rng(13);
  std::normal_distribution<double> n01;
  std::uniform_int_distribution<int> len(4, 150);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = len(rng);
    const int k = std::uniform_int_distribution<int>(1, n - 1)(rng);
    std::vector<float> x;
    for (int i = 0; i < n; ++i) x.push_back(static_cast<float>((i < k ? 90 : 40) + 8 * n01(rng)));
    const SplitResult a = best_split(x, 2);
    const SplitResult b = kernels::best_split_reference(x, 2);
    REQUIRE(a.k == b.k);
    REQUIRE(a.sse == doctest::Approx(b.sse).epsilon(1e-6));
  }
}

TEST_CASE("classification infers orientation and decodes") {
  const ChannelParams p;
  const RunEncoding s = a50c100_scheme();
  const DetectorConfig cfg;

  DetectedEvent three = with_levels({{0.37, 100e-6}, {0.17, 50e-6}});
  classify_and_decode(three, p, s, cfg);
  CHECK(three.status == DecodeStatus::Decoded);
  CHECK(three.entry_end == EntryEnd::ThreePrime);
  CHECK(three.bases == std::vector<Base>{Base::C, Base::A});
  CHECK(three.bits.to_string() == "01");

  DetectedEvent five = with_levels({{0.12, 50e-6}, {0.20, 100e-6}});
  classify_and_decode(five, p, s, cfg);
  CHECK(five.status == DecodeStatus::Decoded);
  CHECK(five.entry_end == EntryEnd::FivePrime);
  CHECK(five.bits.to_string() == "01");

  DetectedEvent odd = with_levels({{0.50, 150e-6}});
  classify_and_decode(odd, p, s, cfg);
  CHECK(odd.status == DecodeStatus::NoLevelMatch);
  CHECK(odd.bits.empty());

  DetectedEvent half = with_levels({{0.37, 100e-6}, {0.17, 75e-6}});
  classify_and_decode(half, p, s, cfg);
  CHECK(half.status == DecodeStatus::AmbiguousRunLength);

  DetectedEvent mismatch = with_levels({{0.37, 100e-6}, {0.17, 50e-6}});
  classify_and_decode(mismatch, p, RunEncoding({Base::A, 50}, {Base::G, 100}), cfg);
  CHECK(mismatch.status == DecodeStatus::SchemeMismatch);
}

TEST_CASE("single-level events decode from their duration") {
  const ChannelParams p;
  DetectedEvent ev = with_levels({{0.17, 100e-6}});
  classify_and_decode(ev, p, a50c100_scheme(), DetectorConfig{});
  CHECK(ev.status == DecodeStatus::Decoded);
  CHECK(ev.bits.to_string() == "00");
}

TEST_CASE("detector config validation") {
  DetectorConfig c;
  CHECK_NOTHROW(c.validate());
  c.event_threshold_fraction = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = DetectorConfig{};
  c.min_event_samples = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("decode status names") {
  for (auto s : {DecodeStatus::NotAttempted, DecodeStatus::Decoded, DecodeStatus::NoLevelMatch,
                 DecodeStatus::AmbiguousRunLength, DecodeStatus::SchemeMismatch}) {
    CHECK(decode_status_from_string(to_string(s)) == s);
  }
}
