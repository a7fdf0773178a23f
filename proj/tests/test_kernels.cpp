#include "doctest.h"
#include "nanostore/kernels.hpp"

using namespace nanostore;

namespace {

bool same_events(const std::vector<EventRecord>& a, const std::vector<EventRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].start_s != b[i].start_s || a[i].duration_s != b[i].duration_s ||
        a[i].kind != b[i].kind || a[i].entry_end != b[i].entry_end ||
        a[i].segments.size() != b[i].segments.size()) {
      return false;
    }
    for (std::size_t k = 0; k < a[i].segments.size(); ++k) {
      if (a[i].segments[k].level_pa != b[i].segments[k].level_pa) return false;
    }
  }
  return true;
}

bool same_detections(const std::vector<DetectedEvent>& a, const std::vector<DetectedEvent>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].start_index != b[i].start_index || a[i].end_index != b[i].end_index ||
        a[i].change_index != b[i].change_index || a[i].levels.size() != b[i].levels.size()) {
      return false;
    }
    for (std::size_t k = 0; k < a[i].levels.size(); ++k) {
      if (a[i].levels[k].mean_pa != b[i].levels[k].mean_pa) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("serial and OpenMP event draws agree") {
  ChannelParams p;
  const MoleculeSpec m = MoleculeSpec::parse("A50C100");
  const auto s = kernels::draw_events(m, p, 3000, 9, {}, kernels::Backend::Serial);
  const auto o = kernels::draw_events(m, p, 3000, 9, {}, kernels::Backend::OpenMP);
  CHECK(same_events(s, o));
}

TEST_CASE("serial and OpenMP segmentation agree") {
  ChannelParams p;
  Rng rng(10);
  const auto sim = simulate_trace(p, 0.3, MoleculeSpec::parse("A50C100"), rng);
  const double base = estimate_baseline(sim.trace);
  const auto iv = detect_events(sim.trace, base, DetectorConfig{});
  const auto s = kernels::segment_intervals(sim.trace, iv, base, DetectorConfig{},
                                            kernels::Backend::Serial);
  const auto o = kernels::segment_intervals(sim.trace, iv, base, DetectorConfig{},
                                            kernels::Backend::OpenMP);
  CHECK(same_detections(s, o));
  CHECK(same_detections(s, detect_and_segment(sim.trace, DetectorConfig{})));
}

TEST_CASE("serial and OpenMP trials agree") {
  ChannelParams p;
  const MoleculeSpec m = MoleculeSpec::parse("A50C100");
  const auto s = kernels::run_trials(p, std::span(&m, 1), 4, 0.1, 3, {}, DetectorConfig{},
                                     kernels::Backend::Serial);
  const auto o = kernels::run_trials(p, std::span(&m, 1), 4, 0.1, 3, {}, DetectorConfig{},
                                     kernels::Backend::OpenMP);
  REQUIRE(s.size() == o.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(same_events(s[i].truth, o[i].truth));
    CHECK(same_detections(s[i].detected, o[i].detected));
  }
  CHECK_FALSE(same_events(s[0].truth, s[1].truth));
}

TEST_CASE("serial and OpenMP sweeps agree") {
  ChannelParams p;
  const std::vector<double> v = {90, 120, 150};
  const MoleculeSpec m = MoleculeSpec::parse("(AC)60");
  const auto s = kernels::voltage_sweep(p, v, 1.0, m, 4, DetectorConfig{}, kernels::Backend::Serial);
  const auto o = kernels::voltage_sweep(p, v, 1.0, m, 4, DetectorConfig{}, kernels::Backend::OpenMP);
  REQUIRE(s.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(s[i].voltage_mv == o[i].voltage_mv);
    CHECK(s[i].open_fraction == o[i].open_fraction);
    CHECK(s[i].total_rate == o[i].total_rate);
    CHECK(s[i].scatter.size() == o[i].scatter.size());
  }
}

TEST_CASE("exceptions inside parallel work reach the caller") {
  ChannelParams p;
  for (auto b : {kernels::Backend::Serial, kernels::Backend::OpenMP}) {
    CHECK_THROWS(kernels::draw_events(MoleculeSpec{}, p, 8, 1, {}, b));
  }
}

TEST_CASE("reference split handles edge sizes") {
  const std::vector<float> x = {1, 1, 5, 5};
  const SplitResult r = kernels::best_split_reference(x, 2);
  CHECK(r.k == 2);
  CHECK(r.sse == doctest::Approx(0.0));
  CHECK(kernels::max_threads() >= 1);
}
