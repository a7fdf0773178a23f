#include <sstream>

#include "doctest.h"
#include "nanostore/capacity.hpp"
#include "nanostore/error.hpp"

using namespace nanostore;

TEST_CASE("areal and volumetric capacity") {
  ChipLayout c;
  CHECK(areal_capacity(c) == 1e12);
  CHECK(volumetric_capacity(c) == 1e15);
  CHECK(c.used_area_cm2() == doctest::Approx(1.0));

  ChipLayout one = c;
  one.n_parking_spots = 1;
  one.bytes_per_block = 1;
  CHECK(areal_capacity(one) == 1.0);

  ChipLayout twice = c;
  twice.n_parking_spots = 2e6;
  CHECK(areal_capacity(twice) == 2e12);

  ChipLayout thick = c;
  thick.layer_thickness_um = 1e4;
  CHECK(volumetric_capacity(thick) == doctest::Approx(areal_capacity(thick)));
  thick.layer_thickness_um = 20;
  CHECK(volumetric_capacity(thick) == doctest::Approx(5e14));
}

TEST_CASE("layout validation") {
  ChipLayout c;
  CHECK_NOTHROW(c.validate());
  c.plumbing_area_cm2 = 0.7;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ChipLayout{};
  c.n_stations = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("read rates") {
  const double r = read_rate(2, 150e-6);
  CHECK(r == doctest::Approx(13333.333));
  CHECK(r >= 12.0e3);
  CHECK(r <= 13.4e3);
  CHECK(read_rate(0, 150e-6) == 0.0);
  CHECK(per_base_rate(1e6, 1) == 1e6);
  CHECK(aggregate_rate(1e6, 1000) == 1e9);
  CHECK(aggregate_rate(1e6, 1) == 1e6);
  CHECK(aggregate_rate(r, 1000) == doctest::Approx(13.333e6).epsilon(1e-4));
  CHECK_THROWS_AS(read_rate(2, 0), DomainError);
}

TEST_CASE("transport time") {
  CHECK(transport_time(0.01, 10, 1e-2) == doctest::Approx(1e-3));
  CHECK(transport_time(0.01, 20, 1e-2) == doctest::Approx(0.5e-3));
  CHECK(transport_time(0.02, 10, 1e-2) == doctest::Approx(4e-3));
  CHECK_THROWS_AS(transport_time(0.01, 0, 1e-2), DomainError);
}

TEST_CASE("DVD stack height") {
  CHECK(dvd_stack_height(1e15, 9.4e9, 1.2e-3) == doctest::Approx(127.66).epsilon(1e-4));
  CHECK(dvd_stack_height(9.4e9, 9.4e9, 1.2e-3) == doctest::Approx(1.2e-3));
  CHECK(dvd_stack_height(2e15, 9.4e9, 1.2e-3) == doctest::Approx(255.3).epsilon(1e-4));
}

TEST_CASE("capacity report") {
  const CapacityReport r = capacity_report(CapacityInputs{});
  CHECK(r.areal_bytes_per_cm2 == 1e12);
  CHECK(r.volumetric_bytes_per_cm3 == 1e15);
  CHECK(r.area_budget_cm2 == doctest::Approx(1.0));
  CHECK(r.transport_time_s == doctest::Approx(1e-3));
  std::ostringstream text, csv;
  write_capacity_text(text, r);
  write_capacity_csv(csv, r);
  CHECK(text.str().find("1e+12") != std::string::npos);
  CHECK(text.str().find("1e+15") != std::string::npos);
  CHECK(csv.str().find("areal") != std::string::npos);
}
