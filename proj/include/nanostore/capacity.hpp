#pragma once

#include <cstdint>
#include <iosfwd>

namespace nanostore {

/// Surface budget of one storage layer (see README for the default numbers).
struct ChipLayout {
  double n_parking_spots = 1e6;
  double spot_area_total_cm2 = 0.25;
  double n_stations = 1000;
  double station_area_total_cm2 = 0.1;
  double plumbing_area_cm2 = 0.65;
  double chip_area_cm2 = 1.0;
  double bytes_per_block = 1e6;
  double layer_thickness_um = 10.0;

  double used_area_cm2() const {
    return spot_area_total_cm2 + station_area_total_cm2 + plumbing_area_cm2;
  }
  void validate() const;  // throws ConfigError
};

double areal_capacity(const ChipLayout& layout);      // bytes / cm^2
double volumetric_capacity(const ChipLayout& layout); // bytes / cm^3

double read_rate(double bits_per_molecule, double dwell_s);          // bits / s
double per_base_rate(double bases_per_s, double bits_per_base);      // bits / s
double aggregate_rate(double rate_bits_per_s, double n_stations);    // bits / s

/// Uniform field E = V/L, speed mu*E, so t = L^2 / (mu V).
double transport_time(double distance_m, double voltage_v, double mobility_m2_per_vs);

double dvd_stack_height(double total_bytes, double bytes_per_disc, double disc_thickness_m);

struct CapacityInputs {
  ChipLayout layout;
  double bits_per_molecule = 2.0;
  double molecule_dwell_s = 150e-6;
  double bases_per_s = 1e6;
  double bits_per_base = 1.0;
  double transport_distance_m = 0.01;
  double transport_voltage_v = 10.0;
  double mobility_m2_per_vs = 1e-2;
  double dvd_total_bytes = 1e15;
  double dvd_bytes_per_disc = 9.4e9;
  double dvd_thickness_m = 1.2e-3;
};

struct CapacityReport {
  double areal_bytes_per_cm2;
  double volumetric_bytes_per_cm3;
  double area_budget_cm2;
  double molecule_read_rate_bps;
  double per_base_rate_bps;
  double aggregate_molecule_rate_bps;
  double aggregate_per_base_rate_bps;
  double transport_time_s;
  double dvd_stack_height_m;
};

CapacityReport capacity_report(const CapacityInputs& in);
void write_capacity_text(std::ostream& out, const CapacityReport& r);
void write_capacity_csv(std::ostream& out, const CapacityReport& r);

}  // namespace nanostore
