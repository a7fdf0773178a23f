#include "nanostore/capacity.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "nanostore/error.hpp"

namespace nanostore {

void ChipLayout::validate() const {
  const double fields[] = {n_parking_spots, spot_area_total_cm2, n_stations,
                           station_area_total_cm2, plumbing_area_cm2, chip_area_cm2,
                           bytes_per_block, layer_thickness_um};
  for (double f : fields) {
    if (!(f > 0.0)) throw ConfigError("chip layout fields must all be positive");
  }
  // 1e-9 relative slack absorbs decimal rounding of 0.25 + 0.1 + 0.65.
  if (used_area_cm2() > chip_area_cm2 * (1.0 + 1e-9)) {
    throw ConfigError("spot, station and plumbing areas exceed the chip area");
  }
}

double areal_capacity(const ChipLayout& layout) {
  layout.validate();
  return layout.n_parking_spots * layout.bytes_per_block / layout.chip_area_cm2;
}

double volumetric_capacity(const ChipLayout& layout) {
  return areal_capacity(layout) * (1e4 / layout.layer_thickness_um);
}

double read_rate(double bits_per_molecule, double dwell_s) {
  if (!(dwell_s > 0.0)) throw DomainError("dwell must be > 0");
  return bits_per_molecule / dwell_s;
}

double per_base_rate(double bases_per_s, double bits_per_base) {
  return bases_per_s * bits_per_base;
}

double aggregate_rate(double rate_bits_per_s, double n_stations) {
  if (n_stations < 1.0) throw DomainError("need at least one read station");
  return rate_bits_per_s * n_stations;
}

double transport_time(double distance_m, double voltage_v, double mobility) {
  if (!(distance_m > 0.0 && voltage_v > 0.0 && mobility > 0.0)) {
    throw DomainError("transport distance, voltage and mobility must be positive");
  }
  return distance_m * distance_m / (mobility * voltage_v);
}

double dvd_stack_height(double total_bytes, double bytes_per_disc, double disc_thickness_m) {
  if (!(total_bytes > 0.0 && bytes_per_disc > 0.0 && disc_thickness_m > 0.0)) {
    throw DomainError("disc stack inputs must be positive");
  }
  return std::ceil(total_bytes / bytes_per_disc) * disc_thickness_m;
}

CapacityReport capacity_report(const CapacityInputs& in) {
  CapacityReport r{};
  r.areal_bytes_per_cm2 = areal_capacity(in.layout);
  r.volumetric_bytes_per_cm3 = volumetric_capacity(in.layout);
  r.area_budget_cm2 = in.layout.used_area_cm2();
  r.molecule_read_rate_bps = read_rate(in.bits_per_molecule, in.molecule_dwell_s);
  r.per_base_rate_bps = per_base_rate(in.bases_per_s, in.bits_per_base);
  r.aggregate_molecule_rate_bps = aggregate_rate(r.molecule_read_rate_bps, in.layout.n_stations);
  r.aggregate_per_base_rate_bps = aggregate_rate(r.per_base_rate_bps, in.layout.n_stations);
  r.transport_time_s =
      transport_time(in.transport_distance_m, in.transport_voltage_v, in.mobility_m2_per_vs);
  r.dvd_stack_height_m = dvd_stack_height(in.dvd_total_bytes, in.dvd_bytes_per_disc,
                                          in.dvd_thickness_m);
  return r;
}

namespace {

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void write_capacity_text(std::ostream& out, const CapacityReport& r) {
  out << "areal capacity          " << g(r.areal_bytes_per_cm2) << " bytes/cm^2\n"
      << "volumetric capacity     " << g(r.volumetric_bytes_per_cm3) << " bytes/cm^3\n"
      << "area budget             " << g(r.area_budget_cm2) << " cm^2\n"
      << "molecule read rate      " << g(r.molecule_read_rate_bps) << " bit/s\n"
      << "per-base read rate      " << g(r.per_base_rate_bps) << " bit/s\n"
      << "aggregate (molecule)    " << g(r.aggregate_molecule_rate_bps) << " bit/s\n"
      << "aggregate (per-base)    " << g(r.aggregate_per_base_rate_bps) << " bit/s\n"
      << "transport time          " << g(r.transport_time_s) << " s\n"
      << "DVD stack height        " << g(r.dvd_stack_height_m) << " m\n";
}

void write_capacity_csv(std::ostream& out, const CapacityReport& r) {
  out << "quantity,value,unit\n"
      << "areal_capacity," << g(r.areal_bytes_per_cm2) << ",bytes/cm^2\n"
      << "volumetric_capacity," << g(r.volumetric_bytes_per_cm3) << ",bytes/cm^3\n"
      << "area_budget," << g(r.area_budget_cm2) << ",cm^2\n"
      << "molecule_read_rate," << g(r.molecule_read_rate_bps) << ",bit/s\n"
      << "per_base_rate," << g(r.per_base_rate_bps) << ",bit/s\n"
      << "aggregate_molecule_rate," << g(r.aggregate_molecule_rate_bps) << ",bit/s\n"
      << "aggregate_per_base_rate," << g(r.aggregate_per_base_rate_bps) << ",bit/s\n"
      << "transport_time," << g(r.transport_time_s) << ",s\n"
      << "dvd_stack_height," << g(r.dvd_stack_height_m) << ",m\n";
}

}  // namespace nanostore
