#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "nanostore/trace_sim.hpp"

namespace nanostore {

// Binary layout, all little-endian:
//   0  char[4]  magic "NPTR"
//   4  u32      version (1)
//   8  f64      sample rate, Hz
//   16 u64      sample count
//   24 f32[n]   samples, pA
inline constexpr char kTraceMagic[4] = {'N', 'P', 'T', 'R'};
inline constexpr std::uint32_t kTraceVersion = 1;
inline constexpr std::size_t kTraceHeaderBytes = 24;

void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);  // throws FormatError with the byte offset

void write_trace(const std::string& path, const Trace& trace);
Trace read_trace(const std::string& path);

// "# sample_rate_hz=..., start_time_s=..." then "time_s,current_pA" rows.
void write_trace_csv(std::ostream& out, const Trace& trace);
Trace read_trace_csv(std::istream& in);

void write_trace_csv(const std::string& path, const Trace& trace);
Trace read_trace_csv(const std::string& path);

/// Dispatches on the extension (".csv" or binary otherwise).
Trace read_trace_any(const std::string& path);

}  // namespace nanostore
