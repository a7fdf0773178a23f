#include "nanostore/trace_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nanostore/error.hpp"

namespace nanostore {

namespace {

template <typename U>
void put_le(std::ostream& out, U v) {
  std::array<char, sizeof(U)> b{};
  for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffU);
  out.write(b.data(), b.size());
}

template <typename U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

}  // namespace

void write_trace(std::ostream& out, const Trace& trace) {
  out.write(kTraceMagic, 4);
  put_le<std::uint32_t>(out, kTraceVersion);
  put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(trace.sample_rate_hz));
  put_le<std::uint64_t>(out, trace.samples.size());
  std::vector<char> buf(trace.samples.size() * 4);
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto u = std::bit_cast<std::uint32_t>(trace.samples[i]);
    for (std::size_t k = 0; k < 4; ++k) buf[4 * i + k] = static_cast<char>((u >> (8 * k)) & 0xffU);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError(0, "failed writing trace");
}

Trace read_trace(std::istream& in) {
  std::array<unsigned char, kTraceHeaderBytes> h{};
  in.read(reinterpret_cast<char*>(h.data()), h.size());
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got < 4) throw FormatError(got, "truncated header (magic)");
  if (std::memcmp(h.data(), kTraceMagic, 4) != 0) throw FormatError(0, "bad magic");
  if (got < 8) throw FormatError(got, "truncated header (version)");
  const auto version = get_le<std::uint32_t>(h.data() + 4);
  if (version != kTraceVersion) {
    throw FormatError(4, "unsupported version " + std::to_string(version));
  }
  if (got < kTraceHeaderBytes) throw FormatError(got, "truncated header");

  Trace t;
  t.sample_rate_hz = std::bit_cast<double>(get_le<std::uint64_t>(h.data() + 8));
  if (!(t.sample_rate_hz > 0.0) || !std::isfinite(t.sample_rate_hz)) {
    throw FormatError(8, "sample rate must be positive");
  }
  const auto count = get_le<std::uint64_t>(h.data() + 16);
  if (count > (std::uint64_t{1} << 40)) throw FormatError(16, "implausible sample count");

  std::vector<unsigned char> payload(static_cast<std::size_t>(count) * 4);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  const auto body = static_cast<std::size_t>(in.gcount());
  if (body < payload.size()) {
    throw FormatError(kTraceHeaderBytes + body,
                      "truncated payload: " + std::to_string(body / 4) + " of " +
                          std::to_string(count) + " samples");
  }
  t.samples.resize(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    t.samples[i] = std::bit_cast<float>(get_le<std::uint32_t>(payload.data() + 4 * i));
  }
  return t;
}

void write_trace(const std::string& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(0, "cannot open " + path + " for writing");
  write_trace(out, trace);
}

Trace read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(0, "cannot open " + path);
  return read_trace(in);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# sample_rate_hz=%.17g, start_time_s=%.17g\n",
                trace.sample_rate_hz, trace.start_time_s);
  out << buf << "time_s,current_pA\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.9g\n", trace.time_of(i),
                  static_cast<double>(trace.samples[i]));
    out << buf;
  }
}

Trace read_trace_csv(std::istream& in) {
  Trace t;
  bool have_rate = false;
  std::vector<double> times;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t here = offset;
    offset += line.size() + 1;
    if (line.empty()) continue;
    if (line[0] == '#') {
      double fs = 0.0;
      double t0 = 0.0;
      if (std::sscanf(line.c_str(), "# sample_rate_hz=%lf, start_time_s=%lf", &fs, &t0) == 2) {
        t.sample_rate_hz = fs;
        t.start_time_s = t0;
        have_rate = true;
      }
      continue;
    }
    if (line.rfind("time_s", 0) == 0) continue;
    double ts = 0.0;
    float v = 0.0f;
    if (std::sscanf(line.c_str(), "%lf,%f", &ts, &v) != 2) {
      throw FormatError(here, "malformed CSV row");
    }
    times.push_back(ts);
    t.samples.push_back(v);
  }
  if (!have_rate) {
    if (times.size() < 2) throw FormatError(0, "CSV trace lacks a sample-rate header");
    t.sample_rate_hz = static_cast<double>(times.size() - 1) / (times.back() - times.front());
    t.start_time_s = times.front();
  }
  if (!(t.sample_rate_hz > 0.0)) throw FormatError(0, "sample rate must be positive");
  return t;
}

void write_trace_csv(const std::string& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw FormatError(0, "cannot open " + path + " for writing");
  write_trace_csv(out, trace);
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(0, "cannot open " + path);
  return read_trace_csv(in);
}

Trace read_trace_any(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    return read_trace_csv(path);
  }
  return read_trace(path);
}

}  // namespace nanostore
