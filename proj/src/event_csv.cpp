#include "nanostore/event_csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "nanostore/error.hpp"

namespace nanostore {

namespace {

constexpr const char* kTruthHeader =
    "molecule_id,start_s,duration_s,kind,entry_end,segment_base,segment_level_pA,"
    "segment_duration_s";
constexpr const char* kDetectedExtra =
    ",event_index,normalized_level,baseline_pA,start_index,end_index,change_index,"
    "decode_status,decoded_bits";

std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double dbl(const std::string& s, std::size_t row) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ConfigError("row " + std::to_string(row) + ": bad number '" + s + "'");
  }
}

}  // namespace

void write_truth_csv(std::ostream& out, const std::vector<EventRecord>& events) {
  out << kTruthHeader << '\n';
  for (const auto& e : events) {
    for (const auto& s : e.segments) {
      out << e.molecule_id << ',' << g(e.start_s) << ',' << g(e.duration_s) << ','
          << to_string(e.kind) << ',' << to_string(e.entry_end) << ',' << to_char(s.base) << ','
          << g(s.level_pa) << ',' << g(s.duration_s) << '\n';
    }
  }
}

std::vector<EventRecord> read_truth_csv(std::istream& in) {
  std::vector<EventRecord> events;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line.rfind("molecule_id", 0) == 0) continue;
    const auto f = fields_of(line);
    if (f.size() < 8) throw ConfigError("row " + std::to_string(row) + ": expected 8 columns");
    const int mol = static_cast<int>(dbl(f[0], row));
    const double start = dbl(f[1], row);
    if (events.empty() || events.back().start_s != start || events.back().molecule_id != mol) {
      EventRecord e;
      e.molecule_id = mol;
      e.start_s = start;
      e.duration_s = dbl(f[2], row);
      e.kind = event_kind_from_string(f[3]);
      e.entry_end = entry_end_from_string(f[4]);
      events.push_back(std::move(e));
    }
    events.back().segments.push_back(
        {base_from_char(f[5].empty() ? '?' : f[5][0]), dbl(f[6], row), dbl(f[7], row)});
  }
  return events;
}

void write_detected_csv(std::ostream& out, const std::vector<DetectedEvent>& events) {
  out << kTruthHeader << kDetectedExtra << '\n';
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const std::string end = e.entry_end ? to_string(*e.entry_end) : "unknown";
    for (std::size_t k = 0; k < e.levels.size(); ++k) {
      const auto& lv = e.levels[k];
      const char base = k < e.bases.size() ? to_char(e.bases[k]) : 'N';
      out << -1 << ',' << g(e.start_s) << ',' << g(e.duration_s) << ','
          << (e.bilevel() ? "bilevel" : "single_level") << ',' << end << ',' << base << ','
          << g(lv.mean_pa) << ',' << g(lv.duration_s) << ',' << i << ',' << g(lv.normalized)
          << ',' << g(e.baseline_pa) << ',' << e.start_index << ',' << e.end_index << ','
          << e.change_index << ',' << to_string(e.status) << ',' << e.bits.to_string() << '\n';
    }
  }
}

std::vector<DetectedEvent> read_detected_csv(std::istream& in) {
  std::vector<DetectedEvent> events;
  std::string line;
  std::size_t row = 0;
  long long last_index = -1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line.rfind("molecule_id", 0) == 0) continue;
    const auto f = fields_of(line);
    if (f.size() < 16) throw ConfigError("row " + std::to_string(row) + ": expected 16 columns");
    const auto index = static_cast<long long>(dbl(f[8], row));
    if (index != last_index) {
      DetectedEvent e;
      e.start_s = dbl(f[1], row);
      e.duration_s = dbl(f[2], row);
      if (f[4] != "unknown") e.entry_end = entry_end_from_string(f[4]);
      e.baseline_pa = dbl(f[10], row);
      e.start_index = static_cast<std::size_t>(dbl(f[11], row));
      e.end_index = static_cast<std::size_t>(dbl(f[12], row));
      e.change_index = static_cast<std::size_t>(dbl(f[13], row));
      e.status = decode_status_from_string(f[14]);
      e.bits = BitBlock::from_string(f[15]);
      events.push_back(std::move(e));
      last_index = index;
    }
    auto& e = events.back();
    e.levels.push_back({dbl(f[6], row), dbl(f[7], row), dbl(f[9], row)});
    if (f[5] != "N") e.bases.push_back(base_from_char(f[5][0]));
  }
  return events;
}

}  // namespace nanostore
