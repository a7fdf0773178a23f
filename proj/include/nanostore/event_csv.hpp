#pragma once

#include <iosfwd>
#include <vector>

#include "nanostore/detector.hpp"
#include "nanostore/trace_sim.hpp"

namespace nanostore {

// One row per segment:
//   molecule_id,start_s,duration_s,kind,entry_end,segment_base,
//   segment_level_pA,segment_duration_s
void write_truth_csv(std::ostream& out, const std::vector<EventRecord>& events);
std::vector<EventRecord> read_truth_csv(std::istream& in);

// Ground-truth columns (molecule_id = -1, kind = bilevel | single_level) followed
// by event_index,normalized_level,baseline_pA,start_index,end_index,
// change_index,decode_status,decoded_bits.
void write_detected_csv(std::ostream& out, const std::vector<DetectedEvent>& events);
std::vector<DetectedEvent> read_detected_csv(std::istream& in);

}  // namespace nanostore
