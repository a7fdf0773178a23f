#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace nanostore {

using Rng = std::mt19937_64;

// Streams are derived from the master seed by a fixed label and index, so
// adding a pore or a pipeline stage never shifts an existing stream.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index = 0);

inline Rng make_stream(std::uint64_t master, std::string_view label,
                       std::uint64_t index = 0) {
  return Rng(derive_seed(master, label, index));
}

}  // namespace nanostore
