#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace nanostore {

enum class Base : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

char to_char(Base b);
Base base_from_char(char c);  // throws ConfigError on anything but ACGT

/// Ordered binary symbols. Stored one symbol per byte.
class BitBlock {
 public:
  BitBlock() = default;
  explicit BitBlock(std::vector<std::uint8_t> bits);

  static BitBlock from_string(std::string_view s);  // "0101"
  std::string to_string() const;

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  void push_back(std::uint8_t bit);

  friend bool operator==(const BitBlock&, const BitBlock&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct Run {
  Base base = Base::A;
  std::uint32_t count = 1;

  friend bool operator==(const Run&, const Run&) = default;
};

/// Homopolymer runs written 5' to 3'. Adjacent runs always carry distinct
/// bases; construction merges equal neighbours.
class MoleculeSpec {
 public:
  MoleculeSpec() = default;
  explicit MoleculeSpec(std::vector<Run> runs);

  static MoleculeSpec from_sequence(std::string_view bases);
  // Run notation such as "A50C100" or "(AC)60".
  static MoleculeSpec parse(std::string_view notation);

  const std::vector<Run>& runs() const { return runs_; }
  std::size_t run_count() const { return runs_.size(); }
  std::size_t base_count() const;
  bool empty() const { return runs_.empty(); }
  std::string sequence() const;
  std::string notation() const;

  friend bool operator==(const MoleculeSpec&, const MoleculeSpec&) = default;

 private:
  std::vector<Run> runs_;
};

/// 5'(XY)_n 3': alternating single-base runs, e.g. (AC)60.
MoleculeSpec alternating_molecule(std::string_view unit, std::size_t repeats);

/// Bit symbol -> homopolymer run.
class RunEncoding {
 public:
  RunEncoding(Run zero, Run one);  // throws ConfigError when invalid

  const Run& symbol(std::uint8_t bit) const { return symbols_[bit & 1U]; }
  // Bit for a base, or -1 when no symbol uses it.
  int bit_for_base(Base b) const;

  friend bool operator==(const RunEncoding&, const RunEncoding&) = default;

 private:
  std::array<Run, 2> symbols_;
};

RunEncoding homopolymer_scheme();  // 0 -> A20, 1 -> C30
RunEncoding a50c100_scheme();      // 0 -> A50, 1 -> C100

MoleculeSpec encode_bits(const BitBlock& block, const RunEncoding& scheme);
BitBlock decode_runs(const MoleculeSpec& mol, const RunEncoding& scheme);

// A=00 C=01 G=10 T=11
BitBlock nucleotide_pack(std::string_view bases);
std::string nucleotide_unpack(const BitBlock& bits);

struct FastaRecord {
  std::string id;
  MoleculeSpec molecule;
};

void write_fasta(std::ostream& out, const std::vector<FastaRecord>& records);
std::vector<FastaRecord> read_fasta(std::istream& in);

}  // namespace nanostore
