#include "nanostore/codec.hpp"

#include <cctype>
#include <istream>
#include <numeric>
#include <ostream>

#include "nanostore/error.hpp"

namespace nanostore {

char to_char(Base b) {
  static constexpr char kLetters[] = {'A', 'C', 'G', 'T'};
  return kLetters[static_cast<int>(b)];
}

Base base_from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'A': return Base::A;
    case 'C': return Base::C;
    case 'G': return Base::G;
    case 'T': return Base::T;
    default:
      throw ConfigError(std::string("not a nucleotide: '") + c + "'");
  }
}

BitBlock::BitBlock(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw ConfigError("bit block holds a non-binary symbol");
  }
}

BitBlock BitBlock::from_string(std::string_view s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw ConfigError(std::string("not a bit: '") + c + "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitBlock(std::move(bits));
}

std::string BitBlock::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

void BitBlock::push_back(std::uint8_t bit) {
  if (bit > 1) throw ConfigError("bit block holds a non-binary symbol");
  bits_.push_back(bit);
}

MoleculeSpec::MoleculeSpec(std::vector<Run> runs) {
  runs_.reserve(runs.size());
  for (const Run& r : runs) {
    if (r.count == 0) throw ConfigError("molecule run with zero bases");
    if (!runs_.empty() && runs_.back().base == r.base) {
      runs_.back().count += r.count;
    } else {
      runs_.push_back(r);
    }
  }
}

MoleculeSpec MoleculeSpec::from_sequence(std::string_view bases) {
  std::vector<Run> runs;
  for (char c : bases) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    runs.push_back({base_from_char(c), 1});
  }
  return MoleculeSpec(std::move(runs));
}

MoleculeSpec MoleculeSpec::parse(std::string_view text) {
  std::vector<Run> runs;
  std::size_t i = 0;
  auto read_count = [&](std::uint32_t fallback) {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
      return fallback;
    }
    std::uint64_t n = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      n = n * 10 + static_cast<std::uint64_t>(text[i] - '0');
      if (n > 0xffffffffULL) throw ConfigError("run count overflow");
      ++i;
    }
    return static_cast<std::uint32_t>(n);
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      auto close = text.find(')', i);
      if (close == std::string_view::npos) throw ConfigError("unbalanced '(' in molecule");
      std::string_view unit = text.substr(i + 1, close - i - 1);
      i = close + 1;
      std::uint32_t reps = read_count(1);
      for (std::uint32_t r = 0; r < reps; ++r) {
        for (char u : unit) runs.push_back({base_from_char(u), 1});
      }
    } else {
      Base b = base_from_char(c);
      ++i;
      std::uint32_t n = read_count(1);
      if (n == 0) throw ConfigError("molecule run with zero bases");
      runs.push_back({b, n});
    }
  }
  return MoleculeSpec(std::move(runs));
}

std::size_t MoleculeSpec::base_count() const {
  return std::accumulate(runs_.begin(), runs_.end(), std::size_t{0},
                         [](std::size_t acc, const Run& r) { return acc + r.count; });
}

std::string MoleculeSpec::sequence() const {
  std::string s;
  s.reserve(base_count());
  for (const Run& r : runs_) s.append(r.count, to_char(r.base));
  return s;
}

std::string MoleculeSpec::notation() const {
  std::string s;
  for (const Run& r : runs_) {
    s.push_back(to_char(r.base));
    s += std::to_string(r.count);
  }
  return s;
}

MoleculeSpec alternating_molecule(std::string_view unit, std::size_t repeats) {
  std::vector<Run> runs;
  runs.reserve(unit.size() * repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    for (char c : unit) runs.push_back({base_from_char(c), 1});
  }
  return MoleculeSpec(std::move(runs));
}

RunEncoding::RunEncoding(Run zero, Run one) : symbols_{zero, one} {
  if (zero.count == 0 || one.count == 0) {
    throw ConfigError("scheme run lengths must be >= 1");
  }
  if (zero.base == one.base) {
    throw ConfigError("scheme symbols must use distinct bases");
  }
}

int RunEncoding::bit_for_base(Base b) const {
  if (symbols_[0].base == b) return 0;
  if (symbols_[1].base == b) return 1;
  return -1;
}

RunEncoding homopolymer_scheme() { return RunEncoding({Base::A, 20}, {Base::C, 30}); }
RunEncoding a50c100_scheme() { return RunEncoding({Base::A, 50}, {Base::C, 100}); }

MoleculeSpec encode_bits(const BitBlock& block, const RunEncoding& scheme) {
  std::vector<Run> runs;
  runs.reserve(block.size());
  for (auto bit : block.bits()) runs.push_back(scheme.symbol(bit));
  return MoleculeSpec(std::move(runs));
}

BitBlock decode_runs(const MoleculeSpec& mol, const RunEncoding& scheme) {
  BitBlock out;
  const auto& runs = mol.runs();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    int bit = scheme.bit_for_base(runs[i].base);
    if (bit < 0) {
      throw DecodeError(i, std::string("base ") + to_char(runs[i].base) + " not in scheme");
    }
    const std::uint32_t len = scheme.symbol(static_cast<std::uint8_t>(bit)).count;
    if (runs[i].count % len != 0) {
      throw DecodeError(i, "run of " + std::to_string(runs[i].count) +
                               " is not a multiple of " + std::to_string(len));
    }
    for (std::uint32_t k = 0; k < runs[i].count / len; ++k) {
      out.push_back(static_cast<std::uint8_t>(bit));
    }
  }
  return out;
}

BitBlock nucleotide_pack(std::string_view bases) {
  std::vector<std::uint8_t> bits;
  bits.reserve(2 * bases.size());
  for (char c : bases) {
    auto v = static_cast<std::uint8_t>(base_from_char(c));
    bits.push_back(static_cast<std::uint8_t>(v >> 1));
    bits.push_back(static_cast<std::uint8_t>(v & 1U));
  }
  return BitBlock(std::move(bits));
}

std::string nucleotide_unpack(const BitBlock& bits) {
  if (bits.size() % 2 != 0) {
    throw FramingError("odd bit count " + std::to_string(bits.size()) +
                       " cannot be split into 2-bit nucleotides");
  }
  std::string out;
  out.reserve(bits.size() / 2);
  for (std::size_t i = 0; i < bits.size(); i += 2) {
    out.push_back(to_char(static_cast<Base>((bits[i] << 1) | bits[i + 1])));
  }
  return out;
}

void write_fasta(std::ostream& out, const std::vector<FastaRecord>& records) {
  for (const auto& rec : records) {
    out << '>' << rec.id << '\n' << rec.molecule.sequence() << '\n';
  }
}

std::vector<FastaRecord> read_fasta(std::istream& in) {
  std::vector<FastaRecord> records;
  std::string line;
  std::string seq;
  std::string id;
  bool open = false;
  auto flush = [&] {
    if (open) records.push_back({id, MoleculeSpec::from_sequence(seq)});
    seq.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '>') {
      flush();
      id = line.substr(1);
      open = true;
    } else {
      if (!open) throw ConfigError("sequence data before the first '>' header");
      seq += line;
    }
  }
  flush();
  return records;
}

}  // namespace nanostore
