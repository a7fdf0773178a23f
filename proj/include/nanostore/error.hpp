#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nanostore {

/// Invalid parameters, schemes or config files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (empty molecule, V <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A molecule run that does not match any entry of the encoding scheme.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t run_index, const std::string& what)
      : std::runtime_error("run " + std::to_string(run_index) + ": " + what),
        run_index_(run_index) {}

  std::size_t run_index() const noexcept { return run_index_; }

 private:
  std::size_t run_index_;
};

/// Bit stream whose length is not a whole number of symbols.
class FramingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Corrupt or truncated trace file.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t byte_offset, const std::string& what)
      : std::runtime_error("byte " + std::to_string(byte_offset) + ": " + what),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace nanostore
