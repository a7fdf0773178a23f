#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nanostore/config.hpp"

namespace nanostore {

struct PipelineRequest {
  std::string command;
  PipelineConfig config;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::string format = "bin";  // trace format: bin | csv
  std::string input;           // detect: trace file, decode: detected-event CSV
};

struct OutputFile {
  std::string name;  // relative to out_dir
  std::string sha256;
};

/// Everything needed to reproduce a run byte for byte.
struct RunManifest {
  std::uint64_t seed = 0;
  std::string command;
  std::string format;
  std::string input;
  std::string config_snapshot;
  std::vector<OutputFile> outputs;
};

struct PipelineResult {
  RunManifest manifest;
  std::map<std::string, double> metrics;
};

const std::vector<std::string>& pipeline_commands();

/// Runs one subcommand, writes its outputs plus manifest.json into out_dir.
PipelineResult run_pipeline(const PipelineRequest& req);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

void write_manifest(const std::string& path, const RunManifest& m);
RunManifest read_manifest(const std::string& path);
PipelineRequest request_from_manifest(const RunManifest& m, const std::string& out_dir);

/// Molecules named by sim.molecule_file (FASTA) or sim.molecule.
std::vector<MoleculeSpec> load_molecules(const SimSettings& sim);

}  // namespace nanostore
