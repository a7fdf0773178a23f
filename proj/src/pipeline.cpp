#include "nanostore/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "nanostore/analysis.hpp"
#include "nanostore/error.hpp"
#include "nanostore/event_csv.hpp"
#include "nanostore/kernels.hpp"
#include "nanostore/trace_io.hpp"

namespace nanostore {

namespace fs = std::filesystem;

const std::vector<std::string>& pipeline_commands() {
  static const std::vector<std::string> cmds = {"simulate", "detect", "decode", "roundtrip",
                                                "stats",    "capacity", "ivcurve"};
  return cmds;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

void write_manifest(const std::string& path, const RunManifest& m) {
  nlohmann::ordered_json j;
  j["seed"] = m.seed;
  j["command"] = m.command;
  j["format"] = m.format;
  j["input"] = m.input;
  j["config"] = m.config_snapshot;
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& o : m.outputs) j["outputs"].push_back({{"name", o.name}, {"sha256", o.sha256}});
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest " + path + ": " + e.what());
  }
  RunManifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.command = j.at("command").get<std::string>();
  m.format = j.at("format").get<std::string>();
  m.input = j.value("input", "");
  m.config_snapshot = j.at("config").get<std::string>();
  for (const auto& o : j.at("outputs")) {
    m.outputs.push_back({o.at("name").get<std::string>(), o.at("sha256").get<std::string>()});
  }
  return m;
}

PipelineRequest request_from_manifest(const RunManifest& m, const std::string& out_dir) {
  PipelineRequest req;
  req.command = m.command;
  req.config = parse_config(m.config_snapshot);
  req.seed = m.seed;
  req.out_dir = out_dir;
  req.format = m.format;
  req.input = m.input;
  return req;
}

std::vector<MoleculeSpec> load_molecules(const SimSettings& sim) {
  std::vector<MoleculeSpec> mols;
  if (!sim.molecule_file.empty()) {
    std::ifstream in(sim.molecule_file);
    if (!in) throw ConfigError("cannot open molecule file " + sim.molecule_file);
    for (auto& rec : read_fasta(in)) mols.push_back(std::move(rec.molecule));
  } else {
    mols.push_back(MoleculeSpec::parse(sim.molecule));
  }
  if (mols.empty()) throw ConfigError("no molecules configured");
  for (const auto& m : mols) {
    if (m.empty()) throw ConfigError("empty molecule in configuration");
  }
  return mols;
}

namespace {

std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  template <typename Writer>
  void text(const std::string& name, Writer&& w) {
    {
      std::ofstream out(path(name));
      if (!out) throw std::runtime_error("cannot write " + path(name));
      w(out);
    }
    add(name);
  }

  void add(const std::string& name) { files_.push_back({name, sha256_file(path(name))}); }
  const std::vector<OutputFile>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<OutputFile> files_;
};

void write_trace_output(OutputSet& out, const Trace& trace, const std::string& format) {
  if (format == "csv") {
    write_trace_csv(out.path("trace.csv"), trace);
    out.add("trace.csv");
  } else {
    write_trace(out.path("trace.bin"), trace);
    out.add("trace.bin");
  }
}

SimulatedTrace simulate(const PipelineConfig& cfg, std::span<const MoleculeSpec> mols,
                        std::uint64_t seed) {
  Rng rng = make_stream(seed, "simulate");
  EnsembleConfig ens{cfg.sim.n_pores, cfg.sim.clog_schedule};
  return simulate_ensemble(cfg.channel, ens, cfg.sim.duration_s, mols, rng, cfg.sim.force);
}

std::vector<DetectedEvent> detect_and_decode(const Trace& trace, const PipelineConfig& cfg) {
  const double baseline = estimate_baseline(trace);
  const auto intervals = detect_events(trace, baseline, cfg.detector);
  auto events = kernels::segment_intervals(trace, intervals, baseline, cfg.detector,
                                           kernels::Backend::OpenMP);
  const RunEncoding scheme = cfg.codec.scheme();
  for (auto& e : events) classify_and_decode(e, cfg.channel, scheme, cfg.detector);
  return events;
}

void write_decoded_csv(std::ostream& out, const std::vector<DetectedEvent>& events) {
  out << "event_index,start_s,entry_end,decode_status,decoded_bits\n";
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    out << i << ',' << g(e.start_s) << ',' << (e.entry_end ? to_string(*e.entry_end) : "unknown")
        << ',' << to_string(e.status) << ',' << e.bits.to_string() << '\n';
  }
}

void run_simulate(const PipelineRequest& req, OutputSet& out, PipelineResult& res) {
  const auto mols = load_molecules(req.config.sim);
  const SimulatedTrace sim = simulate(req.config, mols, req.seed);
  write_trace_output(out, sim.trace, req.format);
  out.text("truth.csv", [&](std::ostream& o) { write_truth_csv(o, sim.events); });
  out.text("molecules.fa", [&](std::ostream& o) {
    std::vector<FastaRecord> recs;
    for (std::size_t i = 0; i < mols.size(); ++i) recs.push_back({std::to_string(i), mols[i]});
    write_fasta(o, recs);
  });
  res.metrics["n_events"] = static_cast<double>(sim.events.size());
  res.metrics["n_samples"] = static_cast<double>(sim.trace.samples.size());
}

void run_detect(const PipelineRequest& req, OutputSet& out, PipelineResult& res) {
  const Trace trace = read_trace_any(req.input);
  const auto events = detect_and_decode(trace, req.config);
  out.text("detected.csv", [&](std::ostream& o) { write_detected_csv(o, events); });
  res.metrics["n_detected"] = static_cast<double>(events.size());
  res.metrics["baseline_pA"] = events.empty() ? estimate_baseline(trace) : events.front().baseline_pa;
}

void run_decode(const PipelineRequest& req, OutputSet& out, PipelineResult& res) {
  std::ifstream in(req.input);
  if (!in) throw ConfigError("cannot open detected-event CSV " + req.input);
  auto events = read_detected_csv(in);
  const RunEncoding scheme = req.config.codec.scheme();
  std::size_t decoded = 0;
  for (auto& e : events) {
    classify_and_decode(e, req.config.channel, scheme, req.config.detector);
    if (e.status == DecodeStatus::Decoded) ++decoded;
  }
  out.text("decoded.csv", [&](std::ostream& o) { write_decoded_csv(o, events); });
  res.metrics["n_events"] = static_cast<double>(events.size());
  res.metrics["n_decoded"] = static_cast<double>(decoded);
}

void run_roundtrip(const PipelineRequest& req, OutputSet& out, PipelineResult& res) {
  const PipelineConfig& cfg = req.config;
  const RunEncoding scheme = cfg.codec.scheme();
  Rng codec_rng = make_stream(req.seed, "codec");
  std::bernoulli_distribution coin(0.5);
  std::vector<BitBlock> blocks;
  std::vector<MoleculeSpec> mols;
  for (int b = 0; b < cfg.codec.n_blocks; ++b) {
    BitBlock block;
    for (int i = 0; i < cfg.codec.block_bits; ++i) block.push_back(coin(codec_rng) ? 1 : 0);
    mols.push_back(encode_bits(block, scheme));
    blocks.push_back(std::move(block));
  }
  out.text("blocks.csv", [&](std::ostream& o) {
    o << "molecule_id,bits,molecule\n";
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      o << i << ',' << blocks[i].to_string() << ',' << mols[i].notation() << '\n';
    }
  });

  const SimulatedTrace sim = simulate(cfg, mols, req.seed);
  write_trace_output(out, sim.trace, req.format);
  out.text("truth.csv", [&](std::ostream& o) { write_truth_csv(o, sim.events); });

  const auto detected = detect_and_decode(sim.trace, cfg);
  out.text("detected.csv", [&](std::ostream& o) { write_detected_csv(o, detected); });

  const double tol = 2.0 / cfg.channel.sample_rate_hz;
  const DetectionScore sc = score_detection(sim.events, detected, tol);
  std::vector<std::size_t> match_of(sim.events.size(), detected.size());
  for (const auto& [t, d] : sc.matches) match_of[t] = d;

  std::size_t bits_total = 0;
  std::size_t bits_correct = 0;
  std::size_t complete = 0;
  std::size_t events_correct = 0;
  for (std::size_t t = 0; t < sim.events.size(); ++t) {
    const auto& gt = sim.events[t];
    if (!is_complete(gt.kind)) continue;
    ++complete;
    const BitBlock& want = blocks[static_cast<std::size_t>(gt.molecule_id)];
    bits_total += want.size();
    if (match_of[t] == detected.size()) continue;
    const auto& d = detected[match_of[t]];
    if (d.status != DecodeStatus::Decoded) continue;
    for (std::size_t i = 0; i < want.size() && i < d.bits.size(); ++i) {
      if (want[i] == d.bits[i]) ++bits_correct;
    }
    if (d.bits == want) ++events_correct;
  }
  const double bit_accuracy =
      bits_total ? static_cast<double>(bits_correct) / static_cast<double>(bits_total) : 1.0;
  const double event_accuracy =
      complete ? static_cast<double>(events_correct) / static_cast<double>(complete) : 1.0;

  res.metrics["n_truth_events"] = static_cast<double>(sc.n_truth);
  res.metrics["n_complete_events"] = static_cast<double>(complete);
  res.metrics["n_detected"] = static_cast<double>(sc.n_detected);
  res.metrics["n_matched"] = static_cast<double>(sc.n_matched);
  res.metrics["precision"] = sc.precision;
  res.metrics["recall"] = sc.recall;
  res.metrics["level_rms_pA"] = sc.level_rms_pa;
  res.metrics["bit_accuracy"] = bit_accuracy;
  res.metrics["event_accuracy"] = event_accuracy;
  res.metrics["no_detections"] = sc.no_detections ? 1.0 : 0.0;
  out.text("score.csv", [&](std::ostream& o) {
    o << "metric,value\n";
    for (const auto& [k, v] : res.metrics) o << k << ',' << g(v) << '\n';
  });
}

void run_stats(const PipelineRequest& req, OutputSet& out, PipelineResult& res) {
  const auto& st = req.config.stats;
  const MoleculeSpec mol = MoleculeSpec::parse(st.molecule);
  const auto sweep = kernels::voltage_sweep(req.config.channel, st.voltages_mv, st.duration_s, mol,
                                            req.seed, req.config.detector,
                                            kernels::Backend::OpenMP);
  out.text("open_fraction.csv", [&](std::ostream& o) { write_open_fraction_csv(o, sweep); });
  out.text("event_rates.csv", [&](std::ostream& o) { write_event_rate_csv(o, sweep); });
  out.text("dwell_blockage.csv", [&](std::ostream& o) { write_dwell_blockage_csv(o, sweep); });
  for (const auto& p : sweep) {
    res.metrics["total_rate@" + g(p.voltage_mv)] = p.total_rate;
    res.metrics["open_fraction@" + g(p.voltage_mv)] = p.open_fraction;
  }
}

void run_capacity(const PipelineRequest& req, OutputSet& out, PipelineResult& res) {
  const CapacityReport r = capacity_report(req.config.capacity);
  out.text("capacity_report.txt", [&](std::ostream& o) { write_capacity_text(o, r); });
  out.text("capacity.csv", [&](std::ostream& o) { write_capacity_csv(o, r); });
  res.metrics["areal_bytes_per_cm2"] = r.areal_bytes_per_cm2;
  res.metrics["volumetric_bytes_per_cm3"] = r.volumetric_bytes_per_cm3;
}

void run_ivcurve(const PipelineRequest& req, OutputSet& out, PipelineResult&) {
  const IVCurve& iv = req.config.channel.iv_curve;
  out.text("iv.csv", [&](std::ostream& o) {
    o << "voltage_mV,current_pA,extrapolated\n";
    for (int v = -250; v <= 250; v += 10) {
      const auto pt = iv.evaluate(v);
      o << v << ',' << g(pt.current_pa) << ',' << (pt.extrapolated ? 1 : 0) << '\n';
    }
  });
}

}  // namespace

PipelineResult run_pipeline(const PipelineRequest& request) {
  PipelineRequest req = request;
  const auto& cmds = pipeline_commands();
  if (std::find(cmds.begin(), cmds.end(), req.command) == cmds.end()) {
    throw ConfigError("unknown command '" + req.command + "'");
  }
  if (req.format != "bin" && req.format != "csv") {
    throw ConfigError("format must be bin or csv, got '" + req.format + "'");
  }
  req.config.validate();

  OutputSet out(req.out_dir);
  // Inputs default to the previous stage's output in the same directory. The
  // manifest records the absolute path so a replay elsewhere reads the same file.
  if (req.input.empty() && req.command == "detect") {
    req.input = out.path(req.format == "csv" ? "trace.csv" : "trace.bin");
  } else if (req.input.empty() && req.command == "decode") {
    req.input = out.path("detected.csv");
  }
  if (!req.input.empty()) req.input = fs::absolute(req.input).string();
  PipelineResult res;
  if (req.command == "simulate") run_simulate(req, out, res);
  else if (req.command == "detect") run_detect(req, out, res);
  else if (req.command == "decode") run_decode(req, out, res);
  else if (req.command == "roundtrip") run_roundtrip(req, out, res);
  else if (req.command == "stats") run_stats(req, out, res);
  else if (req.command == "capacity") run_capacity(req, out, res);
  else run_ivcurve(req, out, res);

  res.manifest.seed = req.seed;
  res.manifest.command = req.command;
  res.manifest.format = req.format;
  res.manifest.input = req.input;
  res.manifest.config_snapshot = to_config_text(req.config);
  res.manifest.outputs = out.files();
  write_manifest(out.path("manifest.json"), res.manifest);
  return res;
}

}  // namespace nanostore
