// Command-line front end: one subcommand per pipeline stage, plus replay.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nanostore/error.hpp"
#include "nanostore/pipeline.hpp"

namespace {

struct Options {
  std::string config_path;
  std::uint64_t seed = 1;
  double voltage_mv = 0.0;
  double duration_s = 0.0;
  std::string out = "out";
  std::string format = "bin";
  std::string input;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "Configuration file (section.key = value)")
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--voltage-mv", o.voltage_mv, "Override channel.voltage_mv");
  sub->add_option("--duration-s", o.duration_s, "Override sim.duration_s");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--format", o.format, "Trace format")->check(CLI::IsMember({"bin", "csv"}));
  sub->add_option("--input", o.input, "Input file for detect/decode");
  sub->add_option("--set", o.sets, "Override a config key: section.key=value");
}

nanostore::PipelineRequest build_request(const std::string& cmd, const Options& o) {
  nanostore::PipelineRequest req;
  req.command = cmd;
  req.config = o.config_path.empty() ? nanostore::PipelineConfig{}
                                     : nanostore::load_config(o.config_path);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw nanostore::ConfigError("--set expects key=value: " + kv);
    nanostore::set_config_value(req.config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.voltage_mv != 0.0) req.config.channel.voltage_mv = o.voltage_mv;
  if (o.duration_s != 0.0) req.config.sim.duration_s = o.duration_s;
  req.seed = o.seed;
  req.out_dir = o.out;
  req.format = o.format;
  req.input = o.input;
  return req;
}

void print_metrics(const nanostore::PipelineResult& res) {
  for (const auto& [k, v] : res.metrics) std::printf("%s = %.6g\n", k.c_str(), v);
  for (const auto& f : res.manifest.outputs) {
    std::printf("wrote %s  sha256=%s\n", f.name.c_str(), f.sha256.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nanopore data-storage read-channel simulator"};
  app.require_subcommand(1);
  Options opts;
  for (const auto& cmd : nanostore::pipeline_commands()) {
    add_common(app.add_subcommand(cmd, "Run the " + cmd + " stage"), opts);
  }
  std::string manifest_path;
  std::string replay_out = "replay";
  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  replay->add_option("manifest", manifest_path, "manifest.json of a previous run")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "Output directory for the replayed run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (replay->parsed()) {
      const auto original = nanostore::read_manifest(manifest_path);
      const auto res =
          nanostore::run_pipeline(nanostore::request_from_manifest(original, replay_out));
      int mismatches = 0;
      for (const auto& want : original.outputs) {
        std::string got = "(missing)";
        for (const auto& f : res.manifest.outputs) {
          if (f.name == want.name) got = f.sha256;
        }
        const bool same = got == want.sha256;
        if (!same) ++mismatches;
        std::printf("%s %s\n", same ? "match   " : "MISMATCH", want.name.c_str());
      }
      return mismatches == 0 ? 0 : 3;
    }
    for (auto* sub : app.get_subcommands()) {
      const auto res = nanostore::run_pipeline(build_request(sub->get_name(), opts));
      print_metrics(res);
    }
  } catch (const nanostore::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
