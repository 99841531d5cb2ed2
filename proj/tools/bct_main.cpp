// Command-line harness for the bilocal-theory laboratory. One binary, six
// experiment subcommands plus golden-file regression:
//
//   bct rate --dist 0.9,0.1 --eps 0.05,0.02 --nmax 18 --out rates.csv
//   bct codec --dist 0.9,0.1 --n 12 --delta 0.1 --report codec.json
//   bct entropy --dist 0.5,0.5 --nmax 10
//   bct steer --seed 7 --samples 50
//   bct digitize --a 5 --b 2
//   bct counterexample --dist 0.5,0.5 --nmax 6
//   bct --golden tests/golden
//
// --config file.json supplies defaults for any flag (flags win); reports are
// deterministic given flags and seed. Exit codes: 0 success, 1 invariant or
// golden mismatch, 2 configuration/usage error.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bct/experiment.hpp"
#include "bct/report.hpp"

namespace {

// Load --config before CLI11 parses, so file values act as flag defaults.
std::string config_path_from_argv(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

void add_common_output(CLI::App* cmd, bct::ExperimentConfig& cfg, const char* out_flag = "--out") {
  cmd->add_option(out_flag, cfg.out, "output file name");
  cmd->add_option("--outdir", cfg.outdir, "directory for output files");
}

}  // namespace

int main(int argc, char** argv) {
  bct::ExperimentConfig cfg;
  std::string config_path;
  std::string golden_dir;

  try {
    config_path = config_path_from_argv(argc, argv);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw bct::config_error("--config: cannot open " + config_path);
      bct::Json parsed;
      try {
        parsed = bct::Json::parse(in);
      } catch (const std::exception& e) {
        throw bct::config_error("--config: " + std::string(e.what()));
      }
      bct::config_from_json(cfg, parsed);
    }
  } catch (const bct::config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  CLI::App app{"exact-arithmetic laboratory for bilocal classical theory"};
  app.add_option("--config", config_path, "JSON file of flag defaults (flags override)");
  app.add_option("--jobs", cfg.jobs, "worker threads for sweeps");
  app.add_option("--golden", golden_dir, "re-run configs in this directory and diff the reports");
  app.add_option("--outdir", cfg.outdir, "directory for output files");

  CLI::App* rate = app.add_subcommand("rate", "minimal compression rates over an epsilon grid");
  rate->add_option("--dist", cfg.dist, "source distribution, comma-separated rationals");
  rate->add_option("--eps", cfg.eps, "epsilon grid, comma-separated, each in (0,2)");
  rate->add_option("--nmax", cfg.nmax, "largest message length N");
  add_common_output(rate, cfg);

  CLI::App* codec = app.add_subcommand("codec", "typical-set codec and figures of merit");
  codec->add_option("--dist", cfg.dist, "source distribution");
  codec->add_option("--n", cfg.n, "message length N");
  codec->add_option("--delta", cfg.delta, "typicality window");
  add_common_output(codec, cfg, "--report");

  CLI::App* entropy = app.add_subcommand("entropy", "state entropies and their regularization");
  entropy->add_option("--dist", cfg.dist, "source distribution");
  entropy->add_option("--nmax", cfg.nmax, "largest power for the regularization table");
  add_common_output(entropy, cfg);

  CLI::App* steer = app.add_subcommand("steer", "steer random dilations from the mother dilation");
  steer->add_option("--seed", cfg.seed, "random seed");
  steer->add_option("--samples", cfg.samples, "dilations per state");
  steer->add_option("--states", cfg.states, "random states to test");
  add_common_output(steer, cfg);

  CLI::App* digitize = app.add_subcommand("digitize", "encode one system into copies of another");
  digitize->add_option("--a", cfg.a, "source system size");
  digitize->add_option("--b", cfg.b, "target system size");
  add_common_output(digitize, cfg);

  CLI::App* counter =
      app.add_subcommand("counterexample", "wire-routing codecs never compress a mixed source");
  counter->add_option("--dist", cfg.dist, "source distribution");
  counter->add_option("--nmax", cfg.nmax, "largest N for the exhaustive search");
  counter->add_option("--eps", cfg.eps, "error target in (0,2); first grid entry is used");
  counter->add_option("--seed", cfg.seed, "random seed for mixture sampling");
  counter->add_option("--samples", cfg.samples, "mixtures sampled per N");
  add_common_output(counter, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!golden_dir.empty()) {
      const bct::GoldenResult result = bct::golden_check(golden_dir, cfg.jobs);
      if (result.ok) {
        std::cout << "golden: all reports match " << golden_dir << '\n';
        return 0;
      }
      std::cerr << "golden: mismatches against " << golden_dir << '\n';
      for (const auto& diff : result.diffs) std::cerr << "  " << diff << '\n';
      return 1;
    }

    for (CLI::App* sub : {rate, codec, entropy, steer, digitize, counter})
      if (sub->parsed()) cfg.command = sub->get_name();
    if (cfg.command.empty())
      throw bct::config_error("command: pass a subcommand or a --config with \"command\"");

    const bct::RunResult result = bct::run(cfg);
    std::cout << result.summary;
    return 0;
  } catch (const bct::config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
