#pragma once

// Experiment configuration and deterministic report formatting. Config files
// are JSON mirroring the CLI flags; flags override file values. All floats
// are canonicalized to 12 significant digits before serialization so that
// regenerated reports are byte-stable.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bct/rational.hpp"

namespace bct {

using Json = nlohmann::ordered_json;

// Configuration or usage problems: reported with the offending field and
// mapped to exit code 2 by the CLI.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double json_number(double v) { return canonical_double(v); }
inline std::string json_rational(const Rational& q) { return format_rational(q); }

inline std::vector<Rational> parse_rational_list(const std::string& csv, const char* field) {
  try {
    std::vector<Rational> values;
    std::size_t start = 0;
    while (start <= csv.size()) {
      const std::size_t comma = csv.find(',', start);
      const std::string item =
          csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      values.push_back(parse_rational(item));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return values;
  } catch (const std::exception& e) {
    throw config_error(std::string(field) + ": " + e.what());
  }
}

struct ExperimentConfig {
  std::string command;
  std::string dist = "0.5,0.5";  // source distribution, comma-separated rationals
  std::string eps = "0.1";       // epsilon grid, comma-separated
  unsigned nmax = 8;
  unsigned n = 8;
  std::string delta = "0.1";
  std::uint64_t seed = 7;
  unsigned samples = 50;
  unsigned states = 5;
  std::uint64_t a = 5;
  std::uint64_t b = 2;
  unsigned jobs = 1;
  std::string out;        // output file name; per-command default when empty
  std::string outdir = ".";

  std::vector<Rational> parsed_dist() const { return checked_dist(dist, "--dist"); }

  std::vector<Rational> parsed_eps() const {
    auto grid = parse_rational_list(eps, "--eps");
    for (const auto& e : grid)
      if (e <= 0 || e >= 2) throw config_error("--eps: values must lie in (0, 2)");
    return grid;
  }

  Rational parsed_delta() const {
    Rational d;
    try {
      d = parse_rational(delta);
    } catch (const std::exception& e) {
      throw config_error(std::string("--delta: ") + e.what());
    }
    if (d <= 0) throw config_error("--delta: must be > 0");
    return d;
  }

  void validate() const {
    static const char* commands[] = {"rate",     "codec",    "entropy",
                                     "steer",    "digitize", "counterexample"};
    bool known = false;
    for (const char* c : commands) known = known || command == c;
    if (!known)
      throw config_error("command: expected one of rate, codec, entropy, steer, digitize, "
                         "counterexample; got '" +
                         command + "'");
    if (nmax < 1) throw config_error("--nmax: must be >= 1");
    if (n < 1) throw config_error("--n: must be >= 1");
    if (jobs < 1) throw config_error("--jobs: must be >= 1");
    if (command == "rate" || command == "counterexample") parsed_eps();
    if (command != "steer" && command != "digitize") parsed_dist();
    if (command == "codec") parsed_delta();
    if (command == "digitize") {
      if (a < 2) throw config_error("--a: size must be >= 2");
      if (b < 2) throw config_error("--b: size must be >= 2");
    }
    if (command == "steer") {
      if (samples < 1) throw config_error("--samples: must be >= 1");
      if (states < 1) throw config_error("--states: must be >= 1");
    }
    if (command == "counterexample") {
      const auto d = parsed_dist().size();
      Int space = 1, strings = 1;
      for (unsigned j = 0; j < nmax; ++j) {
        space *= nmax + d;
        strings *= d;
      }
      if (strings > 4096 || space > (Int(1) << 26))
        throw config_error("--nmax: exhaustive counterexample search is limited to (N+d)^N <= "
                           "2^26 and d^N <= 4096");
    }
  }

  std::string default_out() const {
    if (command == "rate") return "rates.csv";
    return command + ".json";
  }

 private:
  static std::vector<Rational> checked_dist(const std::string& text, const char* field) {
    auto p = parse_rational_list(text, field);
    try {
      validate_distribution(p);
    } catch (const std::exception& e) {
      throw config_error(std::string(field) + ": " + e.what());
    }
    return p;
  }
};

inline void config_from_json(ExperimentConfig& cfg, const Json& j) {
  auto text = [&](const char* key, std::string& slot) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (v.is_string())
      slot = v.get<std::string>();
    else if (v.is_number())
      slot = format_double(v.get<double>());
    else
      throw config_error(std::string(key) + ": expected a string or number");
  };
  auto integer = [&](const char* key, auto& slot) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned())
      throw config_error(std::string(key) + ": expected a nonnegative integer");
    slot = static_cast<std::decay_t<decltype(slot)>>(v.get<std::uint64_t>());
  };
  text("command", cfg.command);
  text("dist", cfg.dist);
  text("eps", cfg.eps);
  text("delta", cfg.delta);
  text("out", cfg.out);
  text("report", cfg.out);
  text("outdir", cfg.outdir);
  integer("nmax", cfg.nmax);
  integer("n", cfg.n);
  integer("seed", cfg.seed);
  integer("samples", cfg.samples);
  integer("states", cfg.states);
  integer("a", cfg.a);
  integer("b", cfg.b);
  integer("jobs", cfg.jobs);
}

inline Json config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["dist"] = cfg.dist;
  j["eps"] = cfg.eps;
  j["nmax"] = cfg.nmax;
  j["n"] = cfg.n;
  j["delta"] = cfg.delta;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["states"] = cfg.states;
  j["a"] = cfg.a;
  j["b"] = cfg.b;
  j["out"] = cfg.out;
  return j;
}

}  // namespace bct
