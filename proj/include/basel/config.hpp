#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "basel/params.hpp"

namespace basel {

struct RunConfig {
  ModelParams model;
  GarchParams garch;
  std::uint64_t seed = 1;
  int n_steps = 5000;
  int burn_in = 500;
  double q = 0.05;
  std::string out;
};

struct ConfigError {
  int line;  // 0 when not attributable to a line
  std::string message;
};

struct ParseOutcome {
  RunConfig config;
  std::vector<ConfigError> errors;
  bool ok() const { return errors.empty(); }
};

// Line-oriented `key = value` with # comments; keys outside the schema and
// malformed or invariant-violating values are reported with line numbers.
// Missing keys keep their defaults. Numeric parsing is locale-independent.
ParseOutcome parse_config(const std::string& text);

// Canonical form: fixed key order, shortest round-trip numbers. Reparsing
// the output reproduces the config exactly. theta_minus is omitted while it
// tracks theta; out is omitted while empty.
std::string serialize_config(const RunConfig& cfg);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace basel
