#include "basel/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace basel {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_int(const std::string& s, int& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

ParseOutcome parse_config(const std::string& text) {
  ParseOutcome out;
  RunConfig& cfg = out.config;
  std::map<std::string, int> key_lines;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      out.errors.push_back({lineno, "expected key = value"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      out.errors.push_back({lineno, "expected key = value"});
      continue;
    }
    if (key_lines.count(key)) {
      out.errors.push_back(
          {lineno, "duplicate key '" + key + "' (first on line " +
                       std::to_string(key_lines[key]) + ")"});
      continue;
    }
    key_lines[key] = lineno;

    auto bad_value = [&]() {
      out.errors.push_back({lineno, "malformed value for '" + key + "'"});
    };
    double d = 0.0;
    if (key == "tau") {
      parse_double(value, d) ? void(cfg.model.tau = d) : bad_value();
    } else if (key == "delta") {
      parse_double(value, d) ? void(cfg.model.delta = d) : bad_value();
    } else if (key == "t_var") {
      parse_double(value, d) ? void(cfg.model.t_var = d) : bad_value();
    } else if (key == "sigma0_sq") {
      parse_double(value, d) ? void(cfg.model.sigma0_sq = d) : bad_value();
    } else if (key == "b") {
      parse_double(value, d) ? void(cfg.model.b = d) : bad_value();
    } else if (key == "alpha") {
      parse_double(value, d) ? void(cfg.model.alpha = d) : bad_value();
    } else if (key == "e_bar") {
      parse_double(value, d) ? void(cfg.model.e_bar = d) : bad_value();
    } else if (key == "w_b") {
      parse_double(value, d) ? void(cfg.model.w_b = d) : bad_value();
    } else if (key == "theta") {
      parse_double(value, d) ? void(cfg.model.theta = d) : bad_value();
    } else if (key == "theta_minus") {
      parse_double(value, d) ? void(cfg.model.theta_minus = d) : bad_value();
    } else if (key == "eta") {
      parse_double(value, d) ? void(cfg.model.eta = d) : bad_value();
    } else if (key == "mu") {
      parse_double(value, d) ? void(cfg.model.mu = d) : bad_value();
    } else if (key == "rho") {
      parse_double(value, d) ? void(cfg.model.rho = d) : bad_value();
    } else if (key == "w_f0") {
      parse_double(value, d) ? void(cfg.model.w_f0 = d) : bad_value();
    } else if (key == "a0") {
      parse_double(value, d) ? void(cfg.garch.a0 = d) : bad_value();
    } else if (key == "a1") {
      parse_double(value, d) ? void(cfg.garch.a1 = d) : bad_value();
    } else if (key == "b1") {
      parse_double(value, d) ? void(cfg.garch.b1 = d) : bad_value();
    } else if (key == "seed") {
      if (!parse_u64(value, cfg.seed)) bad_value();
    } else if (key == "n_steps") {
      if (!parse_int(value, cfg.n_steps)) bad_value();
    } else if (key == "burn_in") {
      if (!parse_int(value, cfg.burn_in)) bad_value();
    } else if (key == "q") {
      parse_double(value, d) ? void(cfg.q = d) : bad_value();
    } else if (key == "out") {
      cfg.out = value;
    } else {
      out.errors.push_back({lineno, "unknown key '" + key + "'"});
    }
  }

  auto line_of = [&](const char* key) {
    const auto it = key_lines.find(key);
    return it == key_lines.end() ? 0 : it->second;
  };
  auto key_for = [](const std::string& msg) -> std::string {
    // Validation messages start with the offending key's name.
    const auto space = msg.find(' ');
    return space == std::string::npos ? msg : msg.substr(0, space);
  };
  for (const std::string& msg : validate(cfg.model))
    out.errors.push_back({line_of(key_for(msg).c_str()), msg});
  for (const std::string& msg : validate(cfg.garch))
    out.errors.push_back({line_of(key_for(msg).c_str()), msg});
  if (!(cfg.q > 0.0 && cfg.q < 1.0))
    out.errors.push_back({line_of("q"), "q must lie in (0, 1)"});
  if (cfg.n_steps < 1)
    out.errors.push_back({line_of("n_steps"), "n_steps must be at least 1"});
  if (cfg.burn_in < 0 || cfg.burn_in >= cfg.n_steps)
    out.errors.push_back(
        {line_of("burn_in"), "burn_in must lie in [0, n_steps)"});
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  auto kv = [&](const char* key, const std::string& value) {
    os << key << " = " << value << "\n";
  };
  kv("tau", format_double(cfg.model.tau));
  kv("delta", format_double(cfg.model.delta));
  kv("t_var", format_double(cfg.model.t_var));
  kv("sigma0_sq", format_double(cfg.model.sigma0_sq));
  kv("b", format_double(cfg.model.b));
  kv("alpha", format_double(cfg.model.alpha));
  kv("e_bar", format_double(cfg.model.e_bar));
  kv("w_b", format_double(cfg.model.w_b));
  kv("theta", format_double(cfg.model.theta));
  if (cfg.model.theta_minus)
    kv("theta_minus", format_double(*cfg.model.theta_minus));
  kv("eta", format_double(cfg.model.eta));
  kv("mu", format_double(cfg.model.mu));
  kv("rho", format_double(cfg.model.rho));
  kv("w_f0", format_double(cfg.model.w_f0));
  kv("a0", format_double(cfg.garch.a0));
  kv("a1", format_double(cfg.garch.a1));
  kv("b1", format_double(cfg.garch.b1));
  kv("seed", std::to_string(cfg.seed));
  kv("n_steps", std::to_string(cfg.n_steps));
  kv("burn_in", std::to_string(cfg.burn_in));
  kv("q", format_double(cfg.q));
  if (!cfg.out.empty()) kv("out", cfg.out);
  return os.str();
}

}  // namespace basel
