#pragma once

// Run configuration: a sectioned key-value text format covering the world,
// the controller, and run bookkeeping, plus the small parsing helpers the
// command-line front end shares with tests (number/angle/range/CSV parsing
// and the fixed-width number formatting used in emitted files).
//
// Format, by example:
//
//   # comment (';' also starts a comment)
//   [world]
//   width = 1.0
//   epsilon = 0.01
//   [policy]
//   theta = 60 deg        # angles are radians unless suffixed with 'deg'
//   goal_count = 750
//   [run]
//   seed = 7
//   out = outcome.json
//
// Unknown sections or keys are rejected with a diagnostic naming the
// offending token. Values set later in the file override earlier ones.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "policies.hpp"
#include "world.hpp"

namespace bounce {

struct RunConfig {
  WorldParams world{};
  PolicyConfig policy{};
  std::string out;    // outcome/report path; empty: command decides
  std::string trace;  // optional trace CSV path; empty: no trace
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Parses a complete finite double; nullopt on trailing junk or overflow.
inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  const std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

// Plain scalar or, when the value is an angle, a number with a 'deg' suffix
// (converted to radians). A suffix on a non-angle value is a parse failure.
inline std::optional<double> parse_scalar(std::string_view s, bool angle) {
  s = trim(s);
  if (angle && s.size() > 3) {
    std::string_view tail = s.substr(s.size() - 3);
    if (tail == "deg") {
      auto v = parse_double(s.substr(0, s.size() - 3));
      if (!v) return std::nullopt;
      return *v * kPi / 180.0;
    }
  }
  return parse_double(s);
}

inline std::optional<std::uint64_t> parse_count(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    const std::uint64_t next = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (next / 10 != v) return std::nullopt;  // overflow
    v = next;
  }
  return v;
}

}  // namespace detail

// Half-open-free inclusive sweep range LO:HI:STEP (the grid includes HI).
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
};

// Parses "LO:HI:STEP"; each field may carry a 'deg' suffix when `angle`.
inline Range parse_range(std::string_view text, bool angle = true) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = text.find(':', pos);
    if (colon == std::string_view::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, colon - pos));
    pos = colon + 1;
  }
  if (parts.size() != 3) {
    throw ConfigError("range '" + std::string(text) + "' must be LO:HI:STEP");
  }
  Range r;
  double* slots[3] = {&r.lo, &r.hi, &r.step};
  const char* names[3] = {"LO", "HI", "STEP"};
  for (int i = 0; i < 3; ++i) {
    auto v = detail::parse_scalar(parts[i], angle);
    if (!v) {
      throw ConfigError("range field " + std::string(names[i]) + " in '" + std::string(text) +
                        "' is not a number");
    }
    *slots[i] = *v;
  }
  if (!(r.step > 0.0)) throw ConfigError("range '" + std::string(text) + "' needs STEP > 0");
  if (r.hi < r.lo) throw ConfigError("range '" + std::string(text) + "' needs HI >= LO");
  return r;
}

// Parses "x,y,theta" (theta may carry a 'deg' suffix) into a pose.
inline Pose parse_pose_triple(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  if (parts.size() != 3) {
    throw ConfigError("start pose '" + std::string(text) + "' must be x,y,theta");
  }
  const auto x = detail::parse_double(parts[0]);
  const auto y = detail::parse_double(parts[1]);
  const auto t = detail::parse_scalar(parts[2], true);
  if (!x || !y || !t) {
    throw ConfigError("start pose '" + std::string(text) + "' has a non-numeric field");
  }
  return Pose{{*x, *y}, *t};
}

// Parses configuration text into `cfg` (fields not mentioned keep their
// current values, so defaults and later override layers compose naturally).
inline void parse_config_text(std::string_view text, RunConfig& cfg) {
  enum class Section { None, World, Policy, Run };
  Section section = Section::None;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++lineno;

    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      }
      const std::string_view name = detail::trim(line.substr(1, line.size() - 2));
      if (name == "world") section = Section::World;
      else if (name == "policy") section = Section::Policy;
      else if (name == "run") section = Section::Run;
      else throw ConfigError("line " + std::to_string(lineno) + ": unknown section '" +
                             std::string(name) + "'");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (section == Section::None) {
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key +
                        "' appears before any [section]");
    }

    auto scalar = [&](double& slot, bool angle = false) {
      auto v = detail::parse_scalar(value, angle);
      if (!v) {
        throw ConfigError("line " + std::to_string(lineno) + ": value for '" + key +
                          "' is not a number");
      }
      slot = *v;
    };
    auto count = [&](std::uint64_t& slot) {
      auto v = detail::parse_count(value);
      if (!v) {
        throw ConfigError("line " + std::to_string(lineno) + ": value for '" + key +
                          "' is not a non-negative integer");
      }
      slot = *v;
    };

    if (section == Section::World) {
      if (key == "width") scalar(cfg.world.width);
      else if (key == "length") scalar(cfg.world.length);
      else if (key == "cart_half_length") scalar(cfg.world.cart_half_length);
      else if (key == "cart_height") scalar(cfg.world.cart_height);
      else if (key == "epsilon") scalar(cfg.world.epsilon);
      else if (key == "goal_x") scalar(cfg.world.goal_x);
      else if (key == "max_range") scalar(cfg.world.max_range);
      else if (key == "cart_x") scalar(cfg.world.cart_x);
      else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key +
                             "' in [world]");
    } else if (section == Section::Policy) {
      if (key == "phi") scalar(cfg.policy.phi, true);
      else if (key == "delta") scalar(cfg.policy.delta);
      else if (key == "theta") scalar(cfg.policy.theta, true);
      else if (key == "goal_count") count(cfg.policy.goal_count);
      else if (key == "max_stages") count(cfg.policy.max_stages);
      else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key +
                             "' in [policy]");
    } else {
      if (key == "seed") count(cfg.policy.seed);
      else if (key == "out") cfg.out = std::string(value);
      else if (key == "trace") cfg.trace = std::string(value);
      else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key +
                             "' in [run]");
    }
  }
}

inline RunConfig parse_config_text(std::string_view text) {
  RunConfig cfg;
  parse_config_text(text, cfg);
  return cfg;
}

inline void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  parse_config_text(buf.str(), cfg);
}

// Cross-field checks beyond per-value parsing. World invariants are enforced
// by constructing a World; controller parameters get the same treatment
// here so a bad file fails before any run starts.
inline void validate_config(const RunConfig& cfg) {
  World probe(cfg.world);  // throws on inconsistent world geometry
  (void)probe;
  if (!(cfg.policy.phi > 0.0 && cfg.policy.phi < kPi)) {
    throw ConfigError("policy.phi must lie in (0, pi)");
  }
  if (!(cfg.policy.delta > 0.0)) throw ConfigError("policy.delta must be positive");
  if (!(cfg.policy.theta > 0.0 && cfg.policy.theta < kPi / 2)) {
    throw ConfigError("policy.theta must lie in (0, pi/2)");
  }
  if (cfg.policy.max_stages == 0) throw ConfigError("policy.max_stages must be positive");
}

// Fixed-width significant-digit formatting for emitted CSV cells: enough
// digits to reconstruct the double for plotting, stable across reruns.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

// Splits CSV text into rows of cells. The emitters never quote or embed
// commas, so plain splitting is the full grammar; a trailing newline does
// not produce a phantom row.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
    std::vector<std::string> cells;
    std::size_t cpos = 0;
    while (true) {
      const std::size_t comma = line.find(',', cpos);
      if (comma == std::string_view::npos) {
        cells.emplace_back(line.substr(cpos));
        break;
      }
      cells.emplace_back(line.substr(cpos, comma - cpos));
      cpos = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace bounce
