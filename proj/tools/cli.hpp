// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wba/averaging.hpp"
#include "wba/dynamics.hpp"
#include "wba/weights.hpp"

// Command-line front end. Everything here is also callable from tests; main()
// is a one-line wrapper around run().
//
// Exit codes: 0 success, 2 configuration error (bad flags, bad mini-language,
// missing files), 3 numeric failure.

namespace wba::cli {

// Weight mini-language: bump:p=1,q=2 | dexp | sin2 | uniform.
WeightSpec parse_weight(const std::string& text);

// Semicolon-separated list of weight specs, e.g. "bump:p=1,q=1;dexp".
std::vector<WeightSpec> parse_weight_list(const std::string& text);

// Column-header-safe name for a weight spec ("bump_p1_q2", "dexp", ...).
std::string weight_tag(const WeightSpec& spec);

// Grid mini-language: lo:hi:log|lin with an optional :count. Without a
// count, log doubles from lo and lin uses 17 evenly spaced points; grids are
// deduplicated and strictly increasing.
std::vector<std::int64_t> parse_grid(const std::string& text);

Precision parse_precision(const std::string& text);

// Comma-separated doubles ("0.5,0.25").
std::vector<double> parse_double_list(const std::string& text);

struct ParsedSignal {
  SignalPtr signal;
  // Exact limit of the weighted average when the mini-language defines one
  // (const, periodic, and orbit signals).
  std::vector<double> reference;
  bool has_reference = false;
  // Orbit ingredients, present for orbit:/fig5 signals.
  TrigPoly poly;
  Rotation rho;
  std::vector<double> theta0;
  bool has_rotation = false;
};

// Signal mini-language:
//   const:c | periodic:v1,v2,... | fig5 | orbit:file.json,rho=...[,theta0=...]
//   | csv:file.csv[,dim=k] | flow:cos2pi[,h=0.001]
ParsedSignal parse_signal(const std::string& text);

// Flat key=value config text (or a flat JSON object such as a manifest)
// turned into --key=value argument strings. Blank lines and # comments are
// skipped, as are the reserved keys "subcommand" and "config" and entries
// with empty values.
std::vector<std::string> load_config_args(const std::string& text);

// Injects the arguments from any --config file right after the subcommand
// token, so explicit flags override the file regardless of their position.
std::vector<std::string> preprocess_args(int argc, const char* const* argv);

// Full CLI entry point.
int run(int argc, const char* const* argv);

}  // namespace wba::cli
