// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: configuration, dispatch and report encoding.
#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace passive::cli {

struct GapSweep {
  double lo = 0;
  double hi = 0;
  int steps = 0;
  friend bool operator==(const GapSweep&, const GapSweep&) = default;
};

struct RunConfig {
  std::string command;
  std::optional<std::vector<double>> state;
  std::optional<double> beta;
  std::vector<double> energies;
  int m = 1;
  int n = 1;
  std::optional<GapSweep> sweep_gap;
  std::string strategy = "entropy";
  int grid = 50;
  std::vector<std::pair<int, int>> cycles;
  double step = 1e-3;
  long max_steps = 1000000;
  int dim_cap = 12;
  int verify_states = 20;
  double inject_perturbation = 0;
  std::string out;
  std::string format = "csv";
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
  friend bool operator==(const Table&, const Table&) = default;
};

struct Report {
  RunConfig config;
  Table results;
  bool ok = true;  // false when a verification check failed
};

GapSweep parse_sweep(const std::string& text);
std::vector<double> parse_list(const std::string& text);
std::vector<std::pair<int, int>> parse_cycles(const std::string& text);

nlohmann::ordered_json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

Report dispatch(const RunConfig& config);

std::string to_csv(const Table& t);
std::string to_json(const Report& r);
/// Inverse of to_json.
Report report_from_json(const std::string& text);

/// Full program: parses argv, runs, writes output; returns the exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace passive::cli
