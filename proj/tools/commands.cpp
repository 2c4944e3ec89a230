// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include "passive/passive.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace passive::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

/// Bad or missing command-line input; exits with status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) throw UsageError("not a finite number: '" + text + "'");
  return v;
}

int parse_int(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0' || v < -1000000000L || v > 1000000000L)
    throw UsageError("not an integer: '" + text + "'");
  return int(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

Cell num(double v) { return std::isfinite(v) ? Cell(v) : Cell(std::monostate{}); }
Cell num(std::optional<double> v) { return v ? num(*v) : Cell(std::monostate{}); }
Cell integer(std::int64_t v) { return Cell(v); }
Cell flag(bool v) { return Cell(std::int64_t(v ? 1 : 0)); }

Hamiltoniand make_hamiltonian(const RunConfig& c) {
  if (c.energies.empty()) throw UsageError("--energies is required");
  return Hamiltoniand(Vector<double>::Map(c.energies.data(), Eigen::Index(c.energies.size())));
}

DiagonalStated make_state(const RunConfig& c, const Hamiltoniand& h) {
  if (c.state && c.beta) throw UsageError("--state and --beta are mutually exclusive");
  if (c.beta) return thermal_state(*c.beta, h);
  if (!c.state) throw UsageError("one of --state or --beta is required");
  return DiagonalStated(Vector<double>::Map(c.state->data(), Eigen::Index(c.state->size())));
}

void require_qutrit(const Hamiltoniand& h) {
  if (h.dim() != 3) throw UsageError("this command needs exactly three energies");
}

AlphaStrategy<double> make_strategy(const std::string& s) {
  if (s == "energy") return AlphaStrategy<double>::energy_conserving();
  if (s == "entropy") return AlphaStrategy<double>::entropy_conserving();
  if (s.rfind("alpha=", 0) == 0) return AlphaStrategy<double>::constant(parse_number(s.substr(6)));
  throw UsageError("--strategy must be energy, entropy or alpha=X");
}

Table cycle_table(const RunConfig& c) {
  const auto h = make_hamiltonian(c);
  require_qutrit(h);
  const auto p = make_state(c, h);
  const auto o = run_cycle(p, h, CycleParams(c.m, c.n));
  Table t{{"quantity", "value"}, {}, {}};
  const auto add = [&](std::string key, Cell v) { t.rows.push_back({Cell(std::move(key)), std::move(v)}); };
  add("m", integer(c.m));
  add("n", integer(c.n));
  add("delta_p", num(o.delta_p));
  add("work", num(o.work));
  add("q_hot", num(o.q_hot));
  add("q_cold", num(o.q_cold));
  add("heat_hot", num(o.heat_hot));
  add("heat_cold", num(o.heat_cold));
  add("efficiency", num(o.efficiency));
  add("efficiency_meaningful", flag(o.efficiency_meaningful));
  add("alpha_coeff", num(o.alpha_coeff));
  add("closed_form", flag(o.closed_form));
  add("final_active", flag(o.final_active));
  for (Eigen::Index i = 0; i < 3; ++i) add("final_p" + std::to_string(i), num(o.final_system[i]));
  for (Eigen::Index j = 0; j < o.machine.dim(); ++j) add("machine_" + std::to_string(j), num(o.machine[j]));
  return t;
}

Table fig4_table(const RunConfig& c) {
  if (!c.sweep_gap) throw UsageError("fig4 needs --sweep-gap LO:HI:STEPS");
  const auto h = make_hamiltonian(c);
  require_qutrit(h);
  const auto p = make_state(c, h);
  const auto table = virtual_temperatures(p, h);
  const double beta_hot = table.beta_hot(), beta_cold = table.beta_cold();
  const double gap21 = h.gap21();
  const GapSweep& s = *c.sweep_gap;

  Table t{{"gap", "work", "efficiency", "efficiency_meaningful", "delta_p"}, {}, {}};
  for (int i = 0; i < s.steps; ++i) {
    const double gap = s.steps == 1 ? s.lo : s.lo + (s.hi - s.lo) * double(i) / double(s.steps - 1);
    const double x = std::exp(-beta_hot * gap), y = std::exp(-beta_cold * gap21);
    Vector<double> w(3);
    w << 1.0, x, x * y;
    const Hamiltoniand hg{0.0, gap, gap + gap21};
    const auto o = run_cycle(DiagonalStated::normalized(w), hg, CycleParams(c.m, c.n));
    t.rows.push_back({num(gap), num(o.work), num(o.efficiency), flag(o.efficiency_meaningful), num(o.delta_p)});
  }
  t.summary = {{"beta_hot", num(beta_hot)},
               {"beta_cold", num(beta_cold)},
               {"gap21", num(gap21)},
               {"zero_work_gap_energy", num(double(c.n) * gap21 / double(c.m))},
               {"zero_work_gap_thermal", beta_hot > 0 ? num(beta_cold / beta_hot * gap21) : Cell{}}};
  return t;
}

std::vector<std::pair<int, int>> default_cycles(const RationalGapRatio& r) {
  std::vector<std::pair<int, int>> out;
  for (std::int64_t k = 1; out.size() < 3 && k <= 1000; ++k)
    if ((r.M * k) % r.N == 0) out.emplace_back(int(r.M * k / r.N + 1), int(k));
  return out;
}

Table fig5_table(const RunConfig& c) {
  const auto h = make_hamiltonian(c);
  require_qutrit(h);
  const auto ratio = approximate_gap_ratio(h, 1e-9);
  const auto cycles = c.cycles.empty() ? default_cycles(ratio) : c.cycles;
  Table t{{"p0", "p1", "p2", "region"}, {}, {}};
  for (const auto& [m, n] : cycles) t.columns.push_back("active_m" + std::to_string(m) + "_n" + std::to_string(n));
  for (const auto& p : passive_simplex_grid<double>(c.grid)) {
    std::vector<Cell> row{num(p[0]), num(p[1]), num(p[2]), Cell(std::string(to_string(classify(p, ratio))))};
    for (const auto& [m, n] : cycles) row.push_back(flag(in_activation_region(p, h, CycleParams(m, n))));
    t.rows.push_back(std::move(row));
  }
  t.summary = {{"M", integer(ratio.M)}, {"N", integer(ratio.N)}};
  for (const auto& [m, n] : cycles)
    t.summary.emplace_back("coverage_m" + std::to_string(m) + "_n" + std::to_string(n),
                           num(coverage_fraction<double>(ratio, CycleParams(m, n), std::max(c.grid, 10))));
  return t;
}

Cell beta_cell(const InverseTemperature<double>& b) { return b.is_infinite() ? Cell(std::string("inf")) : num(b.value()); }

Table fig6_table(const RunConfig& c) {
  const auto h = make_hamiltonian(c);
  require_qutrit(h);
  const auto p = make_state(c, h);
  const auto traj = integrate_trajectory(p, h, make_strategy(c.strategy), c.step, c.max_steps);
  Table t{{"t", "p0", "p1", "p2", "energy", "entropy", "alpha", "work", "heat_hot"}, {}, {}};
  for (const auto& s : traj.samples)
    t.rows.push_back({num(s.t), num(s.state[0]), num(s.state[1]), num(s.state[2]), num(s.point.energy),
                      num(s.point.entropy), num(s.alpha), num(s.work), num(s.heat_hot)});
  t.summary = {{"termination", Cell(std::string(to_string(traj.termination)))},
               {"endpoint_beta", num(traj.endpoint_beta)},
               {"accumulated_work", num(traj.accumulated_work)},
               {"accumulated_heat_hot", num(traj.accumulated_heat_hot)},
               {"beta_equal_energy", beta_cell(beta_from_energy(mean_energy(p, h), h))},
               {"beta_equal_entropy", beta_cell(beta_from_entropy(entropy(p), h))},
               {"optimal_work", num(optimal_work(p, h))},
               {"rejected_steps", integer(traj.rejected_steps)}};
  return t;
}

Table optimize_table(const RunConfig& c) {
  const auto h = make_hamiltonian(c);
  const auto p = make_state(c, h);
  if (p.dim() != h.dim()) throw Error(Errc::dimension_mismatch, "cli", "state and energies differ in length");
  if (c.dim_cap < 2) throw UsageError("--dim-cap must be at least 2");
  Table t{{"m", "n", "window", "work", "efficiency"}, {}, {}};
  std::optional<std::vector<Cell>> best;
  double best_work = 0;
  for (int d = 2; d <= c.dim_cap; ++d) {
    for (int m = 1; m < d; ++m) {
      const CycleParams params(m, d - m);
      const auto [k, o] = best_window(p, h, params);
      std::vector<Cell> row{integer(m), integer(d - m), integer(k), num(o.work), num(o.efficiency)};
      if (!best || o.work > best_work) {
        best = row;
        best_work = o.work;
      }
      t.rows.push_back(std::move(row));
    }
  }
  t.summary = {{"best_m", (*best)[0]}, {"best_n", (*best)[1]}, {"best_window", (*best)[2]}, {"best_work", (*best)[3]}};
  return t;
}

// Deterministic uniform doubles in [0, 1) independent of the standard library.
struct UnitStream {
  std::uint64_t state;
  double next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return double(z >> 11) * 0x1.0p-53;
  }
};

std::vector<DiagonalStated> verification_states(int count) {
  UnitStream rng{20240601};
  std::vector<DiagonalStated> states;
  while (int(states.size()) < count) {
    Vector<double> w(3);
    for (int i = 0; i < 3; ++i) w[i] = -std::log(1.0 - rng.next());
    std::sort(w.data(), w.data() + 3, std::greater<double>());
    const auto p = DiagonalStated::normalized(w);
    if (p[2] > 1e-3 && p[0] - p[1] > 1e-6 && p[1] - p[2] > 1e-6) states.push_back(p);
  }
  return states;
}

struct Check {
  std::string name;
  std::int64_t cases = 0;
  double max_error = 0;
  double tolerance = 0;
  void record(double err) {
    ++cases;
    max_error = std::max(max_error, err);
  }
  bool pass() const { return max_error <= tolerance; }
};

Table verify_table(const RunConfig& c, bool& ok) {
  const Hamiltoniand h = c.energies.size() == 3 ? make_hamiltonian(c) : Hamiltoniand{0.0, 3.0, 4.0};
  Check example{"worked_example", 0, 0, 1e-12};
  {
    const DiagonalStated p{0.5, 0.35, 0.15};
    const auto o = run_cycle(p, Hamiltoniand{0.0, 3.0, 4.0}, CycleParams(1, 1));
    const double dp = 0.0475 / 1.35;
    example.record(std::abs(o.delta_p - dp));
    example.record(std::abs(o.work - 2 * dp));
    example.record(std::abs(*o.efficiency - 2.0 / 3.0));
    example.record(std::abs(o.machine[0] - 0.85 / 1.35));
  }
  Check machine{"closed_form_vs_fixed_point", 0, 0, 1e-10};
  Check reuse{"reusability", 0, 0, 1e-12};
  Check work{"work_vs_simulation", 0, 0, 1e-12};
  Check heat{"heat_identity", 0, 0, 1e-12};
  for (const auto& p : verification_states(c.verify_states)) {
    for (int m = 2; m <= 8; ++m) {
      for (int n = 3; n <= 8; ++n) {
        const CycleParams params(m, n);
        Vector<double> q = machine_distribution(p, params).probs();
        q[0] += c.inject_perturbation;
        q[1] -= c.inject_perturbation;
        const DiagonalStated qs(q);
        machine.record((q - stationary_machine(p, params).probs()).cwiseAbs().maxCoeff());
        const auto sim = simulate_cycle(p, h, params, qs);
        reuse.record((sim.machine.probs() - q).cwiseAbs().maxCoeff());
        const auto o = run_cycle(p, h, params);
        work.record(std::abs(o.work - sim.work) / std::max(1.0, std::abs(o.work)));
        heat.record(std::max({std::abs(o.work - (o.heat_hot - o.heat_cold)),
                              std::abs(o.heat_hot - m * h.gap10() * o.delta_p),
                              std::abs(o.heat_cold - n * h.gap21() * o.delta_p)}));
      }
    }
  }
  Table t{{"check", "cases", "max_error", "tolerance", "pass"}, {}, {}};
  ok = true;
  for (const Check* ch : {&example, &machine, &reuse, &work, &heat}) {
    t.rows.push_back({Cell(ch->name), integer(ch->cases), num(ch->max_error), num(ch->tolerance), flag(ch->pass())});
    ok = ok && ch->pass();
  }
  t.summary = {{"all_pass", flag(ok)}};
  return t;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
  };
  return std::visit(Visitor{}, cell);
}

ordered_json cell_to_json(const Cell& cell) {
  struct Visitor {
    ordered_json operator()(std::monostate) const { return nullptr; }
    ordered_json operator()(double v) const { return v; }
    ordered_json operator()(std::int64_t v) const { return v; }
    ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, cell);
}

Cell cell_from_json(const ordered_json& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_number_float()) return j.get<double>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) return j.get<std::string>();
  throw UsageError("unexpected value in report: " + j.dump());
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::invalid_argument, "cli", "cannot open output file " + path);
  file << text;
}

}  // namespace

GapSweep parse_sweep(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("--sweep-gap expects LO:HI:STEPS");
  GapSweep s{parse_number(parts[0]), parse_number(parts[1]), parse_int(parts[2])};
  if (s.steps < 1) throw UsageError("--sweep-gap needs at least one step");
  return s;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) values.push_back(parse_number(part));
  if (values.empty()) throw UsageError("empty number list");
  return values;
}

std::vector<std::pair<int, int>> parse_cycles(const std::string& text) {
  std::vector<std::pair<int, int>> cycles;
  for (const auto& part : split(text, ',')) {
    const auto mn = split(part, ':');
    if (mn.size() != 2) throw UsageError("--cycles expects M:N[,M:N...]");
    cycles.emplace_back(parse_int(mn[0]), parse_int(mn[1]));
  }
  return cycles;
}

ordered_json config_to_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  j["state"] = c.state ? ordered_json(*c.state) : ordered_json(nullptr);
  j["beta"] = c.beta ? ordered_json(*c.beta) : ordered_json(nullptr);
  j["energies"] = c.energies;
  j["m"] = c.m;
  j["n"] = c.n;
  j["sweep_gap"] = c.sweep_gap ? ordered_json{{"lo", c.sweep_gap->lo}, {"hi", c.sweep_gap->hi}, {"steps", c.sweep_gap->steps}}
                               : ordered_json(nullptr);
  j["strategy"] = c.strategy;
  j["grid"] = c.grid;
  ordered_json cycles = ordered_json::array();
  for (const auto& [m, n] : c.cycles) cycles.push_back({m, n});
  j["cycles"] = cycles;
  j["step"] = c.step;
  j["max_steps"] = c.max_steps;
  j["dim_cap"] = c.dim_cap;
  j["verify_states"] = c.verify_states;
  j["inject_perturbation"] = c.inject_perturbation;
  j["out"] = c.out;
  j["format"] = c.format;
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("configuration must be a JSON object");
  RunConfig c;
  try {
    read_field(j, "command", c.command);
    if (j.contains("state") && !j.at("state").is_null()) c.state = j.at("state").get<std::vector<double>>();
    if (j.contains("beta") && !j.at("beta").is_null()) c.beta = j.at("beta").get<double>();
    read_field(j, "energies", c.energies);
    read_field(j, "m", c.m);
    read_field(j, "n", c.n);
    if (j.contains("sweep_gap") && !j.at("sweep_gap").is_null()) {
      const auto& s = j.at("sweep_gap");
      c.sweep_gap = GapSweep{s.at("lo").get<double>(), s.at("hi").get<double>(), s.at("steps").get<int>()};
    }
    read_field(j, "strategy", c.strategy);
    read_field(j, "grid", c.grid);
    if (j.contains("cycles"))
      for (const auto& mn : j.at("cycles")) c.cycles.emplace_back(mn.at(0).get<int>(), mn.at(1).get<int>());
    read_field(j, "step", c.step);
    read_field(j, "max_steps", c.max_steps);
    read_field(j, "dim_cap", c.dim_cap);
    read_field(j, "verify_states", c.verify_states);
    read_field(j, "inject_perturbation", c.inject_perturbation);
    read_field(j, "out", c.out);
    read_field(j, "format", c.format);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad configuration: ") + e.what());
  }
  return c;
}

Report dispatch(const RunConfig& config) {
  Report r{config, {}, true};
  const std::string& cmd = config.command;
  if (cmd == "cycle") r.results = cycle_table(config);
  else if (cmd == "fig4") r.results = fig4_table(config);
  else if (cmd == "fig5") r.results = fig5_table(config);
  else if (cmd == "fig6") r.results = fig6_table(config);
  else if (cmd == "optimize") r.results = optimize_table(config);
  else if (cmd == "verify") r.results = verify_table(config, r.ok);
  else throw UsageError("unknown command '" + cmd + "'");
  return r;
}

std::string to_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + csv_field(Cell(t.columns[i]));
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_field(row[i]);
    s += '\n';
  }
  return s;
}

std::string to_json(const Report& r) {
  ordered_json j;
  j["config"] = config_to_json(r.config);
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.results.rows) {
    ordered_json jr = ordered_json::array();
    for (const auto& cell : row) jr.push_back(cell_to_json(cell));
    rows.push_back(std::move(jr));
  }
  ordered_json summary = ordered_json::object();
  for (const auto& [key, cell] : r.results.summary) summary[key] = cell_to_json(cell);
  j["results"] = {{"columns", r.results.columns}, {"rows", std::move(rows)}, {"summary", std::move(summary)}};
  j["ok"] = r.ok;
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  Report r;
  r.config = config_from_json(json(j.at("config")));
  const auto& res = j.at("results");
  r.results.columns = res.at("columns").get<std::vector<std::string>>();
  for (const auto& row : res.at("rows")) {
    std::vector<Cell> cells;
    for (const auto& v : row) cells.push_back(cell_from_json(v));
    r.results.rows.push_back(std::move(cells));
  }
  for (const auto& [key, v] : res.at("summary").items()) r.results.summary.emplace_back(key, cell_from_json(v));
  r.ok = j.at("ok").get<bool>();
  return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Swap-cycle engines acting on passive qutrit states"};
  app.require_subcommand(1);

  struct Raw {
    std::string config, state, energies, sweep, cycles;
    double beta = 0;
  } raw;
  RunConfig flags;
  struct Bound {
    CLI::Option *config, *state, *beta, *energies, *m, *n, *sweep, *strategy, *grid, *cycles, *step, *max_steps,
        *dim_cap, *verify_states, *inject, *out, *format;
  };
  std::vector<std::pair<CLI::App*, Bound>> subs;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"cycle", "Run one cycle and report work, heats and the machine"},
      {"fig4", "Sweep the lower gap at fixed virtual temperatures"},
      {"fig5", "Region map over the passive simplex"},
      {"fig6", "Quasi-static trajectory samples"},
      {"optimize", "Best cycle under a machine-dimension cap"},
      {"verify", "Closed form against the permutation oracle"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    Bound b{};
    b.config = sub->add_option("--config", raw.config, "JSON configuration file; flags override it");
    b.state = sub->add_option("--state", raw.state, "Probabilities p0,p1,p2[,...]");
    b.beta = sub->add_option("--beta", raw.beta, "Thermal state at this inverse temperature");
    b.energies = sub->add_option("--energies", raw.energies, "Energies E0,E1,E2[,...]");
    b.m = sub->add_option("--m", flags.m, "Hot swaps");
    b.n = sub->add_option("--n", flags.n, "Cold swaps");
    b.sweep = sub->add_option("--sweep-gap", raw.sweep, "Lower-gap sweep LO:HI:STEPS");
    b.strategy = sub->add_option("--strategy", flags.strategy, "energy | entropy | alpha=X");
    b.grid = sub->add_option("--grid", flags.grid, "Simplex grid resolution");
    b.cycles = sub->add_option("--cycles", raw.cycles, "Cycles M:N[,M:N...] for the region map");
    b.step = sub->add_option("--step", flags.step, "Trajectory step");
    b.max_steps = sub->add_option("--max-steps", flags.max_steps, "Trajectory step limit");
    b.dim_cap = sub->add_option("--dim-cap", flags.dim_cap, "Largest machine dimension m + n");
    b.verify_states = sub->add_option("--verify-states", flags.verify_states, "Random states checked by verify");
    b.inject = sub->add_option("--inject-perturbation", flags.inject_perturbation,
                               "Shift added to the closed-form machine (mutation test)");
    b.out = sub->add_option("--out", flags.out, "Output path (default stdout)");
    b.format = sub->add_option("--format", flags.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    subs.emplace_back(sub, b);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    const auto it = std::find_if(subs.begin(), subs.end(), [](const auto& s) { return s.first->parsed(); });
    const Bound& b = it->second;
    RunConfig c;
    if (b.config->count()) {
      std::ifstream in(raw.config);
      if (!in) throw UsageError("cannot read configuration file " + raw.config);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError(std::string("bad configuration: ") + e.what());
      }
      c = config_from_json(j);
    }
    c.command = it->first->get_name();
    if (b.state->count()) c.state = parse_list(raw.state);
    if (b.beta->count()) c.beta = raw.beta;
    if (b.energies->count()) c.energies = parse_list(raw.energies);
    if (b.m->count()) c.m = flags.m;
    if (b.n->count()) c.n = flags.n;
    if (b.sweep->count()) c.sweep_gap = parse_sweep(raw.sweep);
    if (b.strategy->count()) c.strategy = flags.strategy;
    if (b.grid->count()) c.grid = flags.grid;
    if (b.cycles->count()) c.cycles = parse_cycles(raw.cycles);
    if (b.step->count()) c.step = flags.step;
    if (b.max_steps->count()) c.max_steps = flags.max_steps;
    if (b.dim_cap->count()) c.dim_cap = flags.dim_cap;
    if (b.verify_states->count()) c.verify_states = flags.verify_states;
    if (b.inject->count()) c.inject_perturbation = flags.inject_perturbation;
    if (b.out->count()) c.out = flags.out;
    if (b.format->count()) c.format = flags.format;
    if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
    if (c.beta && !std::isfinite(*c.beta)) throw UsageError("--beta must be finite");

    const Report report = dispatch(c);
    write_output(c.out, c.format == "json" ? to_json(report) : to_csv(report.results), out);
    if (!report.ok) {
      err << "verify: one or more checks failed\n";
      return 1;
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 1;
  }
}

}  // namespace passive::cli
