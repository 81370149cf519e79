// Copyright 2026 The malab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "malab/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include "json.hpp"

#include "malab/error.hpp"
#include "malab/field_io.hpp"
#include "malab/oracle.hpp"

namespace malab {
namespace fs = std::filesystem;
namespace pt = boost::property_tree;
using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"grid", {"nx", "ny", "nt"}},
      {"data", {"builtin", "phi0", "phi1"}},
      {"schedule", {"eps_start", "eps_end", "ratio"}},
      {"solver",
       {"tol_res", "max_outer", "armijo_factor", "armijo_slope", "linear_tol", "linear_max",
        "gmres_restart", "min_step", "preconditioner", "accept_rounding_floor"}},
      {"diagnostics", {"A", "alpha"}},
      {"output", {"directory"}},
  };
  return keys;
}

double parse_double(const std::string& sec, const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d))
    config_error("[" + sec + "] " + key + ": expected a finite number, got '" + v + "'");
  return d;
}

int parse_int(const std::string& sec, const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long n = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || n < -1000000000L || n > 1000000000L)
    config_error("[" + sec + "] " + key + ": expected an integer, got '" + v + "'");
  return static_cast<int>(n);
}

bool parse_bool(const std::string& sec, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_error("[" + sec + "] " + key + ": expected true or false, got '" + v + "'");
}

/// Runs `f`, rethrowing validation errors as config errors tagged with `where`.
template <class F>
void tagged(const std::string& where, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    config_error(where + ": " + e.what());
  }
}

json verdict_json(const Verdict& v) {
  return {{"check", v.check}, {"value", v.value}, {"threshold", v.threshold}, {"pass", v.pass}};
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
  if (!os) throw Error(ErrorCode::Io, "cannot write " + p.string());
}

Periodic1d row_interpolant(const SliceField& s) {
  std::vector<double> row(static_cast<std::size_t>(s.nx()));
  for (int i = 0; i < s.nx(); ++i) row[static_cast<std::size_t>(i)] = s(i, 0);
  return trig_interpolant(std::move(row));
}

std::string field_name(std::size_t idx) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "psi_%02zu.mafld", idx);
  return buf;
}

struct Prepared {
  RunConfig cfg;
  GridSpec grid;
  EpsProblem problem;
  bool x_only = false;
};

Prepared prepare(const fs::path& config) {
  Prepared p;
  p.cfg = load_run_config(config);
  p.grid = run_grid(p.cfg);
  PotentialPair pair = load_pair(p.cfg, p.grid);
  p.x_only = is_x_only(pair.phi0) && is_x_only(pair.phi1);
  const auto schedule = make_schedule(p.cfg.eps_start, p.cfg.eps_end, p.cfg.ratio);
  tagged("[data]", [&] { p.problem = build_problem(pair, p.grid, schedule); });
  return p;
}

/// Per-t C1 distance between two fields.
std::vector<double> slice_c1(const ScalarField& f, const ScalarField& g) {
  const GridSpec& grid = f.grid();
  ScalarField d(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) d.values()[n] = f.values()[n] - g.values()[n];
  std::vector<double> out;
  for (int k = 0; k < grid.nt; ++k) {
    double m = 0.0;
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        m = std::max(m, std::sqrt(2.0 * grad_norm_sq(d, {i, j, k})));
    out.push_back(m);
  }
  return out;
}

std::string fmt(const char* spec, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    config_error("line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [name, sec] : tree) {
    const auto it = known_keys().find(name);
    if (sec.empty() || it == known_keys().end()) {
      if (sec.empty()) config_error("key '" + name + "' outside of any section");
      config_error("unknown section [" + name + "]");
    }
    for (const auto& [key, val] : sec)
      if (!it->second.count(key)) config_error("[" + name + "] unknown key '" + key + "'");
  }

  RunConfig cfg;
  cfg.text = text;
  const auto grid = tree.get_child_optional("grid");
  if (!grid) config_error("missing section [grid]");
  for (const char* key : {"nx", "ny", "nt"}) {
    const auto v = grid->get_optional<std::string>(key);
    if (!v) config_error(std::string("[grid] missing key '") + key + "'");
    const int n = parse_int("grid", key, *v);
    (key[1] == 'x' ? cfg.nx : key[1] == 'y' ? cfg.ny : cfg.nt) = n;
  }
  tagged("[grid]", [&] { (void)make_grid(1, cfg.nx, cfg.ny, cfg.nt); });

  if (const auto data = tree.get_child_optional("data")) {
    cfg.data.builtin = data->get<std::string>("builtin", "");
    const auto p0 = data->get_optional<std::string>("phi0");
    const auto p1 = data->get_optional<std::string>("phi1");
    if (!cfg.data.builtin.empty() && (p0 || p1))
      config_error("[data] give either 'builtin' or 'phi0'/'phi1', not both");
    if (cfg.data.builtin.empty()) {
      if (!p0 || !p1) config_error("[data] needs 'builtin' or both 'phi0' and 'phi1'");
      cfg.data.phi0 = fs::path(*p0).is_relative() ? base_dir / *p0 : fs::path(*p0);
      cfg.data.phi1 = fs::path(*p1).is_relative() ? base_dir / *p1 : fs::path(*p1);
      for (const auto& f : {cfg.data.phi0, cfg.data.phi1})
        if (!fs::exists(f)) config_error("[data] file not found: " + f.string());
    } else {
      static const std::set<std::string> names{"trivial", "constant-shift", "xonly-cos",
                                               "generic-2d"};
      if (!names.count(cfg.data.builtin))
        config_error("[data] unknown builtin '" + cfg.data.builtin + "'");
    }
  } else {
    cfg.data.builtin = "trivial";
  }

  if (const auto s = tree.get_child_optional("schedule")) {
    if (auto v = s->get_optional<std::string>("eps_start"))
      cfg.eps_start = parse_double("schedule", "eps_start", *v);
    if (auto v = s->get_optional<std::string>("eps_end"))
      cfg.eps_end = parse_double("schedule", "eps_end", *v);
    if (auto v = s->get_optional<std::string>("ratio"))
      cfg.ratio = parse_double("schedule", "ratio", *v);
  }
  tagged("[schedule]", [&] { (void)make_schedule(cfg.eps_start, cfg.eps_end, cfg.ratio); });

  if (const auto s = tree.get_child_optional("solver")) {
    NewtonConfig& n = cfg.solver;
    for (const auto& [key, val] : *s) {
      const std::string v = val.data();
      if (key == "tol_res") n.tol_res = parse_double("solver", key, v);
      else if (key == "max_outer") n.max_outer = parse_int("solver", key, v);
      else if (key == "armijo_factor") n.armijo_factor = parse_double("solver", key, v);
      else if (key == "armijo_slope") n.armijo_slope = parse_double("solver", key, v);
      else if (key == "linear_tol") n.linear_tol = parse_double("solver", key, v);
      else if (key == "linear_max") n.linear_max = parse_int("solver", key, v);
      else if (key == "gmres_restart") n.gmres_restart = parse_int("solver", key, v);
      else if (key == "min_step") n.min_step = parse_double("solver", key, v);
      else if (key == "accept_rounding_floor") n.accept_rounding_floor = parse_bool("solver", key, v);
      else if (key == "preconditioner")
        tagged("[solver] preconditioner", [&] { n.preconditioner = parse_preconditioner(v); });
    }
  }
  tagged("[solver]", [&] { cfg.solver.validate(); });

  if (const auto s = tree.get_child_optional("diagnostics")) {
    if (auto v = s->get_optional<std::string>("A"))
      cfg.diagnostics.q.A = parse_double("diagnostics", "A", *v);
    if (auto v = s->get_optional<std::string>("alpha"))
      cfg.diagnostics.alpha = parse_double("diagnostics", "alpha", *v);
  }
  tagged("[diagnostics]", [&] { cfg.diagnostics.q.validate(); });
  if (!(cfg.diagnostics.alpha > 0.0 && cfg.diagnostics.alpha < 1.0))
    config_error("[diagnostics] alpha must lie in (0,1)");

  if (const auto s = tree.get_child_optional("output"))
    if (auto v = s->get_optional<std::string>("directory")) {
      if (v->empty()) config_error("[output] directory is empty");
      cfg.output = *v;
    }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) config_error("cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

std::vector<double> make_schedule(double start, double end, double ratio) {
  if (!(end > 0.0) || !(start > end))
    throw Error(ErrorCode::InvalidArgument, "schedule needs eps_start > eps_end > 0");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw Error(ErrorCode::InvalidArgument, "schedule ratio must lie in (0,1)");
  std::vector<double> s;
  for (int n = 0;; ++n) {
    double e = start * std::pow(ratio, n);
    if (std::abs(e - end) <= 1e-9 * end) e = end;
    if (e < end) break;
    s.push_back(e);
    if (e == end) break;
  }
  if (s.back() != end) s.push_back(end);
  validate_schedule(s);
  return s;
}

GridSpec run_grid(const RunConfig& cfg) { return make_grid(1, cfg.nx, cfg.ny, cfg.nt); }

PotentialPair builtin_pair(const std::string& name, const GridSpec& grid) {
  SliceField p0(grid.nx, grid.ny), p1(grid.nx, grid.ny);
  if (name == "trivial") {
  } else if (name == "constant-shift") {
    p1 = SliceField(grid.nx, grid.ny, 0.5);
  } else if (name == "xonly-cos") {
    p1 = SliceField::sample(grid, [](double x, double) { return 0.05 * std::cos(kTwoPi * x); });
  } else if (name == "generic-2d") {
    p0 = SliceField::sample(grid, [](double x, double y) {
      return 0.02 * std::sin(kTwoPi * x) * std::sin(kTwoPi * y);
    });
    p1 = SliceField::sample(grid, [](double x, double y) {
      return 0.03 * std::cos(kTwoPi * x) + 0.02 * std::cos(kTwoPi * (x + y));
    });
  } else {
    config_error("[data] unknown builtin '" + name + "'");
  }
  return make_potential_pair(grid, std::move(p0), std::move(p1));
}

PotentialPair load_pair(const RunConfig& cfg, const GridSpec& grid) {
  PotentialPair out;
  tagged("[data]", [&] {
    if (!cfg.data.builtin.empty()) {
      out = builtin_pair(cfg.data.builtin, grid);
      return;
    }
    auto layer = [&](const fs::path& p) {
      const ScalarField f = read_field(p);
      if (f.grid().nx != grid.nx || f.grid().ny != grid.ny)
        throw Error(ErrorCode::DimensionMismatch,
                    p.string() + " has a different (nx, ny) than [grid]");
      return extract_slice(f, 0);
    };
    out = make_potential_pair(grid, layer(cfg.data.phi0), layer(cfg.data.phi1));
  });
  return out;
}

bool is_x_only(const SliceField& s) {
  for (int j = 1; j < s.ny(); ++j)
    for (int i = 0; i < s.nx(); ++i)
      if (std::abs(s(i, j) - s(i, 0)) > 1e-12) return false;
  return true;
}

int cmd_geodesic(const fs::path& config, const CommandOptions& opt) {
  std::ostream& log = opt.log ? *opt.log : std::cout;
  Prepared prep;
  fs::path out;
  try {
    prep = prepare(config);
    out = opt.out.value_or(prep.cfg.output);
    fs::create_directories(out);
  } catch (const Error& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    log << "config error: [output] " << e.what() << '\n';
    return kExitConfig;
  }
  const RunConfig& cfg = prep.cfg;
  const GridSpec& grid = prep.grid;

  SweepResult sweep;
  try {
    sweep = solve_geodesic(prep.problem, cfg.solver);
  } catch (const Error& e) {
    sweep.failure = SweepFailure{prep.problem.schedule.front(), e.code(), e.what()};
  }

  std::vector<std::string> files{"config.ini", "version.txt"};
  write_text(out / "config.ini", cfg.text);
  write_text(out / "version.txt", std::string("malab ") + kVersion + "\nMAFLD 1\n");

  std::vector<DiagnosticsRow> rows;
  json solves = json::array();
  double bound_ratio = 0.0;
  for (std::size_t n = 0; n < sweep.solutions.size(); ++n) {
    const EpsSolution& s = sweep.solutions[n];
    write_field(s.psi, out / field_name(n));
    files.push_back(field_name(n));
    rows.push_back(diagnostics_row(s.eps, s.psi, cfg.diagnostics));
    const HessianBoundCheck hb = hessian_bound_check(s.psi);
    bound_ratio = std::max(
        bound_ratio, hb.max_entry / (hb.constant * std::max(hb.sup_lambda1, 0.0) + hb.constant));
    const DiagnosticsRow& r = rows.back();
    solves.push_back({{"eps", s.eps},
                      {"field", field_name(n)},
                      {"outer_iters", s.report.outer_iters},
                      {"final_residual", s.report.residual_history.back()},
                      {"residual_floor", s.report.residual_floor},
                      {"min_det", r.min_det},
                      {"q_argmax", {r.q_argmax.i, r.q_argmax.j, r.q_argmax.k}}});
    log << "eps=" << fmt("%.3e", s.eps) << " newton=" << s.report.outer_iters
        << " residual=" << fmt("%.3e", s.report.residual_history.back())
        << " sup_lambda1=" << fmt("%.6e", r.sup_lambda1) << '\n';
  }

  std::vector<Verdict> verdicts;
  if (sweep.ok()) {
    verdicts = standard_verdicts(rows);
    verdicts.push_back({"hessian_entry_bound_ratio", bound_ratio, 1.0, bound_ratio <= 1.0});
  }

  json report;
  report["header"] = {
      {"version", kVersion},
      {"plateau_rule",
       "least-squares slope of the value against log(1/eps) over the last three rows; "
       "PASS iff slope <= 0.05 * max|value| and last-two relative growth <= 10%"},
      {"degeneration_rule", "min slot determinant / eps within [0.5, 2]"},
      {"hessian_rule", "max Hessian entry <= C sup lambda1 + C, C = 2 (1 + max slot trace)"},
      {"plateau_slope_factor", kPlateauSlope},
      {"plateau_max_change", kPlateauChange},
      {"A", cfg.diagnostics.q.A},
      {"alpha", cfg.diagnostics.alpha},
      {"grid", {grid.nx, grid.ny, grid.nt}}};
  report["solves"] = solves;
  report["verdicts"] = json::array();
  for (const auto& v : verdicts) report["verdicts"].push_back(verdict_json(v));
  if (sweep.failure) {
    report["solver_failure"] = {{"eps", sweep.failure->eps},
                                {"code", error_code_name(sweep.failure->code)},
                                {"message", sweep.failure->message}};
  }

  if (prep.x_only && !sweep.solutions.empty()) {
    const ScalarField oracle = toric_oracle_field(row_interpolant(prep.problem.pair.phi0),
                                                  row_interpolant(prep.problem.pair.phi1), grid);
    json per_eps = json::array();
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (const auto& s : sweep.solutions) {
      const FieldComparison c = compare_fields(s.psi, oracle);
      monotone = monotone && c.sup < prev;
      prev = c.sup;
      per_eps.push_back({{"eps", s.eps}, {"sup", c.sup}, {"l2", c.l2}, {"c1", c.c1}});
    }
    report["oracle_comparison"] = {{"per_eps", per_eps},
                                   {"final_sup", prev},
                                   {"monotone_decreasing", monotone},
                                   {"oracle_degenerate_residual", degenerate_residual(oracle)}};
  }

  {
    std::ofstream csv(out / "diagnostics.csv", std::ios::binary);
    write_csv(csv, rows);
  }
  files.push_back("diagnostics.csv");
  write_text(out / "verdicts.json", report.dump(2) + "\n");
  files.push_back("verdicts.json");
  json manifest;
  manifest["files"] = json::array();
  for (const auto& f : files)
    manifest["files"].push_back({{"name", f}, {"bytes", fs::file_size(out / f)}});
  write_text(out / "manifest.json", manifest.dump(2) + "\n");

  if (sweep.failure) {
    log << "solver failure at eps=" << fmt("%.3e", sweep.failure->eps) << ": "
        << sweep.failure->message << '\n';
    return kExitSolver;
  }
  bool pass = true;
  for (const auto& v : verdicts) {
    log << (v.pass ? "PASS " : "FAIL ") << v.check << " value=" << fmt("%.6e", v.value)
        << " threshold=" << fmt("%.6e", v.threshold) << '\n';
    pass = pass && v.pass;
  }
  return pass ? kExitOk : kExitVerdict;
}

std::vector<std::string> missing_manifest_entries(const fs::path& dir) {
  std::ifstream is(dir / "manifest.json");
  if (!is) return {"manifest.json"};
  const json m = json::parse(is);
  std::vector<std::string> missing;
  for (const auto& f : m.at("files")) {
    const std::string name = f.at("name");
    if (!fs::exists(dir / name) || fs::file_size(dir / name) != f.at("bytes").get<std::uintmax_t>())
      missing.push_back(name);
  }
  return missing;
}

int cmd_oracle_compare(const fs::path& config, const CommandOptions& opt) {
  std::ostream& log = opt.log ? *opt.log : std::cout;
  Prepared prep;
  try {
    prep = prepare(config);
  } catch (const Error& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!prep.x_only) {
    log << "oracle-compare: data varies in y by more than 1e-12; the Legendre oracle needs "
           "x-only potentials\n";
    return kExitNotXOnly;
  }
  const GridSpec& grid = prep.grid;
  SweepResult sweep;
  try {
    sweep = solve_geodesic(prep.problem, prep.cfg.solver);
  } catch (const Error& e) {
    sweep.failure = SweepFailure{prep.problem.schedule.front(), e.code(), e.what()};
  }
  const ScalarField oracle = toric_oracle_field(row_interpolant(prep.problem.pair.phi0),
                                                row_interpolant(prep.problem.pair.phi1), grid);

  log << "convergence across eps\n  eps          C0           L2           C1\n";
  for (const auto& s : sweep.solutions) {
    const FieldComparison c = compare_fields(s.psi, oracle);
    log << "  " << fmt("%.4e", s.eps) << "   " << fmt("%.4e", c.sup) << "   "
        << fmt("%.4e", c.l2) << "   " << fmt("%.4e", c.c1) << '\n';
  }
  if (sweep.failure) {
    log << "solver failure at eps=" << fmt("%.3e", sweep.failure->eps) << ": "
        << sweep.failure->message << '\n';
    return kExitSolver;
  }
  const EpsSolution& last = sweep.solutions.back();
  const FieldComparison c = compare_fields(last.psi, oracle);
  const std::vector<double> c1 = slice_c1(last.psi, oracle);
  log << "per-t errors at eps=" << fmt("%.4e", last.eps) << "\n  t            C0           C1\n";
  for (const auto& sl : c.slices)
    log << "  " << fmt("%.6f", grid.xi(sl.k)) << "     " << fmt("%.4e", sl.sup) << "   "
        << fmt("%.4e", c1[static_cast<std::size_t>(sl.k)]) << '\n';
  const bool pass = c.sup <= 5e-3;
  log << (pass ? "PASS" : "FAIL") << " final C0 error " << fmt("%.4e", c.sup)
      << " (threshold 5.0000e-03)\n";
  return pass ? kExitOk : kExitVerdict;
}

int cmd_solve_ma(const std::optional<fs::path>& config, const CommandOptions& opt) {
  std::ostream& log = opt.log ? *opt.log : std::cout;
  GridSpec grid = make_grid(1, 32, 8, 33);
  NewtonConfig ncfg;
  std::optional<fs::path> out = opt.out;
  if (config) {
    try {
      const RunConfig cfg = load_run_config(*config);
      grid = run_grid(cfg);
      ncfg = cfg.solver;
      if (!out) out = cfg.output;
    } catch (const Error& e) {
      log << "config error: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  const ManufacturedSolution m = standard_manufactured();
  const ScalarField truth = ScalarField::sample(grid, m.value);
  const ScalarField guess = ScalarField::sample(
      grid, [&](double x, double y, double t) { return m.value(x, y, t) + 0.05 * t * (t - 1.0); });
  SolveResult res;
  try {
    res = newton_solve(guess, manufactured_rhs(m, grid), ncfg);
  } catch (const Error& e) {
    log << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  const FieldComparison c = compare_fields(res.psi, truth);
  const auto& h = res.report.residual_history;
  log << "grid " << grid.nx << "x" << grid.ny << "x" << grid.nt << " newton=" << res.report.outer_iters
      << '\n';
  for (std::size_t n = 0; n < h.size(); ++n) log << "  iter " << n << " residual " << fmt("%.4e", h[n]) << '\n';
  log << "sup error vs exact " << fmt("%.6e", c.sup) << " L2 " << fmt("%.6e", c.l2) << '\n';
  if (out) {
    try {
      fs::create_directories(*out);
      write_field(res.psi, *out / "psi_manufactured.mafld");
      json j{{"grid", {grid.nx, grid.ny, grid.nt}},
             {"outer_iters", res.report.outer_iters},
             {"residual_history", h},
             {"sup_error", c.sup},
             {"l2_error", c.l2}};
      write_text(*out / "solve_ma.json", j.dump(2) + "\n");
    } catch (const std::exception& e) {
      log << "output error: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  return kExitOk;
}

}  // namespace malab
