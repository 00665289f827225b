#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tbbgrad/bench.hpp"
#include "tbbgrad/errors.hpp"
#include "tbbgrad/nl_solver.hpp"
#include "tbbgrad/problem_spec.hpp"
#include "tbbgrad/qp_solver.hpp"
#include "tbbgrad/stepsize.hpp"
#include "tbbgrad/testbed.hpp"
#include "tbbgrad/trace.hpp"
#include "tbbgrad/types.hpp"

// Exit codes: 0 success, 1 configuration error (bad flags, bad config file,
// bad problem/strategy token, missing input file), 2 solver failure (under
// --strict for per-cell bench failures; always when a command cannot produce
// its outputs).

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tbbgrad;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything that builds inputs (configs, problems, strategies, directories)
// runs through here so failures map to exit code 1.
template <typename Fn>
auto config_phase(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& ctx) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in " + ctx);
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + key + "'");
  }
}

void check_experiment_kind(const json& cfg, const std::string& expected) {
  const auto kind = get_or<std::string>(cfg, "experiment", expected);
  if (kind != expected)
    throw ConfigError("config is for experiment '" + kind + "', expected '" + expected + "'");
}

// Flags shared by the experiment subcommands; unset optionals defer to the
// config file, which defers to built-in defaults.
struct Opts {
  std::string config_path;
  std::string out_dir_flag;
  std::string problem;
  std::string strategy;
  std::vector<std::string> strategies;
  std::string trace_csv;
  std::optional<double> tol;
  std::optional<long> max_iter;
  std::optional<double> beta0;
  std::optional<unsigned long> seed;
  std::optional<int> workers;
  std::optional<double> profile_tmax;
  bool strict = false;
  bool dry_run = false;
};

std::string resolve_out_dir(const Opts& o, const json& cfg) {
  if (!o.out_dir_flag.empty()) return o.out_dir_flag;
  if (cfg.contains("out_dir")) return get_or<std::string>(cfg, "out_dir", ".");
  if (const char* env = std::getenv("TBBGRAD_OUT_DIR"); env && *env) return env;
  return ".";
}

fs::path prepare_out_dir(const Opts& o, const json& cfg) {
  const fs::path dir = resolve_out_dir(o, cfg);
  fs::create_directories(dir);
  return dir;
}

TargetStrategy parse_strategy_token(const std::string& token) {
  try {
    return TargetStrategy::parse(token);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<TargetStrategy> resolve_strategies(const Opts& o, const json& cfg) {
  std::vector<std::string> tokens = o.strategies;
  if (tokens.empty() && cfg.contains("strategies")) {
    const json& j = cfg.at("strategies");
    if (j.is_string())
      tokens.push_back(j.get<std::string>());
    else if (j.is_array())
      for (const auto& e : j) tokens.push_back(e.get<std::string>());
    else
      throw ConfigError("'strategies' must be \"table\" or an array of strategy tokens");
  }
  if (tokens.empty()) tokens.push_back("table");

  std::vector<TargetStrategy> out;
  for (const auto& t : tokens) {
    if (t == "table") {
      for (const auto& st : table_strategies()) out.push_back(st);
    } else {
      out.push_back(parse_strategy_token(t));
    }
  }
  return out;
}

QpSolverConfig quad_solver_config(const Opts& o, const json& cfg) {
  QpSolverConfig out;
  if (cfg.contains("solver")) {
    const json& s = cfg.at("solver");
    if (!s.is_object()) throw ConfigError("'solver' must be an object");
    check_keys(s, {"tol", "max_iter", "beta0"}, "solver");
    out.tol = get_or(s, "tol", out.tol);
    out.max_iter = get_or(s, "max_iter", out.max_iter);
    out.beta0 = get_or(s, "beta0", out.beta0);
  }
  if (o.tol) out.tol = *o.tol;
  if (o.max_iter) out.max_iter = *o.max_iter;
  if (o.beta0) out.beta0 = *o.beta0;
  if (!(out.tol > 0.0)) throw ConfigError("tol must be positive");
  if (out.max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(out.beta0 > 0.0)) throw ConfigError("beta0 must be positive");
  return out;
}

ReplacementRule parse_replacement(const std::string& s) {
  if (s == "raydan") return ReplacementRule::Raydan;
  if (s == "beta_max") return ReplacementRule::BetaMax;
  if (s == "inv_gnorm") return ReplacementRule::InvGnorm;
  if (s == "recycle") return ReplacementRule::Recycle;
  throw ConfigError("unknown replacement rule '" + s + "'");
}

NlSolverConfig nl_solver_config(const Opts& o, const json& cfg, bool allow_tol) {
  NlSolverConfig out;
  if (cfg.contains("solver")) {
    const json& s = cfg.at("solver");
    if (!s.is_object()) throw ConfigError("'solver' must be an object");
    std::set<std::string> allowed{"max_iter",  "beta0",          "beta0_inv_gnorm",
                                  "beta_min",  "beta_max",       "ls_c",
                                  "ls_sigma",  "memory",         "max_backtracks",
                                  "replacement"};
    if (allow_tol) allowed.insert("tol");
    check_keys(s, allowed, "solver");
    if (!allow_tol && s.contains("tol"))
      throw ConfigError("per-case tolerances come from top-level 'tols', not solver.tol");
    out.tol = get_or(s, "tol", out.tol);
    out.max_iter = get_or(s, "max_iter", out.max_iter);
    out.beta0 = get_or(s, "beta0", out.beta0);
    out.beta0_inv_gnorm = get_or(s, "beta0_inv_gnorm", out.beta0_inv_gnorm);
    out.beta_min = get_or(s, "beta_min", out.beta_min);
    out.beta_max = get_or(s, "beta_max", out.beta_max);
    out.ls_c = get_or(s, "ls_c", out.ls_c);
    out.ls_sigma = get_or(s, "ls_sigma", out.ls_sigma);
    out.memory = get_or(s, "memory", out.memory);
    out.max_backtracks = get_or(s, "max_backtracks", out.max_backtracks);
    out.replacement = parse_replacement(get_or<std::string>(s, "replacement", "raydan"));
  }
  if (o.tol) out.tol = *o.tol;
  if (o.max_iter) out.max_iter = *o.max_iter;
  if (o.beta0) out.beta0 = *o.beta0;
  if (!(out.tol > 0.0)) throw ConfigError("tol must be positive");
  if (out.max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(out.beta0 > 0.0)) throw ConfigError("beta0 must be positive");
  if (!(out.beta_min > 0.0) || !(out.beta_max > out.beta_min))
    throw ConfigError("safeguard bounds need 0 < beta_min < beta_max");
  if (!(out.ls_c > 0.0 && out.ls_c < 1.0)) throw ConfigError("ls_c must be in (0, 1)");
  if (!(out.ls_sigma > 0.0 && out.ls_sigma < 1.0)) throw ConfigError("ls_sigma must be in (0, 1)");
  if (out.memory < 1) throw ConfigError("memory must be at least 1");
  if (out.max_backtracks < 1) throw ConfigError("max_backtracks must be at least 1");
  return out;
}

int resolve_workers(const Opts& o, const json& cfg) {
  const int workers = o.workers ? *o.workers : get_or(cfg, "workers", 1);
  if (workers < 1) throw ConfigError("workers must be at least 1");
  return workers;
}

double resolve_profile_tmax(const Opts& o, const json& cfg) {
  const double t = o.profile_tmax ? *o.profile_tmax : get_or(cfg, "profile_tmax", 3.0);
  if (!(t >= 1.0)) throw ConfigError("profile_tmax must be at least 1");
  return t;
}

std::optional<unsigned long> resolve_seed(const Opts& o, const json& cfg) {
  if (o.seed) return *o.seed;
  if (cfg.contains("seed")) return get_or<unsigned long>(cfg, "seed", 0);
  return std::nullopt;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& emit) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  emit(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

long count_converged(const std::vector<RunRecord>& runs) {
  long n = 0;
  for (const auto& r : runs)
    if (r.status == RunStatus::Converged) ++n;
  return n;
}

bool any_error(const std::vector<RunRecord>& runs) {
  for (const auto& r : runs)
    if (r.status == RunStatus::Error) return true;
  return false;
}

void print_strategy_list(const std::vector<TargetStrategy>& strategies) {
  std::cout << "strategies:";
  for (const auto& s : strategies) std::cout << " " << s.str();
  std::cout << "\n";
}

// ---------------------------------------------------------------- solve ----

int run_solve(const Opts& o) {
  struct Inputs {
    AnyProblem problem;
    TargetStrategy strategy;
    json cfg;
  };
  Inputs in = config_phase([&] {
    json cfg = o.config_path.empty() ? json::object() : load_json(o.config_path);
    check_experiment_kind(cfg, "single-run");
    check_keys(cfg, {"experiment", "problem", "strategy", "solver", "seed", "trace_csv"},
               "config");
    const std::string spec = !o.problem.empty() ? o.problem : get_or<std::string>(cfg, "problem", "");
    if (spec.empty()) throw ConfigError("no problem given (--problem or config 'problem')");
    const std::string strat =
        !o.strategy.empty() ? o.strategy : get_or<std::string>(cfg, "strategy", "");
    if (strat.empty()) throw ConfigError("no strategy given (--strategy or config 'strategy')");
    return Inputs{parse_problem_spec(spec, resolve_seed(o, cfg)), parse_strategy_token(strat),
                  std::move(cfg)};
  });

  const std::string trace_csv =
      !o.trace_csv.empty() ? o.trace_csv : get_or<std::string>(in.cfg, "trace_csv", "");
  const bool nonlinear = std::holds_alternative<NonlinearProblem>(in.problem);
  const std::string name = nonlinear ? std::get<NonlinearProblem>(in.problem).name()
                                     : std::get<QuadraticProblem>(in.problem).name();

  if (o.dry_run) {
    std::cout << "experiment=single-run problem=" << name << " strategy=" << in.strategy.str()
              << " solver=" << (nonlinear ? "nonlinear" : "quadratic") << "\n";
    return kExitOk;
  }

  RunTrace trace;
  if (nonlinear) {
    NlSolverConfig cfg = config_phase([&] { return nl_solver_config(o, in.cfg, true); });
    cfg.strategy = in.strategy;
    cfg.record_trace = !trace_csv.empty();
    trace = solve_nonlinear(std::get<NonlinearProblem>(in.problem), cfg);
  } else {
    QpSolverConfig cfg = config_phase([&] { return quad_solver_config(o, in.cfg); });
    cfg.strategy = in.strategy;
    cfg.record_trace = !trace_csv.empty();
    trace = solve_quadratic(std::get<QuadraticProblem>(in.problem), cfg);
  }

  std::cout << "status=" << status_str(trace.status) << " problem=" << name
            << " strategy=" << in.strategy.str() << " iterations=" << trace.iterations
            << " nf=" << trace.n_f << " ng=" << trace.n_g << " final_f=" << fmt_num(trace.final_f)
            << " final_gnorm=" << fmt_num(trace.final_g_norm);
  if (!trace.message.empty()) std::cout << " message=\"" << trace.message << "\"";
  std::cout << "\n";

  if (!trace_csv.empty()) write_trace_csv_file(trace_csv, trace, nonlinear);
  return (o.strict && trace.status == RunStatus::Error) ? kExitSolver : kExitOk;
}

// ----------------------------------------------------------- bench-quad ----

int run_bench_quad(const Opts& o) {
  struct Inputs {
    std::vector<QuadraticProblem> problems;
    std::vector<TargetStrategy> strategies;
    QpSolverConfig solver;
    fs::path out_dir;
    int workers;
    double tmax;
  };
  Inputs in = config_phase([&] {
    if (o.config_path.empty()) throw ConfigError("bench-quad needs --config");
    const json cfg = load_json(o.config_path);
    check_experiment_kind(cfg, "quad-bench");
    check_keys(cfg,
               {"experiment", "seed", "problems", "strategies", "solver", "out_dir", "workers",
                "profile_tmax"},
               "config");
    if (!cfg.contains("problems") || !cfg.at("problems").is_array() || cfg.at("problems").empty())
      throw ConfigError("'problems' must be a non-empty array of problem specs");

    const auto top_seed = resolve_seed(o, cfg);
    std::vector<QuadraticProblem> problems;
    std::size_t index = 0;
    for (const auto& e : cfg.at("problems")) {
      const auto spec = e.get<std::string>();
      // Specs without their own seed= get distinct derived seeds so repeated
      // generator lines stay distinguishable.
      std::optional<unsigned long> seed;
      if (top_seed) seed = *top_seed + index;
      AnyProblem p = parse_problem_spec(spec, seed);
      if (std::holds_alternative<NonlinearProblem>(p))
        throw ConfigError("bench-quad requires quadratic problem sources, got '" + spec + "'");
      problems.push_back(std::move(std::get<QuadraticProblem>(p)));
      ++index;
    }
    return Inputs{std::move(problems), resolve_strategies(o, cfg), quad_solver_config(o, cfg),
                  prepare_out_dir(o, cfg), resolve_workers(o, cfg),
                  resolve_profile_tmax(o, cfg)};
  });

  if (o.dry_run) {
    std::cout << "experiment=quad-bench problems=" << in.problems.size()
              << " strategies=" << in.strategies.size() << " workers=" << in.workers
              << " out_dir=" << in.out_dir.string() << "\n";
    std::cout << "solver: tol=" << fmt_num(in.solver.tol) << " max_iter=" << in.solver.max_iter
              << " beta0=" << fmt_num(in.solver.beta0) << "\n";
    for (const auto& p : in.problems) std::cout << "problem " << p.name() << "\n";
    print_strategy_list(in.strategies);
    std::cout << "dry-run: no outputs written\n";
    return kExitOk;
  }

  const GridResult grid = run_quad_grid(in.problems, in.strategies, in.solver, in.workers);

  std::vector<ExcludedProblem> excluded;
  for (const auto& row : all_failed_rows(grid.iterations))
    excluded.push_back({row, "all_failed", 0.0, 0.0});
  std::vector<std::string> drop;
  for (const auto& e : excluded) drop.push_back(e.problem);
  const CostMatrix primary = remove_rows(grid.iterations, drop);
  const CostMatrix secondary = remove_rows(grid.nfe, drop);

  write_file(in.out_dir / "costs.csv", [&](std::ostream& s) { write_costs_csv(s, grid.iterations); });
  write_file(in.out_dir / "profile_iterations.csv",
             [&](std::ostream& s) { write_profile_csv(s, profile_curves(primary), in.tmax); });
  write_file(in.out_dir / "profile_nfe.csv",
             [&](std::ostream& s) { write_profile_csv(s, profile_curves(secondary), in.tmax); });
  write_file(in.out_dir / "summary.csv",
             [&](std::ostream& s) { write_summary_csv(s, summary_table(primary)); });
  write_file(in.out_dir / "runs.csv", [&](std::ostream& s) { write_runs_csv(s, grid.runs); });
  write_file(in.out_dir / "excluded_problems.csv",
             [&](std::ostream& s) { write_excluded_csv(s, excluded); });

  std::cout << "quad-bench: " << in.problems.size() << " problems x " << in.strategies.size()
            << " strategies, " << count_converged(grid.runs) << "/" << grid.runs.size()
            << " cells converged, outputs in " << in.out_dir.string() << "\n";
  return (o.strict && any_error(grid.runs)) ? kExitSolver : kExitOk;
}

// ------------------------------------------------------------- bench-nl ----

int run_bench_nl(const Opts& o) {
  struct Inputs {
    std::vector<NlCase> cases;
    std::vector<TargetStrategy> strategies;
    NlSolverConfig solver;
    fs::path out_dir;
    int workers;
    double tmax;
    double multi_min_tol;
  };
  Inputs in = config_phase([&] {
    if (o.config_path.empty()) throw ConfigError("bench-nl needs --config");
    const json cfg = load_json(o.config_path);
    check_experiment_kind(cfg, "nl-bench");
    check_keys(cfg,
               {"experiment", "functions", "n", "x0_multipliers", "tols", "strategies", "solver",
                "out_dir", "workers", "profile_tmax", "multi_min_tol"},
               "config");
    const int n = get_or(cfg, "n", 100);

    std::vector<std::string> names;
    if (!cfg.contains("functions")) {
      for (const auto& name : collection_names())
        if (!collection_function(name, 4).nonconvex_excluded()) names.push_back(name);
    } else if (cfg.at("functions").is_string()) {
      const auto v = cfg.at("functions").get<std::string>();
      for (const auto& name : collection_names()) {
        if (v == "all" || (v == "included" && !collection_function(name, 4).nonconvex_excluded()))
          names.push_back(name);
      }
      if (v != "all" && v != "included")
        throw ConfigError("'functions' must be \"included\", \"all\", or an array of names");
    } else if (cfg.at("functions").is_array()) {
      for (const auto& e : cfg.at("functions")) names.push_back(e.get<std::string>());
    } else {
      throw ConfigError("'functions' must be \"included\", \"all\", or an array of names");
    }

    std::vector<NonlinearProblem> functions;
    for (const auto& name : names) functions.push_back(collection_function(name, n));
    const auto mults = get_or(cfg, "x0_multipliers", std::vector<double>{1.0, 5.0, 10.0});
    const auto tols = get_or(cfg, "tols", std::vector<double>{1e-4, 1e-6, 1e-8});
    for (double t : tols)
      if (!(t > 0.0)) throw ConfigError("tolerances must be positive");
    const double mmtol = get_or(cfg, "multi_min_tol", 1e-3);
    if (!(mmtol > 0.0)) throw ConfigError("multi_min_tol must be positive");

    return Inputs{make_nl_cases(functions, mults, tols),
                  resolve_strategies(o, cfg),
                  nl_solver_config(o, cfg, false),
                  prepare_out_dir(o, cfg),
                  resolve_workers(o, cfg),
                  resolve_profile_tmax(o, cfg),
                  mmtol};
  });

  if (o.dry_run) {
    std::cout << "experiment=nl-bench cases=" << in.cases.size()
              << " strategies=" << in.strategies.size() << " workers=" << in.workers
              << " out_dir=" << in.out_dir.string() << "\n";
    std::cout << "solver: max_iter=" << in.solver.max_iter << " beta0=" << fmt_num(in.solver.beta0)
              << " memory=" << in.solver.memory << "\n";
    for (const auto& c : in.cases) std::cout << "case " << c.label << "\n";
    print_strategy_list(in.strategies);
    std::cout << "dry-run: no outputs written\n";
    return kExitOk;
  }

  const GridResult grid = run_nl_grid(in.cases, in.strategies, in.solver, in.workers);

  // Rows leave the profile set when their function is flagged as reaching
  // multiple stationary points, when the cross-check detects that, or when
  // every strategy failed.
  std::vector<ExcludedProblem> excluded;
  std::set<std::string> dropped;
  for (std::size_t i = 0; i < in.cases.size(); ++i)
    if (in.cases[i].problem.nonconvex_excluded() && dropped.insert(in.cases[i].label).second)
      excluded.push_back({in.cases[i].label, "flagged_nonconvex", 0.0, 0.0});
  for (const auto& e : detect_multi_minimum(grid, in.multi_min_tol))
    if (dropped.insert(e.problem).second) excluded.push_back(e);
  for (const auto& row : all_failed_rows(grid.nfe))
    if (dropped.insert(row).second) excluded.push_back({row, "all_failed", 0.0, 0.0});
  std::vector<std::string> drop(dropped.begin(), dropped.end());
  const CostMatrix primary = remove_rows(grid.nfe, drop);
  const CostMatrix secondary = remove_rows(grid.iterations, drop);

  write_file(in.out_dir / "costs.csv", [&](std::ostream& s) { write_costs_csv(s, grid.nfe); });
  write_file(in.out_dir / "profile_nfe.csv",
             [&](std::ostream& s) { write_profile_csv(s, profile_curves(primary), in.tmax); });
  write_file(in.out_dir / "profile_iterations.csv",
             [&](std::ostream& s) { write_profile_csv(s, profile_curves(secondary), in.tmax); });
  write_file(in.out_dir / "summary.csv",
             [&](std::ostream& s) { write_summary_csv(s, summary_table(primary)); });
  write_file(in.out_dir / "runs.csv", [&](std::ostream& s) { write_runs_csv(s, grid.runs); });
  write_file(in.out_dir / "excluded_problems.csv",
             [&](std::ostream& s) { write_excluded_csv(s, excluded); });

  std::cout << "nl-bench: " << in.cases.size() << " cases x " << in.strategies.size()
            << " strategies, " << count_converged(grid.runs) << "/" << grid.runs.size()
            << " cells converged, " << excluded.size() << " rows excluded, outputs in "
            << in.out_dir.string() << "\n";
  return (o.strict && any_error(grid.runs)) ? kExitSolver : kExitOk;
}

// ---------------------------------------------------------------- sweep ----

int run_sweep(const Opts& o) {
  struct Inputs {
    QuadraticProblem problem;
    std::vector<TargetStrategy> strategies;
    QpSolverConfig solver;
    fs::path out_dir;
  };
  Inputs in = config_phase([&] {
    json cfg = o.config_path.empty() ? json::object() : load_json(o.config_path);
    check_experiment_kind(cfg, "sweep");
    check_keys(cfg, {"experiment", "problem", "strategies", "solver", "seed", "out_dir"},
               "config");
    const std::string spec = !o.problem.empty() ? o.problem : get_or<std::string>(cfg, "problem", "");
    if (spec.empty()) throw ConfigError("no problem given (--problem or config 'problem')");
    AnyProblem p = parse_problem_spec(spec, resolve_seed(o, cfg));
    if (!std::holds_alternative<QuadraticProblem>(p))
      throw ConfigError("sweep requires a quadratic problem source, got '" + spec + "'");
    if (!std::get<QuadraticProblem>(p).extreme_eigenvalues())
      throw ConfigError("sweep requires a problem with known extreme eigenvalues "
                        "(synthetic generators record them)");
    return Inputs{std::move(std::get<QuadraticProblem>(p)), resolve_strategies(o, cfg),
                  quad_solver_config(o, cfg), prepare_out_dir(o, cfg)};
  });

  if (o.dry_run) {
    std::cout << "experiment=sweep problem=" << in.problem.name()
              << " strategies=" << in.strategies.size() << " out_dir=" << in.out_dir.string()
              << "\n";
    print_strategy_list(in.strategies);
    std::cout << "dry-run: no outputs written\n";
    return kExitOk;
  }

  const SweepResult sweep = sweep_experiment(in.problem, in.strategies, in.solver);
  const std::string base = "sweep_" + in.problem.name();
  write_file(in.out_dir / (base + ".csv"), [&](std::ostream& s) { write_sweep_csv(s, sweep); });
  write_file(in.out_dir / (base + "_spectrum.csv"),
             [&](std::ostream& s) { write_sweep_spectrum_csv(s, sweep); });

  std::cout << "sweep " << in.problem.name() << ":";
  for (std::size_t i = 0; i < sweep.strategies.size(); ++i)
    std::cout << " " << sweep.strategies[i] << "=" << sweep.iterations[i];
  std::cout << ", outputs in " << in.out_dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- lists ----

int run_list_strategies() {
  for (const auto& st : table_strategies()) std::cout << st.str() << "\n";
  std::cout << "con:<zeta>\n";
  return kExitOk;
}

int run_list_problems() {
  std::cout << "generators:\n"
            << "  geometric:n=<n>,l1=<l1>,ln=<ln>[,seed=<s>][,x0=<v>]\n"
            << "  twocluster:n=<n>,l1=<l1>,ln=<ln>[,frac1=<f>][,c1=<v>][,c2=<v>][,jitter=<j>]"
               "[,seed=<s>][,x0=<v>]\n"
            << "  covariance:n=<n>,l1=<l1>,ln=<ln>[,ratio=<q>][,seed=<s>][,x0=<v>]\n"
            << "  randdiag:n=<n>,kappa=<k>[,seed=<s>]\n"
            << "  mm:<path>[,scale_g0=1][,x0=<v>]\n"
            << "functions (fn:<name>[,n=<n>][,x0mult=<m>]):\n";
  for (const auto& name : collection_names()) {
    const NonlinearProblem p = collection_function(name, 4);
    std::cout << "  " << name;
    if (p.scale_by_g0()) std::cout << " (scaled by initial gradient norm)";
    if (p.nonconvex_excluded()) std::cout << " (excluded from profiles)";
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient methods with targeted Barzilai-Borwein stepsizes"};
  app.require_subcommand(1);
  int rc = kExitOk;
  Opts o;

  auto add_common = [&](CLI::App* sub, bool bench) {
    sub->add_option("--config", o.config_path, "JSON experiment config");
    sub->add_option("--out", o.out_dir_flag, "output directory (default: config, then $TBBGRAD_OUT_DIR, then .)");
    sub->add_option("--max-iter", o.max_iter, "iteration cap override");
    sub->add_option("--beta0", o.beta0, "initial stepsize override");
    sub->add_option("--seed", o.seed, "default seed for generator problems");
    sub->add_flag("--strict", o.strict, "exit 2 when any run ends in a solver error");
    sub->add_flag("--dry-run", o.dry_run, "validate config and print the plan without running");
    if (bench) {
      sub->add_option("--strategies", o.strategies, "strategy tokens (or 'table')")
          ->delimiter(',');
      sub->add_option("--workers", o.workers, "parallel grid cells");
      sub->add_option("--profile-tmax", o.profile_tmax, "profile ratio window end");
    }
  };

  CLI::App* solve = app.add_subcommand("solve", "run one problem with one strategy");
  add_common(solve, false);
  solve->add_option("--problem", o.problem, "problem spec (see list-problems)");
  solve->add_option("--strategy", o.strategy, "strategy token (see list-strategies)");
  solve->add_option("--tol", o.tol, "relative gradient-norm tolerance");
  solve->add_option("--trace-csv", o.trace_csv, "write the per-iteration trace here");
  solve->callback([&] { rc = run_solve(o); });

  CLI::App* bq = app.add_subcommand("bench-quad", "strategy x problem grid on quadratics");
  add_common(bq, true);
  bq->add_option("--tol", o.tol, "relative gradient-norm tolerance override");
  bq->callback([&] { rc = run_bench_quad(o); });

  CLI::App* bn = app.add_subcommand("bench-nl", "strategy x (function, start, tol) grid");
  add_common(bn, true);
  bn->callback([&] { rc = run_bench_nl(o); });

  CLI::App* sw = app.add_subcommand("sweep", "inverse-stepsize traces across the spectrum");
  add_common(sw, false);
  sw->add_option("--strategies", o.strategies, "strategy tokens (or 'table')")->delimiter(',');
  sw->add_option("--problem", o.problem, "quadratic problem spec");
  sw->add_option("--tol", o.tol, "relative gradient-norm tolerance override");
  sw->callback([&] { rc = run_sweep(o); });

  app.add_subcommand("list-strategies", "print the canonical strategy tokens")
      ->callback([&] { rc = run_list_strategies(); });
  app.add_subcommand("list-problems", "print problem spec grammar and collection functions")
      ->callback([&] { rc = run_list_problems(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return rc;
}
