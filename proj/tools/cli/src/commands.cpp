#include "sqg_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

#include "sqg/field_io.hpp"
#include "sqg/parallel.hpp"

namespace sqg::cli {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

void write_echo(const fs::path& out, const Config& cfg, const std::string& command) {
  std::ostringstream os;
  cfg.write_resolved(os, command);
  write_text(out / "config.resolved", os.str());
}

Json config_json(const Config& cfg) {
  Json j = Json::object();
  for (const auto& [k, v] : cfg.resolved()) j[k] = v;
  return j;
}

Json t0_json(double t0) { return std::isinf(t0) ? Json("inf") : Json(t0); }

Json constants_json(const EmpiricalConstants& c, const ConstantSettings& cs) {
  auto source = [](const std::optional<double>& v) { return v ? "config" : "ensemble"; };
  return {{"c_bernstein", number(c.c_bernstein)},
          {"c_p", number(c.c_p)},
          {"c_p_source", source(cs.c_p)},
          {"commutator", number(c.commutator)},
          {"c1", number(c.c1)},
          {"c1_source", source(cs.c1)},
          {"c_small", number(c.c_small)},
          {"c_small_source", source(cs.c_small)}};
}

ConstantSettings read_constants(Config& cfg, const std::string& prefix) {
  ConstantSettings cs;
  cs.c_p = cfg.get_auto_double(prefix + "c_p");
  cs.c_small = cfg.get_auto_double(prefix + "c_small");
  cs.ensemble.seed = static_cast<std::uint64_t>(cfg.get_int("constants.seed", 20240601));
  cs.ensemble.count = static_cast<int>(cfg.get_int("constants.count", 16));
  if (cs.c_p && !(*cs.c_p > 0.0)) throw ConfigError(prefix + "c_p must be > 0");
  if (cs.c_small && !(*cs.c_small > 0.0)) throw ConfigError(prefix + "c_small must be > 0");
  if (cs.ensemble.count < 1) throw ConfigError("constants.count must be >= 1");
  return cs;
}

class SnapshotObserver final : public RunObserver {
 public:
  SnapshotObserver(fs::path dir, long stride, std::string format)
      : dir_(std::move(dir)), stride_(stride), format_(std::move(format)) {}

  void on_start(const State& s) override { save(s, 0); }
  void on_step(const State& s, double) override {
    ++step_;
    if (step_ % stride_ == 0) save(s, step_);
  }

 private:
  void save(const State& s, long step) {
    char name[64];
    std::snprintf(name, sizeof name, "step_%06ld.%s", step, format_ == "csv" ? "csv" : "bin");
    save_field(dir_ / name, inverse_transform(s.theta));
  }

  fs::path dir_;
  long stride_;
  std::string format_;
  long step_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------

InitialDataSpec read_initial_data(Config& cfg) {
  InitialDataSpec s;
  s.kind = cfg.get_string("init.kind", "random");
  if (s.kind != "random" && s.kind != "zero" && s.kind != "pattern" && s.kind != "file") {
    throw ConfigError("init.kind must be one of random, zero, pattern, file (got '" + s.kind + "')");
  }
  if (s.kind == "zero") return s;
  s.amplitude = cfg.get_double("init.amplitude", 0.01);
  s.normalize = cfg.get_string("init.normalize", s.kind == "pattern" ? "none" : "besov");
  if (s.normalize != "none" && s.normalize != "l2" && s.normalize != "besov") {
    throw ConfigError("init.normalize must be one of none, l2, besov");
  }
  if (s.kind == "random") {
    s.random.seed = substream_seed(static_cast<std::uint64_t>(cfg.get_int("init.seed", 1)), "init");
    s.random.count = 1;
    s.random.shape = parse_spectrum_shape(cfg.get_string("init.shape", "decaying"));
    s.random.j_lo = static_cast<int>(cfg.get_int("init.j_lo", 0));
    s.random.j_hi = static_cast<int>(cfg.get_int("init.j_hi", 2));
    s.random.max_index = static_cast<int>(cfg.get_int("init.max_index", 0));
    s.random.validate();
  } else if (s.kind == "pattern") {
    s.k1 = static_cast<int>(cfg.get_int("init.k1", 1));
    s.k2 = static_cast<int>(cfg.get_int("init.k2", 0));
  } else {
    s.file = cfg.get_string("init.file", "");
    if (s.file.empty()) throw ConfigError("init.kind = file needs init.file");
  }
  return s;
}

RealField make_initial_data(const InitialDataSpec& spec, const GridSpec& grid, const BesovIndex& sigma_index) {
  if (spec.kind == "zero") return RealField(grid);
  RealField f;
  if (spec.kind == "random") {
    f = ensemble_member(spec.random, grid, 0);
  } else if (spec.kind == "pattern") {
    f = RealField(grid);
    const double k0 = grid.base_wavenumber();
    for (int iy = 0; iy < grid.n; ++iy) {
      for (int ix = 0; ix < grid.n; ++ix) {
        f.at(ix, iy) = std::cos(k0 * (spec.k1 * f.coordinate(ix) + spec.k2 * f.coordinate(iy)));
      }
    }
  } else {
    f = load_field(spec.file);
    if (!(f.grid() == grid)) throw ConfigError("init.file grid does not match solver.n / solver.period");
  }
  double norm = 1.0;
  if (spec.normalize == "l2") norm = lp_norm(f, 2.0);
  else if (spec.normalize == "besov") norm = besov_norm(f, sigma_index, DyadicFamily(grid));
  if (norm > 0.0) f *= spec.amplitude / norm;
  return f;
}

SimulationSettings read_simulation(Config& cfg) {
  SimulationSettings s;
  SolverConfig& c = s.solver;
  c.alpha = cfg.get_double("solver.alpha", 0.5);
  c.kappa = cfg.get_double("solver.kappa", 1.0);
  c.grid.n = static_cast<int>(cfg.get_int("solver.n", 128));
  c.grid.period = cfg.get_double("solver.period", 2.0 * std::numbers::pi);
  const auto dt = cfg.get_auto_double("solver.dt");
  s.dt_auto = !dt;
  c.dt = dt.value_or(1.0);
  c.t_end = cfg.get_double("solver.t_end", 1.0);
  c.integrator = parse_integrator(cfg.get_string("solver.integrator", "ifrk4"));
  c.dealias = parse_dealias_rule(cfg.get_string("solver.dealias", "2/3"));
  c.nonlinear = cfg.get_bool("solver.nonlinear", true);
  c.blowup_factor = cfg.get_double("solver.blowup_factor", 10.0);
  c.validate();
  s.init = read_initial_data(cfg);
  s.record_stride = static_cast<int>(cfg.get_int("output.stride", 1));
  s.snapshot_stride = cfg.get_int("output.snapshot_stride", 0);
  s.snapshot_format = cfg.get_string("output.snapshot_format", "bin");
  if (s.record_stride < 1) throw ConfigError("output.stride must be >= 1");
  if (s.snapshot_stride < 0) throw ConfigError("output.snapshot_stride must be >= 0");
  if (s.snapshot_format != "bin" && s.snapshot_format != "csv") throw ConfigError("output.snapshot_format must be bin or csv");
  s.monitor = cfg.get_bool("monitor.enabled", true);
  s.monitor_p = cfg.get_double("monitor.p", 2.0);
  s.monitor_q = cfg.get_double("monitor.q", 2.0);
  if (!(s.monitor_p >= 2.0) || std::isinf(s.monitor_p)) throw ConfigError("monitor.p must lie in [2, inf)");
  if (!(s.monitor_q >= 1.0) || std::isinf(s.monitor_q)) throw ConfigError("monitor.q must lie in [1, inf)");
  s.constants = read_constants(cfg, "existence.");
  s.constants.c1 = cfg.get_auto_double("monitor.c1");
  return s;
}

EmpiricalConstants resolve_constants(const ConstantSettings& cs, const GridSpec& grid, double alpha, double p,
                                     double q) {
  EmpiricalConstants c;
  if (!cs.c_p || !cs.c_small || !cs.c1) c = estimate_constants(grid, alpha, p, q, cs.ensemble);
  if (cs.c_p) c.c_p = *cs.c_p;
  if (cs.c1) c.c1 = *cs.c1;
  if (cs.c_small) c.c_small = *cs.c_small;
  return c;
}

SimulationOutcome execute_simulation(const SimulationSettings& s, Config& cfg, const fs::path& out,
                                     const std::optional<EmpiricalConstants>& known) {
  SolverConfig solver = s.solver;
  const DyadicFamily fam(solver.grid);
  const double sigma = critical_sigma(solver.alpha, s.monitor_p).sigma;
  const BesovIndex sigma_index{sigma, s.monitor_p, s.monitor_q, true};
  const RealField theta0 = make_initial_data(s.init, solver.grid, sigma_index);

  if (s.dt_auto) {
    const VectorField u = velocity_field(theta0);
    const double u_max = std::max(lp_norm(u.first, kInfinity), lp_norm(u.second, kInfinity));
    solver.dt = std::min(suggest_dt(solver, u_max), std::max(solver.t_end, 1e-300));
    cfg.resolve("solver.dt", format_double(solver.dt));
  }

  const bool need_constants = s.monitor || solver.alpha <= 0.5;
  EmpiricalConstants constants;
  if (need_constants) {
    constants = known ? *known : resolve_constants(s.constants, solver.grid, solver.alpha, s.monitor_p, s.monitor_q);
  }

  fs::create_directories(out);
  write_echo(out, cfg, "sqg simulate --config config.resolved");

  RunOptions options;
  options.record_stride = s.record_stride;
  std::optional<AprioriMonitor> monitor;
  if (s.monitor) {
    monitor.emplace(solver.grid, solver.alpha, s.monitor_p, s.monitor_q, solver.kappa, constants.c1);
    options.observers.push_back(&*monitor);
  }
  std::optional<SnapshotObserver> snapshots;
  if (s.snapshot_stride > 0) {
    fs::create_directories(out / "snapshots");
    snapshots.emplace(out / "snapshots", s.snapshot_stride, s.snapshot_format);
    options.observers.push_back(&*snapshots);
  }

  const RunResult result = run(theta0, solver, options);
  {
    std::ostringstream os;
    os << "# sqg trajectory,format_version=" << kMetadataFormatVersion << '\n';
    result.trajectory.write_csv(os);
    write_text(out / "trajectory.csv", os.str());
  }

  SimulationOutcome outcome;
  outcome.aborted = result.aborted;
  outcome.status = result.aborted ? "aborted" : "completed";
  outcome.exit_code = result.aborted ? kExitAbort : kExitOk;

  Json meta;
  meta["format_version"] = kMetadataFormatVersion;
  meta["command"] = "simulate";
  meta["config"] = config_json(cfg);
  meta["solver"] = {{"alpha", solver.alpha},
                    {"kappa", solver.kappa},
                    {"n", solver.grid.n},
                    {"period", solver.grid.period},
                    {"dt", solver.dt},
                    {"t_end", solver.t_end},
                    {"integrator", to_string(solver.integrator)},
                    {"dealias", to_string(solver.dealias)},
                    {"nonlinear", solver.nonlinear}};
  const double initial_sigma_norm = besov_norm(theta0, sigma_index, fam);
  meta["initial"] = {{"l2", lp_norm(theta0, 2.0)},
                     {"linf", lp_norm(theta0, kInfinity)},
                     {"sigma", sigma},
                     {"besov_sigma_norm", initial_sigma_norm}};
  meta["result"] = {{"status", outcome.status},
                    {"steps", result.steps},
                    {"aborted", result.aborted},
                    {"abort_time", result.aborted ? Json(result.abort_time) : Json(nullptr)},
                    {"abort_reason", result.abort_reason},
                    {"final_time", result.final_state.t},
                    {"final_l2", l2_norm(result.final_state.theta)},
                    {"final_linf", lp_norm(inverse_transform(result.final_state.theta), kInfinity)}};
  if (need_constants) meta["constants"] = constants_json(constants, s.constants);
  if (solver.alpha <= 0.5 && solver.kappa > 0.0) {
    ExistenceTimeConfig ec{solver.alpha, s.monitor_p, s.monitor_q, solver.kappa, constants.c_p, constants.c_small};
    const ExistenceTime et = existence_time(theta0, ec, fam);
    outcome.t0_prediction = et.t0;
    meta["existence"] = {{"sigma", et.sigma},
                         {"norm", et.norm},
                         {"threshold", et.threshold},
                         {"T0", t0_json(et.t0)},
                         {"branch", et.global ? "smallness" : "bisection"}};
  } else {
    meta["existence"] = {{"T0", nullptr}, {"branch", "not applicable (needs 0 < alpha <= 1/2 and kappa > 0)"}};
  }
  if (monitor) {
    const AprioriVerdict& v = monitor->verdict();
    outcome.max_apriori_ratio = v.max_ratio;
    meta["monitor"] = {{"pass", v.pass},
                       {"c1", monitor->c1()},
                       {"p", s.monitor_p},
                       {"q", s.monitor_q},
                       {"initial_norm", v.initial_norm},
                       {"max_ratio", number(v.max_ratio)},
                       {"max_ratio_time", v.max_ratio_time},
                       {"first_violation_time", v.pass ? Json(nullptr) : Json(v.first_violation_time)},
                       {"final_linf_term", v.final_linf},
                       {"final_l1_term", v.final_l1}};
  }
  write_text(out / "metadata.json", meta.dump(2) + "\n");
  return outcome;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& suite, Config& cfg, const fs::path& out, std::ostream& log, std::ostream& err) {
  const SuiteResult result = run_suite(suite, cfg);
  fs::create_directories(out);
  write_echo(out, cfg, "sqg verify " + suite + " --config config.resolved");
  write_text(out / "report.json", to_json(result).dump(2) + "\n");
  {
    std::ostringstream os;
    write_suite_csv(os, result);
    write_text(out / "report.csv", os.str());
  }
  for (const Check& c : result.checks) {
    log << (c.pass ? "ok   " : "FAIL ") << suite << '.' << c.name << " value=" << format_double(c.value)
        << " limit=" << format_double(c.limit) << '\n';
    if (!c.pass) err << "failing sample for " << c.name << ": " << c.detail << '\n';
  }
  return result.pass() ? kExitOk : kExitFailure;
}

int cmd_simulate(Config& cfg, const fs::path& out, std::ostream& log, std::ostream&) {
  const SimulationSettings s = read_simulation(cfg);
  cfg.require_all_used();
  const SimulationOutcome o = execute_simulation(s, cfg, out);
  log << "simulate: " << o.status << ", max a-priori ratio " << format_double(o.max_apriori_ratio) << '\n';
  return o.exit_code;
}

int cmd_existence_time(Config& cfg, const fs::path& out, std::ostream& log, std::ostream&) {
  ExistenceTimeConfig ec;
  ec.alpha = cfg.get_double("alpha", 0.5);
  ec.p = cfg.get_double("p", 2.0);
  ec.q = cfg.get_double("q", 2.0);
  ec.kappa = cfg.get_double("kappa", 1.0);
  GridSpec grid;
  grid.n = static_cast<int>(cfg.get_int("n", 128));
  grid.period = cfg.get_double("period", 2.0 * std::numbers::pi);
  const ConstantSettings cs = read_constants(cfg, "");
  const InitialDataSpec init = read_initial_data(cfg);
  cfg.require_all_used();
  ec.c_p = 1.0;
  ec.c_small = 1.0;
  ec.validate();

  ConstantSettings full = cs;
  full.c1 = 1.0;  // not used here
  const EmpiricalConstants constants = resolve_constants(full, grid, ec.alpha, ec.p, ec.q);
  ec.c_p = constants.c_p;
  ec.c_small = constants.c_small;
  cfg.resolve("c_p", cs.c_p ? format_double(*cs.c_p) : "auto");
  cfg.resolve("c_small", cs.c_small ? format_double(*cs.c_small) : "auto");

  const DyadicFamily fam(grid);
  const RealField theta0 = make_initial_data(init, grid, {ec.sigma(), ec.p, ec.q, true});
  const ExistenceTime et = existence_time(theta0, ec, fam);
  const bool small = smallness_check(theta0, ec.c_small, ec.kappa, {ec.sigma(), ec.p, ec.q, true}, fam);

  Json j;
  j["format_version"] = kMetadataFormatVersion;
  j["command"] = "existence-time";
  j["sigma"] = et.sigma;
  j["norm"] = et.norm;
  j["threshold"] = et.threshold;
  j["T0"] = t0_json(et.t0);
  j["branch"] = et.global ? "smallness" : "bisection";
  j["smallness_check"] = small;
  j["constants"] = {{"c_p", ec.c_p},
                    {"c_p_source", cs.c_p ? "config" : "ensemble"},
                    {"c_small", ec.c_small},
                    {"c_small_source", cs.c_small ? "config" : "ensemble"},
                    {"kappa", ec.kappa},
                    {"alpha", ec.alpha},
                    {"p", ec.p},
                    {"q", ec.q}};
  const std::string text = j.dump(2) + "\n";
  log << text;
  if (!out.empty()) {
    fs::create_directories(out);
    write_echo(out, cfg, "sqg existence-time --config config.resolved");
    write_text(out / "existence_time.json", text);
  }
  return kExitOk;
}

int cmd_sweep(Config& cfg, const fs::path& out, std::ostream& log, std::ostream& err) {
  const auto alphas = cfg.get_doubles("sweep.alpha", {0.5});
  const auto kappas = cfg.get_doubles("sweep.kappa", {1.0});
  const auto amplitudes = cfg.get_doubles("sweep.amplitude", {0.01});
  const auto ns = cfg.get_doubles("sweep.n", {64});
  const auto parallelism = static_cast<unsigned>(cfg.get_int("sweep.parallelism", 1));

  struct Cell {
    double alpha, kappa, amplitude;
    int n;
  };
  std::vector<Cell> cells;
  for (double a : alphas) {
    for (double k : kappas) {
      for (double amp : amplitudes) {
        for (double n : ns) cells.push_back({a, k, amp, static_cast<int>(n)});
      }
    }
  }
  auto cell_config = [&](const Cell& c) {
    Config copy = cfg;
    copy.set("solver.alpha", format_double(c.alpha));
    copy.set("solver.kappa", format_double(c.kappa));
    copy.set("init.amplitude", format_double(c.amplitude));
    copy.set("solver.n", std::to_string(c.n));
    return copy;
  };
  {
    // Validate every key against the first cell before running anything.
    Config probe = cell_config(cells.front());
    (void)read_simulation(probe);
    probe.require_all_used();
    for (const Cell& c : cells) {
      Config check = cell_config(c);
      (void)read_simulation(check);
    }
    fs::create_directories(out);
    write_echo(out, probe, "sqg sweep --config config.resolved");
  }

  // Constants depend only on (n, alpha, p, q); measure each combination once, in order.
  std::map<std::tuple<int, double, double, double>, EmpiricalConstants> constants;
  for (const Cell& c : cells) {
    Config copy = cell_config(c);
    const SimulationSettings s = read_simulation(copy);
    const auto key = std::make_tuple(c.n, c.alpha, s.monitor_p, s.monitor_q);
    if (!constants.count(key)) {
      constants[key] = resolve_constants(s.constants, s.solver.grid, c.alpha, s.monitor_p, s.monitor_q);
    }
  }

  std::vector<SimulationOutcome> outcomes(cells.size());
  parallel_for(cells.size(), parallelism, [&](std::size_t i) {
    Config copy = cell_config(cells[i]);
    char name[32];
    std::snprintf(name, sizeof name, "cell_%03zu", i);
    try {
      const SimulationSettings s = read_simulation(copy);
      const auto key = std::make_tuple(cells[i].n, cells[i].alpha, s.monitor_p, s.monitor_q);
      outcomes[i] = execute_simulation(s, copy, out / name, constants.at(key));
    } catch (const std::exception& e) {
      outcomes[i].exit_code = kExitFailure;
      outcomes[i].status = std::string("error: ") + e.what();
    }
  });

  std::ostringstream summary;
  summary << "# sqg sweep summary,format_version=" << kMetadataFormatVersion << '\n';
  summary << "cell,alpha,kappa,amplitude,n,t0_prediction,max_apriori_ratio,status\n";
  bool failed = false;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    const SimulationOutcome& o = outcomes[i];
    failed = failed || o.exit_code != kExitOk;
    std::string status = o.status;
    std::replace(status.begin(), status.end(), ',', ';');
    summary << i << ',' << format_double(c.alpha) << ',' << format_double(c.kappa) << ','
            << format_double(c.amplitude) << ',' << c.n << ','
            << (o.t0_prediction ? format_double(*o.t0_prediction) : "n/a") << ','
            << format_double(o.max_apriori_ratio) << ',' << status << '\n';
  }
  write_text(out / "summary.csv", summary.str());
  log << "sweep: " << cells.size() << " cells" << (failed ? ", some failed or aborted" : "") << '\n';
  if (failed) err << "sweep: see summary.csv for per-cell status\n";
  return failed ? kExitFailure : kExitOk;
}

}  // namespace sqg::cli
