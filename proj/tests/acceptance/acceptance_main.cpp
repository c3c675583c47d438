// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   sqg_acceptance [--workdir DIR] [--only N[,N...]]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqg/besov.hpp"
#include "sqg/ensemble.hpp"
#include "sqg/solver.hpp"
#include "sqg/wellposedness.hpp"
#include "sqg_cli/commands.hpp"
#include "sqg_cli/suites.hpp"

namespace fs = std::filesystem;
using namespace sqg;
using sqg::cli::Config;
using sqg::cli::SuiteResult;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "" : "!") + what);
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SuiteResult suite(const std::string& name, const std::map<std::string, std::string>& keys = {}) {
  Config cfg;
  for (const auto& [k, v] : keys) cfg.set(k, v);
  return cli::run_suite(name, cfg);
}

void require_check(Outcome& o, const SuiteResult& r, const std::string& name) {
  const cli::Check* c = r.find_check(name);
  if (!c) {
    o.require(false, name + " missing");
    return;
  }
  o.require(c->pass, name + "=" + fmt(c->value) + " (<= " + fmt(c->limit) + ")");
}

int cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "sqg");
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  if (code != 0) std::cerr << err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

/// Relative paths of all regular files under dir.
std::set<std::string> files_under(const fs::path& dir) {
  std::set<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.insert(fs::relative(e.path(), dir).generic_string());
  }
  return out;
}

/// Byte comparison of two output trees. Files named in `skip` are ignored; for
/// config.resolved only the key lines are compared (the header names the command).
bool same_tree(const fs::path& a, const fs::path& b, std::string& why, const std::set<std::string>& skip = {}) {
  const auto fa = files_under(a);
  const auto fb = files_under(b);
  if (fa != fb) {
    why = "file sets differ";
    return false;
  }
  for (const std::string& f : fa) {
    if (skip.count(fs::path(f).filename().string())) continue;
    std::string x = slurp(a / f);
    std::string y = slurp(b / f);
    if (fs::path(f).filename() == "config.resolved") {
      auto strip = [](const std::string& s) {
        std::istringstream is(s);
        std::string line, kept;
        while (std::getline(is, line)) {
          if (!line.empty() && line[0] != '#') kept += line + '\n';
        }
        return kept;
      };
      x = strip(x);
      y = strip(y);
    }
    if (x != y) {
      why = f + " differs";
      return false;
    }
  }
  return true;
}

// --- criteria ---------------------------------------------------------------------

struct Shared {
  fs::path work;
  SuiteResult lp;
  bool lp_done = false;
  double lp_seconds = 0.0;
  SuiteResult bernstein;
  bool bernstein_done = false;
  double criterion6_dt = 0.0;
};

const SuiteResult& lp_suite(Shared& s) {
  if (!s.lp_done) {
    const auto t0 = std::chrono::steady_clock::now();
    s.lp = suite("lp-identities", {{"n", "256"}, {"count", "100"}, {"pairs", "50"}});
    s.lp_seconds = seconds_since(t0);
    s.lp_done = true;
  }
  return s.lp;
}

const SuiteResult& bernstein_suite(Shared& s) {
  if (!s.bernstein_done) {
    s.bernstein = suite("bernstein", {{"n", "256"},
                                      {"count", "100"},
                                      {"j_lo", "1"},
                                      {"j_hi", "4"},
                                      {"p", "2,3,4,6,8"},
                                      {"alpha", "0,0.1,0.25,0.5,0.75,1"}});
    s.bernstein_done = true;
  }
  return s.bernstein;
}

Outcome criterion1(Shared& s) {
  Outcome o;
  const SuiteResult& r = lp_suite(s);
  require_check(o, r, "partition_of_unity");
  require_check(o, r, "reconstruction");
  require_check(o, r, "quasi_orthogonality");
  // Independent telescoping check on the radial profile at every lattice radius of n = 256.
  double worst = 0.0;
  for (int m1 = 0; m1 <= 128; ++m1) {
    for (int m2 = 0; m2 <= 128; ++m2) {
      const double r2 = std::hypot(m1, m2);
      double sum = DyadicFamily::chi(r2);
      for (int j = 0; j <= 8; ++j) sum += DyadicFamily::phi(std::ldexp(r2, -j));
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  o.require(worst <= 1e-10, "chi+sum(phi) deviation=" + fmt(worst));
  o.require(s.lp_seconds < 10.0, "runtime=" + fmt(s.lp_seconds) + "s (< 10s)");
  return o;
}

Outcome criterion2(Shared& s) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteResult& r = bernstein_suite(s);
  const double secs = seconds_since(t0);
  const RatioReport* rep = r.find_report("bernstein");
  o.require(rep && rep->samples.size() >= 100u * 4 * 5 * 6, "samples=" + std::to_string(rep ? rep->samples.size() : 0));
  require_check(o, r, "ratios_positive_finite");
  require_check(o, r, "j_variation");
  require_check(o, r, "p2_plancherel_bracket");
  require_check(o, r, "a0_identity");
  require_check(o, r, "gradient_form_agreement");
  // Bracket recomputed here from the raw rows.
  double worst = 0.0;
  for (const RatioSample& smp : rep->samples) {
    const int j = static_cast<int>(smp.params[1]);
    const double p = smp.params[2], a = smp.params[3];
    if (p != 2.0 || j <= 0 || j >= 5 || smp.rhs == 0.0) continue;
    worst = std::max({worst, std::pow(0.75, a) - smp.ratio, smp.ratio - std::pow(8.0 / 3.0, a)});
  }
  o.require(worst <= 1e-8, "raw p=2 bracket excess=" + fmt(worst));
  o.require(secs < 300.0, "runtime=" + fmt(secs) + "s (< 300s)");
  return o;
}

Outcome criterion3(Shared&) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteResult r = suite("positivity", {{"count", "500"}, {"s", "0,0.5,1,2"}, {"p", "2,3,4,8"}});
  const double secs = seconds_since(t0);
  const RatioReport* rep = r.find_report("positivity");
  o.require(rep && rep->samples.size() == 500u * 16, "samples=" + std::to_string(rep ? rep->samples.size() : 0));
  require_check(o, r, "gap_nonnegative");
  require_check(o, r, "p2_gap_zero");
  o.require(secs < 120.0, "runtime=" + fmt(secs) + "s (< 120s)");
  return o;
}

Outcome criterion4(Shared& s) {
  Outcome o;
  const SuiteResult r = suite("dissipation", {{"n", "256"},
                                              {"count", "100"},
                                              {"j_lo", "1"},
                                              {"j_hi", "4"},
                                              {"p", "2,3,4,6,8"},
                                              {"alpha", "0.1,0.25,0.5,0.75,1"}});
  require_check(o, r, "A_ge_B");
  require_check(o, r, "B_ge_C");
  require_check(o, r, "p2_A_equals_B");
  // The constants used must be the ones criterion 2 measured.
  const auto& groups = bernstein_suite(s).summary["groups"];
  std::map<std::pair<double, double>, double> measured;
  for (const auto& g : groups) measured[{g["p"].get<double>(), g["a"].get<double>()}] = g["c_emp"].get<double>();
  std::size_t matched = 0;
  bool equal = true;
  for (const auto& c : r.summary["bernstein_constants"]) {
    const auto it = measured.find({c["p"].get<double>(), c["a"].get<double>()});
    if (it == measured.end()) continue;
    ++matched;
    equal = equal && it->second == c["c_emp"].get<double>();
  }
  o.require(equal && matched == 25, "cEmp shared with criterion 2 (" + std::to_string(matched) + " groups)");
  return o;
}

Outcome criterion5(Shared&) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  SolverConfig cfg;
  cfg.grid = GridSpec{128, 2.0 * std::numbers::pi};
  cfg.alpha = 0.5;
  cfg.kappa = 0.1;
  cfg.t_end = 1.0;
  EnsembleSpec spec;
  spec.seed = 5;
  spec.count = 1;
  spec.j_lo = 0;
  spec.j_hi = 2;
  spec.shape = SpectrumShape::Decaying;
  const SpectralField theta0 = ensemble_member_spectral(spec, cfg.grid, 0);

  // (i) linear decay against exp(-kappa |xi|^{2 alpha} T) per mode.
  {
    SolverConfig lin = cfg;
    lin.nonlinear = false;
    lin.dt = 0.1;
    const SpectralField end = run(theta0, lin).final_state.theta;
    double worst = 0.0;
    const double scale = theta0.max_abs();
    for_each_mode(cfg.grid, [&](int ix, int iy, const Wavevector& xi) {
      const Complex expected = std::exp(-lin.kappa * std::pow(xi.norm(), 2 * lin.alpha) * lin.t_end) * theta0.at(ix, iy);
      worst = std::max(worst, std::abs(end.at(ix, iy) - expected) / scale);
    });
    o.require(worst <= 1e-13, "linear per-mode error=" + fmt(worst));
  }
  // (ii) norms nonincreasing on a smooth nonlinear run.
  {
    SolverConfig nl = cfg;
    nl.dt = 0.01;
    const RunResult res = run(truncate(1e-0 * theta0, cfg.dealias), nl);
    auto drift = [&](const std::vector<double>& v) {
      double up = 0.0;
      for (std::size_t i = 1; i < v.size(); ++i) up += std::max(0.0, v[i] - v[i - 1]);
      return up / v.front() / nl.t_end;
    };
    o.require(drift(res.trajectory.l2) <= 1e-6, "L2 rise/unit time=" + fmt(drift(res.trajectory.l2)));
    o.require(drift(res.trajectory.linf) <= 1e-6, "Linf rise/unit time=" + fmt(drift(res.trajectory.linf)));
  }
  // (iii) self-convergence order over dt, dt/2, dt/4.
  {
    std::vector<SpectralField> ends;
    for (double dt : {0.05, 0.025, 0.0125}) {
      SolverConfig c = cfg;
      c.dt = dt;
      ends.push_back(run(theta0, c).final_state.theta);
    }
    const double order = std::log2(l2_norm(ends[0] - ends[1]) / l2_norm(ends[1] - ends[2]));
    o.require(std::abs(order - 4.0) <= 0.3, "IFRK4 order=" + fmt(order));
  }
  // (iv) inviscid energy.
  {
    SolverConfig inv = cfg;
    inv.kappa = 0.0;
    inv.dt = 0.01;
    const RunResult res = run(theta0, inv);
    double worst = 0.0;
    for (std::size_t i = 1; i < res.trajectory.size(); ++i) {
      const double e0 = res.trajectory.l2.front() * res.trajectory.l2.front();
      const double e = res.trajectory.l2[i] * res.trajectory.l2[i];
      worst = std::max(worst, std::abs(e - e0) / e0 / res.trajectory.t[i]);
    }
    o.require(worst <= 1e-8, "kappa=0 energy drift/unit time=" + fmt(worst));
  }
  const double secs = seconds_since(t0);
  o.require(secs < 120.0, "runtime=" + fmt(secs) + "s (< 120s)");
  return o;
}

const std::vector<std::string> kCriterion6Args = {
    "--solver.n", "128", "--solver.alpha", "0.5", "--solver.kappa", "1", "--solver.t_end", "10",
    "--init.amplitude", "0.01", "--init.normalize", "besov", "--monitor.p", "2", "--monitor.q", "2"};

Outcome criterion6(Shared& s) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out = s.work / "criterion6";
  fs::remove_all(out);
  std::vector<std::string> args{"simulate", "--out", out.string()};
  args.insert(args.end(), kCriterion6Args.begin(), kCriterion6Args.end());
  const int code = cli_run(args);
  const double secs = seconds_since(t0);
  o.require(code == 0, "simulate exit=" + std::to_string(code));
  if (code != 0) return o;
  const auto meta = nlohmann::json::parse(slurp(out / "metadata.json"));
  const double norm0 = meta["initial"]["besov_sigma_norm"].get<double>();
  o.require(std::abs(norm0 - 0.01) <= 1e-12, "||theta0||_Bdot^1=" + fmt(norm0));
  o.require(meta["result"]["final_time"].get<double>() == 10.0, "reached t=10");
  const double ratio = meta["monitor"]["max_ratio"].get<double>();
  o.require(meta["monitor"]["pass"].get<bool>() && ratio <= 1.0,
            "max (Linf_B + c1 kappa L1_B)/(4||theta0||)=" + fmt(ratio) + " (c1=" +
                fmt(meta["monitor"]["c1"].get<double>()) + ")");
  o.require(secs < 300.0, "runtime=" + fmt(secs) + "s (< 300s)");
  s.criterion6_dt = meta["solver"]["dt"].get<double>();
  return o;
}

Outcome criterion7(Shared& s) {
  Outcome o;
  Config cfg;
  for (std::size_t i = 0; i + 1 < kCriterion6Args.size(); i += 2) cfg.set(kCriterion6Args[i].substr(2), kCriterion6Args[i + 1]);
  const cli::SimulationSettings settings = cli::read_simulation(cfg);
  const RealField theta0 = cli::make_initial_data(settings.init, settings.solver.grid, {1.0, 2.0, 2.0, true});

  PicardConfig pcfg;
  pcfg.inner = settings.solver;
  pcfg.inner.dt = s.criterion6_dt > 0.0 ? s.criterion6_dt : 0.01;
  pcfg.max_iter = 8;
  const PicardResult pr = picard_run(theta0, pcfg);

  // d[m-1] = sup_t ||theta^(m+1) - theta^(m)||. Ratios are taken from the second
  // iterate on, while the difference is above the tolerance (past that it is round-off).
  std::string diffs;
  double worst_ratio = 0.0;
  for (std::size_t m = 0; m < pr.differences.size(); ++m) {
    diffs += (m ? "," : "") + fmt(pr.differences[m]);
    if (m >= 2 && pr.differences[m - 1] > pcfg.tolerance) {
      worst_ratio = std::max(worst_ratio, pr.differences[m] / pr.differences[m - 1]);
    }
  }
  o.require(worst_ratio <= 0.5, "diffs=[" + diffs + "] worst ratio after 2nd=" + fmt(worst_ratio));
  o.require(pr.converged, "converged at iterate " + std::to_string(pr.converged_iterate));

  const RunResult direct = run(theta0, pcfg.inner);
  SolverConfig half = pcfg.inner;
  half.dt *= 0.5;
  const RunResult finer = run(theta0, half);
  const double step_error = l2_norm(direct.final_state.theta - finer.final_state.theta);
  const SpectralField& picard_end = pr.iterates[static_cast<std::size_t>(std::max(pr.converged_iterate, 1) - 1)].final_state.theta;
  const double gap = l2_norm(picard_end - direct.final_state.theta);
  o.require(gap <= 10.0 * step_error, "|picard - direct|=" + fmt(gap) + " vs step error " + fmt(step_error));
  return o;
}

Outcome criterion8(Shared&) {
  Outcome o;
  const GridSpec grid{128, 2.0 * std::numbers::pi};
  const DyadicFamily fam(grid);
  ConstantsSpec cs;
  cs.count = 16;
  const double alpha = 0.5;
  const EmpiricalConstants ec = estimate_constants(grid, alpha, 2.0, 2.0, cs);
  ExistenceTimeConfig cfg{alpha, 2.0, 2.0, 1.0, ec.c_p, ec.c_small};
  const double threshold = cfg.c_small * cfg.kappa;

  // Closed form on single-block data.
  double worst = 0.0;
  for (int j0 : {1, 2, 3}) {
    for (double factor : {1.5, 4.0, 20.0}) {
      EnsembleSpec spec;
      spec.seed = 80 + static_cast<std::uint64_t>(j0);
      spec.count = 1;
      spec.shape = SpectrumShape::SingleBlock;
      spec.j_lo = spec.j_hi = j0;
      const double sigma = cfg.sigma();
      spec.amplitude = factor * threshold * std::exp2(-j0 * sigma);  // ||theta0||_2 = A 2^{-j0 sigma}
      const RealField theta0 = ensemble_member(spec, grid, 0);
      const double A = std::exp2(j0 * sigma) * lp_norm(theta0, 2.0);
      const double x = threshold / A;
      const double expected = -std::log1p(-x * x) / (cfg.kappa * cfg.c_p * std::exp2(2 * alpha * j0));
      const ExistenceTime et = existence_time(theta0, cfg, fam);
      worst = std::max(worst, std::abs(et.t0 - expected) / expected);
    }
  }
  o.require(worst <= 1e-6, "3x3 closed form rel err=" + fmt(worst));

  // INFINITY exactly when the smallness check passes.
  bool consistent = true;
  int globals = 0;
  EnsembleSpec spec;
  spec.seed = 88;
  spec.count = 1;
  spec.j_lo = 0;
  spec.j_hi = 3;
  spec.shape = SpectrumShape::Decaying;
  const SpectralField base = ensemble_member_spectral(spec, grid, 0);
  const double base_norm = besov_norm(base, {cfg.sigma(), 2.0, 2.0, true}, fam);
  for (double f : {0.1, 0.5, 0.9, 0.999999, 1.000001, 1.1, 2.0, 10.0}) {
    const SpectralField theta0 = (f * threshold / base_norm) * base;
    const ExistenceTime et = existence_time(theta0, cfg, fam);
    const bool small = smallness_check(theta0, cfg.c_small, cfg.kappa, {cfg.sigma(), 2.0, 2.0, true}, fam);
    consistent = consistent && (std::isinf(et.t0) == small) && (et.global == small);
    globals += small ? 1 : 0;
  }
  o.require(consistent && globals == 4, "T0=inf iff smallness (" + std::to_string(globals) + "/8 small)");

  // Dyadic rescaling: T0 -> 2^{-2 alpha} T0.
  double worst_cov = 0.0;
  for (double a : {0.25, 0.5}) {
    ExistenceTimeConfig c = cfg;
    c.alpha = a;
    EnsembleSpec rs;
    rs.seed = 90;
    rs.count = 1;
    rs.j_lo = 1;
    rs.j_hi = 2;
    const SpectralField raw = ensemble_member_spectral(rs, grid, 0);
    // Keep only blocks 1..2 so the shifted copy stays in interior blocks.
    const SpectralField theta0 = block(raw, 1, fam) + block(raw, 2, fam);
    const double norm = besov_norm(theta0, {c.sigma(), 2.0, 2.0, true}, fam);
    const SpectralField scaled_theta0 = (3.0 * threshold / norm) * theta0;
    const ExistenceTime t_orig = existence_time(scaled_theta0, c, fam);
    const ExistenceTime t_resc = existence_time(rescale_dyadic(scaled_theta0, c.sigma()), c, fam);
    worst_cov = std::max(worst_cov, std::abs(t_resc.t0 / t_orig.t0 / std::exp2(-2 * a) - 1.0));
  }
  o.require(worst_cov <= 0.02, "rescaling covariance rel err=" + fmt(worst_cov));
  return o;
}

Outcome criterion9(Shared& s) {
  Outcome o;
  require_check(o, lp_suite(s), "bony_vs_fine_grid");
  const RatioReport* bony = lp_suite(s).find_report("bony");
  o.require(bony && bony->samples.size() == 50, "pairs=" + std::to_string(bony ? bony->samples.size() : 0));
  for (const char* name : {"product", "commutator"}) {
    const SuiteResult r = suite(name);
    require_check(o, r, "ratios_finite");
    require_check(o, r, "resolution_doubling_stability");
    o.notes.back() = std::string(name) + "." + o.notes.back();
  }
  return o;
}

Outcome criterion10(Shared& s) {
  Outcome o;
  const fs::path root = s.work / "determinism";
  fs::remove_all(root);
  auto rerun = [&](const std::string& label, std::vector<std::string> args) {
    const fs::path a = root / (label + "_a");
    const fs::path b = root / (label + "_b");
    std::vector<std::string> first = args;
    first.insert(first.end(), {"--out", a.string()});
    std::vector<std::string> second{args[0]};
    if (args[0] == "verify") second.push_back(args[1]);
    second.insert(second.end(), {"--config", (a / "config.resolved").string(), "--out", b.string()});
    const int c1 = cli_run(first);
    const int c2 = cli_run(second);
    std::string why;
    const bool same = c1 == 0 && c2 == 0 && same_tree(a, b, why);
    o.require(same, label + " rerun " + (same ? "identical" : "differs: " + why + " exit " + std::to_string(c1) + "/" + std::to_string(c2)));
  };
  rerun("verify_commutator", {"verify", "commutator", "--n", "64", "--count", "4"});
  rerun("verify_bernstein", {"verify", "bernstein", "--n", "64", "--count", "5", "--j_hi", "3"});
  rerun("simulate", {"simulate", "--solver.n", "64", "--solver.t_end", "1", "--output.snapshot_stride", "20"});
  rerun("sweep", {"sweep", "--sweep.alpha", "0.3,0.5", "--sweep.amplitude", "0.01,0.05", "--sweep.n", "32",
                  "--solver.t_end", "0.5", "--sweep.parallelism", "2"});

  // Parallelism independence.
  const std::vector<std::string> base{"sweep", "--sweep.alpha", "0.25,0.5", "--sweep.kappa", "0.5,1",
                                      "--sweep.amplitude", "0.02", "--sweep.n", "32", "--solver.t_end", "0.5"};
  std::map<unsigned, fs::path> outs;
  bool ok = true;
  for (unsigned par : {1u, 4u}) {
    std::vector<std::string> args = base;
    outs[par] = root / ("sweep_par" + std::to_string(par));
    args.insert(args.end(), {"--sweep.parallelism", std::to_string(par), "--out", outs[par].string()});
    ok = ok && cli_run(args) == 0;
  }
  std::string why;
  const bool same = ok && same_tree(outs[1], outs[4], why, {"config.resolved", "metadata.json"});
  // metadata.json carries the config echo (with sweep.parallelism); compare everything else in it.
  bool meta_same = same;
  if (same) {
    for (const std::string& f : files_under(outs[1])) {
      if (fs::path(f).filename() != "metadata.json") continue;
      auto x = nlohmann::json::parse(slurp(outs[1] / f));
      auto y = nlohmann::json::parse(slurp(outs[4] / f));
      x["config"].erase("sweep.parallelism");
      y["config"].erase("sweep.parallelism");
      meta_same = meta_same && x == y;
    }
  }
  o.require(same && meta_same, std::string("sweep parallelism 1 vs 4 ") + (same && meta_same ? "identical" : "differs: " + why));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "sqg_acceptance";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--workdir" && i + 1 < argc) {
      work = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::istringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: sqg_acceptance [--workdir DIR] [--only N[,N...]]\n";
      return 2;
    }
  }
  fs::create_directories(work);
  Shared shared;
  shared.work = work;

  const std::vector<std::pair<std::string, std::function<Outcome(Shared&)>>> criteria = {
      {"partition of unity, reconstruction, quasi-orthogonality", criterion1},
      {"Bernstein-type lower bound ensemble", criterion2},
      {"positivity gap", criterion3},
      {"dissipation chain ordering", criterion4},
      {"solver correctness", criterion5},
      {"small-data a-priori bound", criterion6},
      {"Picard iteration", criterion7},
      {"existence time", criterion8},
      {"Bony decomposition and product/commutator stability", criterion9},
      {"determinism", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second(shared);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::string notes;
    for (const std::string& n : o.notes) notes += (notes.empty() ? "" : "; ") + n;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[i].first << ") ["
              << fmt(seconds_since(t0)) << "s] " << notes << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
