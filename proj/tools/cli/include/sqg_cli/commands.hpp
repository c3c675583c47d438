#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sqg/solver.hpp"
#include "sqg/ensemble.hpp"
#include "sqg/wellposedness.hpp"
#include "sqg_cli/config.hpp"
#include "sqg_cli/suites.hpp"

namespace sqg::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitAbort = 3 };

inline constexpr int kMetadataFormatVersion = 1;

/// Initial data, keys "init.*".
///   kind = random | zero | pattern | file
///   normalize = none | l2 | besov (besov: amplitude is ||theta0||_{Bdot^sigma_{p,q}})
struct InitialDataSpec {
  std::string kind = "random";
  double amplitude = 0.01;
  std::string normalize = "besov";
  EnsembleSpec random;
  int k1 = 1;
  int k2 = 0;
  std::string file;
};

InitialDataSpec read_initial_data(Config& cfg);
/// Builds theta0 on `grid`; `sigma_index` is used when normalize = besov.
RealField make_initial_data(const InitialDataSpec& spec, const GridSpec& grid, const BesovIndex& sigma_index);

/// Where constants come from: "auto" entries are measured on a seeded ensemble.
struct ConstantSettings {
  std::optional<double> c_p;
  std::optional<double> c_small;
  std::optional<double> c1;
  ConstantsSpec ensemble;
};

struct SimulationSettings {
  SolverConfig solver;
  bool dt_auto = true;
  InitialDataSpec init;
  int record_stride = 1;
  long snapshot_stride = 0;
  std::string snapshot_format = "bin";
  bool monitor = true;
  double monitor_p = 2.0;
  double monitor_q = 2.0;
  ConstantSettings constants;
};

SimulationSettings read_simulation(Config& cfg);

struct SimulationOutcome {
  int exit_code = kExitOk;
  bool aborted = false;
  std::optional<double> t0_prediction;  // unset when alpha > 1/2
  double max_apriori_ratio = 0.0;
  std::string status;
};

/// Resolves "auto" constants for (grid, alpha, p, q).
EmpiricalConstants resolve_constants(const ConstantSettings& cs, const GridSpec& grid, double alpha, double p,
                                     double q);

/// Runs one simulation and writes trajectory.csv, metadata.json and snapshots into `out`.
SimulationOutcome execute_simulation(const SimulationSettings& s, Config& cfg, const std::filesystem::path& out,
                                     const std::optional<EmpiricalConstants>& known = std::nullopt);

int cmd_verify(const std::string& suite, Config& cfg, const std::filesystem::path& out, std::ostream& log,
               std::ostream& err);
int cmd_simulate(Config& cfg, const std::filesystem::path& out, std::ostream& log, std::ostream& err);
int cmd_existence_time(Config& cfg, const std::filesystem::path& out, std::ostream& log, std::ostream& err);
int cmd_sweep(Config& cfg, const std::filesystem::path& out, std::ostream& log, std::ostream& err);

/// Full command-line entry point; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqg::cli
