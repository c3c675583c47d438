#include <exception>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "sqg/littlewood_paley.hpp"
#include "sqg_cli/commands.hpp"

namespace sqg::cli {

namespace {

// "--key value" and "--key=value" pairs left over after CLI11 parsing become overrides.
void apply_extras(const std::vector<std::string>& extras, Config& cfg) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() < 3) throw ConfigError("unexpected argument '" + arg + "'");
    const std::string body = arg.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      cfg.set(body.substr(0, eq), body.substr(eq + 1));
    } else {
      if (i + 1 >= extras.size()) throw ConfigError("option '" + arg + "' needs a value");
      cfg.set(body, extras[++i]);
    }
  }
}

struct CommonOptions {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

void add_common(CLI::App* sub, CommonOptions& opts, const std::string& default_out) {
  sub->add_option("--config,-c", opts.config, "Config file (key = value lines)");
  sub->add_option("--set,-s", opts.sets, "Override, key=value (repeatable)");
  sub->add_option("--out,-o", opts.out, "Output directory")->default_val(default_out);
  sub->allow_extras();
}

Config build_config(const CommonOptions& opts, const std::vector<std::string>& extras) {
  Config cfg;
  if (!opts.config.empty()) cfg.load(opts.config);
  for (const std::string& s : opts.sets) cfg.set_override(s);
  apply_extras(extras, cfg);
  return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dissipative quasi-geostrophic equation: Besov-space tools, solver and verification suites", "sqg"};
  app.require_subcommand(1);

  CommonOptions verify_opts, simulate_opts, existence_opts, sweep_opts;
  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run an inequality or identity suite on a seeded ensemble");
  std::string suites_help = "Suite:";
  for (const auto& s : suite_names()) suites_help += " " + s;
  verify->add_option("suite", suite, suites_help)->required();
  add_common(verify, verify_opts, "sqg-out/verify");

  auto* simulate = app.add_subcommand("simulate", "Time-step the dissipative QG equation");
  add_common(simulate, simulate_opts, "sqg-out/simulate");

  auto* existence = app.add_subcommand("existence-time", "Lower bound on the existence time of given data");
  add_common(existence, existence_opts, "");

  auto* sweep = app.add_subcommand("sweep", "Grid of simulations over alpha, kappa, amplitude and n");
  add_common(sweep, sweep_opts, "sqg-out/sweep");

  std::string profile_out;
  double r_max = 4.0;
  int samples = 401;
  auto* profile = app.add_subcommand("profile", "Write the dyadic cutoff profile chi, phi as CSV");
  profile->add_option("--out,-o", profile_out, "CSV file (stdout when omitted)");
  profile->add_option("--r-max", r_max, "Largest radius")->default_val(4.0);
  profile->add_option("--samples", samples, "Number of radii")->default_val(401);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) {
      Config cfg = build_config(verify_opts, verify->remaining());
      const auto& names = suite_names();
      if (std::find(names.begin(), names.end(), suite) == names.end()) {
        err << "sqg verify: unknown suite '" << suite << "'\n" << suites_help << '\n';
        return kExitUsage;
      }
      return cmd_verify(suite, cfg, verify_opts.out, out, err);
    }
    if (simulate->parsed()) {
      Config cfg = build_config(simulate_opts, simulate->remaining());
      return cmd_simulate(cfg, simulate_opts.out, out, err);
    }
    if (existence->parsed()) {
      Config cfg = build_config(existence_opts, existence->remaining());
      return cmd_existence_time(cfg, existence_opts.out, out, err);
    }
    if (sweep->parsed()) {
      Config cfg = build_config(sweep_opts, sweep->remaining());
      return cmd_sweep(cfg, sweep_opts.out, out, err);
    }
    if (profile->parsed()) {
      if (profile_out.empty()) {
        write_profile_csv(out, r_max, samples);
      } else {
        std::ofstream os(profile_out);
        if (!os) throw std::runtime_error("cannot write " + profile_out);
        write_profile_csv(os, r_max, samples);
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnknownSuite& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sqg::cli
