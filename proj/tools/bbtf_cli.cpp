#include "bbtf/diagnostics.hpp"
#include "bbtf/errors.hpp"
#include "bbtf/geweke.hpp"
#include "bbtf/gibbs.hpp"
#include "bbtf/io.hpp"
#include "bbtf/simulation.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace bbtf;

namespace {

enum Exit {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kBadInput = 3,
  kConditioning = 4,
};

bool ci_mode() {
  const char *ci = std::getenv("CI");
  if (!ci || !*ci)
    return false;
  const std::string v = ci;
  return v != "0" && v != "false" && v != "FALSE";
}

// Shared schedule / seed / config-file options.
struct Common {
  int iters = 10500;
  int burnin = 500;
  int thin = 5;
  std::uint64_t seed = 1;
  double eta = 500.0;
  std::string config;
  CLI::Option *seed_opt = nullptr;

  void add(CLI::App *app, bool schedule = true) {
    if (schedule) {
      app->add_option("--iters", iters, "Total Gibbs sweeps")
          ->capture_default_str()
          ->check(CLI::PositiveNumber);
      app->add_option("--burnin", burnin, "Sweeps discarded before recording")
          ->capture_default_str()
          ->check(CLI::NonNegativeNumber);
      app->add_option("--thin", thin, "Keep every thin-th sweep")
          ->capture_default_str()
          ->check(CLI::PositiveNumber);
      app->add_option("--eta", eta, "Sigmoid sharpness")
          ->capture_default_str()
          ->check(CLI::PositiveNumber);
    }
    seed_opt = app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--config", config,
                    "key=value file mirroring the flags; flags win")
        ->check(CLI::ExistingFile);
  }

  McmcSchedule schedule() const { return {iters, burnin, thin}; }
};

// Applies key=value lines to options the command line left unset.
void apply_config(CLI::App *app, const std::string &path) {
  if (path.empty())
    return;
  static const std::vector<std::string> informational = {
      "version", "input-fnv1a", "retained", "seconds"};
  for (const auto &[key, value] : read_manifest(path)) {
    if (std::find(informational.begin(), informational.end(), key) !=
        informational.end())
      continue;
    if (key == "config")
      throw CLI::ValidationError("config", "config files cannot nest");
    CLI::Option *opt = nullptr;
    try {
      opt = app->get_option("--" + key);
    } catch (const CLI::OptionNotFound &) {
      throw CLI::ValidationError(key, "unknown key in config file " + path);
    }
    if (opt->count() > 0)
      continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

void require_seed(const Common &c) {
  if (ci_mode() && c.seed_opt->count() == 0)
    throw CLI::RequiredError("--seed (mandatory when CI is set)");
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty())
        out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty())
    out.push_back(cur);
  return out;
}

const std::map<std::string, PriorKind> kPriors = {
    {"hs", PriorKind::horseshoe},
    {"lap", PriorKind::laplace},
    {"nor", PriorKind::normal}};

const std::map<std::string, ShapeConstraint> kConstraints = {
    {"none", ShapeConstraint::none},
    {"ni", ShapeConstraint::increasing},
    {"ni-inc", ShapeConstraint::increasing},
    {"ni-dec", ShapeConstraint::decreasing},
    {"convex", ShapeConstraint::convex}};

const std::map<std::string, Side> kSides = {{"upper", Side::upper},
                                            {"lower", Side::lower}};

struct FitArgs {
  Common common;
  std::string input;
  std::string output;
  int order = 1;
  PriorKind prior = PriorKind::horseshoe;
  ShapeConstraint constraint = ShapeConstraint::none;
  Side side = Side::upper;
  double grid_scale = 1.0;
  double level = 0.95;
  bool save_draws = false;
  int trace = 0;
  Hyperparameters hyper;
};

int run_fit(const FitArgs &a) {
  FitConfig cfg;
  cfg.order = a.order;
  cfg.prior = a.prior;
  cfg.constraint = a.constraint;
  cfg.side = a.side;
  cfg.eta = a.common.eta;
  cfg.schedule = a.common.schedule();
  cfg.seed = a.common.seed;
  cfg.grid_scale = a.grid_scale;
  cfg.hyper = a.hyper;
  cfg.validate();

  const Dataset data = read_dataset_csv(a.input);
  const PosteriorDraws draws = run_chain(data, cfg);
  const PosteriorSummary summary = summarize(draws, a.level);

  const fs::path out = a.output;
  fs::create_directories(out);
  write_summary_csv(out / "summary.csv", data, summary);
  if (a.save_draws)
    write_draws_csv(out / "draws.csv", draws);
  if (a.trace > 0)
    write_trace_csv(out / "trace.csv",
                    trace_export(draws, static_cast<std::size_t>(a.trace - 1)));
  Manifest manifest = fit_manifest(cfg, a.input, file_checksum(a.input), draws);
  manifest["level"] = format_double(a.level);
  write_manifest(out / "manifest.txt", manifest);

  const Feasibility f = boundary_feasibility(summary.mean, data);
  std::cout << "fit: n=" << data.size() << " retained=" << draws.m
            << " seconds=" << format_double(draws.seconds)
            << " boundary_ok=" << format_double(f.fraction) << '\n';
  return kOk;
}

struct SimulateArgs {
  Common common;
  std::string scenario = "sqrt";
  std::string noise = "b";
  std::size_t n = 100;
  int reps = 20;
  std::string methods = "hs";
  std::string out = ".";
  int order = -1;
  bool literal_sigmoid = false;
};

Scenario make_scenario(const std::string &name, const std::string &noise,
                       std::size_t n, bool literal) {
  Scenario sc;
  sc.kind = parse_scenario(name);
  sc.noise = parse_noise(noise);
  sc.n = n;
  sc.literal_sigmoid = literal;
  sc.validate();
  return sc;
}

int run_simulate(const SimulateArgs &a) {
  const Scenario sc = make_scenario(a.scenario, a.noise, a.n, a.literal_sigmoid);
  ReplicationOptions o;
  o.reps = a.reps;
  o.seed = a.common.seed;
  o.schedule = a.common.schedule();
  o.eta = a.common.eta;
  o.order = a.order;
  const auto methods = parse_methods(a.methods);
  const auto results = run_replications(sc, methods, o);
  const fs::path out = a.out;
  write_metrics_csv(out / "metrics.csv", results);
  write_replications_csv(out / "replications.csv", results);
  for (const auto &r : results) {
    std::cout << r.method.name << ": rmse=" << format_double(r.rmse_mean)
              << " al=" << format_double(r.al) << " cp=" << format_double(r.cp)
              << '\n';
    if (r.failures > 0)
      std::cerr << r.method.name << ": " << r.failures << " of " << a.reps
                << " replications failed\n";
  }
  return kOk;
}

struct BenchArgs {
  Common common;
  std::string scenario = "sqrt";
  std::string noise = "b";
  std::string sizes = "50,100,200";
  int reps = 3;
  std::string out = ".";
};

int run_bench(const BenchArgs &a) {
  std::vector<std::size_t> sizes;
  for (const auto &s : split_list(a.sizes)) {
    const double v = parse_double(s);
    if (!(v >= 10.0) || v != std::floor(v))
      throw DomainError("sizes must be integers >= 10");
    sizes.push_back(static_cast<std::size_t>(v));
  }
  const Scenario sc = make_scenario(a.scenario, a.noise, sizes.front(), false);
  BenchOptions o;
  o.reps = a.reps;
  o.seed = a.common.seed;
  o.schedule = a.common.schedule();
  o.eta = a.common.eta;
  o.threads = 1; // timings are per single core
  const auto rows = bench_samplers(sc, sizes, o);
  write_bench_csv(fs::path(a.out) / "bench.csv", rows);
  for (const auto &r : rows)
    std::cout << r.n << ' ' << r.sampler << " seconds=" << format_double(r.seconds)
              << " mean_ess=" << format_double(r.mean_ess) << '\n';
  return kOk;
}

struct EtaArgs {
  Common common;
  std::string scenario = "sqrt";
  std::string noise = "b";
  std::string etas = "100,200,500";
  int reps = 10;
  std::string out = ".";
};

int run_eta(const EtaArgs &a) {
  std::vector<double> etas;
  for (const auto &s : split_list(a.etas))
    etas.push_back(parse_double(s));
  const Scenario sc = make_scenario(a.scenario, a.noise, 100, false);
  ReplicationOptions o;
  o.reps = a.reps;
  o.seed = a.common.seed;
  o.schedule = a.common.schedule();
  const auto runs = eta_sensitivity(sc, etas, o);
  write_eta_csv(fs::path(a.out) / "eta.csv", runs);
  std::cout << "median rmse spread: " << format_double(median_rmse_spread(runs))
            << '\n';
  return kOk;
}

struct GewekeArgs {
  Common common;
  PriorKind prior = PriorKind::horseshoe;
  ShapeConstraint constraint = ShapeConstraint::none;
  std::size_t n = 10;
  int order = 1;
  std::size_t draws = 50000;
  int thin = 100;
  double eta = 5.0;
  std::string engine = "pg";
  std::string broken;
  std::string out;
};

int run_geweke(const GewekeArgs &a) {
  FitConfig cfg;
  cfg.order = a.order;
  cfg.prior = a.prior;
  cfg.constraint = a.constraint;
  cfg.eta = a.eta;
  cfg.seed = a.common.seed;
  cfg.hyper = geweke_hyperparameters();
  GewekeOptions o;
  o.n = a.n;
  o.draws = a.draws;
  o.thin = a.thin;
  o.engine = a.engine == "cw" ? ThetaEngine::coordinatewise
                              : ThetaEngine::polya_gamma;
  o.hooks.skip_sigma2 = a.broken == "sigma2";
  const GewekeReport r = geweke_test(cfg, o);
  if (!a.out.empty())
    write_geweke_csv(a.out, r);
  for (const auto &s : r.statistics)
    std::cout << s.name << " ks=" << format_double(s.ks_statistic)
              << " p=" << format_double(s.pvalue)
              << " ess=" << format_double(s.ess) << '\n';
  std::cout << "seconds=" << format_double(r.seconds) << '\n';
  return r.min_pvalue() < 1e-4 ? kFailure : kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Bayesian boundary trend filtering"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  FitArgs fit;
  CLI::App *fit_cmd = app.add_subcommand("fit", "Fit a boundary curve to x,y data");
  fit.common.add(fit_cmd);
  fit_cmd->add_option("--input", fit.input, "CSV with header x,y (required)");
  fit_cmd->add_option("--output", fit.output, "Output directory (required)");
  fit_cmd->add_option("--order", fit.order, "Trend order k")
      ->capture_default_str()
      ->check(CLI::Range(0, kMaxOrder));
  fit_cmd->add_option("--prior", fit.prior, "hs, lap or nor")
      ->transform(CLI::CheckedTransformer(kPriors, CLI::ignore_case));
  fit_cmd->add_option("--constraint", fit.constraint,
                      "none, ni-inc, ni-dec or convex")
      ->transform(CLI::CheckedTransformer(kConstraints, CLI::ignore_case));
  fit_cmd->add_option("--side", fit.side, "upper or lower")
      ->transform(CLI::CheckedTransformer(kSides, CLI::ignore_case));
  fit_cmd->add_option("--grid-scale", fit.grid_scale,
                      "Multiply x before building the difference operator")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--level", fit.level, "Credible level")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  fit_cmd->add_flag("--save-draws", fit.save_draws, "Also write draws.csv");
  fit_cmd->add_option("--trace", fit.trace,
                      "Write trace.csv for this 1-based coordinate")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--a-sigma", fit.hyper.a_sigma)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--b-sigma", fit.hyper.b_sigma)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--a-rho", fit.hyper.a_rho)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--b-rho", fit.hyper.b_rho)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--a-u", fit.hyper.a_u)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--b-u", fit.hyper.b_u)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--a-gamma", fit.hyper.a_gamma)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--b-gamma", fit.hyper.b_gamma)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--a-tau", fit.hyper.a_tau)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--b-tau", fit.hyper.b_tau)->check(CLI::PositiveNumber);

  SimulateArgs sim;
  CLI::App *sim_cmd =
      app.add_subcommand("simulate", "Replicated fits on a synthetic scenario");
  sim.common.add(sim_cmd);
  sim_cmd->add_option("--scenario", sim.scenario, "sqrt, pc or sigmoid")
      ->capture_default_str();
  sim_cmd->add_option("--noise", sim.noise, "a, b, c or d")->capture_default_str();
  sim_cmd->add_option("--n", sim.n, "Grid size")->capture_default_str();
  sim_cmd->add_option("--reps", sim.reps, "Replications")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--methods", sim.methods, "e.g. hs,hsni,lap")
      ->capture_default_str();
  sim_cmd->add_option("--order", sim.order, "Trend order (default by scenario)")
      ->check(CLI::Range(0, kMaxOrder));
  sim_cmd->add_option("--out", sim.out, "Output directory")->capture_default_str();
  sim_cmd->add_flag("--literal-sigmoid", sim.literal_sigmoid,
                    "Use exp(32t-8) in the first sigmoid branch");

  BenchArgs bench;
  CLI::App *bench_cmd =
      app.add_subcommand("bench", "Time and ESS of both theta samplers");
  bench.common.add(bench_cmd);
  bench_cmd->add_option("--scenario", bench.scenario)->capture_default_str();
  bench_cmd->add_option("--noise", bench.noise)->capture_default_str();
  bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated grid sizes")
      ->capture_default_str();
  bench_cmd->add_option("--reps", bench.reps)
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench.out)->capture_default_str();

  EtaArgs eta;
  CLI::App *eta_cmd = app.add_subcommand("eta", "RMSE across sigmoid sharpness");
  eta.common.add(eta_cmd);
  eta_cmd->add_option("--scenario", eta.scenario)->capture_default_str();
  eta_cmd->add_option("--noise", eta.noise)->capture_default_str();
  eta_cmd->add_option("--etas", eta.etas)->capture_default_str();
  eta_cmd->add_option("--reps", eta.reps)
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  eta_cmd->add_option("--out", eta.out)->capture_default_str();

  GewekeArgs gw;
  CLI::App *gw_cmd =
      app.add_subcommand("geweke", "Joint-distribution test of the Gibbs sweep");
  gw.common.add(gw_cmd, false);
  gw_cmd->add_option("--prior", gw.prior)
      ->transform(CLI::CheckedTransformer(kPriors, CLI::ignore_case));
  gw_cmd->add_option("--constraint", gw.constraint)
      ->transform(CLI::CheckedTransformer(kConstraints, CLI::ignore_case));
  gw_cmd->add_option("--n", gw.n)->capture_default_str()->check(CLI::Range(3, 15));
  gw_cmd->add_option("--order", gw.order)
      ->capture_default_str()
      ->check(CLI::Range(0, kMaxOrder));
  gw_cmd->add_option("--draws", gw.draws)->capture_default_str();
  gw_cmd->add_option("--thin", gw.thin, "Sweeps between recorded draws")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gw_cmd->add_option("--eta", gw.eta)->capture_default_str()->check(
      CLI::PositiveNumber);
  gw_cmd->add_option("--engine", gw.engine, "pg or cw")
      ->capture_default_str()
      ->check(CLI::IsMember({"pg", "cw"}));
  gw_cmd->add_option("--break", gw.broken, "Test hook: sigma2 skips that update")
      ->check(CLI::IsMember({"sigma2"}));
  gw_cmd->add_option("--out", gw.out, "Write the report as CSV");

  try {
    app.parse(argc, argv);
    struct Entry {
      CLI::App *cmd;
      Common *common;
    };
    for (const Entry &e : {Entry{fit_cmd, &fit.common}, Entry{sim_cmd, &sim.common},
                           Entry{bench_cmd, &bench.common},
                           Entry{eta_cmd, &eta.common}, Entry{gw_cmd, &gw.common}})
      if (e.cmd->parsed()) {
        apply_config(e.cmd, e.common->config);
        require_seed(*e.common);
      }
    // Checked here so that a config file can supply them.
    if (fit_cmd->parsed() && fit.input.empty())
      throw CLI::RequiredError("--input");
    if (fit_cmd->parsed() && fit.output.empty())
      throw CLI::RequiredError("--output");
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (fit_cmd->parsed())
      return run_fit(fit);
    if (sim_cmd->parsed())
      return run_simulate(sim);
    if (bench_cmd->parsed())
      return run_bench(bench);
    if (eta_cmd->parsed())
      return run_eta(eta);
    if (gw_cmd->parsed())
      return run_geweke(gw);
  } catch (const ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ConditioningError &e) {
    std::cerr << "error: conditioning failure at pivot " << e.pivot() << ": "
              << e.what() << '\n';
    return kConditioning;
  } catch (const OrderingError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
