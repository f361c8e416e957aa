#include "bbtf/simulation.hpp"

#include "bbtf/distributions.hpp"
#include "bbtf/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace bbtf {

namespace {

template <class Fn> void parallel_for(std::size_t count, int threads, Fn fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++)
        fn(i);
    });
  for (auto &t : pool)
    t.join();
}

double logistic(double t) {
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t))
                  : std::exp(t) / (1.0 + std::exp(t));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return empirical_quantile(v, 0.5);
}

FitConfig fit_config(const Method &m, int order, const ReplicationOptions &o,
                     std::uint64_t seed) {
  FitConfig c;
  c.order = order;
  c.prior = m.prior;
  c.constraint = m.constraint;
  c.eta = o.eta;
  c.schedule = o.schedule;
  c.hyper = o.hyper;
  c.seed = seed;
  return c;
}

} // namespace

void Scenario::validate() const {
  if (n < 10)
    throw DomainError("scenario needs n >= 10");
  if (kind == ScenarioKind::piecewise_constant && n > 100)
    throw DomainError("the step function is defined on x in [1, 100]");
}

std::string Scenario::label() const {
  return to_string(kind) + "-" + to_string(noise);
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
  case ScenarioKind::sqrt:
    return "sqrt";
  case ScenarioKind::piecewise_constant:
    return "pc";
  case ScenarioKind::piecewise_sigmoid:
    return "sigmoid";
  }
  return "unknown";
}

std::string to_string(NoiseKind noise) {
  return std::string(1, static_cast<char>('a' + static_cast<int>(noise)));
}

ScenarioKind parse_scenario(const std::string &name) {
  if (name == "sqrt")
    return ScenarioKind::sqrt;
  if (name == "pc" || name == "piecewise-constant")
    return ScenarioKind::piecewise_constant;
  if (name == "sigmoid" || name == "piecewise-sigmoid")
    return ScenarioKind::piecewise_sigmoid;
  throw DomainError("unknown scenario '" + name + "'");
}

NoiseKind parse_noise(const std::string &name) {
  if (name.size() == 1 && name[0] >= 'a' && name[0] <= 'd')
    return static_cast<NoiseKind>(name[0] - 'a');
  throw DomainError("unknown noise '" + name + "' (expected a, b, c or d)");
}

double piecewise_sigmoid(double t, bool literal) {
  if (t <= 0.5) {
    const double a = 16.0 * t - 8.0;
    if (literal)
      return 1.0 + 4.0 * std::exp(32.0 * t - 8.0) / (1.0 + std::exp(a));
    return 1.0 + 4.0 * logistic(a);
  }
  return 1.0 + 4.0 * logistic(16.0 * (2.0 * t - 1.0) - 8.0);
}

double true_function(const Scenario &scenario, double x) {
  if (!std::isfinite(x))
    throw DomainError("x must be finite");
  switch (scenario.kind) {
  case ScenarioKind::sqrt:
    if (x < 0.0)
      throw DomainError("sqrt scenario needs x >= 0");
    return 0.5 * std::sqrt(x);
  case ScenarioKind::piecewise_constant:
    if (x < 1.0 || x > 100.0)
      throw DomainError("step function is defined on [1, 100]");
    if (x <= 20.0)
      return 0.5;
    if (x <= 40.0)
      return 1.0;
    if (x <= 60.0)
      return 2.5;
    return 3.5;
  case ScenarioKind::piecewise_sigmoid: {
    const double n = static_cast<double>(scenario.n);
    if (x <= 0.0 || x > n)
      throw DomainError("sigmoid scenario is defined on (0, n]");
    return piecewise_sigmoid(x / n, scenario.literal_sigmoid);
  }
  }
  throw DomainError("unknown scenario");
}

double noise_scale(NoiseKind noise) {
  switch (noise) {
  case NoiseKind::a:
    return 0.5;
  case NoiseKind::b:
    return 1.0;
  case NoiseKind::c:
    return 2.0;
  case NoiseKind::d:
    break;
  }
  throw DomainError("the mixture noise has no single scale");
}

double sample_scenario_noise(NoiseKind noise, RngStream &rng) {
  if (noise == NoiseKind::d)
    return sample_half_normal_noise(rng.uniform() < 0.8 ? 1.0 : 3.0, rng);
  return sample_half_normal_noise(noise_scale(noise), rng);
}

SimulatedData generate_dataset(const Scenario &scenario, std::uint64_t seed) {
  scenario.validate();
  RngStream rng(seed, 0);
  const std::size_t n = scenario.n;
  std::vector<double> x(n), y(n), truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i + 1);
    truth[i] = true_function(scenario, x[i]);
    y[i] = truth[i] + sample_scenario_noise(scenario.noise, rng);
  }
  return {Dataset(std::move(x), std::move(y)), std::move(truth)};
}

Method parse_method(const std::string &name) {
  Method m;
  m.name = name;
  std::string base = name;
  if (base.size() > 2 && base.compare(base.size() - 2, 2, "ni") == 0) {
    m.constraint = ShapeConstraint::increasing;
    base.resize(base.size() - 2);
  }
  if (base == "hs")
    m.prior = PriorKind::horseshoe;
  else if (base == "lap")
    m.prior = PriorKind::laplace;
  else if (base == "nor")
    m.prior = PriorKind::normal;
  else
    throw DomainError("unknown method '" + name + "'");
  return m;
}

std::vector<Method> parse_methods(const std::string &comma_list) {
  std::vector<Method> out;
  std::stringstream ss(comma_list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(parse_method(item));
  if (out.empty())
    throw DomainError("no methods given");
  return out;
}

int default_order(ScenarioKind kind) {
  return kind == ScenarioKind::piecewise_constant ? 0 : 1;
}

Feasibility boundary_feasibility(const std::vector<double> &mean,
                                 const Dataset &data) {
  const auto &y = data.y();
  if (mean.size() != y.size())
    throw DimensionError("mean and data lengths differ");
  Feasibility f;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (mean[i] >= y[i])
      ++ok;
    else
      f.max_violation = std::max(f.max_violation, y[i] - mean[i]);
  }
  f.fraction = static_cast<double>(ok) / static_cast<double>(y.size());
  return f;
}

int thread_count_from_env() {
  if (const char *env = std::getenv("BBTF_THREADS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<MethodResult> run_replications(const Scenario &scenario,
                                           const std::vector<Method> &methods,
                                           const ReplicationOptions &options) {
  scenario.validate();
  if (options.reps < 1)
    throw DomainError("reps must be at least 1");
  if (methods.empty())
    throw DomainError("no methods given");
  const int order =
      options.order >= 0 ? options.order : default_order(scenario.kind);
  const std::size_t reps = static_cast<std::size_t>(options.reps);

  std::vector<SimulatedData> datasets;
  datasets.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r)
    datasets.push_back(generate_dataset(scenario, derive_seed(options.seed, r)));

  std::vector<MethodResult> results(methods.size());
  for (std::size_t j = 0; j < methods.size(); ++j) {
    results[j].method = methods[j];
    results[j].records.resize(reps);
  }

  const int threads =
      options.threads > 0 ? options.threads : thread_count_from_env();
  parallel_for(reps * methods.size(), threads, [&](std::size_t task) {
    const std::size_t r = task / methods.size();
    const std::size_t j = task % methods.size();
    ReplicationRecord &rec = results[j].records[r];
    rec.rep = static_cast<int>(r);
    const SimulatedData &sim = datasets[r];
    try {
      const FitConfig cfg = fit_config(methods[j], order, options,
                                       derive_seed(options.seed ^ 0x5eedULL, r));
      const PosteriorDraws draws = run_chain(sim.data, cfg);
      const PosteriorSummary s = summarize(draws);
      rec.metrics = compute_metrics(s, sim.truth);
      rec.metrics.scenario = to_string(scenario.kind);
      rec.metrics.noise = to_string(scenario.noise);
      rec.feasibility = boundary_feasibility(s.mean, sim.data);
      rec.ok = true;
    } catch (const std::exception &e) {
      rec.ok = false;
      rec.error = e.what();
    }
  });

  for (auto &res : results) {
    std::vector<double> rmse;
    double al = 0.0, cp = 0.0;
    for (const auto &rec : res.records) {
      if (!rec.ok) {
        ++res.failures;
        continue;
      }
      rmse.push_back(rec.metrics.rmse);
      al += rec.metrics.al;
      cp += rec.metrics.cp;
    }
    const double k = static_cast<double>(rmse.size());
    if (rmse.empty()) {
      res.rmse_mean = res.al = res.cp = std::numeric_limits<double>::quiet_NaN();
      res.rmse_sd = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    res.rmse_mean = std::accumulate(rmse.begin(), rmse.end(), 0.0) / k;
    res.al = al / k;
    res.cp = cp / k;
    if (rmse.size() < 2) {
      res.rmse_sd = std::numeric_limits<double>::quiet_NaN();
    } else {
      double ss = 0.0;
      for (double v : rmse)
        ss += (v - res.rmse_mean) * (v - res.rmse_mean);
      res.rmse_sd = std::sqrt(ss / (k - 1.0));
    }
  }
  return results;
}

std::vector<BenchRow> bench_samplers(const Scenario &scenario,
                                     const std::vector<std::size_t> &sizes,
                                     const BenchOptions &options) {
  if (sizes.empty())
    throw DomainError("bench needs at least one size");
  if (options.reps < 1)
    throw DomainError("reps must be at least 1");
  const ThetaEngine engines[] = {ThetaEngine::polya_gamma,
                                 ThetaEngine::coordinatewise};
  const std::size_t reps = static_cast<std::size_t>(options.reps);

  struct Cell {
    bool ok = false;
    double seconds = 0.0;
    double ess = 0.0;
  };
  std::vector<Cell> cells(sizes.size() * 2 * reps);
  parallel_for(cells.size(), options.threads, [&](std::size_t task) {
    const std::size_t r = task % reps;
    const std::size_t e = (task / reps) % 2;
    const std::size_t s = task / (2 * reps);
    Scenario sc = scenario;
    sc.n = sizes[s];
    try {
      const SimulatedData sim = generate_dataset(sc, derive_seed(options.seed, r));
      FitConfig cfg;
      cfg.order = default_order(sc.kind);
      cfg.eta = options.eta;
      cfg.schedule = options.schedule;
      cfg.seed = derive_seed(options.seed ^ 0x5eedULL, r);
      const PosteriorDraws draws = run_chain(sim.data, cfg, engines[e]);
      const PosteriorSummary summary = summarize(draws);
      double ess = 0.0;
      std::size_t count = 0;
      for (double v : summary.ess)
        if (std::isfinite(v)) {
          ess += v;
          ++count;
        }
      cells[task] = {true, draws.seconds,
                     count ? ess / static_cast<double>(count) : 0.0};
    } catch (const std::exception &) {
      cells[task] = {};
    }
  });

  std::vector<BenchRow> rows;
  for (std::size_t s = 0; s < sizes.size(); ++s)
    for (std::size_t e = 0; e < 2; ++e) {
      BenchRow row;
      row.n = sizes[s];
      row.sampler = e == 0 ? "polya-gamma" : "coordinate-wise";
      row.reps = options.reps;
      int ok = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        const Cell &c = cells[(s * 2 + e) * reps + r];
        if (!c.ok) {
          ++row.failures;
          continue;
        }
        row.seconds += c.seconds;
        row.mean_ess += c.ess;
        ++ok;
      }
      if (ok > 0) {
        row.seconds /= ok;
        row.mean_ess /= ok;
      }
      rows.push_back(row);
    }
  return rows;
}

TraceExport trace_export(const PosteriorDraws &draws, std::size_t coordinate,
                         std::size_t max_lag) {
  if (coordinate >= draws.n)
    throw DimensionError("coordinate out of range");
  TraceExport t;
  t.coordinate = coordinate;
  t.trace = draws.coordinate(coordinate);
  t.acf = autocorrelation(t.trace, max_lag);
  return t;
}

std::vector<EtaRun> eta_sensitivity(const Scenario &scenario,
                                    const std::vector<double> &etas,
                                    const ReplicationOptions &options) {
  if (etas.empty())
    throw DomainError("eta list is empty");
  scenario.validate();
  const int order =
      options.order >= 0 ? options.order : default_order(scenario.kind);
  const std::size_t reps = static_cast<std::size_t>(options.reps);
  std::vector<SimulatedData> datasets;
  for (std::size_t r = 0; r < reps; ++r)
    datasets.push_back(generate_dataset(scenario, derive_seed(options.seed, r)));

  std::vector<EtaRun> runs(etas.size() * reps);
  const int threads =
      options.threads > 0 ? options.threads : thread_count_from_env();
  const Method hs{"hs", PriorKind::horseshoe, ShapeConstraint::none};
  parallel_for(runs.size(), threads, [&](std::size_t task) {
    const std::size_t e = task / reps;
    const std::size_t r = task % reps;
    EtaRun &run = runs[task];
    run.eta = etas[e];
    run.rep = static_cast<int>(r);
    try {
      FitConfig cfg =
          fit_config(hs, order, options, derive_seed(options.seed ^ 0x5eedULL, r));
      cfg.eta = etas[e];
      const PosteriorSummary s = summarize(run_chain(datasets[r].data, cfg));
      run.rmse = compute_metrics(s, datasets[r].truth).rmse;
      run.ok = true;
    } catch (const std::exception &) {
      run.ok = false;
    }
  });
  return runs;
}

double median_rmse_spread(const std::vector<EtaRun> &runs) {
  std::vector<double> etas;
  for (const auto &r : runs)
    if (std::find(etas.begin(), etas.end(), r.eta) == etas.end())
      etas.push_back(r.eta);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double eta : etas) {
    std::vector<double> v;
    for (const auto &r : runs)
      if (r.eta == eta && r.ok)
        v.push_back(r.rmse);
    if (v.empty())
      return std::numeric_limits<double>::quiet_NaN();
    const double m = median(v);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  return (hi - lo) / lo;
}

} // namespace bbtf
