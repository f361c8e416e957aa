#pragma once

#include "bbtf/diagnostics.hpp"
#include "bbtf/gibbs.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bbtf {

enum class ScenarioKind { sqrt, piecewise_constant, piecewise_sigmoid };

// Upper-boundary noise: a, b, c are -|N(0, s^2)| with s = 0.5, 1, 2; d is the
// 80/20 mixture of the same with s = 1 and s = 3.
enum class NoiseKind { a, b, c, d };

struct Scenario {
  ScenarioKind kind = ScenarioKind::sqrt;
  NoiseKind noise = NoiseKind::b;
  std::size_t n = 100;
  // Piecewise sigmoid only: take the first branch numerator literally as
  // exp(32t - 8) instead of exp(16t - 8).
  bool literal_sigmoid = false;

  void validate() const;
  // e.g. "sqrt-b"
  std::string label() const;
};

std::string to_string(ScenarioKind kind);
std::string to_string(NoiseKind noise);
// Accepts sqrt, pc, sigmoid (and the long names); throws DomainError.
ScenarioKind parse_scenario(const std::string &name);
NoiseKind parse_noise(const std::string &name);

// sqrt: sqrt(x)/2 for x >= 0. pc: 0.5, 1, 2.5, 3.5 on [1,20], (20,40],
// (40,60], (60,100]. sigmoid: evaluated at t = x / n for x in (0, n].
// Throws DomainError outside the domain.
double true_function(const Scenario &scenario, double x);

// 1 + 4 s(16t - 8) for t <= 1/2 and 1 + 4 s(16(2t - 1) - 8) beyond, with s
// the logistic function.
double piecewise_sigmoid(double t, bool literal = false);

double noise_scale(NoiseKind noise);
double sample_scenario_noise(NoiseKind noise, RngStream &rng);

struct SimulatedData {
  Dataset data;
  std::vector<double> truth;
};

// x = 1..n, y = f(x) + noise. Deterministic in the seed.
SimulatedData generate_dataset(const Scenario &scenario, std::uint64_t seed);

struct Method {
  std::string name;
  PriorKind prior = PriorKind::horseshoe;
  ShapeConstraint constraint = ShapeConstraint::none;
};

// hs, lap, nor with an optional "ni" suffix for the increasing constraint.
Method parse_method(const std::string &name);
std::vector<Method> parse_methods(const std::string &comma_list);

// Trend order used for a scenario: 0 for the step function, 1 otherwise.
int default_order(ScenarioKind kind);

// Fraction of coordinates with mean >= y, and the largest y - mean.
struct Feasibility {
  double fraction = 1.0;
  double max_violation = 0.0;
};
Feasibility boundary_feasibility(const std::vector<double> &mean,
                                 const Dataset &data);

struct ReplicationOptions {
  int reps = 20;
  std::uint64_t seed = 1;
  McmcSchedule schedule;
  Hyperparameters hyper;
  double eta = 500.0;
  int order = -1; // -1: default_order(scenario)
  int threads = 0; // 0: thread_count_from_env()
};

struct ReplicationRecord {
  int rep = 0;
  bool ok = false;
  std::string error;
  MetricReport metrics;
  Feasibility feasibility;
};

struct MethodResult {
  Method method;
  std::vector<ReplicationRecord> records; // sorted by rep
  int failures = 0;
  double rmse_mean = 0.0;
  double rmse_sd = 0.0; // NaN with fewer than two successful reps
  double al = 0.0;
  double cp = 0.0;
};

// Replication r uses the dataset seeded by derive_seed(seed, r) for every
// method, so methods are compared on identical data. Chain failures are
// recorded and excluded from the averages.
std::vector<MethodResult> run_replications(const Scenario &scenario,
                                           const std::vector<Method> &methods,
                                           const ReplicationOptions &options);

struct BenchRow {
  std::size_t n = 0;
  std::string sampler;
  double seconds = 0.0;
  double mean_ess = 0.0;
  int reps = 0;
  int failures = 0;
};

struct BenchOptions {
  int reps = 3;
  std::uint64_t seed = 1;
  McmcSchedule schedule; // 10500 / 500 / 5 keeps 2000 draws
  double eta = 500.0;
  int threads = 1;
};

// Horseshoe fits with both theta engines; two rows per size.
std::vector<BenchRow> bench_samplers(const Scenario &scenario,
                                     const std::vector<std::size_t> &sizes,
                                     const BenchOptions &options);

struct TraceExport {
  std::size_t coordinate = 0;
  std::vector<double> trace;
  std::vector<double> acf;
};
TraceExport trace_export(const PosteriorDraws &draws, std::size_t coordinate,
                         std::size_t max_lag = 50);

struct EtaRun {
  double eta = 0.0;
  int rep = 0;
  double rmse = 0.0;
  bool ok = false;
};

// Horseshoe fits for every eta on the same datasets and chain seeds.
std::vector<EtaRun> eta_sensitivity(const Scenario &scenario,
                                    const std::vector<double> &etas,
                                    const ReplicationOptions &options);

// (max - min) / min over the per-eta median RMSE.
double median_rmse_spread(const std::vector<EtaRun> &runs);

// BBTF_THREADS if set and positive, else the hardware concurrency.
int thread_count_from_env();

} // namespace bbtf
