#include "bbtf/errors.hpp"
#include "bbtf/simulation.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace bbtf;

namespace {

McmcSchedule short_schedule() { return {1100, 100, 5}; }

} // namespace

TEST_CASE("true functions") {
  Scenario s;
  CHECK(true_function(s, 4.0) == 1.0);
  s.kind = ScenarioKind::piecewise_constant;
  CHECK(true_function(s, 30.0) == 1.0);
  CHECK(true_function(s, 50.0) == 2.5);
  CHECK(true_function(s, 80.0) == 3.5);
  CHECK(true_function(s, 20.0) == 0.5);
  CHECK(true_function(s, 1.0) == 0.5);
  CHECK_THROWS_AS(true_function(s, 0.5), DomainError);
  CHECK(piecewise_sigmoid(0.5) == doctest::Approx(3.0));
  s.kind = ScenarioKind::piecewise_sigmoid;
  CHECK(true_function(s, 50.0) == doctest::Approx(3.0));
  // the second branch restarts the sigmoid at the midpoint
  CHECK(piecewise_sigmoid(0.75) == doctest::Approx(3.0));
  CHECK(piecewise_sigmoid(0.5, true) != piecewise_sigmoid(0.5, false));
  s.kind = ScenarioKind::sqrt;
  CHECK_THROWS_AS(true_function(s, -1.0), DomainError);
}

TEST_CASE("scenario parsing and validation") {
  CHECK(parse_scenario("sqrt") == ScenarioKind::sqrt);
  CHECK(parse_scenario("pc") == ScenarioKind::piecewise_constant);
  CHECK(parse_scenario("sigmoid") == ScenarioKind::piecewise_sigmoid);
  CHECK_THROWS_AS(parse_scenario("wave"), DomainError);
  CHECK(parse_noise("d") == NoiseKind::d);
  CHECK_THROWS_AS(parse_noise("e"), DomainError);
  Scenario s;
  s.n = 5;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = {};
  s.kind = ScenarioKind::piecewise_constant;
  s.n = 150;
  CHECK_THROWS_AS(s.validate(), DomainError);
  CHECK(default_order(ScenarioKind::piecewise_constant) == 0);
  CHECK(default_order(ScenarioKind::sqrt) == 1);
  CHECK(noise_scale(NoiseKind::a) == 0.5);
  CHECK(noise_scale(NoiseKind::c) == 2.0);
}

TEST_CASE("methods") {
  const Method hsni = parse_method("hsni");
  CHECK(hsni.prior == PriorKind::horseshoe);
  CHECK(hsni.constraint == ShapeConstraint::increasing);
  CHECK(parse_method("lap").prior == PriorKind::laplace);
  CHECK(parse_method("nor").constraint == ShapeConstraint::none);
  CHECK(parse_methods("hs,hsni,norni").size() == 3);
  CHECK_THROWS_AS(parse_method("ridge"), DomainError);
  CHECK_THROWS_AS(parse_methods(""), DomainError);
}

TEST_CASE("noise is one-sided with the folded-normal mean") {
  RngStream rng(3);
  std::vector<double> e(100000);
  for (double &v : e) {
    v = sample_scenario_noise(NoiseKind::b, rng);
    REQUIRE(v <= 0.0);
  }
  CHECK(std::abs(oracle::mean(e) + std::sqrt(2.0 / std::numbers::pi)) <
        3.0 * oracle::std_error(e));
  // mixture: 0.8 * sd 1 + 0.2 * sd 3
  for (double &v : e)
    v = sample_scenario_noise(NoiseKind::d, rng);
  const double mix = -(0.8 + 0.2 * 3.0) * std::sqrt(2.0 / std::numbers::pi);
  CHECK(std::abs(oracle::mean(e) - mix) < 3.0 * oracle::std_error(e));
}

TEST_CASE("datasets") {
  for (auto kind : {ScenarioKind::sqrt, ScenarioKind::piecewise_constant,
                    ScenarioKind::piecewise_sigmoid})
    for (auto noise : {NoiseKind::a, NoiseKind::b, NoiseKind::c, NoiseKind::d}) {
      const Scenario s{kind, noise, 100, false};
      const SimulatedData d = generate_dataset(s, 17);
      REQUIRE(d.data.size() == 100);
      for (std::size_t i = 0; i < 100; ++i) {
        CHECK(d.data.y()[i] <= d.truth[i]);
        CHECK(d.truth[i] == true_function(s, d.data.x()[i]));
      }
      const SimulatedData e = generate_dataset(s, 17);
      CHECK(d.data.y() == e.data.y());
      CHECK(d.data.y() != generate_dataset(s, 18).data.y());
    }
}

TEST_CASE("feasibility") {
  const Dataset d({1, 2, 3, 4}, {1, 1, 1, 1});
  const Feasibility f = boundary_feasibility({1.0, 0.9, 1.2, 0.99}, d);
  CHECK(f.fraction == 0.5);
  CHECK(f.max_violation == doctest::Approx(0.1));
  CHECK_THROWS_AS(boundary_feasibility({1.0}, d), DimensionError);
}

TEST_CASE("replications are reproducible and thread-count independent") {
  const Scenario s{ScenarioKind::sqrt, NoiseKind::b, 30, false};
  ReplicationOptions o;
  o.reps = 3;
  o.seed = 9;
  o.schedule = short_schedule();
  o.threads = 1;
  const auto methods = parse_methods("hs,lapni");
  const auto a = run_replications(s, methods, o);
  o.threads = 3;
  const auto b = run_replications(s, methods, o);
  REQUIRE(a.size() == 2);
  for (std::size_t m = 0; m < 2; ++m) {
    CHECK(a[m].records.size() == 3);
    CHECK(a[m].failures == 0);
    CHECK(a[m].rmse_mean == b[m].rmse_mean);
    CHECK(a[m].al == b[m].al);
    CHECK(a[m].cp == b[m].cp);
    for (int r = 0; r < 3; ++r) {
      CHECK(a[m].records[r].rep == r);
      CHECK(a[m].records[r].metrics.rmse == b[m].records[r].metrics.rmse);
    }
    CHECK(std::isfinite(a[m].rmse_sd));
  }
  o.reps = 1;
  const auto single = run_replications(s, parse_methods("hs"), o);
  CHECK(std::isnan(single[0].rmse_sd));
  o.reps = 0;
  CHECK_THROWS_AS(run_replications(s, methods, o), DomainError);
}

TEST_CASE("eta sensitivity is paired across etas") {
  const Scenario s{ScenarioKind::sqrt, NoiseKind::b, 30, false};
  ReplicationOptions o;
  o.reps = 2;
  o.schedule = short_schedule();
  const auto runs = eta_sensitivity(s, {100.0, 500.0}, o);
  CHECK(runs.size() == 4);
  const double spread = median_rmse_spread(runs);
  CHECK(spread >= 0.0);
  const auto single = eta_sensitivity(s, {500.0}, o);
  CHECK(median_rmse_spread(single) == 0.0);
  CHECK_THROWS_AS(eta_sensitivity(s, {}, o), DomainError);

  std::vector<EtaRun> made{{100, 0, 0.10, true}, {100, 1, 0.30, true},
                           {500, 0, 0.22, true}, {500, 1, 0.18, true}};
  CHECK(median_rmse_spread(made) == doctest::Approx(0.0));
  made[3].rmse = 0.38;
  CHECK(median_rmse_spread(made) == doctest::Approx(0.5));
}

TEST_CASE("bench rows and trace export") {
  const Scenario s{ScenarioKind::sqrt, NoiseKind::b, 100, false};
  BenchOptions o;
  o.reps = 1;
  o.schedule = short_schedule();
  const auto rows = bench_samplers(s, {20, 40}, o);
  REQUIRE(rows.size() == 4);
  for (const auto &r : rows) {
    CHECK(r.mean_ess > 0.0);
    CHECK(r.seconds > 0.0);
    CHECK(r.failures == 0);
  }
  CHECK_THROWS_AS(bench_samplers(s, {}, o), DomainError);

  PosteriorDraws d;
  d.n = 2;
  d.m = 100;
  RngStream rng(1);
  for (std::size_t i = 0; i < 200; ++i)
    d.theta.push_back(rng.normal());
  const TraceExport t = trace_export(d, 1, 10);
  CHECK(t.trace.size() == 100);
  CHECK(t.trace[5] == d.theta_at(5, 1));
  CHECK(t.acf.size() == 11);
  CHECK(t.acf[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(trace_export(d, 2), DimensionError);
}

TEST_CASE("thread count from the environment") {
  setenv("BBTF_THREADS", "3", 1);
  CHECK(thread_count_from_env() == 3);
  setenv("BBTF_THREADS", "zero", 1);
  CHECK(thread_count_from_env() >= 1);
  unsetenv("BBTF_THREADS");
  CHECK(thread_count_from_env() >= 1);
}
