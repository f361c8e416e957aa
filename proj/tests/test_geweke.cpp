#include "bbtf/geweke.hpp"

#include <doctest.h>

using namespace bbtf;

namespace {

FitConfig harness_config(PriorKind prior, ShapeConstraint c) {
  FitConfig cfg;
  cfg.prior = prior;
  cfg.constraint = c;
  cfg.order = 1;
  cfg.eta = 5.0;
  cfg.hyper = geweke_hyperparameters();
  return cfg;
}

} // namespace

TEST_CASE("p-values of a correct sampler are roughly uniform") {
  int below = 0, total = 0, below_half = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    FitConfig cfg = harness_config(PriorKind::laplace, ShapeConstraint::none);
    cfg.seed = seed;
    GewekeOptions opt;
    opt.n = 5;
    opt.draws = 2000;
    opt.thin = 20;
    const GewekeReport r = geweke_test(cfg, opt);
    for (const auto &s : r.statistics) {
      below += s.pvalue < 0.05;
      below_half += s.pvalue < 0.5;
      ++total;
    }
  }
  const double frac = static_cast<double>(below) / total;
  const double half = static_cast<double>(below_half) / total;
  INFO("fraction below 0.05: " << frac << ", below 0.5: " << half);
  CHECK(frac <= 0.125);
  CHECK(half >= 0.35);
  CHECK(half <= 0.65);
}

TEST_CASE("skipping the sigma2 update is detected") {
  for (auto engine : {ThetaEngine::polya_gamma, ThetaEngine::coordinatewise}) {
    FitConfig cfg = harness_config(PriorKind::normal, ShapeConstraint::none);
    cfg.seed = 3;
    GewekeOptions opt;
    opt.n = 6;
    opt.draws = 5000;
    opt.thin = 5;
    opt.engine = engine;
    opt.hooks.skip_sigma2 = true;
    const GewekeReport r = geweke_test(cfg, opt);
    CHECK(r.min_pvalue() < 1e-4);
  }
}

TEST_CASE("coordinate-wise engine passes a short joint test") {
  FitConfig cfg = harness_config(PriorKind::normal, ShapeConstraint::increasing);
  cfg.seed = 5;
  GewekeOptions opt;
  opt.n = 6;
  opt.draws = 4000;
  opt.thin = 20;
  opt.engine = ThetaEngine::coordinatewise;
  const GewekeReport r = geweke_test(cfg, opt);
  INFO("min p " << r.min_pvalue() << " min ess " << r.min_ess());
  CHECK(r.statistics.size() == 5);
  CHECK(r.min_pvalue() * r.statistics.size() > 0.005);
}

TEST_CASE("harness rejects oversized problems") {
  FitConfig cfg = harness_config(PriorKind::normal, ShapeConstraint::none);
  GewekeOptions opt;
  opt.n = 40;
  CHECK_THROWS(geweke_test(cfg, opt));
}
