#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "subord/errors.hpp"
#include "subord/gen_gamma.hpp"
#include "subord/kolmogorov_smirnov.hpp"
#include "subord/levy_measure.hpp"
#include "subord/montecarlo.hpp"
#include "subord/philox.hpp"
#include "subord/subordinator.hpp"

using namespace subord;

namespace {

SubordinatorSpec killed_drift() { return SubordinatorSpec(1.0, 1.0, LevyMeasure::none()); }
SubordinatorSpec cp_exponential() {
  return SubordinatorSpec(0.0, 0.0, LevyMeasure::exponential(1.0, 1.0));
}

SimConfig quick(std::size_t n) {
  SimConfig cfg;
  cfg.n_samples = n;
  return cfg;
}

const CheckRow& row_named(const SimReport& rep, const std::string& name) {
  for (const auto& r : rep.rows)
    if (r.check == name) return r;
  REQUIRE(false);
  return rep.rows.front();
}

}  // namespace

TEST_CASE("reports are byte-identical across worker counts and reruns") {
  SimConfig one = quick(2000);
  one.workers = 1;
  SimConfig three = quick(2000);
  three.workers = 3;
  const std::string a = report_to_csv(verify_moments(cp_exponential(), 2, one));
  const std::string b = report_to_csv(verify_moments(cp_exponential(), 2, three));
  const std::string c = report_to_csv(verify_moments(cp_exponential(), 2, three));
  CHECK(a == b);
  CHECK(b == c);
}

TEST_CASE("killed drift exponential functional is uniform") {
  // q = a = 1: I = 1 - e^{-Exp(1)} ~ U(0,1).
  const SubordinatorSpec s = killed_drift();
  const SimConfig cfg = quick(20000);
  std::vector<double> draws(cfg.n_samples);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    Philox rng(cfg.seed, i);
    draws[i] = sample_I(s, cfg, rng);
  }
  const KsReport ks = ks_test(draws, [](double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); });
  CHECK(ks.pvalue > 0.01);
}

TEST_CASE("pure drift integrates to exactly one") {
  const SubordinatorSpec s(0.0, 1.0, LevyMeasure::none());
  const SimConfig cfg = quick(100);
  for (std::size_t i = 0; i < 100; ++i) {
    Philox rng(cfg.seed, i);
    CHECK(sample_I(s, cfg, rng) == 1.0);
  }
}

TEST_CASE("moment suite matches the product formula") {
  const SimReport rep = verify_moments(cp_exponential(), 3, quick(20000));
  CHECK(rep.all_pass());
  const CheckRow& first = row_named(rep, "E[I^1]");
  CHECK(first.reference == doctest::Approx(2.0));  // 1/phi(1) = 2
  CHECK(std::abs(first.estimate - 2.0) < 3.0 * first.se + 1e-9);
  CHECK(first.rule == "within 3 SE");
}

TEST_CASE("all five suites pass at moderate sample counts") {
  const SimConfig cfg = quick(20000);
  CHECK(verify_moments(cp_exponential(), 2, cfg).all_pass());
  CHECK(verify_undershoot(killed_drift(), 1.0, {0.5, 1.0, 2.0}, cfg).all_pass());
  CHECK(verify_factorization(killed_drift(), cfg).all_pass());
  CHECK(verify_joint(cp_exponential(), 1.0, cfg).all_pass());
  SimConfig gordon_cfg = quick(10000);
  CHECK(verify_gordon(killed_drift(), 50, gordon_cfg).all_pass());
}

TEST_CASE("standard errors shrink like the square root of the sample count") {
  const SimReport small = verify_moments(cp_exponential(), 1, quick(4000));
  const SimReport large = verify_moments(cp_exponential(), 1, quick(8000));
  const double ratio = row_named(small, "E[I^1]").se / row_named(large, "E[I^1]").se;
  CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("small-jump truncation bias shrinks with epsilon and compensation removes it") {
  // Tempered stable, q = 0: E[position at t=1] = phi'(0+) = 1/2. Dropping
  // jumps below epsilon loses small_moment(epsilon) of mean mass per unit
  // time; the compensated run folds that mass back into the drift.
  const SubordinatorSpec s(0.0, 0.0, LevyMeasure::stable(0.5, 1.0));
  const auto mean_position = [&](double eps, bool compensate, std::size_t n) {
    SimConfig cfg = quick(n);
    cfg.epsilon = eps;
    cfg.compensate = compensate;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Philox rng(cfg.seed, i);
      const double x = sample_position(s, 1.0, cfg, rng);
      sum += x;
      sumsq += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    return std::make_pair(mean, se);
  };
  const auto [comp_mean, comp_se] = mean_position(1e-3, true, 50000);
  CHECK(std::abs(comp_mean - 0.5) < 3.0 * comp_se);
  const auto [coarse_mean, coarse_se] = mean_position(1e-3, false, 200000);
  const auto [fine_mean, fine_se] = mean_position(1e-4, false, 200000);
  const double sm_coarse = s.levy().small_moment(1e-3);
  const double sm_fine = s.levy().small_moment(1e-4);
  CHECK(std::abs(coarse_mean - (0.5 - sm_coarse)) < 3.0 * coarse_se);
  CHECK(std::abs(fine_mean - (0.5 - sm_fine)) < 3.0 * fine_se);
  CHECK(coarse_mean < fine_mean);
  CHECK(fine_mean < 0.5);
}

TEST_CASE("event budget aborts runaway paths") {
  SimConfig cfg = quick(10);
  cfg.event_budget = 3;
  Philox rng(cfg.seed, 0);
  CHECK_THROWS_AS(sample_I(cp_exponential(), cfg, rng), HorizonExceeded);
}

TEST_CASE("passage across a level by pure drift creeps exactly") {
  const SubordinatorSpec s(0.0, 1.0, LevyMeasure::none());
  const SimConfig cfg = quick(10);
  Philox rng(cfg.seed, 7);
  const PassageSample p = sample_passage(s, 5.0, cfg, rng);
  CHECK(p.level == 5.0);
  CHECK(p.last_below == 5.0);
  CHECK(p.undershoot == 0.0);
  CHECK(!p.crossed_by_kill);
}

TEST_CASE("truncated remainder log is exactly unbiased at every level") {
  // The tail constant B_n is chosen so E[log R-hat] = -gamma_phi for all n.
  // A gamma-jump spec exercises the generic simulated-passage route for G.
  const SubordinatorSpec s(0.5, 0.0, LevyMeasure::gamma_jumps(1.0, 1.5, 2.0));
  const double target = -GenGamma(phi_family(s)).euler_constant();
  for (int n_trunc : {5, 50}) {
    const std::size_t n = 5000;
    SimConfig cfg = quick(n);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Philox rng(cfg.seed, i);
      const double lr = std::log(sample_R(s, n_trunc, cfg, rng));
      sum += lr;
      sumsq += lr * lr;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - target) < 3.0 * se);
  }
}

TEST_CASE("joint suite rejects killed specs, position rejects kill") {
  CHECK_THROWS_AS(verify_joint(killed_drift(), 1.0, quick(10)), QZeroViolation);
  SimConfig cfg = quick(10);
  Philox rng(cfg.seed, 0);
  CHECK_THROWS_AS(sample_position(killed_drift(), 1.0, cfg, rng), SpecError);
}

TEST_CASE("time-changed specs cannot be simulated") {
  const SubordinatorSpec composed = stable_timechange(cp_exponential(), 0.5);
  SimConfig cfg = quick(10);
  Philox rng(cfg.seed, 0);
  CHECK_THROWS_AS(sample_I(composed, cfg, rng), SpecError);
}

TEST_CASE("report serialization carries schema, header, and clean fields") {
  const SimReport rep = verify_moments(cp_exponential(), 1, quick(500));
  const std::string csv = report_to_csv(rep);
  CHECK(csv.rfind("# schema: subord-kit.verify.v1", 0) == 0);
  CHECK(csv.find("# suite: moments") != std::string::npos);
  CHECK(csv.find("check,estimate,se,reference,statistic,pvalue,pass,rule,notes") !=
        std::string::npos);
  // Exactly one data line per row, each ending in pass 0/1 plus rule/notes.
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = csv.find('\n', pos)) != std::string::npos; ++pos) ++lines;
  CHECK(lines >= rep.rows.size() + 3);
  // Notes never smuggle a comma (CSV stays machine-splittable).
  for (const auto& r : rep.rows) {
    CHECK(r.notes.find(',') == std::string::npos);
    CHECK(r.check.find(',') == std::string::npos);
  }
}
