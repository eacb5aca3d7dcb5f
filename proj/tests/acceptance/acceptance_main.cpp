// Acceptance suite: twelve end-to-end checks of the toolkit against closed
// forms, cross-route identities, and pinned-seed Monte Carlo statistics.
// Each check prints one [PASS]/[FAIL] line; the process exits nonzero if any
// check fails. Every check also carries a wall-clock budget that is part of
// its pass condition.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "subord/gen_gamma.hpp"
#include "subord/harmonic.hpp"
#include "subord/kolmogorov_smirnov.hpp"
#include "subord/laplace_inversion.hpp"
#include "subord/levy_measure.hpp"
#include "subord/mittag_leffler.hpp"
#include "subord/montecarlo.hpp"
#include "subord/philox.hpp"
#include "subord/special.hpp"
#include "subord/subordinator.hpp"

namespace {

using namespace subord;

constexpr double kEuler = 0.57721566490153286;

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

std::string fixed2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

SubordinatorSpec killed_drift() {
  return SubordinatorSpec(1.0, 1.0, LevyMeasure::none(), "killed drift");
}

SubordinatorSpec killed_cp_exponential() {
  return SubordinatorSpec(1.0, 0.0, LevyMeasure::exponential(1.0, 1.0), "killed cp-exp");
}

SubordinatorSpec stable_half() {
  return SubordinatorSpec(0.0, 0.0, LevyMeasure::stable(0.5), "stable 1/2");
}

std::vector<SubordinatorSpec> catalog() {
  return {killed_drift(),
          killed_cp_exponential(),
          stable_half(),
          SubordinatorSpec(0.5, 0.25, LevyMeasure::gamma_jumps(1.0, 1.5, 2.0), "gamma mix"),
          SubordinatorSpec(0.25, 0.0, LevyMeasure::atoms({{0.5, 1.0}, {1.5, 0.5}}), "atoms"),
          SubordinatorSpec(0.0, 0.0, LevyMeasure::tabulated({0.0, 1.0}, {1.0, 0.0}),
                           "uniform tail")};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * i / static_cast<double>(n - 1));
  return g;
}

// ---------------------------------------------------------------------------

bool c1_moments(std::string& detail) {
  const SubordinatorSpec spec = killed_drift();
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const double i_ref = 1.0 / (n + 1.0);
    const double r_ref = std::tgamma(n + 2.0);  // (n+1)!
    for (double v : {moment_I(spec, n), moment_I_integer(spec, n)})
      worst = std::max(worst, std::abs(v - i_ref) / i_ref);
    for (double v : {moment_R(spec, n), moment_R_integer(spec, n)})
      worst = std::max(worst, std::abs(v - r_ref) / r_ref);
  }
  detail = "E[I^n]=1/(n+1), E[R^n]=(n+1)!, n=1..6, both routes; max rel err " + sci(worst);
  return worst < 1e-9;
}

bool c2_duality(std::string& detail) {
  double worst = 0.0;
  const auto check_pair = [&worst](const SubordinatorSpec& primal) {
    const ConjugatePair pair = conjugate(primal);
    const GenGamma gp(phi_family(pair.primal));
    const GenGamma gd(phi_family(pair.dual));
    for (double s : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double log_prod = gp.log_gamma(s + 1.0) + gd.log_gamma(s + 1.0);
      worst = std::max(worst, std::abs(std::expm1(log_prod - std::lgamma(s + 1.0))));
    }
  };
  check_pair(killed_drift());
  check_pair(stable_half());
  detail = "conjugate gamma product recovers the classical gamma; max rel err " + sci(worst);
  return worst < 1e-6;
}

bool c3_functional_equation(std::string& detail) {
  double worst = 0.0;
  for (const SubordinatorSpec& spec : catalog()) {
    const GenGamma g(phi_family(spec));
    for (int k = 0; k <= 40; ++k) {
      const double s = 0.1 + (20.0 - 0.1) * k / 40.0;
      const double resid =
          std::expm1(g.log_gamma(s + 1.0) - std::log(spec.phi(s)) - g.log_gamma(s));
      worst = std::max(worst, std::abs(resid));
    }
  }
  detail = "f(s+1) = phi(s) f(s) over 41 points on [0.1,20], 6 specs; max residual " + sci(worst);
  return worst < 1e-8;
}

bool c4_euler_constants(std::string& detail) {
  const double g_id = GenGamma(identity_family()).euler_constant();
  const double g_affine = GenGamma(phi_family(killed_drift())).euler_constant();
  const double g_root = GenGamma(phi_family(stable_half())).euler_constant();
  const double e_id = std::abs(g_id - kEuler);
  const double e_affine = std::abs(g_affine - (kEuler - 1.0));
  const double e_root = std::abs(g_root - 0.5 * kEuler);
  detail = "identity err " + sci(e_id) + ", affine err " + sci(e_affine) + ", root err " +
           sci(e_root);
  return e_id < 1e-8 && e_affine < 1e-7 && e_root < 1e-7;
}

bool c5_inversion(std::string& detail) {
  const std::vector<SubordinatorSpec> specs = {killed_drift(), killed_cp_exponential(),
                                               stable_half()};
  double worst = 0.0;
  for (const SubordinatorSpec& spec : specs) {
    const HarmonicDensity closed = HarmonicDensity::build(spec);
    const auto transform = [&spec](std::complex<double> s) {
      return spec.phi_prime(s) / spec.phi(s);
    };
    for (int i = 0; i <= 99; ++i) {
      const double x = 0.1 + (10.0 - 0.1) * i / 99.0;
      const double numeric = laplace_invert(transform, x);
      worst = std::max(worst, std::abs(numeric - closed(x)));
    }
  }
  detail = "inverted phi'/phi vs closed-form density, 3 specs on [0.1,10]; max abs err " +
           sci(worst);
  return worst < 1e-6;
}

bool c6_id_verdicts(std::string& detail) {
  const IdVerdict v_drift = id_test_logI(killed_drift());
  const IdVerdict v_mixed =
      id_test_logI(SubordinatorSpec(0.0, 0.5, LevyMeasure::exponential(1.0, 1.0)));
  const IdVerdict v_bounded =
      id_test_logI(SubordinatorSpec(0.0, 0.0, LevyMeasure::tabulated({0.0, 1.0}, {1.0, 0.0})));
  const IdVerdict v_atom = id_test_logI(SubordinatorSpec(0.0, 0.0, LevyMeasure::atoms({{1.0, 1.0}})));
  const bool ok_drift = v_drift.outcome == IdOutcome::InfinitelyDivisible;
  const bool ok_mixed = v_mixed.outcome == IdOutcome::NotID;
  const bool ok_bounded = v_bounded.outcome == IdOutcome::NotID && v_bounded.witness_x &&
                          v_bounded.witness_rho && *v_bounded.witness_rho > 1.0;
  const bool ok_atom = v_atom.outcome == IdOutcome::NotID_Atomic;
  detail = std::string("killed drift: ") + id_outcome_name(v_drift.outcome) +
           ", drift+jumps: " + id_outcome_name(v_mixed.outcome) +
           ", bounded-jump CP: " + id_outcome_name(v_bounded.outcome) +
           (v_bounded.witness_x ? " (witness x=" + fixed2(*v_bounded.witness_x) + ")" : "") +
           ", single atom: " + id_outcome_name(v_atom.outcome);
  return ok_drift && ok_mixed && ok_bounded && ok_atom;
}

bool c7_passage_statistics(std::string& detail) {
  const SubordinatorSpec spec = killed_drift();
  SimConfig cfg;  // pinned seed, 1e5 samples
  std::vector<double> draws(cfg.n_samples);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    Philox rng(cfg.seed, static_cast<std::uint64_t>(i));
    draws[i] = sample_I(spec, cfg, rng);
  }
  const KsReport ks = ks_test(draws, [](double x) {
    return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
  });
  bool ok = ks.pvalue > 0.01;

  const SimReport rep = verify_undershoot(spec, 1.0, {0.5, 1.0, 2.0}, cfg);
  int undershoot_rows = 0;
  bool mean_row_seen = false;
  for (const CheckRow& row : rep.rows) {
    const bool is_u = row.check.rfind("E[exp(-", 0) == 0 &&
                      row.check.size() >= 4 && row.check.compare(row.check.size() - 4, 4, " U)]") == 0;
    if (is_u) {
      ++undershoot_rows;
      ok = ok && row.pass;
    }
    if (row.check == "E[G]") {
      mean_row_seen = true;
      ok = ok && row.pass;
    }
  }
  ok = ok && undershoot_rows == 3 && mean_row_seen;
  detail = "I-sample KS p=" + fixed2(ks.pvalue) +
           "; undershoot transforms at 3 rates and E[G]=1/2 within 3 SE";
  return ok;
}

bool c8_factorization(std::string& detail) {
  SimConfig cfg;
  const SimReport rep = verify_factorization(killed_drift(), cfg);
  double pvalue = 0.0;
  bool found = false, ok = false;
  for (const CheckRow& row : rep.rows) {
    if (row.check.rfind("KS of I*R", 0) == 0) {
      found = true;
      pvalue = row.pvalue;
      ok = row.pass;
    }
  }
  detail = "product of independent I and R vs Exp(1), KS p=" + fixed2(pvalue);
  return found && ok;
}

bool c9_product_sampler(std::string& detail) {
  const SubordinatorSpec spec = killed_drift();  // R is Gamma(2) here
  const HarmonicDensity density = HarmonicDensity::build(spec);
  std::vector<double> b(51, 0.0);
  bool decreasing = true;
  for (int n = 1; n <= 50; ++n) {
    b[n] = gordon_tail(spec, n, density).b_n;
    if (n > 1 && !(b[n] < b[n - 1])) decreasing = false;
  }
  const double b200 = gordon_tail(spec, 200, density).b_n;
  const bool tail_ok = b200 < b[1] / 10.0;

  SimConfig cfg;
  const double constant = std::log(spec.phi(201.0)) - b200;
  std::vector<double> draws(cfg.n_samples);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    Philox rng(cfg.seed, static_cast<std::uint64_t>(i));
    draws[i] = sample_R(spec, 200, constant, cfg, rng);
  }
  const KsReport ks = ks_test(draws, [](double x) { return gamma_p(2.0, x); });
  detail = "truncated-product R vs Gamma(2) KS p=" + fixed2(ks.pvalue) + "; tail correction " +
           (decreasing ? "strictly decreasing" : "NOT decreasing") + ", b_200/b_1=" +
           sci(b200 / b[1]);
  return ks.pvalue > 0.01 && decreasing && tail_ok;
}

bool c10_joint_transform(std::string& detail) {
  const SubordinatorSpec drift(0.0, 1.0, LevyMeasure::none(), "pure drift");
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 2.0})
    for (double mu : {0.0, 0.5, 1.5})
      for (double s : {0.5, 1.0, 2.5}) {
        const double ref = alpha * std::exp(std::lgamma(s + 1.0) + std::lgamma(mu + alpha) -
                                            std::lgamma(s + mu + alpha + 1.0));
        const double got = joint_transform(drift, alpha, mu, s);
        worst = std::max(worst, std::abs(got - ref) / ref);
      }
  const bool analytic_ok = worst < 1e-9;

  SimConfig cfg;
  const SimReport rep = verify_joint(drift, 1.0, cfg);
  const bool sim_ok = rep.rows.size() == 3 && rep.all_pass();
  detail = "pure-drift closed form max rel err " + sci(worst) +
           "; simulated transform within 3 SE at 3 (s,mu) points";
  return analytic_ok && sim_ok;
}

bool c11_mittag_leffler(std::string& detail) {
  const double e_one = std::abs(mittag_leffler(1.0, 1.0) - std::exp(1.0));
  const double e_half = std::abs(mittag_leffler(0.5, -1.0) - 0.42758358);
  double e_reduction = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double x = 0.01 + (20.0 - 0.01) * i / 49.0;
    e_reduction =
        std::max(e_reduction, std::abs(mittag_leffler(1.0, -x) - std::exp(-x)));
  }
  detail = "E_1(1) err " + sci(e_one) + ", E_1/2(-1) err " + sci(e_half) +
           ", exponential reduction err " + sci(e_reduction);
  return e_one < 1e-10 && e_half < 1e-8 && e_reduction < 1e-9;
}

bool c12_conjugate_densities(std::string& detail) {
  const std::vector<double> grid = log_grid(0.01, 100.0, 201);
  const ConjugatePair drift_pair = conjugate(killed_drift());
  const ConjugatePair stable_pair = conjugate(stable_half());
  const double e1 = conjugate_check(drift_pair.primal, drift_pair.dual, grid);
  const double e2 = conjugate_check(stable_pair.primal, stable_pair.dual, grid);
  detail = "rho + rho* = 1 on [0.01,100]: drift pair err " + sci(e1) + ", stable pair err " +
           sci(e2);
  return e1 < 1e-8 && e2 < 1e-8;
}

// ---------------------------------------------------------------------------

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  bool (*run)(std::string&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "closed-form moments of I and R through both routes", 1.0, c1_moments},
      {2, "conjugate-pair duality of the generalized gamma", 5.0, c2_duality},
      {3, "generalized-gamma functional equation on the catalog", 10.0, c3_functional_equation},
      {4, "generalized Euler constants", 10.0, c4_euler_constants},
      {5, "numeric Laplace inversion matches catalog densities", 30.0, c5_inversion},
      {6, "infinite-divisibility verdicts with witnesses", 30.0, c6_id_verdicts},
      {7, "pinned-seed passage statistics", 60.0, c7_passage_statistics},
      {8, "pinned-seed factorization I*R ~ Exp(1)", 60.0, c8_factorization},
      {9, "truncated product sampler for R", 120.0, c9_product_sampler},
      {10, "joint transform of the exponential functional", 60.0, c10_joint_transform},
      {11, "Mittag-Leffler evaluation", 5.0, c11_mittag_leffler},
      {12, "conjugate harmonic densities sum to one", 5.0, c12_conjugate_densities},
  };

  bool all_pass = true;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed < c.budget_seconds;
    const bool pass = ok && in_budget;
    all_pass = all_pass && pass;
    const std::string budget_note =
        in_budget ? "" : ", over budget " + fixed2(c.budget_seconds) + " s";
    std::printf("[%s] C%d %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.number, c.name,
                detail.c_str(), elapsed, budget_note.c_str());
  }
  std::printf("%s: %d criteria evaluated\n", all_pass ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              12);
  return all_pass ? 0 : 1;
}
