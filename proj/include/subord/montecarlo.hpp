#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subord/philox.hpp"
#include "subord/subordinator.hpp"

namespace subord {

struct SimConfig {
  std::uint64_t seed = 20240801;
  std::size_t n_samples = 100000;
  double epsilon = 1e-5;   // small-jump truncation for infinite-activity specs
  bool compensate = false;  // fold int_0^eps x Pi(dx) into the drift
  int workers = 0;          // 0 = auto (hardware, capped by SUBORDKIT_THREADS)
  std::uint64_t event_budget = 10000000;
};

// One exact-event draw of I = int_0^life e^{-X_t} dt. The path integral is
// exact between events; the tail is cut when the residual bound drops below
// 1e-12 of the accumulated value, or at the kill time.
double sample_I(const SubordinatorSpec& spec, const SimConfig& cfg, Philox& rng);

struct PassageSample {
  double level = 0.0;
  double last_below = 0.0;  // G: last position strictly below the level
  double undershoot = 0.0;  // level - G
  bool crossed_by_kill = false;
};

// Path position xi_t at a fixed time, for truncation-bias diagnostics
// (E[xi_1] vs phi'(0+) as epsilon shrinks). Requires an unkilled spec.
double sample_position(const SubordinatorSpec& spec, double t, const SimConfig& cfg, Philox& rng);

// First passage across a fixed level. Drift crossings are continuous
// (creeping: undershoot 0); kill counts as a jump to infinity.
PassageSample sample_passage(const SubordinatorSpec& spec, double level, const SimConfig& cfg,
                             Philox& rng);
// Same, with the level drawn as Exp(alpha) from the same stream.
PassageSample sample_passage_exp_level(const SubordinatorSpec& spec, double alpha,
                                       const SimConfig& cfg, Philox& rng);

// One draw of the remainder R by the truncated product representation:
//   log R = log phi(n+1) - B_n - sum_{k=1}^n G_k,
// where G_k is a draw of G at an Exp(k) level (closed-form law when the
// catalog provides one, simulated passage otherwise) and B_n is the
// deterministic tail correction. `log_phi_n1_minus_Bn` caches
// log phi(n_trunc+1) - B_{n_trunc} so the constant is not recomputed per draw.
double sample_R(const SubordinatorSpec& spec, int n_trunc, double log_phi_n1_minus_Bn,
                const SimConfig& cfg, Philox& rng);
double sample_R(const SubordinatorSpec& spec, int n_trunc, const SimConfig& cfg, Philox& rng);

// One verification row: an estimate with its standard error against a
// reference value, or a KS statistic with its p-value.
struct CheckRow {
  std::string check;
  double estimate = 0.0;
  double se = 0.0;
  double reference = 0.0;
  double statistic = 0.0;  // KS D when applicable
  double pvalue = 1.0;     // KS p-value when applicable
  bool pass = false;
  std::string rule;  // "within 3 SE" or "p > 0.01"
  std::string notes;
};

struct SimReport {
  std::vector<CheckRow> rows;
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  std::string suite;
  bool all_pass() const;
};

// E[I^n] vs the product formula prod i/phi(i), n = 1..n_max.
SimReport verify_moments(const SubordinatorSpec& spec, int n_max, const SimConfig& cfg);

// Empirical Laplace transforms of G and U at an Exp(alpha) level against the
// analytic forms, plus an independence product check at three (lambda, mu)
// pairs, plus the G mean against phi'(alpha)/phi(alpha).
SimReport verify_undershoot(const SubordinatorSpec& spec, double alpha,
                            const std::vector<double>& lambda_grid, const SimConfig& cfg);

// KS of {I_j * R_j} (independent streams) against the standard exponential,
// and the mean check E[I*R] = 1.
SimReport verify_factorization(const SubordinatorSpec& spec, const SimConfig& cfg);

// E[(I_{e_alpha})^s e^{-mu X_{e_alpha}}] against the transform route at
// (s, mu) in {(1,0), (1,1), (0.5, 0.5)}. Requires q = 0.
SimReport verify_joint(const SubordinatorSpec& spec, double alpha, const SimConfig& cfg);

// Distributional checks of sample_R at truncation n_trunc: KS against the
// catalog law of R when one exists (killed drift: Gamma(1+q/a) scaled by a;
// pure drift: Exp(1)), and moment rows E[R] = phi(1), E[R^2] = phi(1)phi(2).
SimReport verify_gordon(const SubordinatorSpec& spec, int n_trunc, const SimConfig& cfg);

// CSV serialization used by the CLI: schema comment, header row, one row per
// check, numbers at 17 significant digits.
std::string report_to_csv(const SimReport& report);

}  // namespace subord
