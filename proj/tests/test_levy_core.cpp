#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"

#include "subord/errors.hpp"
#include "subord/levy_measure.hpp"
#include "subord/quadrature.hpp"
#include "subord/special.hpp"
#include "subord/subordinator.hpp"

using namespace subord;

namespace {

SubordinatorSpec killed_drift() { return SubordinatorSpec(1.0, 1.0, LevyMeasure::none()); }
SubordinatorSpec pure_drift() { return SubordinatorSpec(0.0, 1.0, LevyMeasure::none()); }
SubordinatorSpec cp_exponential() {
  return SubordinatorSpec(0.0, 0.0, LevyMeasure::exponential(1.0, 1.0));
}
SubordinatorSpec stable_half() {
  return SubordinatorSpec(0.0, 0.0, LevyMeasure::stable(0.5));
}
SubordinatorSpec gamma_spec() {
  return SubordinatorSpec(0.5, 0.25, LevyMeasure::gamma_jumps(1.0, 1.5, 2.0));
}
SubordinatorSpec atom_spec() {
  return SubordinatorSpec(0.25, 0.0, LevyMeasure::atoms({{0.5, 1.0}, {1.5, 0.5}}));
}
SubordinatorSpec uniform_tab() {
  return SubordinatorSpec(0.0, 0.0, LevyMeasure::tabulated({0.0, 1.0}, {1.0, 0.0}));
}

std::vector<SubordinatorSpec> catalog() {
  return {killed_drift(), pure_drift(), cp_exponential(), stable_half(), gamma_spec(),
          atom_spec(),    uniform_tab()};
}

const std::vector<double> kLambdaGrid = {0.05, 0.3, 1.0, 2.7, 8.0, 31.0};

// Jump exponent computed from the tail by parts: psi(lambda) = lambda *
// int_0^inf e^{-lambda x} PiBar_0(x) dx — an oracle independent of the
// per-kind closed forms.
double exponent_from_tail(const LevyMeasure& levy, double lambda) {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-13;
  cfg.rel_tol = 1e-13;
  cfg.singularity_pow = levy.tail_singularity();
  const auto f = [&](double x) { return std::exp(-lambda * x) * levy.tail(x); };
  double acc = integrate(f, 0.0, 1.0, cfg);
  QuadratureConfig tail_cfg;
  tail_cfg.abs_tol = 1e-13;
  tail_cfg.rel_tol = 1e-13;
  acc += integrate_to_inf([&](double u) { return f(1.0 + u); }, tail_cfg);
  return lambda * acc;
}

}  // namespace

TEST_CASE("exponent closed forms at hand-checked points") {
  CHECK(killed_drift().phi(2.0) == 3.0);
  CHECK(std::abs(cp_exponential().phi(1.0) - 0.5) < 1e-15);
  CHECK(std::abs(stable_half().phi(4.0) - 2.0) < 1e-13);
  for (double lam : kLambdaGrid) {
    CHECK(std::abs(pure_drift().phi(lam) - lam) < 1e-15);
    CHECK(std::abs(stable_half().phi(lam) - std::sqrt(lam)) < 1e-13 * std::sqrt(lam));
  }
  // Gamma jumps: mass * (1 - (scale/(scale+lambda))^shape).
  const SubordinatorSpec g = gamma_spec();
  for (double lam : kLambdaGrid) {
    const double jump = 1.0 * (1.0 - std::pow(2.0 / (2.0 + lam), 1.5));
    CHECK(std::abs(g.phi(lam) - (0.5 + 0.25 * lam + jump)) < 1e-13 * (1.0 + g.phi(lam)));
  }
  // Atoms: sum of m (1 - e^{-lambda x}).
  const SubordinatorSpec at = atom_spec();
  for (double lam : kLambdaGrid) {
    const double jump =
        1.0 * (1.0 - std::exp(-0.5 * lam)) + 0.5 * (1.0 - std::exp(-1.5 * lam));
    CHECK(std::abs(at.phi(lam) - (0.25 + jump)) < 1e-13 * (1.0 + at.phi(lam)));
  }
  // Uniform tabulated tail: exponent 1 - (1 - e^{-lambda})/lambda.
  const SubordinatorSpec ut = uniform_tab();
  for (double lam : kLambdaGrid) {
    const double expected = 1.0 + std::expm1(-lam) / lam;
    CHECK(std::abs(ut.phi(lam) - expected) < 1e-12 * (1.0 + expected));
  }
}

TEST_CASE("tempered index-half exponent") {
  const SubordinatorSpec ts(0.0, 0.0, LevyMeasure::stable(0.5, 2.0));
  for (double lam : kLambdaGrid) {
    CHECK(std::abs(ts.phi(lam) - (std::sqrt(lam + 2.0) - std::sqrt(2.0))) < 1e-12);
  }
}

TEST_CASE("every smooth-kind exponent matches the tail-transform oracle") {
  for (const auto& s : catalog()) {
    if (s.levy().is_zero()) continue;
    if (std::holds_alternative<AtomJumps>(s.levy().raw())) continue;  // exact check above
    for (double lam : {0.3, 1.0, 4.0}) {
      const double jump = s.phi(lam) - s.kill_rate() - s.drift() * lam;
      const double oracle = exponent_from_tail(s.levy(), lam);
      CHECK(std::abs(jump - oracle) < 1e-9 * (1.0 + std::abs(jump)) + 1e-9);
    }
  }
}

TEST_CASE("first two derivatives match central differences") {
  for (const auto& s : catalog()) {
    for (double lam : {0.5, 1.0, 3.0, 10.0}) {
      const double h = 1e-5 * (1.0 + lam);
      const double d1 = (s.phi(lam + h) - s.phi(lam - h)) / (2.0 * h);
      const double d1h = (s.phi(lam + h / 2) - s.phi(lam - h / 2)) / h;
      const double richardson1 = (4.0 * d1h - d1) / 3.0;
      CHECK(std::abs(s.phi_prime(lam) - richardson1) < 1e-8 * (1.0 + std::abs(richardson1)));
      const double d2 = (s.phi(lam + h) - 2.0 * s.phi(lam) + s.phi(lam - h)) / (h * h);
      CHECK(std::abs(s.phi_second(lam) - d2) < 1e-4 * (1.0 + std::abs(d2)));
    }
  }
}

TEST_CASE("complex evaluation agrees with real evaluation on the axis") {
  for (const auto& s : catalog()) {
    for (double lam : {0.5, 2.0, 9.0}) {
      const std::complex<double> z = s.phi(std::complex<double>(lam, 0.0));
      CHECK(std::abs(z.real() - s.phi(lam)) < 1e-12 * (1.0 + s.phi(lam)));
      CHECK(std::abs(z.imag()) < 1e-12 * (1.0 + s.phi(lam)));
      const std::complex<double> zp = s.phi_prime(std::complex<double>(lam, 0.0));
      CHECK(std::abs(zp.real() - s.phi_prime(lam)) < 1e-12 * (1.0 + std::abs(s.phi_prime(lam))));
    }
  }
}

TEST_CASE("ratio form agrees with direct division") {
  for (const auto& s : catalog()) {
    for (double lam : kLambdaGrid) {
      CHECK(std::abs(s.phi_over_lambda(lam) - s.phi(lam) / lam) <
            1e-9 * (1.0 + s.phi(lam) / lam));
    }
  }
}

TEST_CASE("levy tail values") {
  CHECK(killed_drift().levy_tail(3.0) == 1.0);
  const SubordinatorSpec cp(0.5, 0.0, LevyMeasure::exponential(2.0, 3.0));
  for (double x : {0.1, 1.0, 4.0}) {
    CHECK(std::abs(cp.levy_tail(x) - (0.5 + 3.0 * std::exp(-2.0 * x))) < 1e-13);
  }
  // Tabulated tail interpolates linearly and vanishes past the last node.
  const SubordinatorSpec ut = uniform_tab();
  CHECK(std::abs(ut.levy_tail(0.25) - 0.75) < 1e-15);
  CHECK(ut.levy_tail(2.0) == 0.0);
  // Atoms: right-continuous upper tail.
  const SubordinatorSpec at = atom_spec();
  CHECK(std::abs(at.levy_tail(0.4) - (0.25 + 1.5)) < 1e-15);
  CHECK(std::abs(at.levy_tail(1.0) - (0.25 + 0.5)) < 1e-15);
  CHECK(std::abs(at.levy_tail(2.0) - 0.25) < 1e-15);
}

TEST_CASE("small-jump mass matches quadrature of x d(-tail)") {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-13;
  // Exponential jumps: density arrival * rate * e^{-rate x}.
  const LevyMeasure ex = LevyMeasure::exponential(2.0, 3.0);
  const double ex_oracle =
      integrate([](double x) { return x * 3.0 * 2.0 * std::exp(-2.0 * x); }, 0.0, 0.7, cfg);
  CHECK(std::abs(ex.small_moment(0.7) - ex_oracle) < 1e-11);
  // Gamma jumps.
  const LevyMeasure gj = LevyMeasure::gamma_jumps(1.0, 1.5, 2.0);
  const double gj_oracle = integrate(
      [](double x) {
        return x * std::pow(2.0, 1.5) * std::pow(x, 0.5) * std::exp(-2.0 * x) /
               std::tgamma(1.5);
      },
      0.0, 0.7, cfg);
  // The oracle integrand behaves like x^{3/2} at zero (unbounded second
  // derivative), which limits the quadrature itself to ~1e-9 here.
  CHECK(std::abs(gj.small_moment(0.7) - gj_oracle) < 1e-8);
  // Untempered index 1/2.
  const LevyMeasure st = LevyMeasure::stable(0.5);
  QuadratureConfig sing;
  sing.abs_tol = 1e-13;
  sing.singularity_pow = 0.5;
  const double st_oracle = integrate(
      [](double x) {
        return x * (0.5 / std::tgamma(0.5)) * std::pow(x, -1.5);
      },
      0.0, 0.3, sing);
  CHECK(std::abs(st.small_moment(0.3) - st_oracle) < 1e-11);
  // Tempered index 1/2.
  const LevyMeasure ts = LevyMeasure::stable(0.5, 2.0);
  const double ts_oracle = integrate(
      [](double x) {
        return x * (0.5 / std::tgamma(0.5)) * std::pow(x, -1.5) * std::exp(-2.0 * x);
      },
      0.0, 0.3, sing);
  CHECK(std::abs(ts.small_moment(0.3) - ts_oracle) < 1e-11);
  // Uniform tabulated: int_0^eps x dx.
  const LevyMeasure ut = LevyMeasure::tabulated({0.0, 1.0}, {1.0, 0.0});
  CHECK(std::abs(ut.small_moment(0.6) - 0.18) < 1e-12);
}

TEST_CASE("total mass per kind") {
  CHECK(LevyMeasure::exponential(2.0, 3.0).total_mass() == 3.0);
  CHECK(LevyMeasure::gamma_jumps(1.0, 1.5, 2.0).total_mass() == 1.0);
  CHECK(std::isinf(LevyMeasure::stable(0.5).total_mass()));
  CHECK(LevyMeasure::atoms({{0.5, 1.0}, {1.5, 0.5}}).total_mass() == 1.5);
  CHECK(LevyMeasure::tabulated({0.0, 1.0}, {1.0, 0.0}).total_mass() == 1.0);
}

TEST_CASE("tilting shifts the exponent: phi_c(lambda) = phi(lambda+c)") {
  for (const auto& s : catalog()) {
    // Tabulated tails re-tabulate on their node grid under tilting; the exact
    // node check and the dense-grid case below cover that kind.
    if (std::holds_alternative<TabulatedTail>(s.levy().raw())) continue;
    for (double c : {0.5, 2.0}) {
      const SubordinatorSpec t = tilt(s, c);
      CHECK(std::abs(t.kill_rate() - s.phi(c)) < 1e-13 * (1.0 + s.phi(c)));
      for (double lam : kLambdaGrid) {
        const double expected = s.phi(lam + c);
        CHECK(std::abs(t.phi(lam) - expected) < 1e-11 * (1.0 + std::abs(expected)));
      }
    }
  }
}

TEST_CASE("tilting a densely tabulated tail shifts the exponent to grid accuracy") {
  // Uniform jump law tabulated on 101 nodes; the tilted tail is re-tabulated
  // on the same nodes, so the exponent error is O(h^2) interpolation error.
  std::vector<double> xs(101), tl(101);
  for (int i = 0; i <= 100; ++i) {
    xs[static_cast<std::size_t>(i)] = i / 100.0;
    tl[static_cast<std::size_t>(i)] = 1.0 - i / 100.0;
  }
  const SubordinatorSpec s(0.0, 0.0, LevyMeasure::tabulated(xs, tl));
  const double c = 0.5;
  const SubordinatorSpec t = tilt(s, c);
  for (double lam : kLambdaGrid) {
    const double expected = s.phi(lam + c);
    CHECK(std::abs(t.phi(lam) - expected) < 2e-4 * (1.0 + std::abs(expected)));
  }
}

TEST_CASE("re-tabulated tilt nodes carry the exact tilted tail") {
  // T_c(x) = e^{-cx} T(x) - c int_x^inf e^{-cy} T(y) dy, via quadrature oracle.
  const std::vector<double> xs = {0.0, 0.3, 0.7, 1.0};
  const std::vector<double> tl = {1.0, 0.8, 0.3, 0.0};
  const LevyMeasure tab = LevyMeasure::tabulated(xs, tl);
  const double c = 0.8;
  const LevyMeasure tilted = tab.tilted(c);
  const auto* t = std::get_if<TabulatedTail>(&tilted.raw());
  REQUIRE(t != nullptr);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-14;
  const auto interp = [&](double x) { return tab.tail(x); };
  // Integrate the suffix piecewise between the interpolation kinks so the
  // quadrature sees only smooth integrands.
  const auto suffix_integral = [&](double x) {
    double acc = 0.0;
    double lo = x;
    for (double node : xs) {
      if (node <= lo) continue;
      acc += integrate([&](double y) { return std::exp(-c * y) * interp(y); }, lo, node, cfg);
      lo = node;
    }
    return acc;
  };
  for (std::size_t i = 0; i < t->x.size(); ++i) {
    const double x = t->x[i];
    const double expected = std::exp(-c * x) * interp(x) - c * suffix_integral(x);
    CHECK(std::abs(t->tail[i] - std::max(0.0, expected)) < 1e-12);
  }
  CHECK(t->tail.back() == 0.0);
}

TEST_CASE("tilting twice composes additively") {
  for (const auto& s : {killed_drift(), cp_exponential(), stable_half(), gamma_spec()}) {
    const SubordinatorSpec once = tilt(s, 1.5);
    const SubordinatorSpec twice = tilt(tilt(s, 0.5), 1.0);
    for (double lam : kLambdaGrid) {
      CHECK(std::abs(once.phi(lam) - twice.phi(lam)) < 1e-11 * (1.0 + once.phi(lam)));
    }
  }
}

TEST_CASE("killing adds a constant and composes additively") {
  const SubordinatorSpec k = kill(pure_drift(), 1.0);
  CHECK(k.phi(2.0) == 3.0);
  CHECK(k.kill_rate() == 1.0);
  const SubordinatorSpec k2 = kill(kill(stable_half(), 0.25), 0.75);
  const SubordinatorSpec k1 = kill(stable_half(), 1.0);
  for (double lam : kLambdaGrid) {
    CHECK(std::abs(k2.phi(lam) - k1.phi(lam)) < 1e-14 * (1.0 + k1.phi(lam)));
  }
  CHECK(std::abs(kill(stable_half(), 1.0).phi(1.0) - 2.0) < 1e-14);
}

TEST_CASE("power time change produces the composed exponent") {
  const SubordinatorSpec root = stable_timechange(pure_drift(), 0.5);
  for (double lam : kLambdaGrid) {
    CHECK(std::abs(root.phi(lam) - std::sqrt(lam)) < 1e-12 * (1.0 + std::sqrt(lam)));
  }
  const SubordinatorSpec kd_root = stable_timechange(killed_drift(), 0.5);
  CHECK(std::abs(kd_root.phi(3.0) - 2.0) < 1e-12);
  for (double lam : kLambdaGrid) {
    CHECK(std::abs(kd_root.phi(lam) - std::sqrt(1.0 + lam)) < 1e-12);
    // Derivative of the composition.
    const double expected_prime = 0.5 / std::sqrt(1.0 + lam);
    CHECK(std::abs(kd_root.phi_prime(lam) - expected_prime) < 1e-11);
  }
  CHECK_THROWS_AS(stable_timechange(pure_drift(), 1.0), SpecError);
  CHECK_THROWS_AS(stable_timechange(pure_drift(), 0.0), SpecError);
  CHECK_THROWS_AS(stable_timechange(pure_drift(), -0.5), SpecError);
}

TEST_CASE("composed measures expose exponent-level operations only") {
  const SubordinatorSpec root = stable_timechange(killed_drift(), 0.5);
  CHECK_THROWS_AS(root.levy().tail(1.0), NoClosedFormPotential);
  CHECK_THROWS_AS(root.levy().small_moment(0.1), NoClosedFormPotential);
  // Finite-mass base: total mass (q + M)^g - q^g.
  const SubordinatorSpec cp_root = stable_timechange(cp_exponential(), 0.5);
  CHECK(std::abs(cp_root.levy().total_mass() - 1.0) < 1e-14);
  // Positive-drift base has unbounded jump exponent growth: infinite mass.
  CHECK(std::isinf(stable_timechange(killed_drift(), 0.5).levy().total_mass()));
}

TEST_CASE("conjugation of the killed drift is the exponential compound Poisson") {
  const ConjugatePair pair = conjugate(killed_drift());
  CHECK(pair.rule == "killed_drift<->cp_exponential");
  CHECK(std::abs(pair.dual.phi(1.0) - 0.5) < 1e-14);
  for (double lam : kLambdaGrid) {
    const double expected = lam / (lam + 1.0);
    CHECK(std::abs(pair.dual.phi(lam) - expected) < 1e-13 * (1.0 + expected));
    CHECK(std::abs(pair.primal.phi(lam) * pair.dual.phi(lam) - lam) < 1e-12 * (1.0 + lam));
  }
  // Involution: conjugating the dual recovers the primal exponent.
  const ConjugatePair back = conjugate(pair.dual);
  CHECK(back.rule == "cp_exponential<->killed_drift");
  for (double lam : kLambdaGrid) {
    CHECK(std::abs(back.dual.phi(lam) - killed_drift().phi(lam)) < 1e-13 * (1.0 + lam));
  }
}

TEST_CASE("conjugation pairs the stable indices g and 1-g") {
  const SubordinatorSpec s(0.0, 0.0, LevyMeasure::stable(0.3));
  const ConjugatePair pair = conjugate(s);
  CHECK(pair.rule == "stable<->stable");
  for (double lam : kLambdaGrid) {
    CHECK(std::abs(pair.dual.phi(lam) - std::pow(lam, 0.7)) < 1e-12 * (1.0 + lam));
    CHECK(std::abs(pair.primal.phi(lam) * pair.dual.phi(lam) - lam) < 1e-12 * (1.0 + lam));
  }
}

TEST_CASE("conjugation rejects specs outside the catalog") {
  CHECK_THROWS_AS(conjugate(pure_drift()), NotSpecialRecognized);
  CHECK_THROWS_AS(conjugate(gamma_spec()), NotSpecialRecognized);
  CHECK_THROWS_AS(conjugate(atom_spec()), NotSpecialRecognized);
  // Tempered stable is not the self-dual pair.
  const SubordinatorSpec ts(0.0, 0.0, LevyMeasure::stable(0.5, 1.0));
  CHECK_THROWS_AS(conjugate(ts), NotSpecialRecognized);
}

TEST_CASE("diagnostics hold on the catalog") {
  for (const auto& s : catalog()) {
    const SpecDiagnostics d = diagnose(s);
    CHECK(d.log_concave);
    CHECK(d.worst_log_concavity <= 1e-8);
    CHECK(d.ratio_ok);
    CHECK(d.ratio_at_probe >= 1.0);
    CHECK(d.ratio_at_probe < 1.001);
  }
}

TEST_CASE("constructor rejects invalid triplets") {
  CHECK_THROWS_AS(SubordinatorSpec(-1.0, 1.0, LevyMeasure::none()), SpecError);
  CHECK_THROWS_AS(SubordinatorSpec(1.0, -1.0, LevyMeasure::none()), SpecError);
  // Constant exponents (even a positive one) are rejected.
  CHECK_THROWS_AS(SubordinatorSpec(0.0, 0.0, LevyMeasure::none()), SpecError);
  CHECK_THROWS_AS(SubordinatorSpec(1.0, 0.0, LevyMeasure::none()), SpecError);
  const double nan = std::nan("");
  CHECK_THROWS_AS(SubordinatorSpec(nan, 1.0, LevyMeasure::none()), SpecError);
}

TEST_CASE("measure validation rejects malformed parameters") {
  CHECK_THROWS_AS(LevyMeasure::exponential(0.0, 1.0), SpecError);
  CHECK_THROWS_AS(LevyMeasure::exponential(1.0, -1.0), SpecError);
  CHECK_THROWS_AS(LevyMeasure::gamma_jumps(1.0, 0.0, 1.0), SpecError);
  CHECK_THROWS_AS(LevyMeasure::stable(1.0), SpecError);
  CHECK_THROWS_AS(LevyMeasure::stable(0.5, -1.0), SpecError);
  CHECK_THROWS_AS(LevyMeasure::atoms({}), SpecError);
  CHECK_THROWS_AS(LevyMeasure::atoms({{1.0, 1.0}, {0.5, 1.0}}), SpecError);
  CHECK_THROWS_AS(LevyMeasure::atoms({{-1.0, 1.0}}), SpecError);
  CHECK_THROWS_AS(LevyMeasure::atoms({{1.0, 0.0}}), SpecError);
  // Tabulated: needs >= 2 nodes, increasing x, nonincreasing tail,
  // positive head, zero terminal value.
  CHECK_THROWS_AS(LevyMeasure::tabulated({0.0}, {1.0}), SpecError);
  CHECK_THROWS_AS(LevyMeasure::tabulated({0.0, 0.0}, {1.0, 0.0}), SpecError);
  CHECK_THROWS_AS(LevyMeasure::tabulated({0.0, 1.0}, {1.0, 0.5}), SpecError);
  CHECK_THROWS_AS(LevyMeasure::tabulated({0.0, 1.0}, {0.5, 1.0}), SpecError);
  CHECK_THROWS_AS(LevyMeasure::tabulated({0.0, 1.0}, {0.0, 0.0}), SpecError);
  CHECK_THROWS_AS(LevyMeasure::tabulated({0.0, 1.0}, {-1.0, 0.0}), SpecError);
}

TEST_CASE("support bounds") {
  CHECK(LevyMeasure::none().support_bound().value() == 0.0);
  CHECK(LevyMeasure::atoms({{0.5, 1.0}, {1.5, 0.5}}).support_bound().value() == 1.5);
  CHECK(LevyMeasure::tabulated({0.0, 2.0}, {1.0, 0.0}).support_bound().value() == 2.0);
  CHECK(!LevyMeasure::exponential(1.0, 1.0).support_bound().has_value());
  CHECK(!LevyMeasure::stable(0.5).support_bound().has_value());
}
