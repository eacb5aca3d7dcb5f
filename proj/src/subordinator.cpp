#include "subord/subordinator.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "subord/errors.hpp"
#include "subord/quadrature.hpp"

namespace subord {

SubordinatorSpec::SubordinatorSpec(double kill, double drift, LevyMeasure levy, std::string label)
    : q_(kill), a_(drift), levy_(std::move(levy)), label_(std::move(label)) {
  if (!(q_ >= 0.0) || !std::isfinite(q_)) throw SpecError("kill rate must be finite and >= 0");
  if (!(a_ >= 0.0) || !std::isfinite(a_)) throw SpecError("drift must be finite and >= 0");
  if (a_ == 0.0 && levy_.is_zero())
    throw SpecError("constant Laplace exponent (no drift, no jumps) is not allowed");
}

double SubordinatorSpec::phi(double lambda) const {
  return q_ + a_ * lambda + levy_.exponent(lambda);
}

std::complex<double> SubordinatorSpec::phi(std::complex<double> lambda) const {
  return q_ + a_ * lambda + levy_.exponent(lambda);
}

double SubordinatorSpec::phi_prime(double lambda) const {
  return a_ + levy_.exponent_prime(lambda);
}

std::complex<double> SubordinatorSpec::phi_prime(std::complex<double> lambda) const {
  return a_ + levy_.exponent_prime(lambda);
}

double SubordinatorSpec::phi_second(double lambda) const { return levy_.exponent_second(lambda); }

double SubordinatorSpec::log_derivative(double lambda) const {
  return phi_prime(lambda) / phi(lambda);
}

double SubordinatorSpec::phi_over_lambda(double lambda) const {
  if (!(lambda > 0.0)) throw SpecError("phi_over_lambda requires lambda > 0");
  if (std::holds_alternative<ComposedJumps>(levy_.raw())) return phi(lambda) / lambda;
  double value = a_ + q_ / lambda;
  if (levy_.is_zero()) return value;
  // int_0^inf e^{-lambda x} tail(x) dx, split at the tail's kinks so the
  // adaptive rule never straddles one, and at the support end if finite.
  std::vector<double> cuts;
  cuts.push_back(0.0);
  if (const auto* a = std::get_if<AtomJumps>(&levy_.raw())) {
    for (const auto& [loc, mass] : a->atoms) cuts.push_back(loc);
  } else if (const auto* t = std::get_if<TabulatedTail>(&levy_.raw())) {
    for (double xv : t->x)
      if (xv > 0.0) cuts.push_back(xv);
  }
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-13;
  cfg.rel_tol = 1e-13;
  const auto f = [&](double x) { return std::exp(-lambda * x) * levy_.tail(x); };
  if (auto bound = levy_.support_bound()) {
    cuts.push_back(*bound);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      value += integrate(f, cuts[i], cuts[i + 1], cfg);
    return value;
  }
  cfg.singularity_pow = levy_.tail_singularity();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    value += integrate(f, cuts[i], cuts[i + 1], cfg);
    cfg.singularity_pow = 0.0;  // the singularity sits at x = 0 only
  }
  const double base = cuts.back();
  const auto shifted = [&](double u) { return f(base + u); };
  value += integrate_to_inf(shifted, cfg);
  return value;
}

double SubordinatorSpec::levy_tail(double x) const { return q_ + levy_.tail(x); }

SubordinatorSpec tilt(const SubordinatorSpec& s, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw SpecError("tilt requires c > 0");
  SubordinatorSpec out(s.phi(c), s.a_, s.levy_.is_zero() ? LevyMeasure() : s.levy_.tilted(c),
                       s.label_.empty() ? std::string() : s.label_ + "+tilt");
  out.origin_ = SubordinatorSpec::Origin::tilted;
  if (s.origin_ == SubordinatorSpec::Origin::tilted) {
    // Tilting a tilt collapses: e^{-c2 x} e^{-c1 x} Pi = e^{-(c1+c2) x} Pi.
    out.origin_param_ = s.origin_param_ + c;
    out.base_ = s.base_;
  } else {
    out.origin_param_ = c;
    out.base_ = std::make_shared<SubordinatorSpec>(s);
  }
  return out;
}

SubordinatorSpec kill(const SubordinatorSpec& s, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw SpecError("kill requires alpha > 0");
  return SubordinatorSpec(s.q_ + alpha, s.a_, s.levy_,
                          s.label_.empty() ? std::string() : s.label_ + "+kill");
}

SubordinatorSpec stable_timechange(const SubordinatorSpec& s, double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw SpecError("stable time change requires index strictly in (0,1)");
  auto base = std::make_shared<SubordinatorSpec>(s);
  LevyMeasure levy{LevyMeasure::Variant(ComposedJumps{base, gamma})};
  SubordinatorSpec out(s.q_ > 0.0 ? std::pow(s.q_, gamma) : 0.0, 0.0, std::move(levy),
                       s.label_.empty() ? std::string() : s.label_ + "+timechange");
  out.origin_ = SubordinatorSpec::Origin::timechanged;
  out.origin_param_ = gamma;
  out.base_ = std::move(base);
  return out;
}

ConjugatePair conjugate(const SubordinatorSpec& s) {
  const double q = s.kill_rate(), a = s.drift();
  if (s.levy().is_zero()) {
    // phi = q + a*lambda; lambda/phi = (1/a) * lambda / (q/a + lambda): a
    // compound Poisson with Exp(q/a) jumps, provided q > 0 (a pure drift's
    // conjugate would be the constant 1/a, which is not a Laplace exponent).
    if (q > 0.0 && a > 0.0) {
      SubordinatorSpec dual(0.0, 0.0, LevyMeasure::exponential(q / a, 1.0 / a),
                            "conjugate(" + (s.label().empty() ? "killed drift" : s.label()) + ")");
      return ConjugatePair{s, std::move(dual), "killed_drift<->cp_exponential"};
    }
    throw NotSpecialRecognized("pure drift has no subordinator conjugate");
  }
  if (const auto* e = std::get_if<ExponentialJumps>(&s.levy().raw())) {
    if (q == 0.0 && a == 0.0) {
      SubordinatorSpec dual(
          e->rate / e->arrival, 1.0 / e->arrival, LevyMeasure(),
          "conjugate(" + (s.label().empty() ? "cp exponential" : s.label()) + ")");
      return ConjugatePair{s, std::move(dual), "cp_exponential<->killed_drift"};
    }
  }
  if (const auto* st = std::get_if<StableJumps>(&s.levy().raw())) {
    if (q == 0.0 && a == 0.0 && st->tempering == 0.0) {
      SubordinatorSpec dual(0.0, 0.0, LevyMeasure::stable(1.0 - st->index),
                            "conjugate(" + (s.label().empty() ? "stable" : s.label()) + ")");
      return ConjugatePair{s, std::move(dual), "stable<->stable"};
    }
  }
  throw NotSpecialRecognized("no conjugate rule matches this spec");
}

SpecDiagnostics diagnose(const SubordinatorSpec& s, double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 3) throw SpecError("diagnose needs 0 < lo < hi, n >= 3");
  SpecDiagnostics d;
  d.worst_log_concavity = -std::numeric_limits<double>::infinity();
  const double step = std::log(hi / lo) / (n - 1);
  std::vector<double> lam(n), logphi(n);
  for (int i = 0; i < n; ++i) {
    lam[i] = lo * std::exp(step * i);
    logphi[i] = std::log(s.phi(lam[i]));
  }
  // Concavity of log phi via second divided differences on the grid.
  for (int i = 1; i + 1 < n; ++i) {
    const double left = (logphi[i] - logphi[i - 1]) / (lam[i] - lam[i - 1]);
    const double right = (logphi[i + 1] - logphi[i]) / (lam[i + 1] - lam[i]);
    const double dd2 = (right - left) / (lam[i + 1] - lam[i - 1]);
    if (dd2 > d.worst_log_concavity) d.worst_log_concavity = dd2;
  }
  d.log_concave = d.worst_log_concavity <= 1e-8;
  const double probe = 1e6;
  d.ratio_at_probe = s.phi(probe + 1.0) / s.phi(probe);
  d.ratio_ok = d.ratio_at_probe - 1.0 < 1e-3;
  return d;
}

}  // namespace subord
