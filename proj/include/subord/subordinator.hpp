#pragma once

#include <complex>
#include <memory>
#include <string>

#include "subord/levy_measure.hpp"

namespace subord {

// A (possibly killed) subordinator described by its triplet (kill q >= 0,
// drift a >= 0, jump measure Pi). Laplace exponent:
//   phi(lambda) = q + a*lambda + int (1 - e^{-lambda x}) Pi(dx).
// Specs are immutable; the transform functions below return new specs.
class SubordinatorSpec {
 public:
  // How a spec was produced, kept so downstream closed forms can reuse the
  // parent's. `kill` intentionally resets this to `base`.
  enum class Origin { base, tilted, timechanged };

  SubordinatorSpec(double kill, double drift, LevyMeasure levy, std::string label = "");

  double kill_rate() const { return q_; }
  double drift() const { return a_; }
  const LevyMeasure& levy() const { return levy_; }
  const std::string& label() const { return label_; }

  double phi(double lambda) const;
  std::complex<double> phi(std::complex<double> lambda) const;
  double phi_prime(double lambda) const;
  std::complex<double> phi_prime(std::complex<double> lambda) const;
  double phi_second(double lambda) const;
  // phi'(lambda) / phi(lambda).
  double log_derivative(double lambda) const;

  // phi(lambda)/lambda computed through the tail-integral representation
  //   a + q/lambda + int_0^inf e^{-lambda x} Pi((x,inf)) dx,
  // an independent route from phi(). Composed (time-changed) jumps have no
  // tail, so they fall back to phi(lambda)/lambda.
  double phi_over_lambda(double lambda) const;

  // q + Pi((x, inf)): the tail of the killed measure Pi + q*delta_inf.
  double levy_tail(double x) const;

  Origin origin() const { return origin_; }
  double origin_param() const { return origin_param_; }
  std::shared_ptr<const SubordinatorSpec> origin_base() const { return base_; }

  friend SubordinatorSpec tilt(const SubordinatorSpec& s, double c);
  friend SubordinatorSpec kill(const SubordinatorSpec& s, double alpha);
  friend SubordinatorSpec stable_timechange(const SubordinatorSpec& s, double gamma);

 private:
  double q_;
  double a_;
  LevyMeasure levy_;
  std::string label_;
  Origin origin_ = Origin::base;
  double origin_param_ = 0.0;
  std::shared_ptr<const SubordinatorSpec> base_;
};

// Esscher tilt by c > 0: phi_c(lambda) = phi(lambda + c) - phi(c), realized as
// the triplet (phi(c), a, e^{-cx} Pi(dx)). Records origin metadata.
SubordinatorSpec tilt(const SubordinatorSpec& s, double c);

// Additional killing: (q + alpha, a, Pi), alpha > 0. Resets origin metadata.
SubordinatorSpec kill(const SubordinatorSpec& s, double alpha);

// Stable time change: phi_gamma = phi^gamma for gamma strictly in (0, 1).
// The result has drift 0, kill q^gamma, and composed jumps carrying the base
// spec.
SubordinatorSpec stable_timechange(const SubordinatorSpec& s, double gamma);

// A recognized special pair: phi(lambda) * phi_dual(lambda) = lambda.
struct ConjugatePair {
  SubordinatorSpec primal;
  SubordinatorSpec dual;
  std::string rule;  // which catalog rule produced the pairing
};

// The conjugate spec phi*(lambda) = lambda / phi(lambda) for the recognized
// catalog (killed pure drift <-> compound-Poisson-exponential; stable index
// gamma <-> stable index 1-gamma). Throws NotSpecialRecognized otherwise.
ConjugatePair conjugate(const SubordinatorSpec& s);

// Grid diagnostics for the Bernstein-side sanity of a spec: log-concavity of
// phi (equivalently phi''*phi <= phi'^2) and the phi(lambda+1)/phi(lambda) -> 1
// normalization probe at large lambda.
struct SpecDiagnostics {
  bool log_concave = true;
  double worst_log_concavity = 0.0;  // max second divided difference of log phi (<= 0 ideal)
  double ratio_at_probe = 1.0;       // phi(L+1)/phi(L) at L = 1e6
  bool ratio_ok = true;
};
SpecDiagnostics diagnose(const SubordinatorSpec& s, double lo = 1e-2, double hi = 1e3,
                         int n = 200);

}  // namespace subord
