#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "subord/subordinator.hpp"

namespace subord {

// A Bernstein-type family g > 0 on (0, inf) via h = log g and two derivatives.
struct GFamily {
  std::function<double(double)> h;   // log g
  std::function<double(double)> h1;  // (log g)'
  std::function<double(double)> h2;  // (log g)''
  std::string name;
};

GFamily phi_family(const SubordinatorSpec& s);       // g = phi
GFamily phi_star_family(const SubordinatorSpec& s);  // g = lambda / phi(lambda)
GFamily identity_family();                           // g = lambda (classical Gamma)

struct GenGammaConfig {
  double tol = 1e-11;
  std::size_t n_max = 1u << 20;  // hard cap on partial-product length
};

// Generalized Gamma function of the family g, normalized so Gamma_g(1) = 1:
//   log Gamma_g(s) = s h(1) - h(s) + sum_{n>=1} [ s(h(n+1)-h(n)) - (h(n+s)-h(n)) ].
// The series is summed to N with a second-order Euler-Maclaurin closure of the
// remainder, and N doubles until two closures agree to tolerance.
class GenGamma {
 public:
  explicit GenGamma(GFamily g, GenGammaConfig cfg = {});

  double log_gamma(double s) const;  // s > 0
  double gamma_value(double s) const;

  // gamma_g = lim_n [ sum_{j<=n} h'(j) - h(n) ], accelerated with two rounds
  // of Aitken extrapolation over n = 2^k.
  double euler_constant() const;

 private:
  double series_with_tail(double s, std::size_t n) const;
  GFamily g_;
  GenGammaConfig cfg_;
};

// Moment transforms of the exponential functional I = int_0^life e^{-X_t} dt
// and of the Bernstein remainder R (E R^s = Gamma_phi(s+1)).
double moment_R(const SubordinatorSpec& s, double order);        // order > -1
double moment_I(const SubordinatorSpec& s, double order);        // Gamma(order+1)/Gamma_phi(order+1)
double moment_I_integer(const SubordinatorSpec& s, int n);       // prod_{i=1}^n i/phi(i)
double moment_R_integer(const SubordinatorSpec& s, int n);       // prod_{i=1}^n phi(i)

// E[ e^{-mu X_{e_alpha}} I_{e_alpha}^s ] for an unkilled spec (q = 0), an
// independent Exp(alpha) horizon, and tilt mu >= 0. Throws QZeroViolation if
// the spec is killed.
double joint_transform(const SubordinatorSpec& s, double alpha, double mu, double order);

// Tail pieces of the log-remainder series at truncation level n:
//   d_n = -sum_{k=1}^n phi'(k)/phi(k) + log phi(n+1)
//   b_n = int_0^inf rho(x) e^{-x} (e^{-x} - 1 + x) e^{-nx} / ((1-e^{-x}) x) dx
// where rho is the harmonic-potential density of the spec. They satisfy
// d_n = -gamma_phi + b_n, and b_n decreases to 0.
class HarmonicDensity;
struct GordonTail {
  double d_n = 0.0;
  double b_n = 0.0;
};
GordonTail gordon_tail(const SubordinatorSpec& s, int n);
GordonTail gordon_tail(const SubordinatorSpec& s, int n, const HarmonicDensity& density);

}  // namespace subord
