#pragma once

#include <complex>
#include <functional>

namespace subord {

struct InversionConfig {
  enum class Method { talbot, gaver_stehfest };
  Method method = Method::talbot;
  int nodes = 64;  // Talbot contour points; Gaver-Stehfest uses 16 fixed terms
};

// Numeric inverse Laplace transform of F at t > 0.
//
// Default is the fixed-Talbot rule of Abate and Valko with M = nodes points,
// accumulated in extended precision. F must accept complex arguments and be
// analytic off the negative real axis. Gaver-Stehfest (n = 16, long double
// binomial weights) only ever evaluates F on the positive real axis and is
// intended as an independent cross-check, not as the production path.
double laplace_invert(const std::function<std::complex<double>(std::complex<double>)>& F, double t,
                      const InversionConfig& cfg = {});

}  // namespace subord
