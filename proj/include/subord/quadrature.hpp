#pragma once

#include <functional>

namespace subord {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  // Integrand behaves like x^{-p} as x -> 0+ with 0 <= p < 1; the substitution
  // x = u^{1/(1-p)} removes the singularity before the adaptive pass.
  double singularity_pow = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

// Adaptive Gauss-Kronrod 7-15 on a finite interval.
QuadratureResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureConfig& cfg = {});

// Integral over (0, inf): adaptive GK on (0,1], exponential-tail substitution
// x = 1 - log u on (1, inf). The integrand must decay at least algebraically
// fast enough to be integrable; exponential decay is the design case.
QuadratureResult integrate_0_inf(const std::function<double(double)>& f,
                                 const QuadratureConfig& cfg = {});

// Convenience wrappers that throw MaxSubdivisions when the tolerance is missed.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = {});
double integrate_to_inf(const std::function<double(double)>& f, const QuadratureConfig& cfg = {});

}  // namespace subord
