#include "subord/special.hpp"

#include <cmath>

#include "subord/errors.hpp"

namespace subord {
namespace {

double gammp_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NonConvergent("incomplete gamma series stalled");
}

double gammq_cf(double a, double x) {
  const double FPMIN = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / FPMIN;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < FPMIN) d = FPMIN;
    c = b + an / c;
    if (std::abs(c) < FPMIN) c = FPMIN;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NonConvergent("incomplete gamma continued fraction stalled");
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw SpecError("gamma_p requires a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gammp_series(a, x);
  return 1.0 - gammq_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw SpecError("gamma_q requires a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gammp_series(a, x);
  return gammq_cf(a, x);
}

double upper_gamma_neg(double s, double x) {
  if (!(s > 0.0) || s >= 1.0 || !(x > 0.0))
    throw SpecError("upper_gamma_neg requires 0 < s < 1, x > 0");
  // Gamma(-s, x) = (x^{-s} e^{-x} - Gamma(1-s, x)) / s.
  const double upper_1ms = gamma_q(1.0 - s, x) * std::tgamma(1.0 - s);
  return (std::pow(x, -s) * std::exp(-x) - upper_1ms) / s;
}

}  // namespace subord
