#include "subord/mittag_leffler.hpp"

#include <cmath>

#include "subord/errors.hpp"
#include "subord/quadrature.hpp"

namespace subord {
namespace {

double series(double alpha, double z) {
  // sum_k z^k / Gamma(alpha k + 1), terms through lgamma, Kahan compensation.
  double sum = 1.0, comp = 0.0;
  const double alog = std::log(std::abs(z));
  for (int k = 1; k < 4000; ++k) {
    const double lt = k * alog - std::lgamma(alpha * k + 1.0);
    double term = std::exp(lt);
    if (z < 0.0 && (k & 1)) term = -term;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(term) < 1e-17 * (std::abs(sum) + 1.0) && alpha * k > std::abs(z)) return sum;
  }
  throw NonConvergent("Mittag-Leffler series did not converge");
}

double spectral_negative(double alpha, double z) {
  // E_alpha(-x) = int_0^inf e^{-r x^{1/alpha}} K_alpha(r) dr for x = -z > 0,
  // K_alpha(r) = (sin(alpha pi)/pi) r^{alpha-1} / (r^{2alpha} + 2 r^alpha cos(alpha pi) + 1).
  const double x = -z;
  const double t = std::pow(x, 1.0 / alpha);
  const double s = std::sin(alpha * 3.141592653589793238462643) / 3.141592653589793238462643;
  const double c = std::cos(alpha * 3.141592653589793238462643);
  auto kernel = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double e = r * t;
    if (e > 745.0) return 0.0;
    const double ra = std::pow(r, alpha);
    return std::exp(-e) * s * std::pow(r, alpha - 1.0) / (ra * ra + 2.0 * ra * c + 1.0);
  };
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-13;
  cfg.rel_tol = 1e-12;
  cfg.singularity_pow = 1.0 - alpha;  // r^{alpha-1} blowup at 0 when alpha < 1
  return integrate_0_inf(kernel, cfg).value;
}

}  // namespace

double mittag_leffler(double alpha, double z) {
  if (!(alpha > 0.0) || alpha > 1.0 || !std::isfinite(alpha) || !std::isfinite(z))
    throw SpecError("mittag_leffler requires alpha in (0,1] and finite z");
  if (alpha == 1.0) return std::exp(z);
  if (z == 0.0) return 1.0;
  if (z >= -2.0) return series(alpha, z);
  return spectral_negative(alpha, z);
}

}  // namespace subord
