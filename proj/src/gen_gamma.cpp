#include "subord/gen_gamma.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "subord/errors.hpp"
#include "subord/harmonic.hpp"
#include "subord/quadrature.hpp"

namespace subord {
namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
constexpr double kGlX[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                            0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                            0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

// int_0^sigma f(tau) dtau with fixed Gauss-Legendre panels of width <= 2.
double gl_integral(const std::function<double(double)>& f, double sigma) {
  if (sigma == 0.0) return 0.0;
  const int panels = static_cast<int>(std::ceil(sigma / 2.0));
  const double w = sigma / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * w, half = 0.5 * w;
    double acc = 0.0;
    for (int j = 0; j < 8; ++j)
      acc += kGlW[j] * (f(mid - half * kGlX[j]) + f(mid + half * kGlX[j]));
    total += half * acc;
  }
  return total;
}

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

double gordon_kernel(double x) {
  // (e^{-x} - 1 + x) / (x (1 - e^{-x})): smooth, 1/2 at 0, -> 1 at infinity.
  if (x < 1e-3) return 0.5 + x / 12.0 - x * x * x / 720.0;
  const double em1 = std::expm1(-x);
  return (em1 + x) / (-x * em1);
}

}  // namespace

GFamily phi_family(const SubordinatorSpec& s) {
  auto sp = std::make_shared<SubordinatorSpec>(s);
  GFamily g;
  g.name = "phi";
  g.h = [sp](double lam) { return std::log(sp->phi(lam)); };
  g.h1 = [sp](double lam) { return sp->log_derivative(lam); };
  g.h2 = [sp](double lam) {
    const double f = sp->phi(lam), f1 = sp->phi_prime(lam), f2 = sp->phi_second(lam);
    return (f2 * f - f1 * f1) / (f * f);
  };
  return g;
}

GFamily phi_star_family(const SubordinatorSpec& s) {
  auto sp = std::make_shared<SubordinatorSpec>(s);
  GFamily g;
  g.name = "phi_star";
  g.h = [sp](double lam) { return std::log(lam) - std::log(sp->phi(lam)); };
  g.h1 = [sp](double lam) { return 1.0 / lam - sp->log_derivative(lam); };
  g.h2 = [sp](double lam) {
    const double f = sp->phi(lam), f1 = sp->phi_prime(lam), f2 = sp->phi_second(lam);
    return -1.0 / (lam * lam) - (f2 * f - f1 * f1) / (f * f);
  };
  return g;
}

GFamily identity_family() {
  GFamily g;
  g.name = "identity";
  g.h = [](double lam) { return std::log(lam); };
  g.h1 = [](double lam) { return 1.0 / lam; };
  g.h2 = [](double lam) { return -1.0 / (lam * lam); };
  return g;
}

GenGamma::GenGamma(GFamily g, GenGammaConfig cfg) : g_(std::move(g)), cfg_(cfg) {
  if (!g_.h || !g_.h1 || !g_.h2) throw SpecError("GenGamma needs h, h1, h2");
}

double GenGamma::series_with_tail(double s, std::size_t n_terms) const {
  KahanSum sum;
  double h_n = g_.h(1.0);
  const double h_at_1 = h_n;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const double h_np1 = g_.h(static_cast<double>(n) + 1.0);
    const double u1 = h_np1 - h_n;
    const double us = g_.h(static_cast<double>(n) + s) - h_n;
    sum.add(s * u1 - us);
    h_n = h_np1;
  }
  // Euler-Maclaurin closure of the remainder sum_{n > N} v_n, written through
  // tail_u(sigma) so the pairing tail_u(s) - s*tail_u(1) cancels the divergent
  // parts exactly.
  const double n1 = static_cast<double>(n_terms) + 1.0;
  const double h_n1 = g_.h(n1), h1_n1 = g_.h1(n1), h2_n1 = g_.h2(n1);
  const auto tail_u = [&](double sigma) {
    const double a =
        gl_integral([&](double tau) { return g_.h(n1 + tau); }, sigma) - sigma * h_n1;
    const double b = g_.h(n1 + sigma) - h_n1 - sigma * h1_n1;
    const double c = g_.h1(n1 + sigma) - h1_n1 - sigma * h2_n1;
    return a - 0.5 * b + c / 12.0;
  };
  const double tail = tail_u(s) - s * tail_u(1.0);
  return s * h_at_1 - g_.h(s) + sum.s + tail;
}

double GenGamma::log_gamma(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw SpecError("log_gamma requires s > 0");
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t n = 64; n <= cfg_.n_max; n *= 2) {
    const double val = series_with_tail(s, n);
    if (std::isfinite(prev) &&
        std::abs(val - prev) <= std::max(1e-13, cfg_.tol * (1.0 + std::abs(val))))
      return val;
    prev = val;
  }
  throw NonConvergent("generalized gamma series did not stabilize within the term cap");
}

double GenGamma::gamma_value(double s) const { return std::exp(log_gamma(s)); }

double GenGamma::euler_constant() const {
  // a_k = sum_{j<=2^k} h1(j) - h(2^k), accelerated with two Aitken passes.
  const auto aitken = [](const std::vector<double>& a) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 2 < a.size(); ++i) {
      const double d1 = a[i + 1] - a[i], d2 = a[i + 2] - a[i + 1];
      const double den = d2 - d1;
      out.push_back(std::abs(den) < 1e-300 ? a[i + 2] : a[i + 2] - d2 * d2 / den);
    }
    return out;
  };
  std::vector<double> a;
  KahanSum running;
  std::size_t covered = 0;
  double prev_est = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k <= 21; ++k) {
    const std::size_t n = static_cast<std::size_t>(1) << k;
    for (std::size_t j = covered + 1; j <= n; ++j) running.add(g_.h1(static_cast<double>(j)));
    covered = n;
    a.push_back(running.s - g_.h(static_cast<double>(n)));
    if (a.size() >= 5) {
      const auto accel = aitken(aitken(a));
      const double est = accel.back();
      if (std::isfinite(prev_est) && std::abs(est - prev_est) < 5e-11) return est;
      prev_est = est;
    }
  }
  throw NonConvergent("euler-constant extrapolation did not stabilize");
}

double moment_R(const SubordinatorSpec& s, double order) {
  if (!(order > -1.0)) throw SpecError("moment_R requires order > -1");
  return GenGamma(phi_family(s)).gamma_value(order + 1.0);
}

double moment_I(const SubordinatorSpec& s, double order) {
  if (!(order > -1.0)) throw SpecError("moment_I requires order > -1");
  return std::exp(std::lgamma(order + 1.0) - GenGamma(phi_family(s)).log_gamma(order + 1.0));
}

double moment_I_integer(const SubordinatorSpec& s, int n) {
  if (n < 0) throw SpecError("moment_I_integer requires n >= 0");
  double prod = 1.0;
  for (int i = 1; i <= n; ++i) prod *= static_cast<double>(i) / s.phi(static_cast<double>(i));
  return prod;
}

double moment_R_integer(const SubordinatorSpec& s, int n) {
  if (n < 0) throw SpecError("moment_R_integer requires n >= 0");
  double prod = 1.0;
  for (int i = 1; i <= n; ++i) prod *= s.phi(static_cast<double>(i));
  return prod;
}

double joint_transform(const SubordinatorSpec& s, double alpha, double mu, double order) {
  if (s.kill_rate() != 0.0)
    throw QZeroViolation("joint transform is defined for unkilled specs only");
  if (!(alpha > 0.0)) throw SpecError("joint transform requires alpha > 0");
  if (!(mu >= 0.0)) throw SpecError("joint transform requires mu >= 0");
  if (!(order > -1.0)) throw SpecError("joint transform requires order > -1");
  const SubordinatorSpec tilted = mu > 0.0 ? tilt(s, mu) : s;
  const SubordinatorSpec killed = kill(tilted, alpha);
  const double log_ratio =
      std::lgamma(order + 1.0) - GenGamma(phi_family(killed)).log_gamma(order + 1.0);
  return alpha / (alpha + s.phi(mu)) * std::exp(log_ratio);
}

GordonTail gordon_tail(const SubordinatorSpec& s, int n) {
  return gordon_tail(s, n, HarmonicDensity::build(s));
}

GordonTail gordon_tail(const SubordinatorSpec& s, int n, const HarmonicDensity& density) {
  if (n < 1) throw SpecError("gordon_tail requires n >= 1");
  GordonTail out;
  KahanSum dsum;
  for (int k = 1; k <= n; ++k) dsum.add(-s.log_derivative(static_cast<double>(k)));
  out.d_n = dsum.s + std::log(s.phi(static_cast<double>(n) + 1.0));
  const double decay = static_cast<double>(n) + 1.0;
  if (density.is_atomic()) {
    double acc = 0.0;
    for (const auto& atom : density.atoms())
      acc += atom.mass * atom.location * std::exp(-decay * atom.location) *
             gordon_kernel(atom.location);
    out.b_n = acc;
    return out;
  }
  const auto f = [&](double x) {
    return density(x) * std::exp(-decay * x) * gordon_kernel(x);
  };
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-11;
  const auto f_past_one = [&](double u) { return f(1.0 + u); };
  out.b_n = integrate(f, 0.0, 1.0, cfg) + integrate_to_inf(f_past_one, cfg);
  return out;
}

}  // namespace subord
