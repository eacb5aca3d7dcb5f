#include "subord/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "subord/errors.hpp"

namespace subord {
namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082,
                           0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975,
                           0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  if (!std::isfinite(fc)) throw NonConvergent("integrand is not finite inside the interval");
  double result_gauss = kWg[3] * fc;
  double result_kronrod = kWgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    if (!std::isfinite(f1) || !std::isfinite(f2))
      throw NonConvergent("integrand is not finite inside the interval");
    const double fsum = f1 + f2;
    result_kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) result_gauss += kWg[j / 2] * fsum;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = result_kronrod * h;
  const double diff = std::abs(result_kronrod - result_gauss) * std::abs(h);
  // QUADPACK-style sharpened estimate: the raw Gauss/Kronrod gap is usually a
  // large overestimate once the rule has converged.
  p.error = diff;
  if (diff > 0.0) {
    const double scale = std::pow(200.0 * diff / (std::abs(p.value) + diff + 1e-300), 1.5);
    if (scale < 1.0) p.error = diff * scale;
  }
  return p;
}

QuadratureResult adapt(const std::function<double(double)>& f, double a, double b,
                       const QuadratureConfig& cfg) {
  std::vector<Panel> heap;
  heap.push_back(gk15(f, a, b));
  auto by_error = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::make_heap(heap.begin(), heap.end(), by_error);
  int splits = 0;
  for (;;) {
    double total = 0.0, err = 0.0;
    for (const Panel& p : heap) {
      total += p.value;
      err += p.error;
    }
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    if (err <= tol || splits >= cfg.max_subdivisions) {
      if (err > tol && err > 1e3 * std::max(tol, 1e-300))
        throw MaxSubdivisions("adaptive quadrature missed tolerance");
      return {total, err, splits};
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval collapsed below representable resolution: keep its estimate.
      Panel kept = worst;
      kept.error = 0.0;
      heap.push_back(kept);
      std::push_heap(heap.begin(), heap.end(), by_error);
      ++splits;
      continue;
    }
    heap.push_back(gk15(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(gk15(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), by_error);
    ++splits;
  }
}

}  // namespace

QuadratureResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureConfig& cfg) {
  if (!(a < b)) {
    if (a == b) return {0.0, 0.0, 0};
    throw SpecError("integrate_finite requires a <= b");
  }
  if (cfg.singularity_pow > 0.0) {
    // x^{-p} blowup at the left endpoint: x = a + (b-a) u^m, m = 1/(1-p).
    const double p = cfg.singularity_pow;
    if (p >= 1.0) throw SpecError("singularity exponent must be < 1");
    const double m = 1.0 / (1.0 - p);
    const double w = b - a;
    QuadratureConfig flat = cfg;
    flat.singularity_pow = 0.0;
    auto g = [&](double u) {
      const double x = a + w * std::pow(u, m);
      if (x <= a) return 0.0;
      return f(x) * w * m * std::pow(u, m - 1.0);
    };
    return adapt(g, 0.0, 1.0, flat);
  }
  return adapt(f, a, b, cfg);
}

QuadratureResult integrate_0_inf(const std::function<double(double)>& f,
                                 const QuadratureConfig& cfg) {
  QuadratureConfig half = cfg;
  half.abs_tol = 0.5 * cfg.abs_tol;
  half.rel_tol = 0.5 * cfg.rel_tol;
  const QuadratureResult head = integrate_finite(f, 0.0, 1.0, half);
  // Tail substitution x = 1 - log u maps (1, inf) to u in (0, 1).
  half.singularity_pow = 0.0;
  auto tail = [&](double u) {
    if (u <= 0.0) return 0.0;
    return f(1.0 - std::log(u)) / u;
  };
  const QuadratureResult rest = integrate_finite(tail, 0.0, 1.0, half);
  return {head.value + rest.value, head.error_estimate + rest.error_estimate,
          head.subdivisions + rest.subdivisions};
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg) {
  return integrate_finite(f, a, b, cfg).value;
}

double integrate_to_inf(const std::function<double(double)>& f, const QuadratureConfig& cfg) {
  return integrate_0_inf(f, cfg).value;
}

}  // namespace subord
