#include "subord/levy_measure.hpp"

#include <cmath>
#include <limits>

#include "subord/errors.hpp"
#include "subord/special.hpp"
#include "subord/subordinator.hpp"

namespace subord {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

std::complex<double> cexpm1(std::complex<double> z) {
  if (std::abs(z) > 0.5) return std::exp(z) - 1.0;
  std::complex<double> term = z, sum = z;
  for (int n = 2; n <= 20; ++n) {
    term *= z / static_cast<double>(n);
    sum += term;
  }
  return sum;
}

double expm1_generic(double z) { return std::expm1(z); }
std::complex<double> expm1_generic(std::complex<double> z) { return cexpm1(z); }

double log1p_generic(double x) { return std::log1p(x); }
std::complex<double> log1p_generic(std::complex<double> z) {
  if (std::abs(z) > 0.5) return std::log(1.0 + z);
  std::complex<double> term = z, sum = z;
  for (int n = 2; n <= 40; ++n) {
    term *= -z;
    sum += term / static_cast<double>(n);
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1.0)) break;
  }
  return sum;
}

// (w + expm1(-lambda w)/lambda), the small quantity ~ lambda w^2 / 2 that
// appears in the x-weighted piece integrals; series below the cancellation
// threshold, direct form above it.
template <typename T>
T w_plus_em1_over(T lambda, double w) {
  const double mag = std::abs(lambda) * w;
  if (mag < 1e-4) {
    const T lw = lambda * w;
    // w*( lw/2 - lw^2/6 + lw^3/24 - lw^4/120 )
    return w * (lw * 0.5 - lw * lw / 6.0 + lw * lw * lw / 24.0 - lw * lw * lw * lw / 120.0);
  }
  return w + expm1_generic(-lambda * w) / lambda;
}

// The tabulated tail T(x): t0 on [0, x0], linear between nodes, 0 past the end.
struct TabPieces {
  // Piece i covers [u, v] with T(x) = alpha + beta x.
  struct Piece {
    double u, v, alpha, beta;
  };
  std::vector<Piece> pieces;

  explicit TabPieces(const TabulatedTail& t) {
    if (t.x.front() > 0.0)
      pieces.push_back({0.0, t.x.front(), t.tail.front(), 0.0});
    for (std::size_t i = 0; i + 1 < t.x.size(); ++i) {
      const double u = t.x[i], v = t.x[i + 1];
      const double beta = (t.tail[i + 1] - t.tail[i]) / (v - u);
      pieces.push_back({u, v, t.tail[i] - beta * u, beta});
    }
  }
};

// lambda * int_u^v e^{-lambda x} (alpha + beta x) dx, stable for small lambda:
//   e^{-lambda u} [ -beta w - (T(v) + beta/lambda) expm1(-lambda w) ],  w = v-u.
template <typename T>
T weighted_piece(T lambda, double u, double v, double alpha, double beta) {
  const double w = v - u;
  const double Tv = alpha + beta * v;
  const T em1 = expm1_generic(-lambda * w);
  return std::exp(-lambda * u) * (-beta * w - (Tv + beta / lambda) * em1);
}

// int_u^v x e^{-lambda x} dx = -(e^{-lambda u}/lambda) [ v*expm1(-lambda w) + (w + expm1(-lambda w)/lambda) ].
template <typename T>
T x_piece(T lambda, double u, double v) {
  const double w = v - u;
  const T em1 = expm1_generic(-lambda * w);
  return -(std::exp(-lambda * u) / lambda) * (v * em1 + w_plus_em1_over(lambda, w));
}

// int_u^v x^2 e^{-lambda x} dx through the regularized lower incomplete gamma.
double x2_piece(double lambda, double u, double v) {
  return 2.0 / (lambda * lambda * lambda) * (gamma_p(3.0, lambda * v) - gamma_p(3.0, lambda * u));
}

template <typename T>
T tab_exponent(const TabulatedTail& t, T lambda) {
  TabPieces tp(t);
  T sum{};
  for (const auto& p : tp.pieces) sum += weighted_piece(lambda, p.u, p.v, p.alpha, p.beta);
  return sum;
}

template <typename T>
T tab_exponent_prime(const TabulatedTail& t, T lambda) {
  // psi'(lambda) = int x e^{-lambda x} Pi(dx), Pi density = -T' = -beta per piece.
  TabPieces tp(t);
  T sum{};
  for (const auto& p : tp.pieces) {
    if (p.beta == 0.0) continue;
    sum += (-p.beta) * x_piece(lambda, p.u, p.v);
  }
  return sum;
}

double stable_norm(double index) { return index / std::tgamma(1.0 - index); }

}  // namespace

LevyMeasure::LevyMeasure(Variant v) : v_(std::move(v)) {
  if (const auto* e = std::get_if<ExponentialJumps>(&v_)) {
    if (!finite_pos(e->rate) || !finite_pos(e->arrival))
      throw SpecError("exponential jumps need positive finite rate and arrival");
  } else if (const auto* g = std::get_if<GammaJumps>(&v_)) {
    if (!finite_pos(g->mass) || !finite_pos(g->shape) || !finite_pos(g->scale))
      throw SpecError("gamma jumps need positive finite mass, shape, scale");
  } else if (const auto* s = std::get_if<StableJumps>(&v_)) {
    if (!(s->index > 0.0) || !(s->index < 1.0))
      throw SpecError("stable index must lie in (0,1)");
    if (!(s->tempering >= 0.0) || !std::isfinite(s->tempering))
      throw SpecError("stable tempering must be a finite nonnegative number");
  } else if (const auto* a = std::get_if<AtomJumps>(&v_)) {
    if (a->atoms.empty()) throw SpecError("atom jumps need at least one atom");
    double prev = 0.0;
    for (const auto& [loc, mass] : a->atoms) {
      if (!finite_pos(loc) || !finite_pos(mass))
        throw SpecError("atom locations and masses must be positive finite");
      if (loc <= prev) throw SpecError("atom locations must be strictly increasing");
      prev = loc;
    }
  } else if (const auto* t = std::get_if<TabulatedTail>(&v_)) {
    if (t->x.size() != t->tail.size() || t->x.size() < 2)
      throw SpecError("tabulated tail needs matching grids of at least two nodes");
    for (std::size_t i = 0; i < t->x.size(); ++i) {
      if (!std::isfinite(t->x[i]) || t->x[i] < 0.0 || !std::isfinite(t->tail[i]) ||
          t->tail[i] < 0.0)
        throw SpecError("tabulated nodes must be finite, x >= 0, tail >= 0");
      if (i > 0 && t->x[i] <= t->x[i - 1])
        throw SpecError("tabulated x grid must be strictly increasing");
      if (i > 0 && t->tail[i] > t->tail[i - 1] + 1e-15 * (1.0 + t->tail[i - 1]))
        throw SpecError("tabulated tail must be nonincreasing");
    }
    if (t->tail.back() != 0.0)
      throw SpecError("tabulated tail must end at 0 (a positive final value hides an atom)");
    if (t->tail.front() <= 0.0) throw SpecError("tabulated tail must start positive");
  } else if (const auto* c = std::get_if<ComposedJumps>(&v_)) {
    if (!c->base) throw SpecError("composed jumps need a base spec");
    if (!(c->index > 0.0) || !(c->index < 1.0))
      throw SpecError("composition index must lie in (0,1)");
  }
}

LevyMeasure LevyMeasure::exponential(double rate, double arrival) {
  return LevyMeasure(Variant(ExponentialJumps{rate, arrival}));
}
LevyMeasure LevyMeasure::gamma_jumps(double mass, double shape, double scale) {
  return LevyMeasure(Variant(GammaJumps{mass, shape, scale}));
}
LevyMeasure LevyMeasure::stable(double index, double tempering) {
  return LevyMeasure(Variant(StableJumps{index, tempering}));
}
LevyMeasure LevyMeasure::atoms(std::vector<std::pair<double, double>> locations_masses) {
  return LevyMeasure(Variant(AtomJumps{std::move(locations_masses)}));
}
LevyMeasure LevyMeasure::tabulated(std::vector<double> x, std::vector<double> tail) {
  return LevyMeasure(Variant(TabulatedTail{std::move(x), std::move(tail)}));
}

namespace {

template <typename T>
T exponent_impl(const LevyMeasure::Variant& v, T lambda) {
  if (std::holds_alternative<NoJumps>(v)) return T{};
  if (const auto* e = std::get_if<ExponentialJumps>(&v))
    return e->arrival * lambda / (e->rate + lambda);
  if (const auto* g = std::get_if<GammaJumps>(&v))
    return g->mass * (-expm1_generic(-g->shape * log1p_generic(lambda / g->scale)));
  if (const auto* s = std::get_if<StableJumps>(&v)) {
    if (s->tempering == 0.0) return std::pow(lambda, s->index);
    return std::pow(lambda + s->tempering, s->index) -
           std::pow(s->tempering, s->index);
  }
  if (const auto* a = std::get_if<AtomJumps>(&v)) {
    T sum{};
    for (const auto& [loc, mass] : a->atoms) sum += mass * (-expm1_generic(-lambda * loc));
    return sum;
  }
  if (const auto* t = std::get_if<TabulatedTail>(&v)) {
    if (std::abs(lambda) == 0.0) return T{};
    return tab_exponent(*t, lambda);
  }
  const auto& c = std::get<ComposedJumps>(v);
  const double qb = c.base->kill_rate();
  return std::pow(c.base->phi(lambda), c.index) -
         (qb > 0.0 ? std::pow(qb, c.index) : 0.0);
}

template <typename T>
T exponent_prime_impl(const LevyMeasure::Variant& v, T lambda) {
  if (std::holds_alternative<NoJumps>(v)) return T{};
  if (const auto* e = std::get_if<ExponentialJumps>(&v)) {
    const T d = e->rate + lambda;
    return e->arrival * e->rate / (d * d);
  }
  if (const auto* g = std::get_if<GammaJumps>(&v))
    return g->mass * g->shape / g->scale *
           std::exp(-(g->shape + 1.0) * std::log(T{1} + lambda / g->scale));
  if (const auto* s = std::get_if<StableJumps>(&v))
    return s->index * std::pow(lambda + s->tempering, s->index - 1.0);
  if (const auto* a = std::get_if<AtomJumps>(&v)) {
    T sum{};
    for (const auto& [loc, mass] : a->atoms) sum += mass * loc * std::exp(-lambda * loc);
    return sum;
  }
  if (const auto* t = std::get_if<TabulatedTail>(&v)) return tab_exponent_prime(*t, lambda);
  const auto& c = std::get<ComposedJumps>(v);
  return c.index * std::pow(c.base->phi(lambda), c.index - 1.0) * c.base->phi_prime(lambda);
}

}  // namespace

double LevyMeasure::exponent(double lambda) const { return exponent_impl(v_, lambda); }
std::complex<double> LevyMeasure::exponent(std::complex<double> lambda) const {
  return exponent_impl(v_, lambda);
}
double LevyMeasure::exponent_prime(double lambda) const { return exponent_prime_impl(v_, lambda); }
std::complex<double> LevyMeasure::exponent_prime(std::complex<double> lambda) const {
  return exponent_prime_impl(v_, lambda);
}

double LevyMeasure::exponent_second(double lambda) const {
  if (std::holds_alternative<NoJumps>(v_)) return 0.0;
  if (const auto* e = std::get_if<ExponentialJumps>(&v_)) {
    const double d = e->rate + lambda;
    return -2.0 * e->arrival * e->rate / (d * d * d);
  }
  if (const auto* g = std::get_if<GammaJumps>(&v_))
    return -g->mass * g->shape * (g->shape + 1.0) / (g->scale * g->scale) *
           std::pow(g->scale / (g->scale + lambda), g->shape + 2.0);
  if (const auto* s = std::get_if<StableJumps>(&v_))
    return s->index * (s->index - 1.0) * std::pow(lambda + s->tempering, s->index - 2.0);
  if (const auto* a = std::get_if<AtomJumps>(&v_)) {
    double sum = 0.0;
    for (const auto& [loc, mass] : a->atoms) sum -= mass * loc * loc * std::exp(-lambda * loc);
    return sum;
  }
  if (const auto* t = std::get_if<TabulatedTail>(&v_)) {
    // psi''(lambda) = -int x^2 e^{-lambda x} Pi(dx).
    TabPieces tp(*t);
    double sum = 0.0;
    for (const auto& p : tp.pieces) {
      if (p.beta == 0.0) continue;
      sum += p.beta * x2_piece(lambda, p.u, p.v);
    }
    return sum;
  }
  const auto& c = std::get<ComposedJumps>(v_);
  const double f = c.base->phi(lambda), f1 = c.base->phi_prime(lambda),
               f2 = c.base->phi_second(lambda);
  return c.index * std::pow(f, c.index - 2.0) * ((c.index - 1.0) * f1 * f1 + f * f2);
}

double LevyMeasure::tail(double x) const {
  if (x < 0.0) throw SpecError("tail requires x >= 0");
  if (std::holds_alternative<NoJumps>(v_)) return 0.0;
  if (const auto* e = std::get_if<ExponentialJumps>(&v_)) return e->arrival * std::exp(-e->rate * x);
  if (const auto* g = std::get_if<GammaJumps>(&v_)) return g->mass * gamma_q(g->shape, g->scale * x);
  if (const auto* s = std::get_if<StableJumps>(&v_)) {
    if (x == 0.0) return kInf;
    const double g1 = std::tgamma(1.0 - s->index);
    if (s->tempering == 0.0) return std::pow(x, -s->index) / g1;
    const double c = s->tempering;
    return std::pow(x, -s->index) * std::exp(-c * x) / g1 -
           std::pow(c, s->index) * gamma_q(1.0 - s->index, c * x);
  }
  if (const auto* a = std::get_if<AtomJumps>(&v_)) {
    double sum = 0.0;
    for (const auto& [loc, mass] : a->atoms)
      if (loc > x) sum += mass;
    return sum;
  }
  if (const auto* t = std::get_if<TabulatedTail>(&v_)) {
    if (x <= t->x.front()) return t->tail.front();
    if (x >= t->x.back()) return 0.0;
    const auto it = std::upper_bound(t->x.begin(), t->x.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - t->x.begin()) - 1;
    const double f = (x - t->x[i]) / (t->x[i + 1] - t->x[i]);
    return t->tail[i] + f * (t->tail[i + 1] - t->tail[i]);
  }
  throw NoClosedFormPotential("a time-changed jump measure has no closed-form tail");
}

double LevyMeasure::total_mass() const {
  if (std::holds_alternative<NoJumps>(v_)) return 0.0;
  if (const auto* e = std::get_if<ExponentialJumps>(&v_)) return e->arrival;
  if (const auto* g = std::get_if<GammaJumps>(&v_)) return g->mass;
  if (std::holds_alternative<StableJumps>(v_)) return kInf;
  if (const auto* a = std::get_if<AtomJumps>(&v_)) {
    double sum = 0.0;
    for (const auto& [loc, mass] : a->atoms) sum += mass;
    return sum;
  }
  if (const auto* t = std::get_if<TabulatedTail>(&v_)) return t->tail.front();
  const auto& c = std::get<ComposedJumps>(v_);
  if (c.base->drift() > 0.0) return kInf;
  const double base_mass = c.base->levy().total_mass();
  if (!std::isfinite(base_mass)) return kInf;
  const double q = c.base->kill_rate();
  return std::pow(q + base_mass, c.index) - std::pow(q, c.index);
}

std::optional<double> LevyMeasure::support_bound() const {
  if (std::holds_alternative<NoJumps>(v_)) return 0.0;
  if (const auto* a = std::get_if<AtomJumps>(&v_)) return a->atoms.back().first;
  if (const auto* t = std::get_if<TabulatedTail>(&v_)) return t->x.back();
  return std::nullopt;
}

double LevyMeasure::small_moment(double eps) const {
  if (!(eps >= 0.0)) throw SpecError("small_moment requires eps >= 0");
  if (eps == 0.0 || std::holds_alternative<NoJumps>(v_)) return 0.0;
  if (const auto* e = std::get_if<ExponentialJumps>(&v_)) {
    const double re = e->rate * eps;
    return e->arrival / e->rate * (1.0 - (1.0 + re) * std::exp(-re));
  }
  if (const auto* g = std::get_if<GammaJumps>(&v_))
    return g->mass * g->shape / g->scale * gamma_p(g->shape + 1.0, g->scale * eps);
  if (const auto* s = std::get_if<StableJumps>(&v_)) {
    if (s->tempering == 0.0)
      return stable_norm(s->index) * std::pow(eps, 1.0 - s->index) / (1.0 - s->index);
    return s->index * std::pow(s->tempering, s->index - 1.0) *
           gamma_p(1.0 - s->index, s->tempering * eps);
  }
  if (const auto* a = std::get_if<AtomJumps>(&v_)) {
    double sum = 0.0;
    for (const auto& [loc, mass] : a->atoms)
      if (loc <= eps) sum += loc * mass;
    return sum;
  }
  if (const auto* t = std::get_if<TabulatedTail>(&v_)) {
    // int_0^eps x Pi(dx) = -eps T(eps) + int_0^eps T(x) dx (T piecewise linear).
    double integral = 0.0;
    TabPieces tp(*t);
    for (const auto& p : tp.pieces) {
      if (p.u >= eps) break;
      const double v = std::min(p.v, eps);
      integral += 0.5 * (p.alpha + p.beta * p.u + p.alpha + p.beta * v) * (v - p.u);
    }
    return integral - eps * tail(eps);
  }
  throw NoClosedFormPotential("a time-changed jump measure has no closed-form small moment");
}

double LevyMeasure::tail_singularity() const {
  if (const auto* s = std::get_if<StableJumps>(&v_)) return s->index;
  return 0.0;
}

LevyMeasure LevyMeasure::tilted(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw SpecError("tilt requires c > 0");
  if (std::holds_alternative<NoJumps>(v_)) return LevyMeasure();
  if (const auto* e = std::get_if<ExponentialJumps>(&v_))
    return exponential(e->rate + c, e->arrival * e->rate / (e->rate + c));
  if (const auto* g = std::get_if<GammaJumps>(&v_))
    return gamma_jumps(g->mass * std::pow(g->scale / (g->scale + c), g->shape), g->shape,
                       g->scale + c);
  if (const auto* s = std::get_if<StableJumps>(&v_)) return stable(s->index, s->tempering + c);
  if (const auto* a = std::get_if<AtomJumps>(&v_)) {
    auto out = a->atoms;
    for (auto& [loc, mass] : out) mass *= std::exp(-c * loc);
    return atoms(std::move(out));
  }
  if (const auto* t = std::get_if<TabulatedTail>(&v_)) {
    // T_c(x) = e^{-cx} T(x) - c int_x^inf e^{-cy} T(y) dy, retabulated on the
    // original nodes plus a node at 0 (T_c is no longer constant near 0).
    TabPieces tp(*t);
    std::vector<double> xs;
    xs.push_back(0.0);
    for (double xv : t->x)
      if (xv > 0.0) xs.push_back(xv);
    // Suffix integrals int_{x}^{inf} e^{-cy} T(y) dy at each node, built from
    // the exact per-piece weighted integrals (weighted_piece = c * integral).
    std::vector<double> node_tail(xs.size(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double integral = 0.0;
      for (const auto& p : tp.pieces) {
        if (p.v <= xs[i]) continue;
        const double u = std::max(p.u, xs[i]);
        integral += weighted_piece(c, u, p.v, p.alpha, p.beta) / c;
      }
      double Tx;
      if (xs[i] <= t->x.front())
        Tx = t->tail.front();
      else if (xs[i] >= t->x.back())
        Tx = 0.0;
      else {
        const auto it = std::upper_bound(t->x.begin(), t->x.end(), xs[i]);
        const std::size_t k = static_cast<std::size_t>(it - t->x.begin()) - 1;
        const double f = (xs[i] - t->x[k]) / (t->x[k + 1] - t->x[k]);
        Tx = t->tail[k] + f * (t->tail[k + 1] - t->tail[k]);
      }
      node_tail[i] = std::exp(-c * xs[i]) * Tx - c * integral;
      if (node_tail[i] < 0.0) node_tail[i] = 0.0;
    }
    node_tail.back() = 0.0;
    return tabulated(std::move(xs), std::move(node_tail));
  }
  const auto& comp = std::get<ComposedJumps>(v_);
  auto tilted_base = std::make_shared<SubordinatorSpec>(tilt(*comp.base, c));
  return LevyMeasure(Variant(ComposedJumps{std::move(tilted_base), comp.index}));
}

}  // namespace subord
