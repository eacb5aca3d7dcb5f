#include "subord/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "subord/errors.hpp"
#include "subord/gen_gamma.hpp"
#include "subord/laplace_inversion.hpp"
#include "subord/mittag_leffler.hpp"
#include "subord/quadrature.hpp"

namespace subord {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------- renewal-series engines ----------

// Accumulates point masses, merging locations that agree to ~1e-9 relative so
// float-sum jitter cannot split one lattice point into many.
struct FuzzyMap {
  std::map<double, double> m;
  void add(double loc, double w) {
    const double tol = 1e-9 * (1.0 + loc);
    auto it = m.lower_bound(loc - tol);
    if (it != m.end() && it->first <= loc + tol) {
      it->second += w;
      return;
    }
    m.emplace_hint(it, loc, w);
  }
};

// Atoms of H = sum_{n>=1} (p^n/n) * law(S_n) for a compound-Poisson spec whose
// jump law is purely atomic. Enumeration is windowed: locations past x_cap are
// irrelevant to every downstream use (exponentially damped integrals, density
// searches on bounded grids).
std::vector<HarmonicDensity::Atom> atomic_renewal(const AtomJumps& aj, double q,
                                                  std::string* notes) {
  double total_mass = 0.0, min_loc = kInf, max_loc = 0.0;
  for (const auto& [loc, mass] : aj.atoms) {
    total_mass += mass;
    min_loc = std::min(min_loc, loc);
    max_loc = std::max(max_loc, loc);
  }
  const double p = total_mass / (total_mass + q);
  const double x_cap = 100.0 + 3.0 * max_loc;
  const std::size_t n_cap =
      std::min<std::size_t>(static_cast<std::size_t>(std::ceil(x_cap / min_loc)), 400);

  std::vector<std::pair<double, double>> jump;  // (location, probability)
  jump.reserve(aj.atoms.size());
  for (const auto& [loc, mass] : aj.atoms) jump.emplace_back(loc, mass / total_mass);

  FuzzyMap H;
  FuzzyMap cur;
  for (const auto& [loc, pr] : jump) cur.add(loc, pr);
  double h_total = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= n_cap; ++n) {
    if (n > 1) {
      FuzzyMap next;
      for (const auto& [l1, p1] : cur.m)
        for (const auto& [l2, p2] : jump) {
          const double loc = l1 + l2;
          if (loc > x_cap) continue;
          const double w = p1 * p2;
          if (w < 1e-18) continue;
          next.add(loc, w);
        }
      cur = std::move(next);
      if (cur.m.empty()) break;
    }
    const double w_n = std::pow(p, static_cast<double>(n)) / static_cast<double>(n);
    for (const auto& [loc, pr] : cur.m) {
      H.add(loc, w_n * pr);
      h_total += w_n * pr;
    }
    orders = n;
    if (p < 1.0) {
      // Everything not yet added is at most sum_{k>n} p^k/k <= p^{n+1}/((n+1)(1-p)).
      const double remaining =
          std::pow(p, static_cast<double>(n) + 1.0) / ((static_cast<double>(n) + 1.0) * (1.0 - p));
      if (remaining < 1e-12 * std::max(h_total, 1e-300)) break;
    }
  }
  std::vector<HarmonicDensity::Atom> out;
  out.reserve(H.m.size());
  for (const auto& [loc, mass] : H.m)
    if (mass >= 1e-15 * h_total) out.push_back({loc, mass});
  if (notes) {
    std::ostringstream os;
    os << "atomic renewal series, " << orders << " convolution orders, window [0, " << x_cap
       << "]";
    *notes = os.str();
  }
  return out;
}

// Renewal series of a tabulated jump law on a uniform cell grid. Laws are
// histograms of cell-center masses; convolving two centers lands on a cell
// boundary, whose mass is split 50/50 between the adjacent cells (preserving
// the mean exactly).
struct TabulatedRenewal {
  double x_cap = 0.0;
  double dx = 0.0;
  std::vector<double> rho;  // x * (H density), sampled at cell centers
};

TabulatedRenewal ehp_series(const LevyMeasure& levy, double q, std::string* notes) {
  const int n_cells = 8192;
  const double total_mass = levy.total_mass();
  const double x_end = *levy.support_bound();
  const double mean_jump = levy.small_moment(x_end) / total_mass;
  const double x_cap = 40.0 * mean_jump + 4.0 * x_end;
  const double dx = x_cap / n_cells;
  const double p = total_mass / (total_mass + q);

  const int jcells = std::min(n_cells, static_cast<int>(std::ceil(x_end / dx)));
  std::vector<double> nu(jcells, 0.0);
  for (int j = 0; j < jcells; ++j)
    nu[j] = (levy.tail(j * dx) - levy.tail((j + 1) * dx)) / total_mass;

  std::vector<double> H(n_cells, 0.0);
  std::vector<double> cur(n_cells, 0.0);
  std::copy(nu.begin(), nu.end(), cur.begin());
  double total = 0.0;
  int orders = 0;
  for (int n = 1; n <= 100000; ++n) {
    if (n > 1) {
      std::vector<double> next(n_cells, 0.0);
      for (int i = 0; i < n_cells; ++i) {
        const double m = cur[i];
        if (m == 0.0) continue;
        for (int j = 0; j < jcells; ++j) {
          const int k = i + j;
          if (k >= n_cells) break;
          const double w = 0.5 * m * nu[j];
          next[k] += w;
          if (k + 1 < n_cells) next[k + 1] += w;
        }
      }
      cur.swap(next);
    }
    double retained = 0.0;
    for (double v : cur) retained += v;
    const double w_n = std::pow(p, n) / n;
    if (n > 1 && w_n * retained < 1e-13 * std::max(total, 1e-300)) break;
    for (int i = 0; i < n_cells; ++i) H[i] += w_n * cur[i];
    total += w_n * retained;
    orders = n;
    if (retained <= 0.0) break;
  }
  TabulatedRenewal out;
  out.x_cap = x_cap;
  out.dx = dx;
  out.rho.resize(n_cells);
  for (int i = 0; i < n_cells; ++i) {
    const double center = (i + 0.5) * dx;
    out.rho[i] = center * H[i] / dx;
  }
  if (notes) {
    std::ostringstream os;
    os << "renewal series of the tabulated jump law, " << orders << " orders, " << n_cells
       << " cells on [0, " << x_cap << "]";
    *notes = os.str();
  }
  return out;
}

double ml_rho(double index, double kill_eff, double x) {
  return index * mittag_leffler(index, -kill_eff * std::pow(x, index));
}

// Log-space evaluation of e^{-theta x} [unit + sum_{n>=1} p^n (theta x)^{n beta} / (n Gamma(n beta))]
// where unit is 1 for the drift-balanced variant and 0 otherwise. Terms are
// positive; summation stops once past the peak and below 1e-17 of the total.
double gamma_series_rho(double x, double theta, double beta, double log_p, bool with_unit) {
  const double tx = theta * x;
  const double ltx = std::log(tx);
  const double lead = with_unit ? std::exp(-tx) : 0.0;
  double sum = 0.0, comp = 0.0;
  double prev = -1.0;
  for (int n = 1; n <= 500000; ++n) {
    const double nb = n * beta;
    const double log_term =
        n * log_p + nb * ltx - std::log(static_cast<double>(n)) - std::lgamma(nb) - tx;
    const double term = std::exp(log_term);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (term <= prev && term <= 1e-17 * (sum + 1.0)) return lead + sum;
    prev = term;
  }
  throw NonConvergent("gamma renewal series did not converge");
}

}  // namespace

const char* hpm_rule_name(HpmRule rule) {
  switch (rule) {
    case HpmRule::killed_drift: return "killed_drift";
    case HpmRule::cp_exponential: return "cp_exponential";
    case HpmRule::stable_constant: return "stable_constant";
    case HpmRule::stable_mittag_leffler: return "stable_mittag_leffler";
    case HpmRule::gamma_renewal: return "gamma_renewal";
    case HpmRule::gamma_drift_renewal: return "gamma_drift_renewal";
    case HpmRule::atomic: return "atomic";
    case HpmRule::tabulated_renewal: return "tabulated_renewal";
    case HpmRule::tilted_base: return "tilted_base";
    case HpmRule::timechanged_base: return "timechanged_base";
    case HpmRule::numeric_inversion: return "numeric_inversion";
  }
  return "unknown";
}

const char* id_outcome_name(IdOutcome outcome) {
  switch (outcome) {
    case IdOutcome::InfinitelyDivisible: return "InfinitelyDivisible";
    case IdOutcome::NotID: return "NotID";
    case IdOutcome::Inconclusive: return "Inconclusive";
    case IdOutcome::NotID_Atomic: return "NotID_Atomic";
  }
  return "unknown";
}

HarmonicDensity HarmonicDensity::build(const SubordinatorSpec& spec) {
  HarmonicDensity H;
  H.spec_ = std::make_shared<const SubordinatorSpec>(spec);
  const double q = spec.kill_rate();
  const double a = spec.drift();
  const auto& raw = spec.levy().raw();

  // Transform-aware rules first: they stay exact where the transformed kind
  // alone would lose the closed form (retabulated tails, composed exponents).
  if (spec.origin() == SubordinatorSpec::Origin::tilted && spec.origin_base()) {
    const double c = spec.origin_param();
    HarmonicDensity base = build(*spec.origin_base());
    H.rule_ = HpmRule::tilted_base;
    H.notes_ = "exponential tilt of a base density [" + std::string(hpm_rule_name(base.rule_)) +
               "]";
    if (base.atomic_) {
      H.atomic_ = true;
      H.atoms_ = base.atoms_;
      for (auto& at : H.atoms_) at.mass *= std::exp(-c * at.location);
    } else {
      auto be = base.eval_;
      H.eval_ = [be, c](double x) { return std::exp(-c * x) * be(x); };
    }
    H.support_end_ = base.support_end_;
    if (base.bounded_by_one_.has_value() && *base.bounded_by_one_) H.bounded_by_one_ = true;
    return H;
  }
  if (spec.origin() == SubordinatorSpec::Origin::timechanged && spec.origin_base()) {
    const double gamma = spec.origin_param();
    HarmonicDensity base = build(*spec.origin_base());
    H.rule_ = HpmRule::timechanged_base;
    H.notes_ = "stable time change (index scaling) of a base density [" +
               std::string(hpm_rule_name(base.rule_)) + "]";
    if (base.atomic_) {
      H.atomic_ = true;
      H.atoms_ = base.atoms_;
      for (auto& at : H.atoms_) at.mass *= gamma;
    } else {
      auto be = base.eval_;
      H.eval_ = [be, gamma](double x) { return gamma * be(x); };
    }
    H.support_end_ = base.support_end_;
    if (base.bounded_by_one_.has_value() && *base.bounded_by_one_) H.bounded_by_one_ = true;
    return H;
  }

  if (spec.levy().is_zero()) {
    // phi = q + a*lambda, phi'/phi = 1/(q/a + lambda).
    const double rate = q / a;
    H.rule_ = HpmRule::killed_drift;
    H.eval_ = [rate](double x) { return std::exp(-rate * x); };
    H.bounded_by_one_ = true;
    H.notes_ = "pure-drift exponential form";
    return H;
  }

  if (a == 0.0) {
    if (const auto* e = std::get_if<ExponentialJumps>(&raw)) {
      const double slow = q * e->rate / (q + e->arrival);
      const double fast = e->rate;
      H.rule_ = HpmRule::cp_exponential;
      H.eval_ = [slow, fast](double x) { return std::exp(-slow * x) - std::exp(-fast * x); };
      H.bounded_by_one_ = true;
      H.notes_ = "difference of exponentials";
      return H;
    }
    if (const auto* st = std::get_if<StableJumps>(&raw)) {
      const double index = st->index;
      if (st->tempering == 0.0) {
        if (q == 0.0) {
          H.rule_ = HpmRule::stable_constant;
          H.eval_ = [index](double) { return index; };
          H.bounded_by_one_ = true;
          H.notes_ = "constant density equal to the stable index";
        } else {
          H.rule_ = HpmRule::stable_mittag_leffler;
          H.eval_ = [index, q](double x) { return ml_rho(index, q, x); };
          H.bounded_by_one_ = true;
          H.notes_ = "Mittag-Leffler form for a killed stable spec";
        }
        return H;
      }
      const double c = st->tempering;
      const double kill_eff = q - std::pow(c, index);
      if (kill_eff >= 0.0) {
        H.rule_ = HpmRule::stable_mittag_leffler;
        H.eval_ = [index, c, kill_eff](double x) {
          return std::exp(-c * x) * ml_rho(index, kill_eff, x);
        };
        H.bounded_by_one_ = true;
        H.notes_ = "tempered stable written as a tilt of a killed stable spec";
        return H;
      }
      // kill below the tempering threshold: fall through to numeric inversion.
    }
    if (const auto* g = std::get_if<GammaJumps>(&raw)) {
      const double theta = g->scale, beta = g->shape;
      const double log_p = std::log(g->mass / (g->mass + q));
      H.rule_ = HpmRule::gamma_renewal;
      H.eval_ = [theta, beta, log_p](double x) {
        return gamma_series_rho(x, theta, beta, log_p, false);
      };
      H.notes_ = "renewal series of gamma convolutions";
      return H;
    }
    if (const auto* aj = std::get_if<AtomJumps>(&raw)) {
      H.rule_ = HpmRule::atomic;
      H.atomic_ = true;
      H.atoms_ = atomic_renewal(*aj, q, &H.notes_);
      return H;
    }
    if (const auto* tt = std::get_if<TabulatedTail>(&raw)) {
      (void)tt;
      auto tr = std::make_shared<TabulatedRenewal>(ehp_series(spec.levy(), q, &H.notes_));
      H.rule_ = HpmRule::tabulated_renewal;
      H.support_end_ = tr->x_cap;
      H.eval_ = [tr](double x) {
        if (x >= tr->x_cap) return 0.0;
        const double t = x / tr->dx - 0.5;
        if (t <= 0.0) return tr->rho.front() * (x / (0.5 * tr->dx));
        const auto i = static_cast<std::size_t>(t);
        if (i + 1 >= tr->rho.size()) return tr->rho.back() * ((tr->x_cap - x) / (0.5 * tr->dx));
        const double f = t - static_cast<double>(i);
        return tr->rho[i] * (1.0 - f) + tr->rho[i + 1] * f;
      };
      return H;
    }
  }

  if (a > 0.0 && q == 0.0) {
    // Drift-balanced renewal closed form: arrival mass equal to drift*scale.
    double theta = 0.0, beta = 0.0;
    bool matched = false;
    if (const auto* e = std::get_if<ExponentialJumps>(&raw)) {
      if (std::abs(e->arrival - a * e->rate) <= 1e-12 * e->arrival) {
        theta = e->rate;
        beta = 1.0;
        matched = true;
      }
    } else if (const auto* g = std::get_if<GammaJumps>(&raw)) {
      if (std::abs(g->mass - a * g->scale) <= 1e-12 * g->mass) {
        theta = g->scale;
        beta = g->shape;
        matched = true;
      }
    }
    if (matched) {
      H.rule_ = HpmRule::gamma_drift_renewal;
      H.eval_ = [theta, beta](double x) {
        return gamma_series_rho(x, theta, 1.0 + beta, 0.0, true);
      };
      H.notes_ = "drift-balanced renewal series";
      return H;
    }
  }

  // Numeric route: pointwise Talbot inversion of phi'/phi, validated at build
  // time by the forward transform at a few probe points.
  auto sp = H.spec_;
  InversionConfig icfg;
  H.rule_ = HpmRule::numeric_inversion;
  H.eval_ = [sp, icfg](double x) {
    return laplace_invert(
        [sp](std::complex<double> s) { return sp->phi_prime(s) / sp->phi(s); }, x, icfg);
  };
  H.notes_ = "numeric inverse Laplace transform of phi'/phi (validated at build)";
  for (double probe : {1.0, 2.0, 5.0}) {
    const double resid = H.laplace_residual(probe);
    if (!(resid < 1e-7)) {
      std::ostringstream os;
      os << "inverse transform of phi'/phi failed validation: forward residual " << resid
         << " at lambda = " << probe;
      throw InversionUnstable(os.str());
    }
  }
  return H;
}

double HarmonicDensity::operator()(double x) const {
  if (atomic_)
    throw SpecError("harmonic potential measure is purely atomic; it has no density");
  if (!(x > 0.0)) throw SpecError("density requires x > 0");
  return eval_(x);
}

double HarmonicDensity::laplace_residual(double lambda) const {
  if (!(lambda > 0.0)) throw SpecError("laplace_residual requires lambda > 0");
  const double target = spec_->log_derivative(lambda);
  if (atomic_) {
    double s = 0.0;
    for (const auto& at : atoms_) s += at.location * at.mass * std::exp(-lambda * at.location);
    return std::abs(s - target);
  }
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-9;
  cfg.rel_tol = 1e-9;
  const auto f = [&](double x) { return std::exp(-lambda * x) * eval_(x); };
  const auto f_tail = [&](double u) { return f(1.0 + u); };
  const double val = integrate(f, 0.0, 1.0, cfg) + integrate_to_inf(f_tail, cfg);
  return std::abs(val - target);
}

IdVerdict id_test_logI(const SubordinatorSpec& spec, const IdSearchConfig& cfg) {
  IdVerdict v;
  v.tolerance_band = cfg.band;
  if (spec.drift() > 0.0 && !spec.levy().is_zero()) {
    v.outcome = IdOutcome::NotID;
    v.notes = "positive drift together with a nonzero jump measure";
    return v;
  }
  const HarmonicDensity H = HarmonicDensity::build(spec);
  if (H.is_atomic()) {
    v.outcome = IdOutcome::NotID_Atomic;
    v.notes = "harmonic potential measure is purely atomic, so dx - x H(dx) fails at the atoms";
    return v;
  }

  double lo = cfg.x_lo, hi = cfg.x_hi;
  bool clipped = false;
  if (H.support_end() && hi > *H.support_end()) {
    hi = *H.support_end() * 0.999;
    clipped = true;
  }
  const int n = std::max(cfg.grid_points, 8);
  const double step = std::log(hi / lo) / (n - 1);
  const double ratio = std::exp(step);

  // Golden-section maximization of rho over [a, b].
  const auto refine = [&](double a, double b) {
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = H(x1), f2 = H(x2);
    for (int it = 0; it < 48; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = H(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = H(x1);
      }
    }
    return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
  };

  double sup = -kInf, best_x = lo;
  for (int i = 0; i < n; ++i) {
    const double x = lo * std::exp(step * i);
    const double r = H(x);
    if (r > sup) {
      sup = r;
      best_x = x;
    }
    if (r > 1.0 + cfg.band) {
      const auto [wx, wr] = refine(std::max(lo, x / ratio), std::min(hi, x * ratio));
      v.outcome = IdOutcome::NotID;
      v.sup_rho = std::max(sup, wr);
      v.witness_x = wr >= r ? wx : x;
      v.witness_rho = std::max(wr, r);
      v.notes = "density exceeds 1 beyond the tolerance band";
      return v;
    }
  }
  const auto [rx, rr] = refine(std::max(lo, best_x / ratio), std::min(hi, best_x * ratio));
  sup = std::max(sup, rr);
  v.sup_rho = sup;
  if (sup > 1.0 + cfg.band) {
    v.outcome = IdOutcome::NotID;
    v.witness_x = rx;
    v.witness_rho = rr;
    v.notes = "density exceeds 1 beyond the tolerance band";
    return v;
  }
  const bool certified = H.bounded_by_one().has_value() && *H.bounded_by_one();
  if (certified) {
    v.outcome = IdOutcome::InfinitelyDivisible;
    v.notes = "closed form certifies the density stays at or below 1";
    return v;
  }
  if (sup < 1.0 - cfg.band) {
    v.outcome = IdOutcome::InfinitelyDivisible;
    v.notes = clipped ? "density below 1 on the searched window (clipped to the computed support)"
                      : "density below 1 on the searched window";
    return v;
  }
  v.outcome = IdOutcome::Inconclusive;
  v.notes = "supremum of the density sits inside the tolerance band around 1";
  return v;
}

double undershoot_laplace_G(const SubordinatorSpec& spec, double alpha, double lambda) {
  if (!(alpha > 0.0) || !(lambda >= 0.0))
    throw SpecError("undershoot transforms require alpha > 0 and lambda >= 0");
  return spec.phi(alpha) / spec.phi(alpha + lambda);
}

double undershoot_laplace_U(const SubordinatorSpec& spec, double alpha, double lambda) {
  if (!(alpha > 0.0) || !(lambda >= 0.0))
    throw SpecError("undershoot transforms require alpha > 0 and lambda >= 0");
  return alpha / spec.phi(alpha) * spec.phi(alpha + lambda) / (alpha + lambda);
}

DensityWithAtom undershoot_law(const SubordinatorSpec& spec, double alpha) {
  if (!(alpha > 0.0)) throw SpecError("undershoot_law requires alpha > 0");
  DensityWithAtom law;
  const double phia = spec.phi(alpha);
  law.atom_at_zero = alpha * spec.drift() / phia;
  auto sp = std::make_shared<SubordinatorSpec>(spec);
  law.density = [sp, alpha, phia](double x) {
    if (!(x > 0.0)) throw SpecError("density requires x > 0");
    return alpha / phia * std::exp(-alpha * x) * sp->levy_tail(x);
  };
  return law;
}

double undershoot_density(const SubordinatorSpec& spec, double alpha, double x) {
  return undershoot_law(spec, alpha).density(x);
}

namespace {

struct PotentialForm {
  double atom0 = 0.0;
  std::function<double(double)> v;
};

PotentialForm potential_catalog(const SubordinatorSpec& spec) {
  const double q = spec.kill_rate(), a = spec.drift();
  if (spec.levy().is_zero()) {
    const double rate = q / a;
    return {0.0, [a, rate](double x) { return std::exp(-rate * x) / a; }};
  }
  if (a == 0.0) {
    if (const auto* e = std::get_if<ExponentialJumps>(&spec.levy().raw())) {
      const double denom = q + e->arrival;
      const double slow = q * e->rate / denom;
      const double scale = e->arrival * e->rate / (denom * denom);
      return {1.0 / denom, [scale, slow](double x) { return scale * std::exp(-slow * x); }};
    }
    if (const auto* st = std::get_if<StableJumps>(&spec.levy().raw())) {
      if (st->tempering == 0.0 && q == 0.0) {
        const double index = st->index;
        const double norm = std::tgamma(index);
        return {0.0, [index, norm](double x) { return std::pow(x, index - 1.0) / norm; }};
      }
    }
  }
  throw NoClosedFormPotential("no catalog closed form for the potential measure of this spec");
}

}  // namespace

DensityWithAtom G_law(const SubordinatorSpec& spec, double alpha) {
  if (!(alpha > 0.0)) throw SpecError("G_law requires alpha > 0");
  PotentialForm pot = potential_catalog(spec);
  DensityWithAtom law;
  const double phia = spec.phi(alpha);
  law.atom_at_zero = phia * pot.atom0;
  law.density = [pot, phia, alpha](double x) {
    if (!(x > 0.0)) throw SpecError("density requires x > 0");
    return phia * std::exp(-alpha * x) * pot.v(x);
  };
  return law;
}

double G_density(const SubordinatorSpec& spec, double alpha, double x) {
  return G_law(spec, alpha).density(x);
}

namespace {

double logr_kernel(double x, double lambda) {
  // (e^{-lambda x} - 1 + lambda x) / (x (e^x - 1)); the numerator cancels to
  // O((lambda x)^2), so switch to its series when lambda x is small.
  const double lx = lambda * x;
  if (std::abs(lx) < 1e-4) {
    const double num = lambda * lambda * x * x * (0.5 - lx / 6.0 + lx * lx / 24.0);
    return num / (x * std::expm1(x));
  }
  return (std::expm1(-lx) + lx) / (x * std::expm1(x));
}

double integral_against_density(const HarmonicDensity& H,
                                const std::function<double(double)>& weight) {
  if (H.is_atomic()) {
    double s = 0.0;
    for (const auto& at : H.atoms()) s += at.location * at.mass * weight(at.location);
    return s;
  }
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-11;
  cfg.rel_tol = 1e-10;
  const auto f = [&](double x) { return H(x) * weight(x); };
  const auto f_tail = [&](double u) { return f(1.0 + u); };
  return integrate(f, 0.0, 1.0, cfg) + integrate_to_inf(f_tail, cfg);
}

}  // namespace

LogRExponent logR_exponent(const SubordinatorSpec& spec, double lambda) {
  return logR_exponent(spec, lambda, HarmonicDensity::build(spec));
}

LogRExponent logR_exponent(const SubordinatorSpec& spec, double lambda,
                           const HarmonicDensity& density) {
  if (!(lambda > -1.0)) throw SpecError("logR_exponent requires lambda > -1");
  LogRExponent out;
  GenGamma gg(phi_family(spec));
  out.via_gamma = gg.log_gamma(lambda + 1.0);
  const double euler = gg.euler_constant();
  const double integral = integral_against_density(
      density, [lambda](double x) { return logr_kernel(x, lambda); });
  out.via_integral = -lambda * euler + integral;
  return out;
}

double logR_levy_density(const SubordinatorSpec& spec, double x) {
  return logR_levy_density(HarmonicDensity::build(spec), x);
}

double logR_levy_density(const HarmonicDensity& density, double x) {
  if (!(x > 0.0)) throw SpecError("logR_levy_density requires x > 0");
  return density(x) / (x * std::expm1(x));
}

SdReport sd_diagnostic(const SubordinatorSpec& spec, const std::vector<double>& grid) {
  if (grid.size() < 2) throw SpecError("sd_diagnostic needs at least two grid points");
  std::vector<double> g = grid;
  std::sort(g.begin(), g.end());
  if (!(g.front() > 0.0)) throw SpecError("sd_diagnostic grid must be positive");
  const HarmonicDensity H = HarmonicDensity::build(spec);
  SdReport rep;
  double prev = H(g[0]) / std::expm1(g[0]);
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double cur = H(g[i]) / std::expm1(g[i]);
    const double rise = cur - prev;
    if (rise > 1e-12 * (1.0 + std::abs(prev))) {
      if (!rep.first_violation_x) rep.first_violation_x = g[i];
      rep.nonincreasing = false;
      rep.worst_rise = std::max(rep.worst_rise, rise);
    }
    prev = cur;
  }
  return rep;
}

double conjugate_check(const SubordinatorSpec& primal, const SubordinatorSpec& dual,
                       const std::vector<double>& grid) {
  if (grid.empty()) throw SpecError("conjugate_check needs a nonempty grid");
  const HarmonicDensity hp = HarmonicDensity::build(primal);
  const HarmonicDensity hd = HarmonicDensity::build(dual);
  double worst = 0.0;
  for (double x : grid) {
    if (!(x > 0.0)) throw SpecError("conjugate_check grid must be positive");
    worst = std::max(worst, std::abs(hp(x) + hd(x) - 1.0));
  }
  return worst;
}

namespace {

// Jump density of the catalog kinds that admit one.
std::function<double(double)> levy_density(const SubordinatorSpec& spec) {
  if (const auto* e = std::get_if<ExponentialJumps>(&spec.levy().raw())) {
    const double c0 = e->arrival, r = e->rate;
    return [c0, r](double y) { return c0 * r * std::exp(-r * y); };
  }
  if (const auto* st = std::get_if<StableJumps>(&spec.levy().raw())) {
    const double index = st->index, c = st->tempering;
    const double norm = index / std::tgamma(1.0 - index);
    return [index, c, norm](double y) {
      return norm * std::pow(y, -1.0 - index) * std::exp(-c * y);
    };
  }
  if (const auto* g = std::get_if<GammaJumps>(&spec.levy().raw())) {
    const double mass = g->mass, beta = g->shape, theta = g->scale;
    const double norm = mass * std::pow(theta, beta) / std::tgamma(beta);
    return [norm, beta, theta](double y) {
      return norm * std::pow(y, beta - 1.0) * std::exp(-theta * y);
    };
  }
  return {};
}

}  // namespace

double convolution_identity_check(const SubordinatorSpec& spec, const std::vector<double>& grid) {
  if (grid.empty()) throw SpecError("convolution_identity_check needs a nonempty grid");
  const PotentialForm pot = potential_catalog(spec);
  const HarmonicDensity H = HarmonicDensity::build(spec);
  const double a = spec.drift();
  const double sing = spec.levy().tail_singularity();
  std::function<double(double)> pi;
  if (!spec.levy().is_zero()) {
    pi = levy_density(spec);
    if (!pi) throw NoClosedFormPotential("no jump density available for the identity check");
  }
  double worst = 0.0;
  for (double x : grid) {
    if (!(x > 0.0)) throw SpecError("convolution_identity_check grid must be positive");
    double rhs = a > 0.0 ? a * pot.v(x) : 0.0;
    if (pi) {
      rhs += pot.atom0 * x * pi(x);
      QuadratureConfig left_cfg;
      left_cfg.abs_tol = 1e-11;
      left_cfg.rel_tol = 1e-10;
      left_cfg.singularity_pow = sing;  // y*pi(y) ~ y^{-sing} near 0
      const auto left = [&](double y) { return pot.v(x - y) * y * pi(y); };
      rhs += integrate(left, 0.0, 0.5 * x, left_cfg);
      QuadratureConfig right_cfg;
      right_cfg.abs_tol = 1e-11;
      right_cfg.rel_tol = 1e-10;
      right_cfg.singularity_pow = sing > 0.0 ? 1.0 - sing : 0.0;  // v(z) ~ z^{sing-1} near 0
      const auto right = [&](double z) { return pot.v(z) * (x - z) * pi(x - z); };
      rhs += integrate(right, 0.0, 0.5 * x, right_cfg);
    }
    worst = std::max(worst, std::abs(H(x) - rhs));
  }
  return worst;
}

}  // namespace subord
