#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "subord/subordinator.hpp"

namespace subord {

// Which rule produced a harmonic potential density.
enum class HpmRule {
  killed_drift,       // rho(x) = e^{-qx/a}
  cp_exponential,     // rho(x) = e^{-q r x/(q+c0)} - e^{-r x}
  stable_constant,    // rho == index (unkilled stable)
  stable_mittag_leffler,  // rho(x) = index * E_index(-q x^index)
  gamma_renewal,          // compound Poisson with gamma jumps, a = 0
  gamma_drift_renewal,    // gamma jumps with drift, q = 0, arrival = drift*scale
  atomic,                 // purely atomic H (compound Poisson on a lattice)
  tabulated_renewal,      // harmonic renewal series of a tabulated jump law
  tilted_base,            // rho(x) = e^{-cx} * rho_base(x)
  timechanged_base,       // rho(x) = gamma * rho_base(x)
  numeric_inversion       // Talbot inversion of phi'/phi
};

const char* hpm_rule_name(HpmRule rule);

// Density rho of the harmonic potential measure H with respect to dx/x:
// H(dx) = rho(x) dx/x, equivalently int e^{-lambda x} rho(x) dx = phi'/phi.
class HarmonicDensity {
 public:
  struct Atom {
    double location = 0.0;
    double mass = 0.0;  // mass of H at the location
  };

  static HarmonicDensity build(const SubordinatorSpec& spec);

  // Density value at x > 0. Throws SpecError for purely atomic H.
  double operator()(double x) const;

  bool is_atomic() const { return atomic_; }
  // Atoms of H (purely atomic case), locations increasing, truncated where
  // the remaining mass is below 1e-12.
  const std::vector<Atom>& atoms() const { return atoms_; }

  HpmRule rule() const { return rule_; }
  const std::string& notes() const { return notes_; }

  // End of the window the density was computed on, when the producing rule is
  // window-limited (renewal series of a tabulated measure); nullopt otherwise.
  std::optional<double> support_end() const { return support_end_; }

  // Analytic certificate that rho <= 1 everywhere (or that it exceeds 1),
  // when the producing rule supplies one; nullopt means undecided.
  std::optional<bool> bounded_by_one() const { return bounded_by_one_; }

  // | int_0^inf e^{-lambda x} rho(x) dx - phi'(lambda)/phi(lambda) |,
  // the defining Laplace identity, evaluated by quadrature (works for the
  // atomic case too, where the integral is sum location*mass*e^{-lambda*loc}).
  double laplace_residual(double lambda) const;

 private:
  HarmonicDensity() = default;
  std::function<double(double)> eval_;
  bool atomic_ = false;
  std::vector<Atom> atoms_;
  HpmRule rule_ = HpmRule::numeric_inversion;
  std::string notes_;
  std::optional<bool> bounded_by_one_;
  std::optional<double> support_end_;
  std::shared_ptr<const SubordinatorSpec> spec_;
};

enum class IdOutcome { InfinitelyDivisible, NotID, Inconclusive, NotID_Atomic };

const char* id_outcome_name(IdOutcome outcome);

struct IdVerdict {
  IdOutcome outcome = IdOutcome::Inconclusive;
  std::optional<double> witness_x;    // where rho exceeds 1 (NotID by search)
  std::optional<double> witness_rho;  // rho at the witness
  double sup_rho = 0.0;               // grid supremum after refinement
  double tolerance_band = 1e-4;
  std::string notes;
};

struct IdSearchConfig {
  double x_lo = 1e-3;
  double x_hi = 1e3;
  int grid_points = 400;
  double band = 1e-4;
};

// Decide infinite divisibility of log I through the rho <= 1 criterion.
// Shortcut rules fire before any search: positive drift with nonzero jump
// measure reports NotID; purely atomic H reports NotID_Atomic.
IdVerdict id_test_logI(const SubordinatorSpec& spec, const IdSearchConfig& cfg = {});

// Laplace transforms at an independent Exp(alpha) level:
//   E e^{-lambda G} = phi(alpha)/phi(alpha+lambda)
//   E e^{-lambda U} = (alpha/phi(alpha)) * phi(alpha+lambda)/(alpha+lambda)
double undershoot_laplace_G(const SubordinatorSpec& spec, double alpha, double lambda);
double undershoot_laplace_U(const SubordinatorSpec& spec, double alpha, double lambda);

// A law on [0, inf) split into a point mass at zero and a density on (0, inf).
struct DensityWithAtom {
  double atom_at_zero = 0.0;
  std::function<double(double)> density;
};

// Law of the undershoot U = e_alpha - G: atom alpha*a/phi(alpha) at zero,
// density (alpha/phi(alpha)) e^{-alpha x} (q + Pi((x,inf))).
DensityWithAtom undershoot_law(const SubordinatorSpec& spec, double alpha);
double undershoot_density(const SubordinatorSpec& spec, double alpha, double x);

// Law of G at an Exp(alpha) level: phi(alpha) e^{-alpha x} V(dx), available
// when the potential measure V has a catalog closed form (killed/pure drift,
// compound Poisson with exponential jumps, unkilled stable). Throws
// NoClosedFormPotential otherwise.
DensityWithAtom G_law(const SubordinatorSpec& spec, double alpha);
double G_density(const SubordinatorSpec& spec, double alpha, double x);

// Laplace exponent of log R evaluated two ways: through log Gamma_phi(lambda+1)
// and through the integral representation
//   -lambda*gamma_phi + int (e^{-lambda x} - 1 + lambda x) e^{-x} rho(x) / ((1-e^{-x}) x) dx.
struct LogRExponent {
  double via_gamma = 0.0;
  double via_integral = 0.0;
};
LogRExponent logR_exponent(const SubordinatorSpec& spec, double lambda);
LogRExponent logR_exponent(const SubordinatorSpec& spec, double lambda,
                           const HarmonicDensity& density);

// Density at -x of the Levy measure of log R: rho(x) / (x (e^x - 1)).
double logR_levy_density(const SubordinatorSpec& spec, double x);
double logR_levy_density(const HarmonicDensity& density, double x);

// Diagnostic (not a proof) consistent with self-decomposability of log R:
// x * logR_levy_density(x) = rho(x)/(e^x - 1) nonincreasing on the grid.
struct SdReport {
  bool nonincreasing = true;
  std::optional<double> first_violation_x;
  double worst_rise = 0.0;
};
SdReport sd_diagnostic(const SubordinatorSpec& spec, const std::vector<double>& grid);

// max over the grid of |rho(x) + rho*(x) - 1| for a conjugate pair.
double conjugate_check(const SubordinatorSpec& primal, const SubordinatorSpec& dual,
                       const std::vector<double>& grid);

// max over the grid of |rho(x) - a v(x) - V0 x pi(x) - int_0^x v(x-y) y pi(y) dy|
// where (V0, v) are the atom and density of the catalog potential measure and
// pi is the jump density (the x H = V-convolution identity).
double convolution_identity_check(const SubordinatorSpec& spec, const std::vector<double>& grid);

}  // namespace subord
