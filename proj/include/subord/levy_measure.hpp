#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace subord {

class SubordinatorSpec;

struct NoJumps {};

// Compound Poisson, arrival rate `arrival`, Exp(rate) jump sizes:
// Pi(dx) = arrival * rate * e^{-rate x} dx.
struct ExponentialJumps {
  double rate = 1.0;
  double arrival = 1.0;
};

// Pi(dx) = mass * scale^shape x^{shape-1} e^{-scale x} / Gamma(shape) dx.
// Total mass `mass`; scale appears so the family is closed under tilting.
struct GammaJumps {
  double mass = 1.0;
  double shape = 1.0;
  double scale = 1.0;
};

// Pi(dx) = (index / Gamma(1-index)) x^{-1-index} e^{-tempering x} dx.
// tempering = 0 gives the exact normalization with jump exponent lambda^index;
// tempering > 0 arises from tilting and keeps the family closed.
struct StableJumps {
  double index = 0.5;
  double tempering = 0.0;
};

// Finite list of (location, mass) point masses, locations strictly increasing.
struct AtomJumps {
  std::vector<std::pair<double, double>> atoms;
};

// Upper tail Pi((t,inf)) sampled on a grid, interpolated linearly, constant
// left of the first node and zero past the last. The last value must be 0
// (anything else hides an atom at the boundary).
struct TabulatedTail {
  std::vector<double> x;
  std::vector<double> tail;
};

// Jump part of a stable time change: exponent (phi_base(lambda))^index - q_base^index.
// No closed-form measure; only exponent-level operations are available.
struct ComposedJumps {
  std::shared_ptr<const SubordinatorSpec> base;
  double index = 0.5;
};

class LevyMeasure {
 public:
  using Variant = std::variant<NoJumps, ExponentialJumps, GammaJumps, StableJumps, AtomJumps,
                               TabulatedTail, ComposedJumps>;

  LevyMeasure() : v_(NoJumps{}) {}
  explicit LevyMeasure(Variant v);

  static LevyMeasure none() { return LevyMeasure(); }
  static LevyMeasure exponential(double rate, double arrival = 1.0);
  static LevyMeasure gamma_jumps(double mass, double shape, double scale = 1.0);
  static LevyMeasure stable(double index, double tempering = 0.0);
  static LevyMeasure atoms(std::vector<std::pair<double, double>> locations_masses);
  static LevyMeasure tabulated(std::vector<double> x, std::vector<double> tail);

  bool is_zero() const { return std::holds_alternative<NoJumps>(v_); }
  const Variant& raw() const { return v_; }

  // psi(lambda) = int (1 - e^{-lambda x}) Pi(dx) and its first two derivatives.
  double exponent(double lambda) const;
  std::complex<double> exponent(std::complex<double> lambda) const;
  double exponent_prime(double lambda) const;
  std::complex<double> exponent_prime(std::complex<double> lambda) const;
  double exponent_second(double lambda) const;

  // Pi((x, inf)). Unavailable for composed jumps.
  double tail(double x) const;
  // Pi((0, inf)); +inf for stable kinds.
  double total_mass() const;
  // Finite upper bound of the jump support, when there is one.
  std::optional<double> support_bound() const;
  // int_0^eps x Pi(dx), the compensation drift for eps-truncated simulation.
  double small_moment(double eps) const;
  // Exponent p of the x^{-p} blowup of tail(x) at 0 (quadrature hint).
  double tail_singularity() const;

  LevyMeasure tilted(double c) const;

 private:
  Variant v_;
};

}  // namespace subord
