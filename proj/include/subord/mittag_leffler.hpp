#pragma once

namespace subord {

// One-parameter Mittag-Leffler function E_alpha(z) for alpha in (0,1], real z.
//
// Power series with compensated summation for z >= -2; for z < -2 the
// completely monotone spectral form
//   E_alpha(-x) = int_0^inf e^{-r x^{1/alpha}} K_alpha(r) dr,
//   K_alpha(r) = (sin(alpha pi)/pi) r^{alpha-1} / (r^{2 alpha} + 2 r^alpha cos(alpha pi) + 1),
// is integrated instead, because the alternating series cancels catastrophically.
// Large positive z overflows where e^{z^{1/alpha}} overflows; that is a range
// limit of the value itself, not of the method.
double mittag_leffler(double alpha, double z);

}  // namespace subord
