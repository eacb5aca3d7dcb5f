#pragma once

namespace subord {

// Regularized incomplete gamma functions, P(a,x) + Q(a,x) = 1, a > 0, x >= 0.
// Series for x < a+1, Lentz continued fraction otherwise (Numerical Recipes
// style gammp/gammq).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper incomplete gamma with a negative parameter, Gamma(-s, x) for
// 0 < s < 1, x > 0, via the recurrence Gamma(a+1,x) = a Gamma(a,x) + x^a e^{-x}.
double upper_gamma_neg(double s, double x);

}  // namespace subord
