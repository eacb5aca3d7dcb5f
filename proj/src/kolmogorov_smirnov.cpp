#include "subord/kolmogorov_smirnov.hpp"

#include <algorithm>
#include <cmath>

#include "subord/errors.hpp"

namespace subord {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw SpecError("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - F;  // step above
    const double lo = F - static_cast<double>(i) / n;          // step below
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

double kolmogorov_pvalue(double sqrt_n_times_stat) {
  const double t = sqrt_n_times_stat;
  if (!(t > 0.0)) return 1.0;
  if (t < 0.2) return 1.0;  // survival is 1 to far beyond double precision
  // p = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2), truncated at 1e-12.
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k & 1) ? term : -term;
    if (term < 1e-12) break;
  }
  const double p = 2.0 * sum;
  return std::min(1.0, std::max(0.0, p));
}

KsReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  KsReport r;
  r.n = samples.size();
  r.stat = ks_statistic(std::move(samples), cdf);
  r.pvalue = kolmogorov_pvalue(std::sqrt(static_cast<double>(r.n)) * r.stat);
  return r;
}

}  // namespace subord
