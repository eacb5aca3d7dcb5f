#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace subord {

// One-sample Kolmogorov-Smirnov statistic against a continuous cdf.
// Samples are copied and sorted internally.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Asymptotic Kolmogorov tail: p = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2)
// at t = sqrt(n) * D, series truncated once terms drop below 1e-12.
double kolmogorov_pvalue(double sqrt_n_times_stat);

struct KsReport {
  double stat = 0.0;
  double pvalue = 0.0;
  std::size_t n = 0;
};

KsReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace subord
