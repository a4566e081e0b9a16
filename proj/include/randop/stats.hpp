#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace randop {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(M)
  std::size_t samples = 0;
};

// Sums in index order, so the result depends only on the values.
McEstimate summarize(std::span<const double> values);

// sup |F_n - F| against Exponential(rate).
double ks_exponential(std::vector<double> samples, double rate);

struct CountBin {
  std::size_t lo = 0;  // counts k with lo <= k <= hi
  std::size_t hi = 0;  // hi == SIZE_MAX marks the open upper tail
  std::size_t observed = 0;
  double expected = 0.0;
};

struct ChiSquareResult {
  std::vector<CountBin> bins;
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson chi-square of observed counts against Poisson(mean). Tail bins are
// merged until each expected frequency is at least min_expected.
ChiSquareResult chi_square_poisson(std::span<const std::size_t> counts, double mean, double min_expected = 5.0);

double poisson_pmf(std::size_t k, double mean);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace randop
