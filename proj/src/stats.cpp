#include "randop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "randop/errors.hpp"

namespace randop {

McEstimate summarize(std::span<const double> values) {
  McEstimate e;
  e.samples = values.size();
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    e.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return e;
}

double ks_exponential(std::vector<double> samples, double rate) {
  if (!(rate > 0)) throw InvalidArgument("exponential rate must be > 0");
  if (samples.empty()) throw InvalidArgument("KS statistic needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = samples[i] > 0 ? -std::expm1(-rate * samples[i]) : 0.0;
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double poisson_pmf(std::size_t k, double mean) {
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::poisson_distribution<double>(mean), static_cast<double>(k));
}

ChiSquareResult chi_square_poisson(std::span<const std::size_t> counts, double mean, double min_expected) {
  if (!(mean > 0)) throw InvalidArgument("Poisson mean must be > 0");
  if (counts.empty()) throw InvalidArgument("chi-square needs observations");
  const double m = static_cast<double>(counts.size());
  const std::size_t kmax = *std::max_element(counts.begin(), counts.end());
  std::vector<std::size_t> hist(kmax + 1, 0);
  for (auto c : counts) ++hist[c];

  // Single-count cells up to a generous cutoff, then merge from both ends.
  const std::size_t cutoff = std::max<std::size_t>(kmax, static_cast<std::size_t>(mean + 10.0 * std::sqrt(mean) + 10.0));
  std::vector<CountBin> cells;
  double acc = 0.0;
  for (std::size_t k = 0; k <= cutoff; ++k) {
    const double p = poisson_pmf(k, mean);
    acc += p;
    cells.push_back({k, k, k < hist.size() ? hist[k] : 0, m * p});
  }
  cells.back().hi = std::numeric_limits<std::size_t>::max();
  cells.back().expected += m * std::max(0.0, 1.0 - acc);

  std::vector<CountBin> bins;
  CountBin cur = cells.front();
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cur.expected < min_expected) {
      cur.hi = cells[i].hi;
      cur.observed += cells[i].observed;
      cur.expected += cells[i].expected;
    } else {
      bins.push_back(cur);
      cur = cells[i];
    }
  }
  if (cur.expected < min_expected && !bins.empty()) {
    bins.back().hi = cur.hi;
    bins.back().observed += cur.observed;
    bins.back().expected += cur.expected;
  } else {
    bins.push_back(cur);
  }

  ChiSquareResult r;
  r.bins = std::move(bins);
  for (const auto& b : r.bins) r.statistic += (b.observed - b.expected) * (b.observed - b.expected) / b.expected;
  r.dof = static_cast<int>(r.bins.size()) - 1;
  r.p_value = r.dof > 0 ? boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic) : 1.0;
  return r;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("least squares needs matching data, n >= 2");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("least squares: abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace randop
