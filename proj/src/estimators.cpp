#include "randop/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "randop/errors.hpp"

namespace randop {

namespace {

void require_samples(const McConfig& config) {
  if (config.samples < 1) throw InvalidArgument("sample count must be >= 1");
}

// Runs body(r, sample) for every realization, tagging numerical faults with
// the realization index.
template <class Body>
void each_realization(const McConfig& config, const SampleFactory& factory, Body&& body) {
  for_each_index(config.samples, config.exec, [&](std::size_t r) {
    const auto sample = factory.realize({config.seed, r});
    try {
      body(r, sample);
    } catch (const NumericalFault& e) {
      if (e.realization()) throw;
      throw NumericalFault(e.what(), r);
    }
  });
}

std::vector<RVector> realization_spectra(const McConfig& config) {
  require_samples(config);
  const SampleFactory factory(config.model);
  std::vector<RVector> spectra(config.samples);
  each_realization(config, factory,
                   [&](std::size_t r, const HamiltonianSample& s) { spectra[r] = eigenvalues_hermitian(s.matrix()); });
  return spectra;
}

std::size_t count_at_most(const RVector& ev, double e) {
  return static_cast<std::size_t>(std::upper_bound(ev.data(), ev.data() + ev.size(), e) - ev.data());
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

BoundCheck make_bound_check(const McEstimate& estimate, double bound) {
  BoundCheck c;
  c.estimate = estimate;
  c.bound = bound;
  c.slack = bound - estimate.mean;
  if (estimate.std_error > 0) {
    c.z_score = c.slack / estimate.std_error;
  } else {
    c.z_score = c.slack == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), c.slack);
  }
  c.pass = estimate.mean <= bound + 3.0 * estimate.std_error;
  return c;
}

double minami_bound(int n, double rho_inf) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  return std::pow(std::numbers::pi * rho_inf, n);
}

double wegner_bound(int n, double rho_inf, double interval_length, SiteIndex volume) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  return std::pow(std::numbers::pi * rho_inf * interval_length * static_cast<double>(volume), n) / factorial(n);
}

ComplexEnergy wegner_energy(Interval j) {
  if (!(j.hi > j.lo)) throw InvalidArgument("interval must have positive length");
  return ComplexEnergy(0.5 * (j.lo + j.hi), 0.5 * j.length());
}

std::vector<double> minami_samples(const McConfig& config, ComplexEnergy z, std::span<const SiteIndex> delta) {
  require_samples(config);
  const SampleFactory factory(config.model);
  const std::vector<SiteIndex> sites(delta.begin(), delta.end());
  std::vector<double> values(config.samples);
  each_realization(config, factory, [&](std::size_t r, const HamiltonianSample& s) {
    values[r] = det_im(green_block(s.matrix(), z, sites));
  });
  return values;
}

BoundCheck mc_minami(const McConfig& config, ComplexEnergy z, std::span<const SiteIndex> delta) {
  const auto values = minami_samples(config, z, delta);
  return make_bound_check(summarize(values),
                          minami_bound(static_cast<int>(delta.size()), config.model.density.sup_density()));
}

WegnerLevels mc_wegner_levels(const McConfig& config, Interval j, int n_max) {
  if (n_max < 1) throw InvalidArgument("n must be >= 1");
  if (!(j.hi > j.lo) || !std::isfinite(j.lo) || !std::isfinite(j.hi))
    throw InvalidArgument("interval must be bounded with positive length");
  require_samples(config);
  const SampleFactory factory(config.model);
  WegnerLevels out;
  out.counts.assign(config.samples, 0);
  each_realization(config, factory, [&](std::size_t r, const HamiltonianSample& s) {
    const RVector ev = eigenvalues_hermitian(s.matrix());
    out.counts[r] = count_eigenvalues(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())), j);
  });

  std::size_t zeros = 0;
  for (auto c : out.counts) zeros += c == 0 ? 1 : 0;
  out.zero_count_frequency = static_cast<double>(zeros) / static_cast<double>(config.samples);

  const double rho = config.model.density.sup_density();
  std::vector<double> indicator(config.samples);
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t r = 0; r < config.samples; ++r)
      indicator[r] = out.counts[r] >= static_cast<std::size_t>(n) ? 1.0 : 0.0;
    out.checks.push_back(make_bound_check(summarize(indicator), wegner_bound(n, rho, j.length(), config.model.box.volume())));
  }
  return out;
}

BoundCheck mc_wegner_nlevel(const McConfig& config, Interval j, int n) {
  return mc_wegner_levels(config, j, n).checks.back();
}

std::vector<McEstimate> ids_curve(const McConfig& config, std::span<const double> energies) {
  const auto spectra = realization_spectra(config);
  const double volume = static_cast<double>(config.model.box.volume());
  std::vector<McEstimate> out;
  std::vector<double> values(config.samples);
  for (double e : energies) {
    for (std::size_t r = 0; r < config.samples; ++r) values[r] = static_cast<double>(count_at_most(spectra[r], e)) / volume;
    out.push_back(summarize(values));
  }
  return out;
}

McEstimate estimate_ids(const McConfig& config, double energy) {
  const double e[] = {energy};
  return ids_curve(config, e).front();
}

std::vector<McEstimate> dos_curve(const McConfig& config, std::span<const double> energies, double h) {
  if (!(h > 0)) throw InvalidArgument("DOS bandwidth h must be > 0");
  const auto spectra = realization_spectra(config);
  const double volume = static_cast<double>(config.model.box.volume());
  std::vector<McEstimate> out;
  std::vector<double> values(config.samples);
  for (double e : energies) {
    for (std::size_t r = 0; r < config.samples; ++r) {
      const auto hi = count_at_most(spectra[r], e + h);
      const auto lo = count_at_most(spectra[r], e - h);
      values[r] = static_cast<double>(hi - lo) / (volume * 2.0 * h);
    }
    out.push_back(summarize(values));
  }
  return out;
}

McEstimate estimate_dos(const McConfig& config, double energy, double h) {
  const double e[] = {energy};
  return dos_curve(config, e, h).front();
}

std::vector<double> rescaled_points(std::span<const double> eigenvalues, SiteIndex volume, double energy) {
  std::vector<double> pts;
  pts.reserve(eigenvalues.size());
  const double scale = static_cast<double>(volume);
  for (double e : eigenvalues) pts.push_back(scale * (e - energy));
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::vector<double> rescaled_points(const HamiltonianSample& sample, double energy) {
  const RVector ev = eigenvalues_hermitian(sample.matrix());
  return rescaled_points(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())), sample.size(), energy);
}

SpacingStats spacing_statistics(const std::vector<std::vector<double>>& points, double window, double intensity) {
  if (!(window > 0)) throw InvalidArgument("spacing window must be > 0");
  if (!(intensity > 0)) throw InvalidArgument("intensity n(E) must be > 0");
  SpacingStats st;
  st.window = window;
  st.intensity = intensity;
  st.window_counts.reserve(points.size());
  for (const auto& pts : points) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i] < -window || pts[i] > window) continue;
      ++count;
      if (i + 1 < pts.size()) st.gaps.push_back(pts[i + 1] - pts[i]);
    }
    st.window_counts.push_back(count);
    st.pooled_points += count;
  }
  if (st.gaps.empty()) throw InvalidArgument("spacing window contains no gaps");
  st.ks_distance = ks_exponential(st.gaps, intensity);
  st.count_test = chi_square_poisson(st.window_counts, 2.0 * window * intensity);
  return st;
}

SpacingStats spacing_experiment(const McConfig& config, double energy, double window, double h) {
  if (!(h > 0)) throw InvalidArgument("DOS bandwidth h must be > 0");
  const auto spectra = realization_spectra(config);
  const auto volume = config.model.box.volume();
  std::vector<std::vector<double>> points(config.samples);
  std::vector<double> dos(config.samples);
  for (std::size_t r = 0; r < config.samples; ++r) {
    const auto& ev = spectra[r];
    points[r] = rescaled_points(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())), volume, energy);
    dos[r] = static_cast<double>(count_at_most(ev, energy + h) - count_at_most(ev, energy - h)) /
             (static_cast<double>(volume) * 2.0 * h);
  }
  const auto n_hat = summarize(dos);
  if (!(n_hat.mean > 0)) throw InvalidArgument("estimated DOS at the spacing energy is not positive");
  auto st = spacing_statistics(points, window, n_hat.mean);
  st.energy = energy;
  st.intensity_stderr = n_hat.std_error;
  st.bandwidth = h;
  return st;
}

FracMomentFit frac_moment_decay(const McConfig& config, double energy, double eps, double s) {
  if (!(s > 0 && s < 1)) throw InvalidArgument("fractional moment exponent must lie in (0, 1)");
  const ComplexEnergy z(energy, eps);
  require_samples(config);
  const auto& box = config.model.box;
  const auto side = box.sides().front();
  if (side - 1 < 3) throw InvalidArgument("fractional moment fit needs at least 3 distances along axis 0");
  const SiteIndex stride = box.volume() / side;
  const auto n_dist = static_cast<std::size_t>(side - 1);

  const SampleFactory factory(config.model);
  std::vector<std::vector<double>> moments(config.samples);
  each_realization(config, factory, [&](std::size_t r, const HamiltonianSample& sample) {
    // Row 0 of (H - z)^{-1} is the solution of (H - z)^T c = e_0.
    CMatrix shifted = sample.matrix();
    shifted.diagonal().array() -= z.value();
    CVector rhs = CVector::Zero(sample.size());
    rhs[0] = 1.0;
    const CVector row = Eigen::PartialPivLU<CMatrix>(shifted.transpose()).solve(rhs);
    auto& m = moments[r];
    m.resize(n_dist);
    for (std::size_t d = 1; d <= n_dist; ++d) m[d - 1] = std::pow(std::abs(row[static_cast<Eigen::Index>(d) * stride]), s);
  });

  FracMomentFit fit;
  std::vector<double> xs, ys, column(config.samples);
  for (std::size_t d = 1; d <= n_dist; ++d) {
    for (std::size_t r = 0; r < config.samples; ++r) column[r] = moments[r][d - 1];
    const auto est = summarize(column);
    fit.distances.push_back(static_cast<double>(d));
    fit.mean_moments.push_back(est.mean);
    fit.moment_stderr.push_back(est.std_error);
    if (est.mean > std::numeric_limits<double>::min()) {
      xs.push_back(static_cast<double>(d));
      ys.push_back(std::log(est.mean));
    }
  }
  fit.fitted_points = xs.size();
  if (xs.size() < 3) {
    fit.below_floor = true;
    fit.slope = -std::numeric_limits<double>::infinity();
    fit.intercept = std::numeric_limits<double>::quiet_NaN();
    fit.r_squared = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const auto lf = least_squares(xs, ys);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.r_squared = lf.r_squared;
  return fit;
}

double minor_sum_linkage(const HamiltonianSample& sample, ComplexEnergy z) {
  const CMatrix r = resolvent(sample.matrix(), z);
  const CMatrix a = imaginary_part(r);
  const auto n = r.rows();
  if (n < 2) throw InvalidArgument("minor-sum linkage needs at least two sites");
  double pair_sum = 0.0;
  for (SiteIndex x = 0; x < n; ++x) {
    for (SiteIndex y = x + 1; y < n; ++y) {
      const std::vector<SiteIndex> delta{x, y};
      pair_sum += det_im(GreenBlock{delta, r(delta, delta), z, GreenFlavor::full});
    }
  }
  const double tr = a.trace().real();
  const double tr_sq = (a * a).trace().real();
  const double trace_form = 0.5 * (tr * tr - tr_sq);
  const double en = sum_principal_minors(a, 2);
  return std::max(std::abs(pair_sum - trace_form), std::abs(pair_sum - en)) / std::abs(pair_sum);
}

}  // namespace randop
