#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "randop/lattice.hpp"
#include "randop/parallel.hpp"
#include "randop/spectral.hpp"
#include "randop/stats.hpp"

namespace randop {

// Results are a pure function of (model, samples, seed); exec only decides
// how realizations are scheduled.
struct McConfig {
  ModelSpec model;
  std::size_t samples = 1;
  std::uint64_t seed = 0;
  Execution exec{};
};

struct BoundCheck {
  McEstimate estimate;
  double bound = 0.0;
  double slack = 0.0;    // bound - mean
  double z_score = 0.0;  // slack / stderr
  bool pass = false;     // mean <= bound + 3 stderr
};

BoundCheck make_bound_check(const McEstimate& estimate, double bound);

// pi^n rho_inf^n
double minami_bound(int n, double rho_inf);
// (pi^n / n!) rho_inf^n |J|^n |Lambda|^n
double wegner_bound(int n, double rho_inf, double interval_length, SiteIndex volume);
// z = (a + b + i|J|) / 2
ComplexEnergy wegner_energy(Interval j);

// Per-realization det Im g_Delta(z), in realization order.
std::vector<double> minami_samples(const McConfig& config, ComplexEnergy z, std::span<const SiteIndex> delta);
BoundCheck mc_minami(const McConfig& config, ComplexEnergy z, std::span<const SiteIndex> delta);

struct WegnerLevels {
  std::vector<BoundCheck> checks;        // checks[k] is for n = k + 1
  std::vector<std::size_t> counts;       // Tr E(J) per realization
  double zero_count_frequency = 0.0;
};

BoundCheck mc_wegner_nlevel(const McConfig& config, Interval j, int n);
// n = 1..n_max on one shared set of realizations.
WegnerLevels mc_wegner_levels(const McConfig& config, Interval j, int n_max);

McEstimate estimate_ids(const McConfig& config, double energy);
std::vector<McEstimate> ids_curve(const McConfig& config, std::span<const double> energies);

inline constexpr double kDefaultDosBandwidth = 0.05;

McEstimate estimate_dos(const McConfig& config, double energy, double h = kDefaultDosBandwidth);
std::vector<McEstimate> dos_curve(const McConfig& config, std::span<const double> energies,
                                  double h = kDefaultDosBandwidth);

// |Lambda| (E_j - E) for each eigenvalue, ascending.
std::vector<double> rescaled_points(std::span<const double> eigenvalues, SiteIndex volume, double energy);
std::vector<double> rescaled_points(const HamiltonianSample& sample, double energy);

struct SpacingStats {
  double energy = 0.0;
  double window = 0.0;
  double intensity = 0.0;          // n(E) estimate the references use
  double intensity_stderr = 0.0;
  double bandwidth = 0.0;          // h of the DOS estimate, 0 if supplied
  std::vector<double> gaps;        // pooled, realization order
  std::size_t pooled_points = 0;
  double ks_distance = 0.0;
  std::vector<std::size_t> window_counts;  // per realization
  ChiSquareResult count_test;
};

// points[r] holds the sorted rescaled points of realization r. Every point in
// [-W, W] contributes one gap: the distance to its successor within the same
// realization (the successor may lie outside the window).
SpacingStats spacing_statistics(const std::vector<std::vector<double>>& points, double window, double intensity);

SpacingStats spacing_experiment(const McConfig& config, double energy, double window,
                                double h = kDefaultDosBandwidth);

struct FracMomentFit {
  std::vector<double> distances;
  std::vector<double> mean_moments;  // E|G(0, y)|^s per distance
  std::vector<double> moment_stderr;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool below_floor = false;          // too few positive moments to fit
  std::size_t fitted_points = 0;
};

// y runs along axis 0 from the origin site, |y| = 1 .. side_0 - 1; the log of
// the mean moment is fitted against |y|.
FracMomentFit frac_moment_decay(const McConfig& config, double energy, double eps, double s);

// Relative discrepancy between sum_{|Delta|=2} det Im g_Delta, the trace
// expansion [(Tr Im R)^2 - Tr (Im R)^2] / 2 and e_2 of the eigenvalues of Im R.
double minor_sum_linkage(const HamiltonianSample& sample, ComplexEnergy z);

}  // namespace randop
