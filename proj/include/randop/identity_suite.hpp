#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include "randop/lattice.hpp"
#include "randop/parallel.hpp"

namespace randop {

// One randomized (model, z, Delta) draw.
struct IdentityTriple {
  ModelSpec model;
  SeedRecord seed;
  double energy = 0.0;
  double eps = 1.0;
  std::vector<SiteIndex> delta;
};

// Draw i of the suite: background variant cycles through laplacian,
// periodic, magnetic, decaying; boxes are 1D or 2D with at most max_volume
// sites; eps is uniform in [eps_min, eps_max].
IdentityTriple draw_identity_triple(std::uint64_t seed, std::size_t i, SiteIndex max_volume = 64,
                                    double eps_min = 0.05, double eps_max = 2.0);

struct IdentitySuiteReport {
  std::size_t triples = 0;
  std::array<std::size_t, 4> per_variant{};
  double max_krein = 0.0;             // spectral norm, absolute
  double max_krein_scaled = 0.0;      // residual / (1 + ||g_Delta||)
  double max_det_identity = 0.0;      // relative
  double max_schur = 0.0;
  double min_positivity_g = 0.0;      // min eigenvalue of Im g_Delta
  double min_positivity_gtilde = 0.0; // min eigenvalue of -Im g~^{-1}
  std::size_t worst_krein_triple = 0;
  std::size_t worst_det_triple = 0;
  std::size_t worst_schur_triple = 0;
};

IdentitySuiteReport run_identity_suite(std::uint64_t seed, std::size_t triples, const Execution& exec);

struct MinorSumReport {
  std::size_t comparisons = 0;
  double worst_normalized = 0.0;  // |brute - e_n| / e_n(|a_1|, ..., |a_N|)
  double worst_relative = 0.0;    // |brute - e_n| / |e_n|
};

// Brute-force principal-minor sums against e_n of the eigenvalues on random
// Hermitian matrices, every n <= N <= max_size.
MinorSumReport run_minor_sum_suite(std::uint64_t seed, std::size_t matrices_per_size, SiteIndex max_size);

struct OracleCheck {
  std::string name;
  std::size_t draws = 1;
  std::size_t excluded = 0;       // sweep draws outside the check's preconditions
  double value = 0.0;             // worst discrepancy, or the worst integral value
  double threshold = 0.0;         // pass iff value <= threshold
  double error_estimate = 0.0;    // largest quadrature error estimate seen
  bool pass = false;
};

// Closed-form quadrature checks: the fixed examples, then one sweep of
// draws_per_family random parameter draws per check family.
std::vector<OracleCheck> run_oracle_suite(std::uint64_t seed, std::size_t draws_per_family = 100);

// Random Hermitian matrix with entries uniform in the unit square; the
// generator is keyed so tests and the CLI see the same matrices.
CMatrix random_hermitian(std::uint64_t key, std::uint64_t index, SiteIndex n);

}  // namespace randop
