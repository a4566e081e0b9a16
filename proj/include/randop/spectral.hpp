#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "randop/lattice.hpp"
#include "randop/types.hpp"

namespace randop {

// z = E + i eps with eps > 0.
class ComplexEnergy {
 public:
  ComplexEnergy(double energy, double eps);

  double energy() const { return energy_; }
  double eps() const { return eps_; }
  Complex value() const { return {energy_, eps_}; }

 private:
  double energy_;
  double eps_;
};

// Half-open energy window [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi > lo ? hi - lo : 0.0; }
  bool contains(double e) const { return e >= lo && e < hi; }
};

struct SpectralDecomposition {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // columns
};

// Throws InvalidArgument unless max|H - H*| < 1e-12 max|H|.
void require_hermitian(const CMatrix& h);

SpectralDecomposition eig_hermitian(const CMatrix& h);
// Eigenvalues only; real-symmetric and tridiagonal inputs take cheaper paths.
RVector eigenvalues_hermitian(const CMatrix& h);

CMatrix resolvent(const CMatrix& h, ComplexEnergy z);

// Largest singular value.
double spectral_norm(const CMatrix& a);

// (M - M*) / 2i
CMatrix imaginary_part(const CMatrix& m);

enum class GreenFlavor { full, reduced };

struct GreenBlock {
  std::vector<SiteIndex> sites;
  CMatrix matrix;
  ComplexEnergy energy;
  GreenFlavor flavor;
};

// Full flavor on an arbitrary Hermitian matrix.
GreenBlock green_block(const CMatrix& h, ComplexEnergy z, std::span<const SiteIndex> delta);
GreenBlock green_block(const HamiltonianSample& sample, ComplexEnergy z, std::span<const SiteIndex> delta,
                       GreenFlavor flavor = GreenFlavor::full);

// det Im g_Delta as a product of eigenvalues taken in log space.
double det_im(const GreenBlock& block);

// Spectral-norm residual of g_Delta against (V_Delta + g~_Delta^{-1})^{-1}.
double krein_check(const HamiltonianSample& sample, ComplexEnergy z, std::span<const SiteIndex> delta);

// |LHS - RHS| / LHS for det Im g = det(-Im g~^{-1}) / |det(V_Delta + g~^{-1})|^2.
double det_identity_check(const HamiltonianSample& sample, ComplexEnergy z, std::span<const SiteIndex> delta);

struct PositivityMargins {
  double min_eig_im_g;              // smallest eigenvalue of Im g_Delta
  double min_eig_neg_im_inv_gtilde;  // smallest eigenvalue of -Im g~_Delta^{-1}
};
PositivityMargins positivity_margins(const HamiltonianSample& sample, ComplexEnergy z,
                                     std::span<const SiteIndex> delta);

// Max over the four blocks of the block-inverse formula and the effective
// Hamiltonian form of P(H-z)^{-1}P, each compared to the direct resolvent.
double schur_check(const CMatrix& h, ComplexEnergy z, std::span<const SiteIndex> p);

// Sum of all n x n principal minors. For N <= 14 a brute-force enumeration is
// cross-checked against e_n(eigenvalues); the latter is returned.
double sum_principal_minors(const CMatrix& a, int n);
double principal_minor_sum_brute_force(const CMatrix& a, int n);
inline constexpr SiteIndex kBruteForceMinorLimit = 14;

// e_n(values) through the coefficient recursion of prod_i (1 + a_i t).
double elementary_symmetric(std::span<const double> values, int n);
// All e_0..e_n at once.
std::vector<double> elementary_symmetric_all(std::span<const double> values, int n);

std::size_t count_eigenvalues(std::span<const double> eigenvalues, Interval j);
std::size_t count_eigenvalues(const CMatrix& h, Interval j);

double binomial(std::size_t k, std::size_t n);

// Tr_{H_n} E(J)^{wedge n} from the numerically diagonalized projection E(J),
// compared with C(Tr E(J), n).
bool wedge_count_check(const CMatrix& h, Interval j, int n);

// |G(x, y; z)|^s
double frac_moment(const HamiltonianSample& sample, SiteIndex x, SiteIndex y, ComplexEnergy z, double s);

}  // namespace randop
