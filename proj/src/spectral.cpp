#include "randop/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "randop/errors.hpp"

namespace randop {

namespace {

std::vector<SiteIndex> validated_subset(std::span<const SiteIndex> delta, SiteIndex n) {
  if (delta.empty()) throw InvalidArgument("site subset is empty");
  std::vector<SiteIndex> sorted(delta.begin(), delta.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("site subset has duplicate indices");
  if (sorted.front() < 0 || sorted.back() >= n) throw InvalidArgument("site subset index out of range");
  return {delta.begin(), delta.end()};
}

bool is_real(const CMatrix& h) { return h.imag().cwiseAbs().maxCoeff() == 0.0; }

bool is_tridiagonal(const RMatrix& h) {
  const auto n = h.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i + 1 < j; ++i) {
      if (h(i, j) != 0.0) return false;
    }
  }
  return true;
}

// Columns of (H - z)^{-1} at the given sites.
CMatrix resolvent_columns(const CMatrix& h, ComplexEnergy z, std::span<const SiteIndex> cols) {
  const auto n = h.rows();
  CMatrix shifted = h;
  shifted.diagonal().array() -= z.value();
  Eigen::PartialPivLU<CMatrix> lu(shifted);
  CMatrix rhs = CMatrix::Zero(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) rhs(cols[k], static_cast<Eigen::Index>(k)) = 1.0;
  return lu.solve(rhs);
}

CMatrix inverse_checked(const CMatrix& a, const char* what) {
  Eigen::PartialPivLU<CMatrix> lu(a);
  const double rc = lu.rcond();
  if (!(rc > 1e-300) || !std::isfinite(rc)) throw NumericalFault(std::string("singular matrix in ") + what);
  return lu.inverse();
}

RVector hermitian_eigenvalues_small(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFault("Hermitian eigensolver did not converge");
  return es.eigenvalues();
}

struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;
};

// log|prod| and sign of a product of reals
SignedLog signed_log_product(const RVector& values) {
  SignedLog r;
  for (double v : values) {
    if (v == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    if (v < 0) r.sign = -r.sign;
    r.log_abs += std::log(std::abs(v));
  }
  return r;
}

double log_abs_det(const CMatrix& a) {
  Eigen::PartialPivLU<CMatrix> lu(a);
  const auto& m = lu.matrixLU();
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += std::log(std::abs(m(i, i)));
  return s;
}

CMatrix diag_potential(const HamiltonianSample& sample, std::span<const SiteIndex> delta) {
  CMatrix v = CMatrix::Zero(static_cast<Eigen::Index>(delta.size()), static_cast<Eigen::Index>(delta.size()));
  for (std::size_t k = 0; k < delta.size(); ++k)
    v(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = sample.potential()[delta[k]];
  return v;
}

}  // namespace

ComplexEnergy::ComplexEnergy(double energy, double eps) : energy_(energy), eps_(eps) {
  if (!std::isfinite(energy)) throw InvalidArgument("energy must be finite");
  if (!(eps > 0) || !std::isfinite(eps)) throw InvalidArgument("Im z must be > 0");
}

void require_hermitian(const CMatrix& h) {
  if (h.rows() != h.cols()) throw InvalidArgument("matrix is not square");
  if (h.size() == 0) throw InvalidArgument("matrix is empty");
  const double scale = h.cwiseAbs().maxCoeff();
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (!std::isfinite(scale) || asym > 1e-12 * scale) throw InvalidArgument("matrix is not Hermitian");
}

SpectralDecomposition eig_hermitian(const CMatrix& h) {
  require_hermitian(h);
  if (is_real(h)) {
    const RMatrix hr = h.real();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(hr);
    if (es.info() != Eigen::Success) throw NumericalFault("real symmetric eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors().cast<Complex>()};
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalFault("Hermitian eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

RVector eigenvalues_hermitian(const CMatrix& h) {
  require_hermitian(h);
  if (is_real(h)) {
    const RMatrix hr = h.real();
    Eigen::SelfAdjointEigenSolver<RMatrix> es;
    if (is_tridiagonal(hr) && hr.rows() > 1) {
      RVector diag = hr.diagonal();
      RVector sub = hr.diagonal(-1);
      es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    } else {
      es.compute(hr, Eigen::EigenvaluesOnly);
    }
    if (es.info() != Eigen::Success) throw NumericalFault("real symmetric eigensolver did not converge");
    return es.eigenvalues();
  }
  return hermitian_eigenvalues_small(h);
}

CMatrix resolvent(const CMatrix& h, ComplexEnergy z) {
  require_hermitian(h);
  std::vector<SiteIndex> all(static_cast<std::size_t>(h.rows()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<SiteIndex>(i);
  return resolvent_columns(h, z, all);
}

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

CMatrix imaginary_part(const CMatrix& m) { return (m - m.adjoint()) / Complex(0.0, 2.0); }

GreenBlock green_block(const CMatrix& h, ComplexEnergy z, std::span<const SiteIndex> delta) {
  require_hermitian(h);
  auto sites = validated_subset(delta, h.rows());
  const CMatrix cols = resolvent_columns(h, z, sites);
  CMatrix g = cols(sites, Eigen::all);
  return {std::move(sites), std::move(g), z, GreenFlavor::full};
}

GreenBlock green_block(const HamiltonianSample& sample, ComplexEnergy z, std::span<const SiteIndex> delta,
                       GreenFlavor flavor) {
  auto sites = validated_subset(delta, sample.size());
  const CMatrix h = flavor == GreenFlavor::full ? sample.matrix() : sample.matrix_without(sites);
  const CMatrix cols = resolvent_columns(h, z, sites);
  CMatrix g = cols(sites, Eigen::all);
  return {std::move(sites), std::move(g), z, flavor};
}

double det_im(const GreenBlock& block) {
  if (block.flavor != GreenFlavor::full) throw InvalidArgument("det_im needs a full Green block");
  const RVector ev = hermitian_eigenvalues_small(imaginary_part(block.matrix));
  if (ev.minCoeff() < -1e-12)
    throw NumericalFault("Im g_Delta has a negative eigenvalue " + std::to_string(ev.minCoeff()));
  const auto p = signed_log_product(ev);
  return p.sign == 0 ? 0.0 : p.sign * std::exp(p.log_abs);
}

double krein_check(const HamiltonianSample& sample, ComplexEnergy z, std::span<const SiteIndex> delta) {
  const auto g = green_block(sample, z, delta, GreenFlavor::full);
  const auto gt = green_block(sample, z, delta, GreenFlavor::reduced);
  const CMatrix gt_inv = inverse_checked(gt.matrix, "Krein formula (reduced block)");
  const CMatrix krein = inverse_checked(diag_potential(sample, delta) + gt_inv, "Krein formula");
  return spectral_norm(g.matrix - krein);
}

double det_identity_check(const HamiltonianSample& sample, ComplexEnergy z, std::span<const SiteIndex> delta) {
  const auto g = green_block(sample, z, delta, GreenFlavor::full);
  const auto gt = green_block(sample, z, delta, GreenFlavor::reduced);
  const CMatrix gt_inv = inverse_checked(gt.matrix, "determinant identity");

  const double lhs = det_im(g);
  const RVector num_ev = hermitian_eigenvalues_small(-imaginary_part(gt_inv));
  if (num_ev.minCoeff() < -1e-12) throw NumericalFault("-Im g~^{-1} has a negative eigenvalue");
  const auto num = signed_log_product(num_ev);
  const double log_den = 2.0 * log_abs_det(diag_potential(sample, delta) + gt_inv);
  const double rhs = num.sign * std::exp(num.log_abs - log_den);
  return std::abs(lhs - rhs) / std::abs(lhs);
}

PositivityMargins positivity_margins(const HamiltonianSample& sample, ComplexEnergy z,
                                     std::span<const SiteIndex> delta) {
  const auto g = green_block(sample, z, delta, GreenFlavor::full);
  const auto gt = green_block(sample, z, delta, GreenFlavor::reduced);
  const CMatrix gt_inv = inverse_checked(gt.matrix, "positivity check");
  return {hermitian_eigenvalues_small(imaginary_part(g.matrix)).minCoeff(),
          hermitian_eigenvalues_small(-imaginary_part(gt_inv)).minCoeff()};
}

double schur_check(const CMatrix& h, ComplexEnergy z, std::span<const SiteIndex> p_sites) {
  require_hermitian(h);
  const auto n = h.rows();
  const auto p = validated_subset(p_sites, n);
  if (static_cast<Eigen::Index>(p.size()) >= n) throw InvalidArgument("Schur check needs a proper subset");
  std::vector<bool> in_p(static_cast<std::size_t>(n), false);
  for (auto i : p) in_p[static_cast<std::size_t>(i)] = true;
  std::vector<SiteIndex> q;
  for (SiteIndex i = 0; i < n; ++i) {
    if (!in_p[static_cast<std::size_t>(i)]) q.push_back(i);
  }

  const auto np = static_cast<Eigen::Index>(p.size());
  const auto nq = static_cast<Eigen::Index>(q.size());
  const Complex zv = z.value();
  const CMatrix hpp = h(p, p);
  const CMatrix hpq = h(p, q);
  const CMatrix hqp = h(q, p);
  const CMatrix hqq = h(q, q);

  const CMatrix rq = inverse_checked(hqq - zv * CMatrix::Identity(nq, nq), "Schur check (Q block)");
  const CMatrix coupling = hpq * rq * hqp;
  const CMatrix s = hpp - zv * CMatrix::Identity(np, np) - coupling;
  const CMatrix s_inv = inverse_checked(s, "Schur complement");
  const CMatrix h_eff = hpp - coupling;
  const CMatrix feshbach = inverse_checked(h_eff - zv * CMatrix::Identity(np, np), "effective Hamiltonian");

  const CMatrix r = resolvent(h, z);
  double worst = spectral_norm(CMatrix(r(p, p)) - feshbach);
  worst = std::max(worst, spectral_norm(CMatrix(r(p, p)) - s_inv));
  worst = std::max(worst, spectral_norm(CMatrix(r(p, q)) + s_inv * hpq * rq));
  worst = std::max(worst, spectral_norm(CMatrix(r(q, p)) + rq * hqp * s_inv));
  worst = std::max(worst, spectral_norm(CMatrix(r(q, q)) - (rq + rq * hqp * s_inv * hpq * rq)));
  return worst;
}

std::vector<double> elementary_symmetric_all(std::span<const double> values, int n) {
  if (n < 0) throw InvalidArgument("elementary symmetric order must be >= 0");
  std::vector<double> e(static_cast<std::size_t>(n) + 1, 0.0);
  e[0] = 1.0;
  std::size_t seen = 0;
  for (double a : values) {
    ++seen;
    for (std::size_t k = std::min<std::size_t>(seen, static_cast<std::size_t>(n)); k >= 1; --k) e[k] += a * e[k - 1];
  }
  return e;
}

double elementary_symmetric(std::span<const double> values, int n) {
  return elementary_symmetric_all(values, n).back();
}

double principal_minor_sum_brute_force(const CMatrix& a, int n) {
  const auto size = a.rows();
  if (n < 1 || n > size) throw InvalidArgument("minor order out of range");
  std::vector<SiteIndex> idx(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) idx[k] = k;
  double total = 0.0;
  while (true) {
    const CMatrix minor = a(idx, idx);
    total += minor.partialPivLu().determinant().real();
    // next combination in lexicographic order
    int k = n - 1;
    while (k >= 0 && idx[k] == size - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int m = k + 1; m < n; ++m) idx[m] = idx[m - 1] + 1;
  }
  return total;
}

double sum_principal_minors(const CMatrix& a, int n) {
  if (n < 1 || n > a.rows()) throw InvalidArgument("minor order out of range");
  const RVector ev = eigenvalues_hermitian(a);
  const std::span<const double> values(ev.data(), static_cast<std::size_t>(ev.size()));
  const double en = elementary_symmetric(values, n);
  if (a.rows() <= kBruteForceMinorLimit) {
    const double brute = principal_minor_sum_brute_force(a, n);
    const RVector abs_ev = ev.cwiseAbs();
    const double scale =
        elementary_symmetric(std::span<const double>(abs_ev.data(), static_cast<std::size_t>(abs_ev.size())), n);
    if (std::abs(brute - en) > 1e-9 * std::max(scale, std::numeric_limits<double>::min()))
      throw NumericalFault("principal minor sum disagrees with e_n of the eigenvalues");
  }
  return en;
}

std::size_t count_eigenvalues(std::span<const double> eigenvalues, Interval j) {
  return static_cast<std::size_t>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                                [&](double e) { return j.contains(e); }));
}

std::size_t count_eigenvalues(const CMatrix& h, Interval j) {
  const RVector ev = eigenvalues_hermitian(h);
  return count_eigenvalues(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())), j);
}

double binomial(std::size_t k, std::size_t n) {
  if (n > k) return 0.0;
  n = std::min(n, k - n);
  double c = 1.0;
  for (std::size_t i = 1; i <= n; ++i) c = c * static_cast<double>(k - n + i) / static_cast<double>(i);
  return std::round(c);
}

bool wedge_count_check(const CMatrix& h, Interval j, int n) {
  if (n < 0) return false;
  const auto dec = eig_hermitian(h);
  std::vector<Eigen::Index> in_window;
  for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) {
    if (j.contains(dec.eigenvalues[i])) in_window.push_back(i);
  }
  const CMatrix u = dec.eigenvectors(Eigen::all, in_window);
  const CMatrix projection = u * u.adjoint();
  const RVector pe = hermitian_eigenvalues_small(projection);
  const double lhs =
      elementary_symmetric(std::span<const double>(pe.data(), static_cast<std::size_t>(pe.size())), n);
  const double rhs = binomial(in_window.size(), static_cast<std::size_t>(n));
  return std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, rhs);
}

double frac_moment(const HamiltonianSample& sample, SiteIndex x, SiteIndex y, ComplexEnergy z, double s) {
  if (!(s > 0 && s < 1)) throw InvalidArgument("fractional moment exponent must lie in (0, 1)");
  if (x < 0 || x >= sample.size() || y < 0 || y >= sample.size())
    throw InvalidArgument("site index out of range");
  const SiteIndex col[] = {y};
  const CMatrix c = resolvent_columns(sample.matrix(), z, col);
  return std::pow(std::abs(c(x, 0)), s);
}

}  // namespace randop
