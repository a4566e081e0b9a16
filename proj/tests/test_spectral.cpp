#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "randop/errors.hpp"
#include "randop/identity_suite.hpp"
#include "randop/spectral.hpp"

using namespace randop;

namespace {

CMatrix diag_matrix(std::initializer_list<double> d) {
  CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) {
    h(i, i) = v;
    ++i;
  }
  return h;
}

// Characteristic polynomial of the open chain with zero diagonal, unit
// hopping: p_k(x) = -x p_{k-1}(x) - p_{k-2}(x). Roots by bisection on a grid.
std::vector<double> chain_roots_by_bisection(int n) {
  auto p = [n](double x) {
    double pm2 = 1.0, pm1 = -x;
    if (n == 1) return pm1;
    for (int k = 2; k <= n; ++k) {
      const double pk = -x * pm1 - pm2;
      pm2 = pm1;
      pm1 = pk;
    }
    return pm1;
  };
  std::vector<double> roots;
  const int grid = 4000;
  for (int i = 0; i < grid; ++i) {
    double a = -2.5 + 5.0 * i / grid, b = -2.5 + 5.0 * (i + 1) / grid;
    if (p(a) == 0.0) {
      roots.push_back(a);
      continue;
    }
    if (p(b) == 0.0 || p(a) * p(b) > 0) continue;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      (p(a) * p(m) <= 0 ? b : a) = m;
    }
    roots.push_back(0.5 * (a + b));
  }
  return roots;
}

HamiltonianSample random_sample(std::vector<std::int64_t> sides, BackgroundOperator op, std::uint64_t seed,
                                double width = 4.0) {
  return assemble(LatticeBox(std::move(sides)), op, DisorderDensity::uniform(-0.5 * width, 0.5 * width), {seed, 0});
}

// Newton's identities from power sums: k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
double newton_power_sum_e(const RVector& a, int n) {
  std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0), e(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k) p[k] = a.array().pow(k).sum();
  e[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += ((i % 2) ? 1.0 : -1.0) * e[k - i] * p[i];
    e[k] = s / k;
  }
  return e[n];
}

}  // namespace

TEST_CASE("eigenvalues of small matrices") {
  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  auto d = eig_hermitian(x);
  CHECK(d.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(d.eigenvalues[1] == doctest::Approx(1.0));

  d = eig_hermitian(diag_matrix({3, 1, 2}));
  CHECK(d.eigenvalues[0] == 1.0);
  CHECK(d.eigenvalues[1] == 2.0);
  CHECK(d.eigenvalues[2] == 3.0);
}

TEST_CASE("chain eigenvalues agree with the closed form and a characteristic-polynomial solve") {
  for (int n : {3, 7, 12}) {
    const CMatrix h = build_background(LatticeBox({n}), LaplacianHopping{});
    const RVector ev = eigenvalues_hermitian(h);
    const RVector ev_full = eig_hermitian(h).eigenvalues;
    const auto roots = chain_roots_by_bisection(n);
    REQUIRE(roots.size() == static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const double closed = 2.0 * std::cos((n - k) * std::numbers::pi / (n + 1));
      CHECK(ev[k] == doctest::Approx(closed).epsilon(1e-12));
      CHECK(ev_full[k] == doctest::Approx(closed).epsilon(1e-12));
      CHECK(std::abs(roots[static_cast<std::size_t>(k)] - closed) < 1e-10);
    }
  }
  const RVector three = eigenvalues_hermitian(build_background(LatticeBox({3}), LaplacianHopping{}));
  CHECK(three[0] == doctest::Approx(-std::sqrt(2.0)));
  CHECK(std::abs(three[1]) < 1e-14);
  CHECK(three[2] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("decomposition invariants on complex, real and tridiagonal inputs") {
  std::vector<CMatrix> inputs = {random_hermitian(1, 0, 20), random_hermitian(1, 1, 20).real().cast<Complex>(),
                                 random_sample({30}, LaplacianHopping{}, 2).matrix(),
                                 random_sample({5, 5}, landau_gauge(0.3), 3).matrix()};
  for (const auto& h : inputs) {
    const auto d = eig_hermitian(h);
    const double norm = spectral_norm(h);
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
      CHECK((h * d.eigenvectors.col(k) - d.eigenvalues[k] * d.eigenvectors.col(k)).norm() <= 1e-10 * norm);
      if (k > 0) CHECK(d.eigenvalues[k] >= d.eigenvalues[k - 1]);
    }
    const CMatrix id = CMatrix::Identity(h.rows(), h.cols());
    CHECK((d.eigenvectors.adjoint() * d.eigenvectors - id).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((eigenvalues_hermitian(h) - d.eigenvalues).cwiseAbs().maxCoeff() < 1e-10 * norm);
    // deterministic for identical input bits
    CHECK(eig_hermitian(h).eigenvalues == d.eigenvalues);
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  CMatrix h(2, 2);
  h << 0, 1, 2, 0;
  CHECK_THROWS_AS(eig_hermitian(h), InvalidArgument);
  CHECK_THROWS_AS(eigenvalues_hermitian(h), InvalidArgument);
  CHECK_THROWS_AS(resolvent(h, ComplexEnergy(0, 1)), InvalidArgument);
}

TEST_CASE("complex energy requires Im z > 0") {
  CHECK_THROWS_AS(ComplexEnergy(0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(ComplexEnergy(0.0, -1.0), InvalidArgument);
  CHECK_NOTHROW(ComplexEnergy(0.0, 1e-300));
}

TEST_CASE("resolvent") {
  const ComplexEnergy z(0.3, 0.7);
  const CMatrix one = diag_matrix({1.5});
  CHECK(std::abs(resolvent(one, z)(0, 0) - 1.0 / (1.5 - z.value())) < 1e-15);

  const CMatrix h = random_hermitian(9, 0, 8);
  const CMatrix r = resolvent(h, z);
  CMatrix shifted = h;
  shifted.diagonal().array() -= z.value();
  CHECK(spectral_norm(shifted * r - CMatrix::Identity(8, 8)) <= 1e-10);

  const auto sample = random_sample({12}, LaplacianHopping{}, 4);
  const CMatrix im = imaginary_part(resolvent(sample.matrix(), ComplexEnergy(0.0, 1.0)));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(im);
  CHECK(es.eigenvalues().minCoeff() > 0);
}

TEST_CASE("green blocks") {
  const auto sample = random_sample({3, 3}, LaplacianHopping{}, 5);
  const ComplexEnergy z(-0.4, 0.2);
  std::vector<SiteIndex> all(9);
  for (int i = 0; i < 9; ++i) all[i] = i;
  const auto full = green_block(sample, z, all);
  CHECK((full.matrix - resolvent(sample.matrix(), z)).cwiseAbs().maxCoeff() < 1e-13);

  const CMatrix one = diag_matrix({0.8});
  const SiteIndex first[] = {0};
  CHECK(std::abs(green_block(one, z, first).matrix(0, 0) - 1.0 / (0.8 - z.value())) < 1e-15);

  const SiteIndex pair[] = {2, 7};
  const auto g = green_block(sample, z, pair);
  CHECK(std::abs(g.matrix(0, 1) - g.matrix(1, 0)) < 1e-14);

  const SiteIndex dup[] = {1, 1};
  const SiteIndex out[] = {1, 9};
  CHECK_THROWS_AS(green_block(sample, z, dup), InvalidArgument);
  CHECK_THROWS_AS(green_block(sample, z, out), InvalidArgument);
  CHECK_THROWS_AS(green_block(sample, z, std::span<const SiteIndex>{}), InvalidArgument);

  // reduced flavor equals the resolvent of H - V_Delta
  const auto gt = green_block(sample, z, pair, GreenFlavor::reduced);
  const CMatrix rt = resolvent(sample.matrix_without(pair), z);
  CHECK(std::abs(gt.matrix(0, 1) - rt(2, 7)) < 1e-14);
}

TEST_CASE("Krein formula") {
  // one site, Lambda = Delta: g~ = -1/z and g = 1/(v - z)
  const auto one = random_sample({1}, LaplacianHopping{}, 6);
  const SiteIndex site[] = {0};
  const ComplexEnergy z(0.1, 0.9);
  CHECK(krein_check(one, z, site) < 1e-15);
  CHECK(std::abs(green_block(one, z, site, GreenFlavor::reduced).matrix(0, 0) + 1.0 / z.value()) < 1e-15);

  const auto six = random_sample({6}, LaplacianHopping{}, 7);
  const SiteIndex pair[] = {1, 4};
  CHECK(krein_check(six, ComplexEnergy(0.0, 1.0), pair) <= 1e-9);

  const auto zero = assemble_zero_potential(LatticeBox({6}), landau_gauge(0.0, 0.4));
  const auto g = green_block(zero, z, pair, GreenFlavor::full);
  const auto gt = green_block(zero, z, pair, GreenFlavor::reduced);
  CHECK((g.matrix - gt.matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK(krein_check(zero, z, pair) < 1e-13);
}

TEST_CASE("det Im g") {
  const double v = 0.7, e = 0.2, eps = 0.05;
  const CMatrix one = diag_matrix({v});
  const SiteIndex site[] = {0};
  const auto g1 = green_block(one, ComplexEnergy(e, eps), site);
  CHECK(det_im(g1) == doctest::Approx(eps / ((v - e) * (v - e) + eps * eps)).epsilon(1e-13));

  // two sites of a real symmetric H: the 2x2 determinant of entrywise Im G
  const auto sample = random_sample({8}, LaplacianHopping{}, 8);
  const SiteIndex pair[] = {2, 5};
  const auto g2 = green_block(sample, ComplexEnergy(0.3, 0.4), pair);
  const RMatrix im = g2.matrix.imag();
  CHECK(det_im(g2) == doctest::Approx(im(0, 0) * im(1, 1) - im(0, 1) * im(1, 0)).epsilon(1e-12));
  CHECK(det_im(g2) > 0);

  auto reduced = green_block(sample, ComplexEnergy(0.3, 0.4), pair, GreenFlavor::reduced);
  CHECK_THROWS_AS(det_im(reduced), InvalidArgument);

  GreenBlock bad{{0}, diag_matrix({1.0}), ComplexEnergy(0, 1), GreenFlavor::full};
  bad.matrix(0, 0) = Complex(1.0, -0.5);
  CHECK_THROWS_AS(det_im(bad), NumericalFault);
}

TEST_CASE("Im g_Delta is the entrywise imaginary part for real symmetric H") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sample = random_sample({4, 4}, DecayingHopping{1.0, 1.0, std::nullopt}, 100 + seed);
    const SiteIndex delta[] = {0, 5, 6, 15};
    const auto g = green_block(sample, ComplexEnergy(0.5, 0.1), delta);
    const CMatrix im = imaginary_part(g.matrix);
    CHECK((im.real() - g.matrix.imag()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(im.imag().cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("determinant identity") {
  const auto one = random_sample({1}, LaplacianHopping{}, 9);
  const SiteIndex site[] = {0};
  CHECK(det_identity_check(one, ComplexEnergy(0.2, 0.3), site) < 1e-14);

  const auto eight = random_sample({8}, LaplacianHopping{}, 10);
  const SiteIndex triple[] = {0, 3, 6};
  CHECK(det_identity_check(eight, ComplexEnergy(0.3, 0.5), triple) <= 1e-8);

  const auto zero = assemble_zero_potential(LatticeBox({8}), DecayingHopping{1.0, 1.2, std::nullopt});
  CHECK(det_identity_check(zero, ComplexEnergy(0.3, 0.5), triple) <= 1e-12);
}

TEST_CASE("positivity of Im g and -Im g~^{-1}") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto sample = random_sample({3, 4}, landau_gauge(0.2 + 0.01 * seed, 0.3), 200 + seed, 6.0);
    const SiteIndex delta[] = {1, 4, 10};
    const auto m = positivity_margins(sample, ComplexEnergy(-1.0 + 0.1 * seed, 0.05 + 0.05 * seed), delta);
    CHECK(m.min_eig_im_g > -1e-12);
    CHECK(m.min_eig_neg_im_inv_gtilde > -1e-12);
  }
}

TEST_CASE("Schur complement and block inverse") {
  const double a = 0.4, c = -1.1;
  const Complex b(0.3, 0.6);
  CMatrix h(2, 2);
  h << a, b, std::conj(b), c;
  const ComplexEnergy z(0.2, 0.3);
  const SiteIndex first[] = {0};
  const Complex expected = 1.0 / (a - z.value() - std::norm(b) / (c - z.value()));
  CHECK(std::abs(resolvent(h, z)(0, 0) - expected) < 1e-14);
  CHECK(schur_check(h, z, first) < 1e-14);

  const CMatrix h7 = random_hermitian(11, 0, 7);
  const SiteIndex p3[] = {0, 2, 5};
  CHECK(schur_check(h7, ComplexEnergy(0.1, 0.4), p3) <= 1e-9);

  for (SiteIndex n = 2; n <= 16; ++n) {
    const CMatrix hn = random_hermitian(12, static_cast<std::uint64_t>(n), n);
    std::vector<SiteIndex> p;
    for (SiteIndex i = 0; i < n; i += 2) p.push_back(i);
    if (static_cast<SiteIndex>(p.size()) == n) p.pop_back();
    CHECK(schur_check(hn, ComplexEnergy(-0.5, 0.05 + 0.1 * n), p) <= 1e-9);
  }

  const SiteIndex both[] = {0, 1};
  CHECK_THROWS_AS(schur_check(h, z, both), InvalidArgument);
}

TEST_CASE("principal minor sums") {
  CHECK(sum_principal_minors(diag_matrix({1, 2, 3}), 2) == doctest::Approx(11.0));
  for (int n = 1; n <= 6; ++n) CHECK(sum_principal_minors(CMatrix::Identity(6, 6), n) == doctest::Approx(binomial(6, n)));

  const CMatrix a = random_hermitian(13, 0, 6);
  const double brute = principal_minor_sum_brute_force(a, 3);
  const double en = sum_principal_minors(a, 3);
  CHECK(std::abs(brute - en) <= 1e-9 * std::abs(brute));
  const RVector ev = eigenvalues_hermitian(a);
  CHECK(std::abs(newton_power_sum_e(ev, 3) - en) <= 1e-9 * std::abs(en));

  CHECK_THROWS_AS(sum_principal_minors(a, 0), InvalidArgument);
  CHECK_THROWS_AS(sum_principal_minors(a, 7), InvalidArgument);

  // above the brute-force cap only the eigenvalue route runs
  const CMatrix big = random_hermitian(13, 1, 20);
  CHECK(std::abs(sum_principal_minors(big, 1) - big.trace().real()) < 1e-10);
}

TEST_CASE("elementary symmetric polynomials") {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  const auto e = elementary_symmetric_all(v, 4);
  CHECK(e[0] == 1.0);
  CHECK(e[1] == 10.0);
  CHECK(e[2] == 35.0);
  CHECK(e[3] == 50.0);
  CHECK(e[4] == 24.0);
  CHECK(elementary_symmetric(std::vector<double>{1.0, 1.0}, 3) == 0.0);
}

TEST_CASE("eigenvalue counts on half-open windows") {
  const CMatrix h = diag_matrix({0, 1, 2});
  CHECK(count_eigenvalues(h, {0.5, 2.5}) == 2);
  CHECK(count_eigenvalues(h, {-10, 10}) == 3);
  CHECK(count_eigenvalues(h, {-10, -1}) == 0);
  CHECK(count_eigenvalues(h, {1.0, 1.0}) == 0);
  CHECK(count_eigenvalues(h, {1.0, 2.0}) == 1);  // [1, 2) holds 1, not 2
  // counts over a partition add up to N
  const auto sample = random_sample({25}, LaplacianHopping{}, 14);
  std::size_t total = 0;
  for (double a = -6.0; a < 6.0; a += 0.37) total += count_eigenvalues(sample.matrix(), {a, a + 0.37});
  CHECK(total == 25);
}

TEST_CASE("wedge power trace equals a binomial count") {
  const CMatrix h = diag_matrix({0.1, 0.2, 0.3, 1.5, 2.5});
  CHECK(wedge_count_check(h, {0.0, 0.35}, 2));  // k = 3 -> 3
  CHECK(binomial(3, 2) == 3.0);
  CHECK(wedge_count_check(h, {1.0, 2.0}, 2));   // k = 1 -> 0
  CHECK(binomial(1, 2) == 0.0);
  CHECK(wedge_count_check(h, {0.0, 3.0}, 5));   // k = 5 -> 1
  const auto sample = random_sample({4, 3}, landau_gauge(0.25), 15);
  for (int n = 1; n <= 4; ++n) CHECK(wedge_count_check(sample.matrix(), {-1.0, 1.5}, n));
}

TEST_CASE("fractional moments") {
  const auto one = random_sample({1}, LaplacianHopping{}, 16);
  const ComplexEnergy z(0.1, 0.2);
  const double v = one.potential()[0];
  CHECK(frac_moment(one, 0, 0, z, 0.3) == doctest::Approx(std::pow(std::abs(1.0 / (v - z.value())), 0.3)));

  // 2x2: G(0,1) = -h01 / det(H - z)
  const auto two = random_sample({2}, LaplacianHopping{}, 17);
  const Complex a = two.potential()[0] - z.value(), d = two.potential()[1] - z.value();
  const Complex g01 = -1.0 / (a * d - 1.0);
  CHECK(frac_moment(two, 0, 1, z, 0.5) == doctest::Approx(std::sqrt(std::abs(g01))).epsilon(1e-13));
  CHECK(frac_moment(two, 1, 0, z, 0.5) >= 0.0);

  CHECK_THROWS_AS(frac_moment(two, 0, 1, z, 0.0), InvalidArgument);
  CHECK_THROWS_AS(frac_moment(two, 0, 1, z, 1.0), InvalidArgument);
  CHECK_THROWS_AS(frac_moment(two, 0, 2, z, 0.5), InvalidArgument);
}
