#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "randop/errors.hpp"
#include "randop/lattice.hpp"
#include "randop/rng.hpp"

using namespace randop;

TEST_CASE("philox4x32-10 known-answer vectors") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("lattice box ordering is a lexicographic bijection") {
  std::mt19937 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::int64_t> sides;
    const int d = 1 + static_cast<int>(gen() % 3);
    std::int64_t vol = 1;
    for (int k = 0; k < d; ++k) {
      sides.push_back(1 + static_cast<std::int64_t>(gen() % 5));
      vol *= sides.back();
    }
    LatticeBox box(sides);
    REQUIRE(box.volume() == vol);
    Site prev;
    for (SiteIndex i = 0; i < vol; ++i) {
      const Site x = box.site(i);
      for (int k = 0; k < d; ++k) {
        CHECK(x[k] >= 0);
        CHECK(x[k] < sides[k]);
      }
      CHECK(box.index(x) == i);
      if (i > 0) CHECK(std::lexicographical_compare(prev.begin(), prev.end(), x.begin(), x.end()));
      prev = x;
    }
  }
  CHECK_THROWS_AS(LatticeBox({3, 0}), InvalidArgument);
  CHECK_THROWS_AS(LatticeBox({}), InvalidArgument);
}

TEST_CASE("laplacian on three sites is tridiagonal with zero diagonal") {
  const CMatrix h = build_background(LatticeBox({3}), LaplacianHopping{});
  RMatrix expected(3, 3);
  expected << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(h.imag().isZero(0.0));
  CHECK(h.real() == expected);
}

TEST_CASE("laplacian entries are 1 exactly on nearest-neighbour pairs in 2D") {
  const LatticeBox box({3, 4});
  const CMatrix h = build_background(box, LaplacianHopping{});
  for (SiteIndex i = 0; i < box.volume(); ++i) {
    for (SiteIndex j = 0; j < box.volume(); ++j) {
      const Site x = box.site(i), y = box.site(j);
      const auto l1 = std::abs(x[0] - y[0]) + std::abs(x[1] - y[1]);
      CHECK(h(i, j) == Complex(l1 == 1 ? 1.0 : 0.0, 0.0));
    }
  }
}

TEST_CASE("magnetic operator with zero phase on two sites") {
  const CMatrix h = build_background(LatticeBox({2}), landau_gauge(0.0, 0.0));
  RMatrix expected(2, 2);
  expected << 2, -1, -1, 2;
  CHECK(h.imag().isZero(0.0));
  CHECK(h.real() == expected);
}

TEST_CASE("decaying hopping entries and truncation") {
  DecayingHopping t{1.0, 1.0, 2.0};
  CMatrix h = build_background(LatticeBox({3}), t);
  CHECK(h(0, 0) == Complex(0.0));
  CHECK(h(0, 1).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(h(0, 2).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(h(1, 2).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  t.radius = 1.0;
  h = build_background(LatticeBox({3}), t);
  CHECK(h(0, 2) == Complex(0.0));
  CHECK(h(0, 1).real() == doctest::Approx(std::exp(-1.0)));

  // default radius is the box diameter, i.e. no truncation
  t.radius.reset();
  h = build_background(LatticeBox({4, 4}), t);
  CHECK(h(0, 15).real() == doctest::Approx(std::exp(-std::sqrt(18.0))));
}

TEST_CASE("decaying hopping obeys the exponential envelope") {
  const LatticeBox box({4, 3});
  const DecayingHopping t{1.3, 0.7, std::nullopt};
  const CMatrix h = build_background(box, t);
  for (SiteIndex i = 0; i < box.volume(); ++i) {
    for (SiteIndex j = 0; j < box.volume(); ++j) {
      const Site x = box.site(i), y = box.site(j);
      const double dist = std::hypot(double(x[0] - y[0]), double(x[1] - y[1]));
      CHECK(std::abs(h(i, j)) <= t.amplitude * std::exp(-t.rate * dist) * (1 + 1e-15));
    }
  }
}

TEST_CASE("invalid background parameters") {
  CHECK_THROWS_AS(build_background(LatticeBox({3}), DecayingHopping{1.0, 0.0, std::nullopt}), InvalidArgument);
  CHECK_THROWS_AS(build_background(LatticeBox({3}), DecayingHopping{1.0, -1.0, std::nullopt}), InvalidArgument);
  CHECK_THROWS_AS(build_background(LatticeBox({3}), DecayingHopping{0.0, 1.0, std::nullopt}), InvalidArgument);

  MagneticField bad;
  bad.phase = [](const Site&, const Site&) { return 0.3; };  // A(x,y) = A(y,x) != 0
  CHECK_THROWS_AS(build_background(LatticeBox({3}), bad), InvalidArgument);

  CHECK_THROWS_AS(build_background(LatticeBox({3}), PeriodicPotential{{2}, {1.0}}), InvalidArgument);
  CHECK_THROWS_AS(build_background(LatticeBox({3, 3}), PeriodicPotential{{2}, {1.0, 2.0}}), InvalidArgument);
}

TEST_CASE("periodic potential is applied modulo the period") {
  const LatticeBox box({5, 3});
  const PeriodicPotential p{{2, 3}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}};
  const CMatrix h = build_background(box, p);
  const CMatrix lap = build_background(box, LaplacianHopping{});
  for (SiteIndex i = 0; i < box.volume(); ++i) {
    const Site x = box.site(i);
    CHECK(h(i, i).real() == p.cell_values[static_cast<std::size_t>((x[0] % 2) * 3 + (x[1] % 3))]);
    for (SiteIndex j = 0; j < box.volume(); ++j) {
      if (i != j) CHECK(h(i, j) == lap(i, j));
    }
  }
}

TEST_CASE("every background variant is exactly Hermitian") {
  const std::vector<BackgroundOperator> ops = {
      LaplacianHopping{}, PeriodicPotential{{2, 2}, {0.5, -0.25, 1.0, 0.0}}, landau_gauge(0.173, 0.9),
      DecayingHopping{0.8, 1.1, 2.5}, NoHopping{}};
  for (const auto& op : ops) {
    const CMatrix h = build_background(LatticeBox({5, 4}), op);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("magnetic entries have the moduli of the zero-flux operator") {
  const LatticeBox box({4, 5});
  const CMatrix h = build_background(box, landau_gauge(0.31, 1.7));
  const CMatrix h0 = build_background(box, landau_gauge(0.0, 0.0));
  CHECK((h.cwiseAbs() - h0.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(h.imag().cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("translation structure away from the boundary") {
  const LatticeBox box({6, 6});
  for (const BackgroundOperator& op : {BackgroundOperator{LaplacianHopping{}}, BackgroundOperator{DecayingHopping{1.0, 0.9, std::nullopt}}}) {
    const CMatrix h = build_background(box, op);
    for (SiteIndex i = 0; i < box.volume(); ++i) {
      for (SiteIndex j = 0; j < box.volume(); ++j) {
        Site x = box.site(i), y = box.site(j);
        Site xs{x[0] + 1, x[1]}, ys{y[0] + 1, y[1]};
        if (!box.contains(xs) || !box.contains(ys)) continue;
        CHECK(h(box.index(xs), box.index(ys)) == h(i, j));
      }
    }
  }
}

TEST_CASE("uniform density") {
  const auto d = DisorderDensity::uniform(-1.0, 3.0);
  CHECK(d.sup_density() == 0.25);
  CHECK(d.pdf(0.0) == 0.25);
  CHECK(d.pdf(3.5) == 0.0);
  CHECK(d.cdf(1.0) == doctest::Approx(0.5));
  CHECK(d.quantile(0.25) == doctest::Approx(0.0));
  CHECK_THROWS_AS(DisorderDensity::uniform(1.0, 1.0), InvalidArgument);
}

TEST_CASE("piecewise density integrates to one and has the exact supremum") {
  const auto d = DisorderDensity::piecewise({0.0, 0.5, 2.0, 2.25}, {2.0, 1.0, 1.0});
  // midpoint Riemann sum over a grid aligned with the breakpoints
  double integral = 0.0;
  const int cells = 900;
  const double h = 2.25 / cells;
  for (int i = 0; i < cells; ++i) integral += d.pdf((i + 0.5) * h) * h;
  CHECK(std::abs(integral - 1.0) < 1e-12);
  // masses 1/2, 1/4, 1/4 on widths 0.5, 1.5, 0.25
  CHECK(d.sup_density() == doctest::Approx(1.0));
  for (double u : {0.0, 0.1, 0.3, 0.5, 0.6, 0.75, 0.9, 0.999}) CHECK(d.cdf(d.quantile(u)) == doctest::Approx(u).epsilon(1e-12));
  CHECK_THROWS_AS(DisorderDensity::piecewise({0.0, 1.0}, {-1.0}), InvalidArgument);
  CHECK_THROWS_AS(DisorderDensity::piecewise({0.0, 0.0, 1.0}, {1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(DisorderDensity::piecewise({0.0, 1.0}, {0.0}), InvalidArgument);
}

TEST_CASE("potential sampling: support, determinism, order independence") {
  const LatticeBox box({7, 5});
  const auto density = DisorderDensity::uniform(0.0, 1.0);
  const SeedRecord seed{42, 17};
  const RVector v = sample_potential(box, density, seed);
  CHECK(v.minCoeff() >= 0.0);
  CHECK(v.maxCoeff() <= 1.0);
  CHECK(v == sample_potential(box, density, seed));
  CHECK(v != sample_potential(box, density, SeedRecord{42, 18}));
  CHECK(v != sample_potential(box, density, SeedRecord{43, 17}));
  // a site's draw does not depend on the box it sits in
  const RVector w = sample_potential(LatticeBox({35}), density, seed);
  CHECK(v == w);
}

TEST_CASE("uniform(0,1) sample mean over 1e5 sites") {
  const RVector v = sample_potential(LatticeBox({100000}), DisorderDensity::uniform(0.0, 1.0), SeedRecord{7, 0});
  CHECK(std::abs(v.mean() - 0.5) < 0.01);
  // independent generator, same sample size
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double s = 0.0;
  for (int i = 0; i < 100000; ++i) s += u(gen);
  CHECK(std::abs(s / 1e5 - 0.5) < 0.01);
  CHECK(std::abs(v.mean() - s / 1e5) < 0.01);
}

TEST_CASE("assemble adds the potential to the diagonal") {
  const auto zero = assemble_zero_potential(LatticeBox({4}), LaplacianHopping{});
  CHECK(zero.matrix() == build_background(LatticeBox({4}), LaplacianHopping{}));

  const auto density = DisorderDensity::uniform(-2.0, 2.0);
  const auto one = assemble(LatticeBox({1}), LaplacianHopping{}, density, {5, 3});
  CHECK(one.matrix().rows() == 1);
  CHECK(one.matrix()(0, 0) == Complex(one.potential()[0], 0.0));

  const auto two = assemble(LatticeBox({2}), LaplacianHopping{}, density, {5, 4});
  CMatrix expected(2, 2);
  expected << two.potential()[0], 1.0, 1.0, two.potential()[1];
  CHECK(two.matrix() == expected);

  const auto big = assemble(LatticeBox({3, 3}), landau_gauge(0.2), density, {9, 1});
  const CMatrix h = big.matrix();
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample factory reproduces assemble") {
  const ModelSpec model{LatticeBox({3, 4}), DecayingHopping{1.0, 1.5, std::nullopt}, DisorderDensity::uniform(0.0, 2.0)};
  const SampleFactory factory(model);
  const auto a = factory.realize({11, 6});
  const auto b = assemble(model.box, model.background, model.density, {11, 6});
  CHECK(a.matrix() == b.matrix());
  CHECK(a.seed() == SeedRecord{11, 6});
}
