#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "randop/rng.hpp"
#include "randop/types.hpp"

namespace randop {

using Site = std::vector<std::int64_t>;

// Finite box [0, side_0) x ... x [0, side_{d-1}) in Z^d, sites in
// lexicographic order (axis 0 most significant).
class LatticeBox {
 public:
  explicit LatticeBox(std::vector<std::int64_t> sides);

  int dimension() const { return static_cast<int>(sides_.size()); }
  const std::vector<std::int64_t>& sides() const { return sides_; }
  SiteIndex volume() const { return volume_; }

  Site site(SiteIndex index) const;
  SiteIndex index(const Site& site) const;
  bool contains(const Site& site) const;

  // Euclidean distance between the two extreme corners.
  double diameter() const;

  // Calls fn(i, j, axis) for each nearest-neighbor pair with j = i + e_axis.
  void for_each_bond(const std::function<void(SiteIndex, SiteIndex, int)>& fn) const;

 private:
  std::vector<std::int64_t> sides_;
  std::vector<std::int64_t> strides_;
  SiteIndex volume_ = 0;
};

// Antisymmetric phase A(x, y) on nearest-neighbor pairs, values in [0, 2pi).
using PhaseFunction = std::function<double(const Site&, const Site&)>;

struct LaplacianHopping {};

struct PeriodicPotential {
  std::vector<std::int64_t> period;  // one entry per axis
  std::vector<double> cell_values;   // lexicographic over the period cell
};

struct MagneticField {
  PhaseFunction phase;
  // Landau-gauge parameters when the phase came from landau_gauge(); kept so
  // the operator can be echoed into result metadata.
  double flux = 0.0;
  double bond_phase = 0.0;
};

struct DecayingHopping {
  double amplitude = 1.0;
  double rate = 1.0;
  std::optional<double> radius;  // unset: no truncation
};

// Test hook: no hopping at all, so H is diagonal.
struct NoHopping {};

// Uniform flux per plaquette of the (0, 1) plane plus a constant phase on
// axis-0 bonds: A(x, x+e0) = bond_phase, A(x, x+e1) = 2 pi flux x_0.
MagneticField landau_gauge(double flux, double bond_phase = 0.0);

using BackgroundOperator =
    std::variant<LaplacianHopping, PeriodicPotential, MagneticField, DecayingHopping, NoHopping>;

std::string background_name(const BackgroundOperator& op);

// Realizes P_Lambda H0 P_Lambda in the box ordering. Upper triangle is built
// and mirrored, so the result is exactly Hermitian.
CMatrix build_background(const LatticeBox& box, const BackgroundOperator& op);

// Bounded piecewise-constant density. Uniform(a, b) is the one-piece case.
class DisorderDensity {
 public:
  static DisorderDensity uniform(double a, double b);
  // weights are relative masses of the pieces [b_k, b_{k+1}); they are
  // normalized so that the density integrates to 1.
  static DisorderDensity piecewise(std::vector<double> breakpoints, std::vector<double> weights);

  bool is_uniform() const { return uniform_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& masses() const { return masses_; }

  double sup_density() const { return sup_; }
  double lower() const { return breakpoints_.front(); }
  double upper() const { return breakpoints_.back(); }

  double pdf(double v) const;
  double cdf(double v) const;
  double quantile(double u) const;

 private:
  DisorderDensity() = default;

  bool uniform_ = false;
  std::vector<double> breakpoints_;
  std::vector<double> masses_;
  std::vector<double> cumulative_;  // size pieces + 1
  double sup_ = 0.0;
};

// i.i.d. potential; site s of realization r uses Philox counter (r, s) under
// the master seed.
RVector sample_potential(const LatticeBox& box, const DisorderDensity& density, SeedRecord seed);

// One disorder realization H_Lambda = H0|_Lambda + diag(V).
class HamiltonianSample {
 public:
  HamiltonianSample(LatticeBox box, std::shared_ptr<const CMatrix> background, RVector potential,
                    SeedRecord seed);

  const LatticeBox& box() const { return box_; }
  const CMatrix& background() const { return *background_; }
  const RVector& potential() const { return potential_; }
  SeedRecord seed() const { return seed_; }
  SiteIndex size() const { return box_.volume(); }

  CMatrix matrix() const;
  // H_Lambda - V_Delta: the potential is removed on the listed sites.
  CMatrix matrix_without(std::span<const SiteIndex> delta) const;

 private:
  LatticeBox box_;
  std::shared_ptr<const CMatrix> background_;
  RVector potential_;
  SeedRecord seed_;
};

HamiltonianSample assemble(const LatticeBox& box, const BackgroundOperator& op,
                           const DisorderDensity& density, SeedRecord seed);

// Test hook: V identically zero.
HamiltonianSample assemble_zero_potential(const LatticeBox& box, const BackgroundOperator& op);

struct ModelSpec {
  LatticeBox box;
  BackgroundOperator background;
  DisorderDensity density;
};

// Caches the background matrix so realizations only draw the potential.
class SampleFactory {
 public:
  explicit SampleFactory(const ModelSpec& model);

  HamiltonianSample realize(SeedRecord seed) const;
  const ModelSpec& model() const { return model_; }
  const CMatrix& background() const { return *background_; }

 private:
  ModelSpec model_;
  std::shared_ptr<const CMatrix> background_;
};

}  // namespace randop
