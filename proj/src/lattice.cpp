#include "randop/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "randop/errors.hpp"

namespace randop {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void add_laplacian(const LatticeBox& box, CMatrix& h) {
  box.for_each_bond([&](SiteIndex i, SiteIndex j, int) { h(i, j) = 1.0; });
}

void mirror_upper(CMatrix& h) {
  const auto n = h.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    h(j, j) = Complex(h(j, j).real(), 0.0);
    for (Eigen::Index i = 0; i < j; ++i) h(j, i) = std::conj(h(i, j));
  }
}

}  // namespace

LatticeBox::LatticeBox(std::vector<std::int64_t> sides) : sides_(std::move(sides)) {
  if (sides_.empty()) throw InvalidArgument("lattice box needs at least one axis");
  for (auto s : sides_) {
    if (s <= 0) throw InvalidArgument("lattice box sides must be positive");
  }
  strides_.assign(sides_.size(), 1);
  for (int k = dimension() - 2; k >= 0; --k) strides_[k] = strides_[k + 1] * sides_[k + 1];
  volume_ = strides_[0] * sides_[0];
}

Site LatticeBox::site(SiteIndex index) const {
  if (index < 0 || index >= volume_) throw InvalidArgument("site index out of range");
  Site x(sides_.size());
  for (int k = 0; k < dimension(); ++k) {
    x[k] = index / strides_[k];
    index %= strides_[k];
  }
  return x;
}

bool LatticeBox::contains(const Site& x) const {
  if (x.size() != sides_.size()) return false;
  for (int k = 0; k < dimension(); ++k) {
    if (x[k] < 0 || x[k] >= sides_[k]) return false;
  }
  return true;
}

SiteIndex LatticeBox::index(const Site& x) const {
  if (!contains(x)) throw InvalidArgument("site outside lattice box");
  SiteIndex i = 0;
  for (int k = 0; k < dimension(); ++k) i += x[k] * strides_[k];
  return i;
}

double LatticeBox::diameter() const {
  double sq = 0.0;
  for (auto s : sides_) sq += static_cast<double>((s - 1) * (s - 1));
  return std::sqrt(sq);
}

void LatticeBox::for_each_bond(const std::function<void(SiteIndex, SiteIndex, int)>& fn) const {
  for (SiteIndex i = 0; i < volume_; ++i) {
    for (int k = 0; k < dimension(); ++k) {
      const auto coord = (i / strides_[k]) % sides_[k];
      if (coord + 1 < sides_[k]) fn(i, i + strides_[k], k);
    }
  }
}

MagneticField landau_gauge(double flux, double bond_phase) {
  MagneticField field;
  field.flux = flux;
  field.bond_phase = bond_phase;
  field.phase = [flux, bond_phase](const Site& x, const Site& y) {
    int axis = -1;
    int sign = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const auto d = y[k] - x[k];
      if (d == 0) continue;
      if (axis >= 0 || (d != 1 && d != -1)) return 0.0;
      axis = static_cast<int>(k);
      sign = static_cast<int>(d);
    }
    double a = 0.0;
    if (axis == 0) a = bond_phase;
    if (axis == 1) a = kTwoPi * flux * static_cast<double>(x[0]);
    return wrap_phase(sign * a);
  };
  return field;
}

std::string background_name(const BackgroundOperator& op) {
  return std::visit(overloaded{[](const LaplacianHopping&) { return std::string("laplacian"); },
                               [](const PeriodicPotential&) { return std::string("periodic"); },
                               [](const MagneticField&) { return std::string("magnetic"); },
                               [](const DecayingHopping&) { return std::string("decaying"); },
                               [](const NoHopping&) { return std::string("none"); }},
                    op);
}

CMatrix build_background(const LatticeBox& box, const BackgroundOperator& op) {
  const auto n = box.volume();
  CMatrix h = CMatrix::Zero(n, n);

  std::visit(
      overloaded{
          [&](const LaplacianHopping&) { add_laplacian(box, h); },
          [&](const NoHopping&) {},
          [&](const PeriodicPotential& p) {
            if (p.period.size() != static_cast<std::size_t>(box.dimension()))
              throw InvalidArgument("periodic potential: period needs one entry per axis");
            for (auto g : p.period) {
              if (g <= 0) throw InvalidArgument("periodic potential: periods must be positive");
            }
            const LatticeBox cell(p.period);
            if (p.cell_values.size() != static_cast<std::size_t>(cell.volume()))
              throw InvalidArgument("periodic potential: need one value per cell site");
            add_laplacian(box, h);
            for (SiteIndex i = 0; i < n; ++i) {
              Site x = box.site(i);
              for (int k = 0; k < box.dimension(); ++k) x[k] %= p.period[k];
              h(i, i) = p.cell_values[cell.index(x)];
            }
          },
          [&](const MagneticField& m) {
            if (!m.phase) throw InvalidArgument("magnetic field: phase function missing");
            const double coordination = 2.0 * box.dimension();
            for (SiteIndex i = 0; i < n; ++i) h(i, i) = coordination;
            box.for_each_bond([&](SiteIndex i, SiteIndex j, int) {
              const Site x = box.site(i);
              const Site y = box.site(j);
              const double axy = m.phase(x, y);
              const double ayx = m.phase(y, x);
              if (!std::isfinite(axy) || !std::isfinite(ayx))
                throw InvalidArgument("magnetic field: non-finite phase");
              const double sum = wrap_phase(axy + ayx);
              if (std::min(sum, kTwoPi - sum) > 1e-12)
                throw InvalidArgument("magnetic field: phase is not antisymmetric at bond (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
              h(i, j) = -std::polar(1.0, wrap_phase(axy));
            });
          },
          [&](const DecayingHopping& t) {
            if (!(t.amplitude > 0)) throw InvalidArgument("decaying hopping: amplitude must be > 0");
            if (!(t.rate > 0)) throw InvalidArgument("decaying hopping: rate must be > 0");
            if (t.radius && !(*t.radius > 0))
              throw InvalidArgument("decaying hopping: truncation radius must be > 0");
            const double radius = t.radius.value_or(box.diameter());
            for (SiteIndex j = 0; j < n; ++j) {
              const Site y = box.site(j);
              for (SiteIndex i = 0; i < j; ++i) {
                const Site x = box.site(i);
                double sq = 0.0;
                for (int k = 0; k < box.dimension(); ++k) {
                  const double d = static_cast<double>(x[k] - y[k]);
                  sq += d * d;
                }
                const double dist = std::sqrt(sq);
                if (dist <= radius * (1.0 + 1e-12)) h(i, j) = t.amplitude * std::exp(-t.rate * dist);
              }
            }
          }},
      op);

  mirror_upper(h);
  return h;
}

DisorderDensity DisorderDensity::uniform(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b) && b > a))
    throw InvalidArgument("uniform density needs finite a < b");
  DisorderDensity d = piecewise({a, b}, {1.0});
  d.uniform_ = true;
  d.sup_ = 1.0 / (b - a);
  return d;
}

DisorderDensity DisorderDensity::piecewise(std::vector<double> breakpoints, std::vector<double> weights) {
  if (breakpoints.size() < 2 || weights.size() + 1 != breakpoints.size())
    throw InvalidArgument("piecewise density needs k+1 breakpoints for k weights");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i])) throw InvalidArgument("piecewise density: non-finite breakpoint");
    if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
      throw InvalidArgument("piecewise density: breakpoints must be strictly increasing");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) throw InvalidArgument("piecewise density: weights must be >= 0");
    total += w;
  }
  if (!(total > 0)) throw InvalidArgument("piecewise density: weights sum to zero");

  DisorderDensity d;
  d.breakpoints_ = std::move(breakpoints);
  d.masses_.resize(weights.size());
  d.cumulative_.assign(weights.size() + 1, 0.0);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    d.masses_[k] = weights[k] / total;
    d.cumulative_[k + 1] = d.cumulative_[k] + d.masses_[k];
    d.sup_ = std::max(d.sup_, d.masses_[k] / (d.breakpoints_[k + 1] - d.breakpoints_[k]));
  }
  d.cumulative_.back() = 1.0;
  return d;
}

double DisorderDensity::pdf(double v) const {
  if (v < breakpoints_.front() || v >= breakpoints_.back()) return 0.0;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), v);
  const auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return masses_[k] / (breakpoints_[k + 1] - breakpoints_[k]);
}

double DisorderDensity::cdf(double v) const {
  if (v <= breakpoints_.front()) return 0.0;
  if (v >= breakpoints_.back()) return 1.0;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), v);
  const auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return cumulative_[k] + masses_[k] * (v - breakpoints_[k]) / (breakpoints_[k + 1] - breakpoints_[k]);
}

double DisorderDensity::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  // first piece with positive mass whose cumulative upper end exceeds u
  std::size_t k = 0;
  while (k + 1 < masses_.size() && (cumulative_[k + 1] <= u || masses_[k] == 0.0)) ++k;
  if (masses_[k] == 0.0) return breakpoints_[k + 1];
  const double t = std::clamp((u - cumulative_[k]) / masses_[k], 0.0, 1.0);
  return breakpoints_[k] + t * (breakpoints_[k + 1] - breakpoints_[k]);
}

RVector sample_potential(const LatticeBox& box, const DisorderDensity& density, SeedRecord seed) {
  const CounterRng rng(seed.master_seed);
  RVector v(box.volume());
  for (SiteIndex s = 0; s < box.volume(); ++s) {
    v[s] = density.quantile(rng.uniform(seed.realization, static_cast<std::uint64_t>(s)));
  }
  return v;
}

HamiltonianSample::HamiltonianSample(LatticeBox box, std::shared_ptr<const CMatrix> background,
                                     RVector potential, SeedRecord seed)
    : box_(std::move(box)), background_(std::move(background)), potential_(std::move(potential)), seed_(seed) {
  if (!background_ || background_->rows() != box_.volume() || background_->cols() != box_.volume() ||
      potential_.size() != box_.volume())
    throw InvalidArgument("hamiltonian sample: component sizes disagree with the box");
}

CMatrix HamiltonianSample::matrix() const {
  CMatrix h = *background_;
  h.diagonal() += potential_.cast<Complex>();
  return h;
}

CMatrix HamiltonianSample::matrix_without(std::span<const SiteIndex> delta) const {
  RVector v = potential_;
  for (auto x : delta) {
    if (x < 0 || x >= size()) throw InvalidArgument("site subset index out of range");
    v[x] = 0.0;
  }
  CMatrix h = *background_;
  h.diagonal() += v.cast<Complex>();
  return h;
}

HamiltonianSample assemble(const LatticeBox& box, const BackgroundOperator& op,
                           const DisorderDensity& density, SeedRecord seed) {
  auto background = std::make_shared<const CMatrix>(build_background(box, op));
  return HamiltonianSample(box, std::move(background), sample_potential(box, density, seed), seed);
}

HamiltonianSample assemble_zero_potential(const LatticeBox& box, const BackgroundOperator& op) {
  auto background = std::make_shared<const CMatrix>(build_background(box, op));
  return HamiltonianSample(box, std::move(background), RVector::Zero(box.volume()), SeedRecord{});
}

SampleFactory::SampleFactory(const ModelSpec& model)
    : model_(model), background_(std::make_shared<const CMatrix>(build_background(model.box, model.background))) {}

HamiltonianSample SampleFactory::realize(SeedRecord seed) const {
  return HamiltonianSample(model_.box, background_, sample_potential(model_.box, model_.density, seed), seed);
}

}  // namespace randop
