#include "randop/oracle.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "randop/errors.hpp"

namespace randop {

namespace {

using std::numbers::pi;
using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;

constexpr double kHalfPi = 0.5 * std::numbers::pi;

struct Quad {
  double value = 0.0;
  double error = 0.0;
};

Quad integrate(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec,
               double rel_tol) {
  Quad q;
  q.value = Rule::integrate(f, a, b, spec.max_depth, rel_tol, &q.error);
  return q;
}

// Nested adaptive rule on [a, b]^2; the inner error is folded into the outer
// estimate through its worst value.
Quad integrate_2d(const std::function<double(double, double)>& f, double a, double b, const QuadratureSpec& spec,
                  double rel_tol) {
  double worst_inner = 0.0;
  auto outer = [&](double x) {
    double err = 0.0;
    const double v = Rule::integrate([&](double y) { return f(x, y); }, a, b, spec.max_depth, rel_tol, &err);
    worst_inner = std::max(worst_inner, err);
    return v;
  };
  Quad q;
  q.value = Rule::integrate(outer, a, b, spec.max_depth, rel_tol, &q.error);
  q.error += worst_inner * (b - a);
  return q;
}

void require_finite_error(const Quad& q, double tolerance, const char* what) {
  if (!std::isfinite(q.value) || !(q.error <= tolerance))
    throw NumericalFault(std::string(what) + ": quadrature error estimate " + std::to_string(q.error) +
                         " exceeds tolerance");
}

}  // namespace

OracleResult gauss_repr_check(const CMatrix& m, const QuadratureSpec& spec) {
  const auto n = m.rows();
  if (m.cols() != n || (n != 1 && n != 2)) throw InvalidArgument("Gaussian representation check needs n in {1, 2}");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw InvalidArgument("Gaussian representation check needs a complex symmetric matrix");

  const CMatrix a_part = -(m - m.adjoint()) / Complex(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> ea(a_part, Eigen::EigenvaluesOnly);
  const double lambda = ea.eigenvalues().minCoeff();
  if (!(lambda > 0)) throw InvalidArgument("-Im M is not positive definite");

  Eigen::ComplexEigenSolver<CMatrix> em(m, false);
  double arg_sum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) arg_sum += std::arg(em.eigenvalues()[k]);
  if (!(arg_sum > -pi)) throw InvalidArgument("principal branch of sqrt(det M) is not the analytic branch");

  // |integrand| <= exp(-lambda |u|^2 / 2); tail mass outside [-R, R]^n
  auto tail = [&](double r) {
    return n == 1 ? std::erfc(r * std::sqrt(0.5 * lambda)) / std::sqrt(lambda) : std::exp(-0.5 * lambda * r * r) / lambda;
  };
  double radius = spec.truncation_radius;
  if (radius <= 0) {
    radius = 4.0;
    while (tail(radius) > 0.01 * spec.tolerance) radius *= 1.25;
  }
  const double tail_bound = tail(radius);
  const double rel_tol = 1e-12;

  Quad re, im;
  if (n == 1) {
    const Complex c = m(0, 0);
    auto phase = [c](double u) { return std::exp(Complex(0.0, -0.5) * c * u * u); };
    re = integrate([&](double u) { return phase(u).real(); }, -radius, radius, spec, rel_tol);
    im = integrate([&](double u) { return phase(u).imag(); }, -radius, radius, spec, rel_tol);
  } else {
    const Complex m00 = m(0, 0), m01 = m(0, 1), m11 = m(1, 1);
    auto phase = [=](double u, double v) {
      return std::exp(Complex(0.0, -0.5) * (m00 * u * u + 2.0 * m01 * u * v + m11 * v * v));
    };
    re = integrate_2d([&](double u, double v) { return phase(u, v).real(); }, -radius, radius, spec, rel_tol);
    im = integrate_2d([&](double u, double v) { return phase(u, v).imag(); }, -radius, radius, spec, rel_tol);
  }

  const double norm = std::pow(2.0 * pi, -0.5 * static_cast<double>(n));
  OracleResult r;
  r.numeric = std::polar(1.0, static_cast<double>(n) * pi / 4.0) * Complex(re.value, im.value) * norm;
  r.closed_form = 1.0 / std::sqrt(m.determinant());
  r.discrepancy = std::abs(r.numeric - r.closed_form);
  r.error_estimate = (std::hypot(re.error, im.error) + tail_bound) * norm;
  require_finite_error({re.value, r.error_estimate}, spec.tolerance, "Gaussian representation");
  return r;
}

OracleResult gv_line_integral_check(Complex a, Complex b, const QuadratureSpec& spec) {
  const double im = (std::conj(b) * a).imag();
  if (!(im > 0)) throw InvalidArgument("line integral needs Im(conj(b) a) > 0");
  // x = tan(t) maps R onto (-pi/2, pi/2): dx / |a x + b|^2 = dt / |a sin t + b cos t|^2
  const auto q = integrate([&](double t) { return 1.0 / std::norm(a * std::sin(t) + b * std::cos(t)); }, -kHalfPi,
                           kHalfPi, spec, 1e-13);
  require_finite_error(q, spec.tolerance, "line integral");
  OracleResult r;
  r.numeric = q.value;
  r.closed_form = pi / im;
  r.discrepancy = std::abs(r.numeric - r.closed_form);
  r.error_estimate = q.error;
  return r;
}

OracleResult gv_quadratic_integral_check(double a, double b, double c, const QuadratureSpec& spec) {
  const double disc = 4.0 * a * c - b * b;
  if (!(a > 0) || !(disc > 0)) throw InvalidArgument("quadratic integral needs a > 0 and 4ac - b^2 > 0");
  const auto q = integrate(
      [&](double t) {
        const double s = std::sin(t), co = std::cos(t);
        return 1.0 / (a * s * s + b * s * co + c * co * co);
      },
      -kHalfPi, kHalfPi, spec, 1e-13);
  require_finite_error(q, spec.tolerance, "quadratic integral");
  OracleResult r;
  r.numeric = q.value;
  r.closed_form = 2.0 * pi / std::sqrt(disc);
  r.discrepancy = std::abs(r.numeric - r.closed_form);
  r.error_estimate = q.error;
  return r;
}

GvLemmaResult gv_lemma_check(const CMatrix& a, const QuadratureSpec& spec) {
  const auto n = a.rows();
  if (a.cols() != n || (n != 1 && n != 2)) throw InvalidArgument("lemma check needs n in {1, 2}");
  const CMatrix im_a = (a - a.adjoint()) / Complex(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(im_a, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0)) throw InvalidArgument("Im A is not positive definite");
  const double det_im_a = es.eigenvalues().prod();

  // Im (D - A)^{-1} = X (Im A) X* with X = (D - A)^{-1}, so the integrand is
  // det(Im A) / |det(D - A)|^2. With v_k = tan(t_k) and the Jacobian folded
  // in this becomes det(Im A) / |det(S - C A)|^2, S = diag(sin t), C = diag(cos t).
  GvLemmaResult r;
  r.bound = std::pow(pi, static_cast<double>(n));
  Quad q;
  if (n == 1) {
    const Complex a00 = a(0, 0);
    q = integrate([&](double t) { return det_im_a / std::norm(std::sin(t) - std::cos(t) * a00); }, -kHalfPi, kHalfPi,
                  spec, 1e-13);
  } else {
    const Complex a00 = a(0, 0), a01 = a(0, 1), a10 = a(1, 0), a11 = a(1, 1);
    q = integrate_2d(
        [&](double t1, double t2) {
          const double c1 = std::cos(t1), c2 = std::cos(t2);
          const Complex d = (std::sin(t1) - c1 * a00) * (std::sin(t2) - c2 * a11) - c1 * c2 * a01 * a10;
          return det_im_a / std::norm(d);
        },
        -kHalfPi, kHalfPi, spec, 1e-12);
  }
  require_finite_error(q, spec.tolerance, "lemma integral");
  r.value = q.value;
  r.error_estimate = q.error;
  return r;
}

}  // namespace randop
