#pragma once

#include "randop/types.hpp"

namespace randop {

struct QuadratureSpec {
  double tolerance = 1e-10;      // bound on the reported error estimate
  double truncation_radius = 0;  // 0: chosen from the Gaussian decay rate
  unsigned max_depth = 20;
};

struct OracleResult {
  Complex numeric;      // quadrature side
  Complex closed_form;  // formula side
  double discrepancy = 0.0;
  double error_estimate = 0.0;  // quadrature error plus any truncated tail
};

// e^{i n pi/4} int e^{-i<u, M u>/2} d^n u / (2 pi)^{n/2} against 1/sqrt(det M)
// on the principal branch. M = B - iA must be complex symmetric (real u only
// sees the symmetric part) with A positive definite, n in {1, 2}, and the
// eigenvalue arguments of M must sum to more than -pi so that the principal
// branch of sqrt(det M) is the analytic one.
OracleResult gauss_repr_check(const CMatrix& m, const QuadratureSpec& spec = {});

// int_R dx / |a x + b|^2 against pi / Im(conj(b) a); needs Im(conj(b) a) > 0.
OracleResult gv_line_integral_check(Complex a, Complex b, const QuadratureSpec& spec = {});

// int_R dx / (a x^2 + b x + c) against 2 pi / sqrt(4ac - b^2); needs a > 0,
// 4ac - b^2 > 0.
OracleResult gv_quadratic_integral_check(double a, double b, double c, const QuadratureSpec& spec = {});

struct GvLemmaResult {
  double value = 0.0;  // int dv det Im[(diag(v) - A)^{-1}]
  double bound = 0.0;  // pi^n
  double error_estimate = 0.0;
};

// n in {1, 2}; Im A = (A - A*)/2i positive definite.
GvLemmaResult gv_lemma_check(const CMatrix& a, const QuadratureSpec& spec = {});

}  // namespace randop
