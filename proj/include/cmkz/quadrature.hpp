#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cmkz/coeff.hpp"

// Adaptive composite Gauss quadrature with error estimation by half-interval
// comparison, plus the collocation data needed to advance triangular systems
// of iterated integrals across a panel.

namespace cmkz {

struct QuadratureError : std::runtime_error {
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_depth = 48;
  int rule_order = 8;
};

// Gauss-Legendre rule on [0,1] together with the node-to-node integration
// matrix S[i][j] = integral over [0, x_i] of the j-th Lagrange basis poly.
struct GaussRule {
  int n = 0;
  std::vector<double> x;
  std::vector<double> w;
  std::vector<std::vector<double>> S;

  static const GaussRule& get(int n);
};

using Form = std::function<Complex(double)>;

// Iterated integral of scalar 1-forms over [a, b] (first form outermost, as
// in the inductive definition). interior_breaks lists known non-smooth points.
Complex iterated_integral_scalar(const std::vector<Form>& forms, double a, double b,
                                 const QuadratureSpec& q,
                                 const std::vector<double>& interior_breaks = {});

}  // namespace cmkz
