#pragma once

#include "cmkz/mzv.hpp"
#include "cmkz/quadrature.hpp"
#include "cmkz/series.hpp"

// The Drinfeld KZ associator on two abstract letters, computed three ways:
// the Le-Murakami profile sum with exact MZV coefficients, the regularized
// half-path construction with numeric coefficients, and finite-eps
// regularized transport.

namespace cmkz {

struct AssociatorError : std::runtime_error {
  explicit AssociatorError(const std::string& what) : std::runtime_error(what) {}
};

// Profile sum over (p, q) with the k-sums written out; ad_form applies the
// closed ad-power rewriting instead. Both agree term by term.
AlgebraSeries<SymCoeff> phi_symbolic_form(int order, bool ad_form);

// Computes both forms, asserts equality, returns the profile-sum form.
AlgebraSeries<SymCoeff> phi_symbolic(int order);

// Numeric evaluation of the symbolic series via the cached MZV evaluator.
AlgebraSeries<Complex> phi_symbolic_eval(int order, double mzv_tol = 1e-13);

// Phi(A,B) = e^{ln2 B} Xi_{B,A} (Xi_{A,B})^{-1} e^{-ln2 A} with the Xi
// integrals cut off at a tail-controlled upper limit.
AlgebraSeries<Complex> phi_numeric_brw(int order, double tol);

// Phi^eps(A,B) = e^{-ln(eps) B} W^{c_I} e^{ln(eps) A} at finite eps.
AlgebraSeries<Complex> phi_transport_eps(int order, double eps, const QuadratureSpec& q);

// Eliminates the eps^m ln^j(eps) error terms from transports on a geometric
// eps-grid anchored at eps0.
AlgebraSeries<Complex> phi_transport_extrapolated(int order, const QuadratureSpec& q,
                                                  double eps0 = 1e-5);

// Phi with A, B replaced by algebra series with zero constant term lives in
// series.hpp as substitute_pair.

}  // namespace cmkz
