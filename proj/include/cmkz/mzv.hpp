#pragma once

#include <complex>
#include <vector>

#include "cmkz/coeff.hpp"
#include "cmkz/quadrature.hpp"

// Numeric evaluation of multiple zeta values, single-variable multiple
// polylogarithms and iterated integrals of 1-forms on an interval.

namespace cmkz {

struct MzvError : std::runtime_error {
  explicit MzvError(const std::string& what) : std::runtime_error(what) {}
};

// Omega-letters for words of the 1-forms O0 = ds/s, O1 = ds/(s-1).
inline constexpr int O0 = 0;
inline constexpr int O1 = 1;
using OmegaWord = std::vector<int>;

// zeta(s1,...,sk) (admissible index), |result - truth| < tol.
double mzv_eval(const ZetaIndex& idx, double tol);

// Li_{s1,...,sk}(z) for |z| <= 1 (z != 1 when s1 == 1).
Complex polylog_eval(const ZetaIndex& idx, Complex z, double tol);

// A 1-form on an interval: one of the stock forms or a custom function.
struct FormSpec {
  enum Kind { Omega0, Omega1, Custom } kind = Custom;
  Form fn;

  static FormSpec omega0();
  static FormSpec omega1();
  static FormSpec custom(Form f);
};

// Iterated integral of the given forms over [a,b] (first form outermost).
// The stock forms must not have their singularity (0 for O0, 1 for O1)
// inside [a,b].
Complex iterated_integral(const std::vector<FormSpec>& forms, double a, double b,
                          const QuadratureSpec& q);

// The admissible zeta index translated to its Omega-word per
// zeta(s1,...,sk) = (-1)^k int_0^1 O0^{s1-1} O1 ... O0^{sk-1} O1.
OmegaWord zeta_omega_word(const ZetaIndex& idx);

// Regularised integral of a convergent Omega-word over (0,1): the chopped
// integrals over [e,1-e] are evaluated on a small grid anchored at eps0 and
// the known endpoint error model c_j * e * ln(e)^j is eliminated.
Complex omega_word_unit_integral(const OmegaWord& word, double tol, double eps0 = 0.0);

// MZV through the iterated-integral representation; agrees with mzv_eval
// within 2*tol.
double mzv_eval_iterint(const ZetaIndex& idx, double tol, double eps0 = 0.0);

// Shared cached evaluator used when substituting symbolic coefficients.
double mzv_eval_cached(const ZetaIndex& idx, double tol = 1e-13);

// All admissible indices of weight <= w (ordered, for sweep tests).
std::vector<ZetaIndex> admissible_indices_up_to_weight(int w);

}  // namespace cmkz
