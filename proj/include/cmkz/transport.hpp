#pragma once

#include "cmkz/geometry.hpp"
#include "cmkz/quadrature.hpp"
#include "cmkz/series.hpp"

// Parallel transport (truncated path-ordered exponential) and surface
// holonomy (the double-integral automodification) with values in the
// truncated word algebra, plus globularity and flatness verifiers.

namespace cmkz {

struct TransportError : std::runtime_error {
  explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

// Per-generator coefficients of the connection 1-form applied to the path
// tangent at parameter r (three letters, or two for the KZ letter algebra).
using GenSampler = std::function<std::array<Complex, 3>(double)>;

// Solves dW/dr = A(r) W grade by grade from W(r0) = 1.
AlgebraSeries<Complex> ode_transport(const GenSampler& A, int nletters, int order, double r0,
                                     double r1, const std::vector<double>& breaks,
                                     const QuadratureSpec& q);

AlgebraSeries<Complex> parallel_transport(const Path1& p, const Connection& c, int order,
                                          const QuadratureSpec& q);
AlgebraSeries<Complex> partial_transport(const Path1& p, const Connection& c, int order,
                                         const QuadratureSpec& q, double r0, double r1);

// W^P = int_0^1 int_0^1 W^{P^s}_{1r} Delta[dP/ds, dP/dr] W^{P^s}_{r0} dr ds,
// inner integral over the r-support of dP/ds, partial transports checkpointed
// per s-node.
BimoduleSeries<Complex> surface_holonomy(const Path2& P, const Connection& c, int order,
                                         const QuadratureSpec& q);

struct GlobularityReport {
  std::vector<double> residual_by_grade;
  double max_residual = 0.0;
  double scale = 0.0;  // largest coefficient entering the comparison
};

// max per-grade deviation of d(W^P) - (W^src - W^tgt)
GlobularityReport globularity_check(const Path2& P, const Connection& c, int order,
                                    const QuadratureSpec& q);

struct FlatnessReport {
  double max_fake_flat = 0.0;
  double max_two_flat = 0.0;
};

// Fake flatness d nabla + [nabla, nabla] = d(Delta) (coboundary) and
// 2-flatness d Delta + nabla ^|> Delta = 0, from the closed-form rational
// coefficients at the sample points.
FlatnessReport flatness_checks(const Connection& c, const std::vector<Pt>& sample);

// A whiskered sum of 2-path holonomies: sum_i sign_i W^{l_1}...W^{l_k} W^{patch} W^{r_1}...
struct HolonomyTerm {
  int sign = 1;
  std::vector<Path1> left;
  Path2 patch;
  std::vector<Path1> right;
};
using Holonomy2Assembly = std::vector<HolonomyTerm>;

BimoduleSeries<Complex> assembly_holonomy(const Holonomy2Assembly& terms, const Connection& c,
                                          int order, const QuadratureSpec& q);
Holonomy2Assembly tau_assembly(const Tau& t, const Holonomy2Assembly& a);

}  // namespace cmkz
