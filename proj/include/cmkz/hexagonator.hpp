#pragma once

#include "cmkz/associator.hpp"
#include "cmkz/transport.hpp"

// The explicit modification series: congruences, the BCH-type and
// exponential-shift modifications, the associator-shift series, the
// pre-hexagonator assembled both algebraically and as a 2-holonomy, and the
// Breen verification (symbolic and geometric).

namespace cmkz {

struct HexError : std::runtime_error {
  explicit HexError(const std::string& what) : std::runtime_error(what) {}
};

using SymAlg = AlgebraSeries<SymCoeff>;
using SymBim = BimoduleSeries<SymCoeff>;
using NumAlg = AlgebraSeries<Complex>;
using NumBim = BimoduleSeries<Complex>;

// A modification series together with its declared source/target transports;
// the defining contract is d(value) = source - target up to truncation.
struct ModificationSeries {
  std::string name;
  SymBim value;
  SymAlg source;
  SymAlg target;
};

// d(value) - (source - target), exactly.
SymAlg dpartial_residual(const ModificationSeries& m);

// (e^{i pi t})_{e^{i pi t12}} (letter = L) resp. the (321)-permuted analogue.
ModificationSeries congruence_series(uint8_t letter, int order);

// t_eps^{t12}: the surplus series of [eps^{-t12}, e^{i pi t_(12)3}] times eps^{t12}.
SymBim t_eps_series(int order);

// eps^Lambda eps^{tbar13} => eps^{t13}
ModificationSeries bch_modification(int order);

// Phi_213 => Phi(t12, tbar13) and Phi_231 => Phi(t23, tbar13)
ModificationSeries phi_shift_modification(int variant, int order);  // variant: 213 or 231

// Phi_213 e^{i pi Lambda} => e^{i pi Lambda} Phi_213
ModificationSeries phi_lambda_comm_modification(int order);

enum class ExpShift { QVI, QIV, PIV };
// QVI: e^{i pi t_(12)3} => e^{i pi Lambda} e^{-i pi t12}
// QIV: e^{i pi t13}     => e^{i pi Lambda} e^{i pi tbar13}
// PIV: [e^{i pi tbar13}, eps^Lambda] => 0
ModificationSeries exp_shift_modification(ExpShift which, int order);

// The right pre-hexagonator assembled by lateral composition of the five
// labeled edges: Phi_213 e^{i pi t_(12)3} Phi_321 => e^{i pi t13} Phi_231 e^{i pi t23}.
ModificationSeries prehex_direct(int order);

std::vector<ModificationSeries> all_modification_builders(int order);

// ---- numeric 2-holonomy route ------------------------------------------------

// W^P = W^{P_V}W^{p_VI}W^{p_I} - W^{P_IV}W^{c_III}W^{p_II} - W^{p_IV}W^{P_III}W^{p_II}
Holonomy2Assembly p_assembly(const PathParams& prm);
// W^Q = W^{q_V}W^{Q_VI}W^{p_I} + W^{Q_V}W^{p_VI}W^{p_I} + W^{q_down}W^P - W^{Q_IV}W^{p_III}W^{p_II}
Holonomy2Assembly q_assembly(const PathParams& prm);

// R^eps = eps^{-t13} W^Q eps^{t23} - Phi^eps_213 t_eps^{t12} Phi^eps_321
NumBim prehex_holonomy(int order, double eps, const QuadratureSpec& q);

struct CheckReport {
  std::string name;
  std::vector<double> max_by_grade;
  double max_abs = 0.0;
};

// eps^{ad t12}(L_cong + [e^{i pi t12}, t_eps^{t12}]) - L_cong, exact symbolic.
CheckReport lemma_ad_relation_check(int order);

// LHS - RHS of the Breen equation in the free model (Basel-reduced rationals)
// plus the numerically evaluated residual per grade.
struct BreenSymbolicReport {
  std::vector<double> sym_by_grade;  // max |rational| after Basel reduction
  std::vector<double> num_by_grade;  // max |coeff| after numeric evaluation
};
BreenSymbolicReport breen_symbolic_check(int order);

struct Breen2LoopReport {
  double eps = 0.0;
  std::vector<double> lhs_minus_rhs_by_grade;
  std::vector<double> scale_by_grade;  // largest term magnitude per grade
  double tau_equivariance_residual = 0.0;
  double congruence_grade2_error = 0.0;  // |W^{P_L}_2 - (i pi)^2 L| coefficient error
  double max_globularity_residual = 0.0;
};
Breen2LoopReport breen_2loop_check(int order, double eps, const QuadratureSpec& q,
                                   bool gate_globularity = true);

// Predicted grade-2 values of the six 2-holonomy limits, including the
// ln(eps) terms, keyed by catalog name.
NumBim predicted_grade2(const std::string& key, int order, double eps);

}  // namespace cmkz
