#pragma once

#include <gmpxx.h>

#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Coefficient arithmetic shared by all series: exact symbolic coefficients
// (rational combinations of MZV monomials times powers of the symbols i*pi
// and ln(eps)) and numeric complex coefficients.

namespace cmkz {

using Rational = mpq_class;
using Complex = std::complex<double>;

struct CoeffDomainError : std::runtime_error {
  explicit CoeffDomainError(const std::string& what) : std::runtime_error(what) {}
};

// Index tuple (s1,...,sk) of a multiple zeta value. Admissible means s1 >= 2,
// all other entries >= 1.
using ZetaIndex = std::vector<int>;

bool zeta_admissible(const ZetaIndex& idx);
int zeta_weight(const ZetaIndex& idx);
std::string zeta_to_string(const ZetaIndex& idx);

// Multiset of admissible zeta index tuples, canonically sorted.
struct MzvMonomial {
  std::vector<ZetaIndex> factors;

  MzvMonomial() = default;
  explicit MzvMonomial(ZetaIndex idx);

  void canonicalize();
  MzvMonomial operator*(const MzvMonomial& o) const;
  int weight() const;
  bool empty() const { return factors.empty(); }

  friend bool operator==(const MzvMonomial& a, const MzvMonomial& b) { return a.factors == b.factors; }
  friend bool operator<(const MzvMonomial& a, const MzvMonomial& b) { return a.factors < b.factors; }
};

struct SymKey {
  int ipi = 0;    // power of the symbol i*pi
  int lneps = 0;  // power of the symbol ln(eps)
  MzvMonomial zetas;

  friend bool operator==(const SymKey& a, const SymKey& b) {
    return a.ipi == b.ipi && a.lneps == b.lneps && a.zetas == b.zetas;
  }
  friend bool operator<(const SymKey& a, const SymKey& b) {
    if (a.ipi != b.ipi) return a.ipi < b.ipi;
    if (a.lneps != b.lneps) return a.lneps < b.lneps;
    return a.zetas < b.zetas;
  }
};

// Exact symbolic coefficient: map (ipi^n, lneps^m, zeta monomial) -> rational.
// No zero entries are stored; the ring is commutative.
class SymCoeff {
 public:
  SymCoeff() = default;

  static SymCoeff zero() { return SymCoeff(); }
  static SymCoeff one() { return rational(1); }
  static SymCoeff rational(Rational r);
  static SymCoeff ipi(int power = 1, Rational r = 1);
  static SymCoeff lneps(int power = 1, Rational r = 1);
  static SymCoeff zeta(const ZetaIndex& idx, Rational r = 1);
  static SymCoeff monomial(SymKey key, Rational r);

  bool is_zero() const { return t_.empty(); }
  const std::map<SymKey, Rational>& terms() const { return t_; }

  SymCoeff& operator+=(const SymCoeff& o);
  SymCoeff& operator-=(const SymCoeff& o);
  SymCoeff operator+(const SymCoeff& o) const;
  SymCoeff operator-(const SymCoeff& o) const;
  SymCoeff operator-() const;
  SymCoeff operator*(const SymCoeff& o) const;
  SymCoeff& operator*=(const SymCoeff& o);
  SymCoeff scaled(const Rational& r) const;

  // Substitutes zeta(2) -> -(ipi)^2/6 (Euler's Basel value). Equality checks
  // that mix pi^2 and zeta(2) reduce through this; no other MZV relation is
  // ever applied.
  SymCoeff basel_reduced() const;

  // ipi -> i*pi, lneps -> ln(eps), each zeta tuple through zeta_fn.
  Complex eval(double eps, const std::function<double(const ZetaIndex&)>& zeta_fn) const;

  double max_abs_rational() const;
  std::string to_string() const;

 private:
  std::map<SymKey, Rational> t_;
};

Rational rat_binom(long n, long k);
Rational rat_inv_factorial(long n);

// Coefficient traits used by the series templates. Scalars of a series are
// either SymCoeff or Complex; the two domains never mix.
template <class C>
struct CoeffOps;

template <>
struct CoeffOps<SymCoeff> {
  static SymCoeff zero() { return SymCoeff::zero(); }
  static SymCoeff one() { return SymCoeff::one(); }
  static bool is_zero(const SymCoeff& c) { return c.is_zero(); }
  static SymCoeff scale(const SymCoeff& c, const Rational& r) { return c.scaled(r); }
};

template <>
struct CoeffOps<Complex> {
  static Complex zero() { return Complex(0.0, 0.0); }
  static Complex one() { return Complex(1.0, 0.0); }
  static bool is_zero(const Complex& c) { return c == Complex(0.0, 0.0); }
  static Complex scale(const Complex& c, const Rational& r) { return c * r.get_d(); }
};

}  // namespace cmkz
