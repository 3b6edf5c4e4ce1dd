#include "cmkz/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cmkz {

bool zeta_admissible(const ZetaIndex& idx) {
  if (idx.empty() || idx.front() < 2) return false;
  for (int s : idx)
    if (s < 1) return false;
  return true;
}

int zeta_weight(const ZetaIndex& idx) {
  int w = 0;
  for (int s : idx) w += s;
  return w;
}

std::string zeta_to_string(const ZetaIndex& idx) {
  std::ostringstream os;
  os << "z(";
  for (size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
  os << ")";
  return os.str();
}

MzvMonomial::MzvMonomial(ZetaIndex idx) {
  factors.push_back(std::move(idx));
}

void MzvMonomial::canonicalize() { std::sort(factors.begin(), factors.end()); }

MzvMonomial MzvMonomial::operator*(const MzvMonomial& o) const {
  MzvMonomial r;
  r.factors = factors;
  r.factors.insert(r.factors.end(), o.factors.begin(), o.factors.end());
  r.canonicalize();
  return r;
}

int MzvMonomial::weight() const {
  int w = 0;
  for (const auto& f : factors) w += zeta_weight(f);
  return w;
}

SymCoeff SymCoeff::monomial(SymKey key, Rational r) {
  SymCoeff c;
  r.canonicalize();
  if (r != 0) c.t_.emplace(std::move(key), std::move(r));
  return c;
}

SymCoeff SymCoeff::rational(Rational r) { return monomial(SymKey{}, std::move(r)); }

SymCoeff SymCoeff::ipi(int power, Rational r) {
  SymKey k;
  k.ipi = power;
  return monomial(std::move(k), std::move(r));
}

SymCoeff SymCoeff::lneps(int power, Rational r) {
  SymKey k;
  k.lneps = power;
  return monomial(std::move(k), std::move(r));
}

SymCoeff SymCoeff::zeta(const ZetaIndex& idx, Rational r) {
  if (!zeta_admissible(idx)) throw CoeffDomainError("inadmissible zeta index " + zeta_to_string(idx));
  SymKey k;
  k.zetas = MzvMonomial(idx);
  return monomial(std::move(k), std::move(r));
}

SymCoeff& SymCoeff::operator+=(const SymCoeff& o) {
  for (const auto& [k, v] : o.t_) {
    auto it = t_.find(k);
    if (it == t_.end()) {
      t_.emplace(k, v);
    } else {
      it->second += v;
      it->second.canonicalize();
      if (it->second == 0) t_.erase(it);
    }
  }
  return *this;
}

SymCoeff& SymCoeff::operator-=(const SymCoeff& o) { return *this += o.scaled(-1); }

SymCoeff SymCoeff::operator+(const SymCoeff& o) const {
  SymCoeff r = *this;
  r += o;
  return r;
}

SymCoeff SymCoeff::operator-(const SymCoeff& o) const {
  SymCoeff r = *this;
  r -= o;
  return r;
}

SymCoeff SymCoeff::operator-() const { return scaled(-1); }

SymCoeff SymCoeff::operator*(const SymCoeff& o) const {
  SymCoeff r;
  for (const auto& [ka, va] : t_)
    for (const auto& [kb, vb] : o.t_) {
      SymKey k;
      k.ipi = ka.ipi + kb.ipi;
      k.lneps = ka.lneps + kb.lneps;
      k.zetas = ka.zetas * kb.zetas;
      Rational v = va * vb;
      auto it = r.t_.find(k);
      if (it == r.t_.end()) {
        r.t_.emplace(std::move(k), std::move(v));
      } else {
        it->second += v;
        if (it->second == 0) r.t_.erase(it);
      }
    }
  return r;
}

SymCoeff& SymCoeff::operator*=(const SymCoeff& o) {
  *this = *this * o;
  return *this;
}

SymCoeff SymCoeff::scaled(const Rational& r) const {
  SymCoeff c;
  if (r == 0) return c;
  for (const auto& [k, v] : t_) c.t_.emplace(k, v * r);
  return c;
}

SymCoeff SymCoeff::basel_reduced() const {
  SymCoeff r;
  for (const auto& [k, v] : t_) {
    int n2 = 0;
    MzvMonomial rest;
    for (const auto& f : k.zetas.factors) {
      if (f == ZetaIndex{2})
        ++n2;
      else
        rest.factors.push_back(f);
    }
    SymKey nk;
    nk.ipi = k.ipi + 2 * n2;
    nk.lneps = k.lneps;
    nk.zetas = rest;
    Rational coeff = v;
    for (int i = 0; i < n2; ++i) coeff *= Rational(-1, 6);
    r += monomial(std::move(nk), std::move(coeff));
  }
  return r;
}

Complex SymCoeff::eval(double eps, const std::function<double(const ZetaIndex&)>& zeta_fn) const {
  const Complex ipi_val(0.0, std::numbers::pi);
  const double lneps_val = std::log(eps);
  Complex acc(0.0, 0.0);
  for (const auto& [k, v] : t_) {
    Complex term(v.get_d(), 0.0);
    for (int i = 0; i < k.ipi; ++i) term *= ipi_val;
    for (int i = 0; i < k.lneps; ++i) term *= lneps_val;
    for (const auto& f : k.zetas.factors) {
      if (!zeta_admissible(f)) throw CoeffDomainError("inadmissible zeta index in coefficient");
      term *= zeta_fn(f);
    }
    acc += term;
  }
  if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()))
    throw CoeffDomainError("non-finite coefficient evaluation");
  return acc;
}

double SymCoeff::max_abs_rational() const {
  double m = 0.0;
  for (const auto& [k, v] : t_) m = std::max(m, std::abs(v.get_d()));
  return m;
}

std::string SymCoeff::to_string() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : t_) {
    if (!first) os << " + ";
    first = false;
    os << v.get_str();
    if (k.ipi) os << "*ipi^" << k.ipi;
    if (k.lneps) os << "*lneps^" << k.lneps;
    for (const auto& f : k.zetas.factors) os << "*" << zeta_to_string(f);
  }
  return os.str();
}

Rational rat_binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

Rational rat_inv_factorial(long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(1) / Rational(f);
}

}  // namespace cmkz
