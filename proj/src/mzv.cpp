#include "cmkz/mzv.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace cmkz {

namespace {

// Li_{s1,...,sk}(1/2) by direct nested summation; geometric convergence with
// an explicit tail bound.
double mpl_half(const std::vector<int>& s, double tol) {
  if (s.empty()) return 1.0;
  int k = static_cast<int>(s.size());
  std::vector<double> p(k + 1, 0.0);  // p[j] = P_j(n), inner partial sums; p[k] = 1
  p[k] = 1.0;
  double sum = 0.0, pow_half = 1.0;
  for (long n = 1; n < 100000; ++n) {
    pow_half *= 0.5;
    sum += pow_half * std::pow(static_cast<double>(n), -s[0]) * p[1];
    std::vector<double> np = p;
    for (int j = 1; j < k; ++j)
      np[j] = p[j] + std::pow(static_cast<double>(n), -s[j]) * p[j + 1];
    p = std::move(np);
    double bound = 2.0 * pow_half * std::pow(1.0 + std::log(n + 2.0), k - 1);
    if (bound < tol && n > 8) return sum;
  }
  throw MzvError("mpl_half: tolerance not met");
}

// Translate a word of the forms O0/O1 into int_0^z word = sign * Li_{s...}(z).
// Processes innermost (last) letter first; the innermost letter must be O1.
std::pair<int, std::vector<int>> word_to_li(const OmegaWord& w) {
  std::deque<int> s;
  int sign = 1;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (*it == O1) {
      s.push_front(1);
      sign = -sign;
    } else {
      if (s.empty()) throw MzvError("omega word divergent at 0 (trailing O0)");
      s.front() += 1;
    }
  }
  return {sign, std::vector<int>(s.begin(), s.end())};
}

double eval_half_word(const OmegaWord& w, double tol) {
  if (w.empty()) return 1.0;
  auto [sign, s] = word_to_li(w);
  return sign * mpl_half(s, tol);
}

}  // namespace

OmegaWord zeta_omega_word(const ZetaIndex& idx) {
  if (!zeta_admissible(idx)) throw MzvError("inadmissible zeta index " + zeta_to_string(idx));
  OmegaWord w;
  for (int s : idx) {
    for (int i = 0; i < s - 1; ++i) w.push_back(O0);
    w.push_back(O1);
  }
  return w;
}

// Path splitting at 1/2: int_0^1 w = sum_j (-1)^j [int_0^1/2 dual-rev prefix_j]
// [int_0^1/2 suffix_j], every factor a multiple polylogarithm at 1/2.
double mzv_eval(const ZetaIndex& idx, double tol) {
  if (tol <= 0) throw MzvError("mzv_eval: tol must be positive");
  OmegaWord w = zeta_omega_word(idx);
  int n = static_cast<int>(w.size());
  double piece_tol = tol / (4.0 * (n + 1));
  double total = 0.0;
  for (int j = 0; j <= n; ++j) {
    OmegaWord dual;
    for (int i = j - 1; i >= 0; --i) dual.push_back(w[i] == O0 ? O1 : O0);
    OmegaWord suffix(w.begin() + j, w.end());
    double sgn = (j % 2) ? -1.0 : 1.0;
    total += sgn * eval_half_word(dual, piece_tol) * eval_half_word(suffix, piece_tol);
  }
  double sign = (idx.size() % 2) ? -1.0 : 1.0;
  return sign * total;
}

double mzv_eval_cached(const ZetaIndex& idx, double tol) {
  static std::map<ZetaIndex, double> cache;
  auto it = cache.find(idx);
  if (it != cache.end()) return it->second;
  double v = mzv_eval(idx, tol);
  cache.emplace(idx, v);
  return v;
}

Complex polylog_eval(const ZetaIndex& idx, Complex z, double tol) {
  if (idx.empty() || tol <= 0) throw MzvError("polylog_eval: bad arguments");
  for (int s : idx)
    if (s < 1) throw MzvError("polylog_eval: indices must be >= 1");
  double az = std::abs(z);
  if (az > 1.0 + 1e-12) throw MzvError("polylog_eval: |z| > 1 out of domain");
  if (z == Complex(1.0, 0.0)) {
    if (idx.front() < 2) throw MzvError("polylog_eval: divergent at z = 1");
    return Complex(mzv_eval(idx, tol), 0.0);
  }
  int k = static_cast<int>(idx.size());
  std::vector<Complex> p(k + 1, Complex(0.0, 0.0));
  p[k] = Complex(1.0, 0.0);
  Complex sum(0.0, 0.0), zp(1.0, 0.0);
  const long cap = 20000000;
  for (long n = 1; n <= cap; ++n) {
    zp *= z;
    sum += zp * std::pow(static_cast<double>(n), -idx[0]) * p[1];
    std::vector<Complex> np = p;
    for (int j = 1; j < k; ++j)
      np[j] = p[j] + std::pow(static_cast<double>(n), -idx[j]) * p[j + 1];
    p = std::move(np);
    double logs = std::pow(1.0 + std::log(n + 2.0), k - 1);
    double bound;
    if (az < 1.0)
      bound = std::pow(az, n + 1) / (1.0 - az) * logs * std::pow(static_cast<double>(n), -idx[0]);
    else
      bound = 2.0 * logs * std::pow(static_cast<double>(n), 1 - idx[0]) / std::max(1, idx[0] - 1);
    if (bound < tol && n > 8) return sum;
  }
  throw MzvError("polylog_eval: tolerance not met");
}

FormSpec FormSpec::omega0() {
  FormSpec f;
  f.kind = Omega0;
  f.fn = [](double s) { return Complex(1.0 / s, 0.0); };
  return f;
}

FormSpec FormSpec::omega1() {
  FormSpec f;
  f.kind = Omega1;
  f.fn = [](double s) { return Complex(1.0 / (s - 1.0), 0.0); };
  return f;
}

FormSpec FormSpec::custom(Form f) {
  FormSpec r;
  r.kind = Custom;
  r.fn = std::move(f);
  return r;
}

Complex iterated_integral(const std::vector<FormSpec>& forms, double a, double b,
                          const QuadratureSpec& q) {
  double lo = std::min(a, b), hi = std::max(a, b);
  std::vector<Form> fns;
  for (const auto& f : forms) {
    if (f.kind == FormSpec::Omega0 && lo <= 0.0 && hi >= 0.0)
      throw MzvError("iterated_integral: omega0 singular at 0 inside interval");
    if (f.kind == FormSpec::Omega1 && lo <= 1.0 && hi >= 1.0)
      throw MzvError("iterated_integral: omega1 singular at 1 inside interval");
    fns.push_back(f.fn);
  }
  return iterated_integral_scalar(fns, a, b, q);
}

Complex omega_word_unit_integral(const OmegaWord& word, double tol, double eps0) {
  if (word.empty()) return Complex(1.0, 0.0);
  if (word.front() != O0 || word.back() != O1)
    throw MzvError("omega_word_unit_integral: word must start with O0 and end with O1");

  std::vector<Form> fns;
  for (int l : word)
    fns.push_back(l == O0 ? Form([](double s) { return Complex(1.0 / s, 0.0); })
                          : Form([](double s) { return Complex(1.0 / (s - 1.0), 0.0); }));
  QuadratureSpec q;
  q.rel_tol = tol * 1e-3;
  q.abs_tol = tol * 1e-4;

  if (eps0 <= 0.0) {
    // Default route: chop at a depth where the endpoint error
    // delta * ln^J(delta) is negligible, on a geometrically graded mesh.
    const double delta = 1e-14;
    q.rel_tol = std::min(q.rel_tol, 1e-10);
    q.abs_tol = std::min(q.abs_tol, 1e-13);
    std::vector<double> breaks;
    for (double t = 2.0 * delta; t < 0.2; t *= 2.0) {
      breaks.push_back(t);
      breaks.push_back(1.0 - t);
    }
    std::sort(breaks.begin(), breaks.end());
    return iterated_integral_scalar(fns, delta, 1.0 - delta, q, breaks);
  }

  // Endpoint error model: F(e) = L + sum_{m=1,2} e^m P_m(ln e), deg P_m <= J.
  // The log powers are centered on the grid so the solve stays conditioned.
  int J = static_cast<int>(word.size()) - 1;
  int nbasis = 2 * (J + 1) + 1;
  const double factor = 1.5;
  std::vector<double> epss(nbasis);
  std::vector<Complex> vals(nbasis);
  for (int i = 0; i < nbasis; ++i) {
    epss[i] = eps0 * std::pow(factor, i);
    vals[i] = iterated_integral_scalar(fns, epss[i], 1.0 - epss[i], q);
  }
  double lmid = std::log(epss[nbasis / 2]);

  // Solve for L with one long-double elimination per real/imag part.
  int n = nbasis;
  auto basis = [&](int i, int c) -> long double {
    if (c == 0) return 1.0L;
    int m = (c - 1) / (J + 1) + 1;  // 1 or 2
    int j = (c - 1) % (J + 1);
    long double e = epss[i], le = std::log(epss[i]) - lmid;
    long double r = 1.0L;
    for (int t = 0; t < m; ++t) r *= e;
    for (int t = 0; t < j; ++t) r *= le;
    return r;
  };
  auto solve_part = [&](bool imag_part) -> double {
    std::vector<std::vector<long double>> M(n, std::vector<long double>(n));
    std::vector<long double> b(n);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < n; ++c) M[i][c] = basis(i, c);
      b[i] = imag_part ? vals[i].imag() : vals[i].real();
    }
    for (int c = 0; c < n; ++c) {
      int piv = c;
      for (int r = c + 1; r < n; ++r)
        if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
      std::swap(M[c], M[piv]);
      std::swap(b[c], b[piv]);
      for (int r = c + 1; r < n; ++r) {
        long double f = M[r][c] / M[c][c];
        for (int k2 = c; k2 < n; ++k2) M[r][k2] -= f * M[c][k2];
        b[r] -= f * b[c];
      }
    }
    std::vector<long double> x(n);
    for (int c = n - 1; c >= 0; --c) {
      long double s = b[c];
      for (int k2 = c + 1; k2 < n; ++k2) s -= M[c][k2] * x[k2];
      x[c] = s / M[c][c];
    }
    return static_cast<double>(x[0]);
  };
  return Complex(solve_part(false), solve_part(true));
}

double mzv_eval_iterint(const ZetaIndex& idx, double tol, double eps0) {
  OmegaWord w = zeta_omega_word(idx);
  Complex v = omega_word_unit_integral(w, tol, eps0);
  double sign = (idx.size() % 2) ? -1.0 : 1.0;
  return sign * v.real();
}

std::vector<ZetaIndex> admissible_indices_up_to_weight(int w) {
  std::vector<ZetaIndex> out;
  std::function<void(ZetaIndex&, int)> rec = [&](ZetaIndex& cur, int rem) {
    if (!cur.empty()) out.push_back(cur);
    int lo = cur.empty() ? 2 : 1;
    for (int s = lo; s <= rem; ++s) {
      cur.push_back(s);
      rec(cur, rem - s);
      cur.pop_back();
    }
  };
  ZetaIndex cur;
  rec(cur, w);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cmkz
