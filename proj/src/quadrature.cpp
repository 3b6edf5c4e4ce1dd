#include "cmkz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cmkz {

namespace {

// Legendre nodes on [-1,1] by Newton iteration, then mapped to [0,1].
std::vector<double> legendre_nodes(int n) {
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r[n - 1 - i] = x;
  }
  return r;
}

// Solve the small linear system M a = b in long double (partial pivoting).
std::vector<long double> solve(std::vector<std::vector<long double>> M, std::vector<long double> b) {
  int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
    std::swap(M[c], M[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < n; ++r) {
      long double f = M[r][c] / M[c][c];
      for (int k = c; k < n; ++k) M[r][k] -= f * M[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<long double> a(n);
  for (int c = n - 1; c >= 0; --c) {
    long double s = b[c];
    for (int k = c + 1; k < n; ++k) s -= M[c][k] * a[k];
    a[c] = s / M[c][c];
  }
  return a;
}

GaussRule build_rule(int n) {
  GaussRule g;
  g.n = n;
  auto t = legendre_nodes(n);
  g.x.resize(n);
  for (int i = 0; i < n; ++i) g.x[i] = 0.5 * (t[i] + 1.0);

  // Lagrange basis in monomial coefficients: V^T c_j = e_j with V[i][k] = x_i^k.
  std::vector<std::vector<long double>> V(n, std::vector<long double>(n));
  for (int i = 0; i < n; ++i) {
    long double p = 1.0;
    for (int k = 0; k < n; ++k) {
      V[i][k] = p;
      p *= g.x[i];
    }
  }
  g.w.assign(n, 0.0);
  g.S.assign(n, std::vector<double>(n, 0.0));
  for (int j = 0; j < n; ++j) {
    std::vector<long double> e(n, 0.0L);
    e[j] = 1.0L;
    auto cj = solve(V, e);  // V a = e_j evaluated row-wise means a = coeffs with l_j(x_i)=delta_ij
    // full-interval weight and partial integrals to each node
    long double wfull = 0.0L;
    for (int k = 0; k < n; ++k) wfull += cj[k] / (k + 1);
    g.w[j] = static_cast<double>(wfull);
    for (int i = 0; i < n; ++i) {
      long double s = 0.0L, p = g.x[i];
      for (int k = 0; k < n; ++k) {
        s += cj[k] * p / (k + 1);
        p *= g.x[i];
      }
      g.S[i][j] = static_cast<double>(s);
    }
  }
  return g;
}

}  // namespace

const GaussRule& GaussRule::get(int n) {
  static std::map<int, GaussRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

namespace {

using State = std::vector<Complex>;  // State[j] = value of level j (level n == innermost)

// Advance all levels across [a,b] with one collocation panel.
State advance_panel(const std::vector<Form>& forms, const GaussRule& g, double a, double b,
                    const State& in) {
  int n = static_cast<int>(forms.size());
  double h = b - a;
  std::vector<std::vector<Complex>> fv(n, std::vector<Complex>(g.n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < g.n; ++i) fv[j][i] = forms[j](a + h * g.x[i]);

  // node values, innermost level first
  std::vector<Complex> level(g.n, Complex(1.0, 0.0));  // virtual level n+1
  State out = in;
  for (int j = n - 1; j >= 0; --j) {
    std::vector<Complex> next(g.n);
    for (int i = 0; i < g.n; ++i) {
      Complex acc = in[j];
      for (int k = 0; k < g.n; ++k) acc += h * g.S[i][k] * fv[j][k] * level[k];
      next[i] = acc;
    }
    Complex end = in[j];
    for (int k = 0; k < g.n; ++k) end += h * g.w[k] * fv[j][k] * level[k];
    out[j] = end;
    level = std::move(next);
  }
  return out;
}

double state_dist(const State& a, const State& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void advance_adaptive(const std::vector<Form>& forms, const GaussRule& g, double a, double b,
                      State& st, double tol_per_len, int depth, int max_depth) {
  State one = advance_panel(forms, g, a, b, st);
  State h1 = advance_panel(forms, g, a, 0.5 * (a + b), st);
  State h2 = advance_panel(forms, g, 0.5 * (a + b), b, h1);
  double err = state_dist(one, h2);
  double scale = 1.0;
  for (size_t i = 0; i < h2.size(); ++i)
    scale = std::max({scale, std::abs(h2[i]), std::abs(h2[i] - st[i])});
  double target = std::max(tol_per_len * std::abs(b - a), 5e-15 * scale);
  if (err <= target) {
    st = h2;
    return;
  }
  if (depth >= max_depth) {
    if (err > 1e3 * target)
      throw QuadratureError("iterated integral: tolerance not met at max depth");
    st = h2;
    return;
  }
  advance_adaptive(forms, g, a, 0.5 * (a + b), st, tol_per_len, depth + 1, max_depth);
  advance_adaptive(forms, g, 0.5 * (a + b), b, st, tol_per_len, depth + 1, max_depth);
}

}  // namespace

Complex iterated_integral_scalar(const std::vector<Form>& forms, double a, double b,
                                 const QuadratureSpec& q,
                                 const std::vector<double>& interior_breaks) {
  if (forms.empty()) return Complex(1.0, 0.0);
  const GaussRule& g = GaussRule::get(q.rule_order);
  State st(forms.size(), Complex(0.0, 0.0));
  std::vector<double> pts = {a};
  for (double t : interior_breaks)
    if ((a < t && t < b) || (b < t && t < a)) pts.push_back(t);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end(), [&](double u, double v) { return a < b ? u < v : u > v; });
  double tol_per_len = (q.abs_tol + q.rel_tol) / std::max(1e-300, std::abs(b - a));
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    advance_adaptive(forms, g, pts[i], pts[i + 1], st, tol_per_len, 0, q.max_depth);
  return st[0];
}

}  // namespace cmkz
