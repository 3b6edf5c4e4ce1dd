#include "cmkz/associator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cmkz/transport.hpp"

namespace cmkz {

namespace {

struct Profile {
  std::vector<int> p, q;
  int weight() const {
    int w = 0;
    for (int x : p) w += x;
    for (int x : q) w += x;
    return w;
  }
  ZetaIndex zeta_tuple() const {
    ZetaIndex t;
    for (size_t l = 0; l < p.size(); ++l) {
      t.push_back(p[l] + 1);
      for (int i = 0; i < q[l] - 1; ++i) t.push_back(1);
    }
    return t;
  }
};

void compositions(int total, int len, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (len == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (int x = 1; x <= total - (len - 1); ++x) {
    cur.push_back(x);
    compositions(total - x, len - 1, cur, out);
    cur.pop_back();
  }
}

std::vector<Profile> profiles_up_to(int maxw) {
  std::vector<Profile> out;
  for (int g = 1; 2 * g <= maxw; ++g)
    for (int wp = g; wp <= maxw - g; ++wp)
      for (int wq = g; wp + wq <= maxw; ++wq) {
        std::vector<std::vector<int>> ps, qs;
        std::vector<int> cur;
        compositions(wp, g, cur, ps);
        compositions(wq, g, cur, qs);
        for (auto& p : ps)
          for (auto& q : qs) out.push_back(Profile{p, q});
      }
  return out;
}

// iterate 0 <= j <= bound componentwise
bool next_multi(std::vector<int>& j, const std::vector<int>& bound) {
  for (size_t i = 0; i < j.size(); ++i) {
    if (j[i] < bound[i]) {
      ++j[i];
      for (size_t k = 0; k < i; ++k) j[k] = 0;
      return true;
    }
  }
  return false;
}

Word word_pow(uint8_t g, int n) {
  Word w;
  for (int i = 0; i < n; ++i) w.push_back(g);
  return w;
}

}  // namespace

AlgebraSeries<SymCoeff> phi_symbolic_form(int order, bool ad_form) {
  AlgebraSeries<SymCoeff> phi = AlgebraSeries<SymCoeff>::unit(order, 2);
  for (const auto& prof : profiles_up_to(order)) {
    int g = static_cast<int>(prof.p.size());
    int wp = 0, wq = 0;
    for (int x : prof.p) wp += x;
    for (int x : prof.q) wq += x;
    ZetaIndex tuple = prof.zeta_tuple();

    std::vector<int> j(g, 0);
    do {
      int aj = 0;
      for (int x : j) aj += x;
      Rational cj = 1;
      for (int l = 0; l < g; ++l) cj *= rat_binom(prof.p[l], j[l]);
      if ((aj + wp) % 2) cj = -cj;
      SymCoeff zeta_j = SymCoeff::zeta(tuple, cj);

      if (!ad_form) {
        std::vector<int> k(g, 0);
        do {
          int ak = 0;
          for (int x : k) ak += x;
          Rational ck = 1;
          for (int l = 0; l < g; ++l) ck *= rat_binom(prof.q[l], k[l]);
          if (ak % 2) ck = -ck;
          Word w = word_pow(GB, wq - ak);
          for (int l = 0; l < g; ++l) {
            w = w.concat(word_pow(GA, j[l]));
            w = w.concat(word_pow(GB, k[l]));
          }
          w = w.concat(word_pow(GA, wp - aj));
          phi.add_term(w, zeta_j.scaled(ck));
        } while (next_multi(k, prof.q));
      } else {
        AlgebraSeries<SymCoeff> B = AlgebraSeries<SymCoeff>::generator(order, 2, GB);
        AlgebraSeries<SymCoeff> X = AlgebraSeries<SymCoeff>::unit(order, 2);
        for (int i = 0; i < j[0]; ++i) X *= AlgebraSeries<SymCoeff>::generator(order, 2, GA);
        X = ad_power(B, X, prof.q[0]);
        for (int l = 1; l < g; ++l) {
          for (int i = 0; i < j[l]; ++i) X *= AlgebraSeries<SymCoeff>::generator(order, 2, GA);
          X = ad_power(B, X, prof.q[l]);
        }
        for (int i = 0; i < wp - aj; ++i) X *= AlgebraSeries<SymCoeff>::generator(order, 2, GA);
        phi += X.scaled_coeff(zeta_j);
      }
    } while (next_multi(j, prof.p));
  }
  return phi;
}

AlgebraSeries<SymCoeff> phi_symbolic(int order) {
  AlgebraSeries<SymCoeff> a = phi_symbolic_form(order, false);
  AlgebraSeries<SymCoeff> b = phi_symbolic_form(order, true);
  if (!(a - b).is_zero()) throw AssociatorError("phi_symbolic: profile and ad forms disagree");
  return a;
}

AlgebraSeries<Complex> phi_symbolic_eval(int order, double mzv_tol) {
  auto zeta_fn = [mzv_tol](const ZetaIndex& idx) { return mzv_eval_cached(idx, mzv_tol); };
  return series_eval(phi_symbolic(order), 0.5, zeta_fn);
}

namespace {

double brw_integral_upper_limit(double tol, int total_degree) {
  double T = -std::log(tol) + total_degree * std::log(std::max(2.0, -std::log(tol)));
  for (int i = 0; i < 60; ++i) {
    double tail = std::exp(-T + total_degree * std::log(std::max(T, 2.0)));
    if (tail < tol / 10.0) return T;
    T *= 2.0;
  }
  throw AssociatorError("phi_numeric_brw: cannot satisfy tail bound");
}

// Xi_{B,A} in the two-letter algebra: 1 + sum I_{l1..lr} ad_B^{l1}(A)...ad_B^{lr}(A).
AlgebraSeries<Complex> xi_series(uint8_t letterB, uint8_t letterA, int order, double tol) {
  static std::map<std::pair<std::vector<int>, double>, double> cache;
  AlgebraSeries<Complex> xi = AlgebraSeries<Complex>::unit(order, 2);
  AlgebraSeries<Complex> A = AlgebraSeries<Complex>::generator(order, 2, letterA);
  AlgebraSeries<Complex> B = AlgebraSeries<Complex>::generator(order, 2, letterB);

  std::function<void(std::vector<int>&, const AlgebraSeries<Complex>&)> rec =
      [&](std::vector<int>& ls, const AlgebraSeries<Complex>& prefix) {
        int used = 0;
        for (int l : ls) used += l + 1;
        if (!ls.empty()) {
          double Ival;
          auto key = std::make_pair(ls, tol);
          auto it = cache.find(key);
          if (it != cache.end()) {
            Ival = it->second;
          } else {
            int deg = 0;
            for (int l : ls) deg += l;
            double T = brw_integral_upper_limit(tol, deg + static_cast<int>(ls.size()));
            std::vector<Form> forms;
            for (int l : ls)
              forms.push_back([l](double t) {
                return Complex(std::pow(t, l) / (2.0 * std::exp(t) - 1.0), 0.0);
              });
            QuadratureSpec q;
            q.rel_tol = tol * 1e-3;
            q.abs_tol = tol * 1e-4;
            Complex v = iterated_integral_scalar(forms, 0.0, T, q);
            Ival = v.real();
            for (int l : ls) Ival /= std::tgamma(l + 1.0);
            cache.emplace(key, Ival);
          }
          xi += prefix.scaled_coeff(Complex(Ival, 0.0));
        }
        for (int l = 0; used + l + 1 <= order; ++l) {
          ls.push_back(l);
          rec(ls, ls.size() == 1 ? ad_power(B, A, l) : prefix * ad_power(B, A, l));
          ls.pop_back();
        }
      };
  std::vector<int> ls;
  rec(ls, AlgebraSeries<Complex>::unit(order, 2));
  return xi;
}

}  // namespace

AlgebraSeries<Complex> phi_numeric_brw(int order, double tol) {
  const double ln2 = std::log(2.0);
  AlgebraSeries<Complex> A = AlgebraSeries<Complex>::generator(order, 2, GA);
  AlgebraSeries<Complex> B = AlgebraSeries<Complex>::generator(order, 2, GB);
  AlgebraSeries<Complex> xiBA = xi_series(GB, GA, order, tol);
  AlgebraSeries<Complex> xiAB = xi_series(GA, GB, order, tol);
  return series_exp(B.scaled_coeff(ln2)) * xiBA * series_inverse(xiAB) *
         series_exp(A.scaled_coeff(-ln2));
}

AlgebraSeries<Complex> phi_transport_eps(int order, double eps, const QuadratureSpec& q) {
  if (eps <= 0.0 || eps > 0.25) throw AssociatorError("phi_transport_eps: eps out of (0, 1/4]");
  double speed = 1.0 - 2.0 * eps;
  auto sampler = [eps, speed](double t) -> std::array<Complex, 3> {
    double c = eps + t * speed;
    return {Complex(speed / c, 0.0), Complex(speed / (c - 1.0), 0.0), Complex(0.0, 0.0)};
  };
  AlgebraSeries<Complex> W = ode_transport(sampler, 2, order, 0.0, 1.0, {}, q);
  double le = std::log(eps);
  AlgebraSeries<Complex> A = AlgebraSeries<Complex>::generator(order, 2, GA);
  AlgebraSeries<Complex> B = AlgebraSeries<Complex>::generator(order, 2, GB);
  return series_exp(B.scaled_coeff(-le)) * W * series_exp(A.scaled_coeff(le));
}

AlgebraSeries<Complex> phi_transport_extrapolated(int order, const QuadratureSpec& q, double eps0) {
  int J = std::max(order - 1, 0);
  int nbasis = 1 + 3 * (J + 1);
  const double factor = 1.5;
  std::vector<double> epss(nbasis);
  std::vector<AlgebraSeries<Complex>> vals;
  vals.reserve(nbasis);
  for (int i = 0; i < nbasis; ++i) {
    epss[i] = eps0 * std::pow(factor, i);
    vals.push_back(phi_transport_eps(order, epss[i], q));
  }
  double lmid = std::log(epss[nbasis / 2]);
  auto basis = [&](int i, int c) -> long double {
    if (c == 0) return 1.0L;
    int m = (c - 1) / (J + 1) + 1;
    int j = (c - 1) % (J + 1);
    long double r = 1.0L, e = epss[i], le = std::log(epss[i]) - lmid;
    for (int t = 0; t < m; ++t) r *= e;
    for (int t = 0; t < j; ++t) r *= le;
    return r;
  };
  // column scaling + one LU solve per coefficient component
  int n = nbasis;
  std::vector<std::vector<long double>> M0(n, std::vector<long double>(n));
  std::vector<long double> colscale(n, 0.0L);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) {
      M0[i][c] = basis(i, c);
      colscale[c] = std::max(colscale[c], std::abs(M0[i][c]));
    }
  auto solve_first = [&](const std::vector<long double>& rhs) -> long double {
    auto M = M0;
    auto b = rhs;
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) M[i][c] /= colscale[c];
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
    std::vector<long double> x(n);
    for (int c = n - 1; c >= 0; --c) {
      long double s = b[c];
      for (int k = c + 1; k < n; ++k) s -= M[c][k] * x[k];
      x[c] = s / M[c][c];
    }
    return x[0] / colscale[0];
  };

  AlgebraSeries<Complex> out(order, 2);
  std::map<Word, bool> words;
  for (const auto& v : vals)
    for (const auto& [w, cval] : v.terms()) words[w] = true;
  for (const auto& [w, dummy] : words) {
    std::vector<long double> re(n), im(n);
    for (int i = 0; i < n; ++i) {
      Complex cv = vals[i].coeff(w);
      re[i] = cv.real();
      im[i] = cv.imag();
    }
    out.add_term(w, Complex(static_cast<double>(solve_first(re)),
                            static_cast<double>(solve_first(im))));
  }
  return out;
}

}  // namespace cmkz
