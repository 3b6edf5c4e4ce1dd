#include "cmkz/hexagonator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cmkz {

namespace {

SymAlg sgen3(int order, uint8_t g) { return SymAlg::generator(order, 3, g); }
SymAlg sunit(int order) { return SymAlg::unit(order, 3); }
SymBim sletter(int order, uint8_t l) { return SymBim::letter(order, 3, l); }

SymAlg exp_of(const SymAlg& x, const SymCoeff& c) { return series_exp(x.scaled_coeff(c)); }
SymAlg exp_ipi(const SymAlg& x) { return exp_of(x, SymCoeff::ipi()); }
SymAlg exp_lneps(const SymAlg& x) { return exp_of(x, SymCoeff::lneps()); }

SymBim ad_pow_bim(const SymAlg& x, SymBim m, int q) {
  for (int i = 0; i < q; ++i) m = triangle_act(x, m);
  return m;
}

SymAlg phi_sub(int order, uint8_t ga, uint8_t gb) {
  static std::map<std::tuple<int, uint8_t, uint8_t>, SymAlg> cache;
  auto key = std::make_tuple(order, ga, gb);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  SymAlg v = substitute_pair(phi_symbolic(order), sgen3(order, ga), sgen3(order, gb));
  cache.emplace(key, v);
  return v;
}

SymAlg phi_of(int order, const SymAlg& X, const SymAlg& Y) {
  return substitute_pair(phi_symbolic(order), X, Y);
}

}  // namespace

SymAlg dpartial_residual(const ModificationSeries& m) {
  return coboundary(m.value) - (m.source - m.target);
}

ModificationSeries congruence_series(uint8_t letter, int order) {
  SymAlg t12 = sgen3(order, T12);
  SymAlg T = t123_grouped_series<SymCoeff>(order);
  SymBim L = sletter(order, ML);
  SymBim val(order, 3);
  for (int m = 1; m + 1 <= order; ++m)
    for (int n = 1; m + n <= order; ++n) {
      SymCoeff c = SymCoeff::ipi(m + n, rat_inv_factorial(m) * rat_inv_factorial(n));
      for (int j = 0; j <= m - 1; ++j)
        for (int k = 0; k <= n - 1; ++k) {
          SymAlg left = series_pow(T, j) * series_pow(t12, k);
          SymAlg right = series_pow(t12, n - 1 - k) * series_pow(T, m - 1 - j);
          val += whisker(left, L, right).scaled_coeff(c);
        }
    }
  ModificationSeries ms;
  ms.name = "congruence_L";
  ms.value = val;
  ms.source = exp_ipi(t12) * exp_ipi(T);
  ms.target = exp_ipi(T) * exp_ipi(t12);
  if (letter == MR) {
    Perm3 p321 = Perm3::from_key(321);
    ms.name = "congruence_R";
    ms.value = permute_labels(ms.value, p321);
    ms.source = permute_labels(ms.source, p321);
    ms.target = permute_labels(ms.target, p321);
  }
  return ms;
}

SymBim t_eps_series(int order) {
  SymAlg t12 = sgen3(order, T12);
  SymAlg T = t123_grouped_series<SymCoeff>(order);
  SymBim L = sletter(order, ML);
  SymBim acc(order, 3);
  for (int m = 1; m + 1 <= order; ++m)
    for (int n = 1; m + n <= order; ++n) {
      Rational r = rat_inv_factorial(m) * rat_inv_factorial(n);
      if (n % 2) r = -r;  // (-ln eps)^n
      SymKey key;
      key.ipi = m;
      key.lneps = n;
      SymCoeff c = SymCoeff::monomial(key, r);
      for (int j = 0; j <= m - 1; ++j)
        for (int k = 0; k <= n - 1; ++k) {
          SymAlg left = series_pow(T, j) * series_pow(t12, k);
          SymAlg right = series_pow(t12, n - 1 - k) * series_pow(T, m - 1 - j);
          acc += whisker(left, L, right).scaled_coeff(c);
        }
    }
  return bimodule_act(exp_lneps(t12), acc, Side::Right);
}

ModificationSeries bch_modification(int order) {
  SymAlg t13 = sgen3(order, T13);
  SymAlg lam = lambda_series<SymCoeff>(order);
  SymAlg tbar = tbar13_series<SymCoeff>(order);
  SymBim LR = sletter(order, ML) + sletter(order, MR);
  SymBim val(order, 3);
  for (int n = 2; n <= order; ++n) {
    SymCoeff c = SymCoeff::lneps(n, rat_inv_factorial(n));
    for (int j = 1; j <= n - 1; ++j)
      for (int k = 0; k <= n - j - 1; ++k)
        for (int l = 1; l <= n - j - k; ++l) {
          SymAlg left = series_pow(t13, j - 1) * series_pow(lam, l - 1);
          SymAlg right = series_pow(lam, n - j - k - l) * series_pow(tbar, k);
          val += whisker(left, LR, right).scaled_coeff(c.scaled(rat_binom(n - j, k)));
        }
  }
  ModificationSeries ms;
  ms.name = "bch";
  ms.value = val;
  ms.source = exp_lneps(lam) * exp_lneps(tbar);
  ms.target = exp_lneps(t13);
  return ms;
}

ModificationSeries exp_shift_modification(ExpShift which, int order) {
  SymAlg t12 = sgen3(order, T12);
  SymAlg t13 = sgen3(order, T13);
  SymAlg T = t123_grouped_series<SymCoeff>(order);
  SymAlg lam = lambda_series<SymCoeff>(order);
  SymAlg tbar = tbar13_series<SymCoeff>(order);
  SymBim L = sletter(order, ML);
  SymBim LR = sletter(order, ML) + sletter(order, MR);
  ModificationSeries ms;
  SymBim val(order, 3);

  if (which == ExpShift::QVI || which == ExpShift::QIV) {
    bool qvi = which == ExpShift::QVI;
    const SymAlg& head = qvi ? T : t13;
    const SymAlg& tail = qvi ? t12 : tbar;
    const SymBim& ins = qvi ? L : LR;
    for (int m = 2; m <= order; ++m) {
      SymCoeff c = SymCoeff::ipi(m, -rat_inv_factorial(m));
      for (int l = 1; l <= m - 1; ++l)
        for (int q = 0; q <= m - l - 1; ++q)
          for (int j = 0; j <= m - l - q - 1; ++j) {
            Rational b = rat_binom(m - l, q);
            if (qvi && (q % 2)) b = -b;
            SymAlg left = series_pow(head, l - 1) * series_pow(lam, j);
            SymAlg right = series_pow(lam, m - l - q - 1 - j) * series_pow(tail, q);
            val += whisker(left, ins, right).scaled_coeff(c.scaled(b));
          }
    }
    ms.name = qvi ? "exp_shift_QVI" : "exp_shift_QIV";
    ms.value = val;
    ms.source = qvi ? exp_ipi(T) : exp_ipi(t13);
    ms.target = qvi ? exp_ipi(lam) * exp_of(t12, SymCoeff::ipi(1, -1))
                    : exp_ipi(lam) * exp_ipi(tbar);
    return ms;
  }

  // PIV: [e^{i pi tbar13}, eps^Lambda] ==> 0
  for (int m = 1; m + 1 <= order; ++m)
    for (int k = 1; m + k <= order; ++k) {
      SymKey key;
      key.ipi = m;
      key.lneps = k;
      SymCoeff c = SymCoeff::monomial(key, -rat_inv_factorial(m) * rat_inv_factorial(k));
      for (int l = 0; l <= m - 1; ++l)
        for (int j = 0; j <= k - 1; ++j) {
          SymAlg left = series_pow(tbar, l) * series_pow(lam, j);
          SymAlg right = series_pow(lam, k - 1 - j) * series_pow(tbar, m - l - 1);
          val += whisker(left, LR, right).scaled_coeff(c);
        }
    }
  ms.name = "exp_shift_PIV";
  ms.value = val;
  ms.source = exp_ipi(tbar) * exp_lneps(lam) - exp_lneps(lam) * exp_ipi(tbar);
  ms.target = SymAlg::zero(order, 3);
  return ms;
}

namespace {

struct Profile {
  std::vector<int> p, q;
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

std::vector<Profile> lm_profiles(int maxw) {
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

ZetaIndex profile_tuple(const Profile& prof) {
  ZetaIndex t;
  for (size_t l = 0; l < prof.p.size(); ++l) {
    t.push_back(prof.p[l] + 1);
    for (int i = 0; i < prof.q[l] - 1; ++i) t.push_back(1);
  }
  return t;
}

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

}  // namespace

ModificationSeries phi_shift_modification(int variant, int order) {
  if (variant != 213 && variant != 231) throw HexError("phi_shift_modification: variant must be 213 or 231");
  uint8_t gx = variant == 213 ? T12 : T23;
  SymAlg x = sgen3(order, gx);
  SymAlg t13 = sgen3(order, T13);
  SymAlg tbar = tbar13_series<SymCoeff>(order);
  SymBim ins = sletter(order, variant == 213 ? ML : MR);
  SymBim LR = sletter(order, ML) + sletter(order, MR);
  SymBim val(order, 3);

  for (const auto& prof : lm_profiles(order)) {
    int g = static_cast<int>(prof.p.size());
    int wp = 0;
    for (int v2 : prof.p) wp += v2;
    ZetaIndex tuple = profile_tuple(prof);

    std::vector<int> j(g, 0);
    do {
      int aj = 0;
      Rational cj = 1;
      for (int l = 0; l < g; ++l) {
        aj += j[l];
        cj *= rat_binom(prof.p[l], j[l]);
      }
      if ((aj + wp) % 2) cj = -cj;
      SymCoeff zj = SymCoeff::zeta(tuple, cj);

      for (int l = 1; l <= g; ++l) {
        SymBim M(order, 3);
        for (int m = 0; m <= prof.q[l - 1] - 1; ++m) {
          SymBim inner(order, 3);
          // k-multi: k_1..k_{l-1} bounded by q_r, k_l bounded by m
          std::vector<int> kb(prof.q.begin(), prof.q.begin() + (l - 1));
          kb.push_back(m);
          std::vector<int> k(l, 0);
          do {
            int ak = 0;
            Rational ck = 1;
            for (int r = 0; r < l - 1; ++r) {
              ak += k[r];
              ck *= rat_binom(prof.q[r], k[r]);
            }
            ak += k[l - 1];
            ck *= rat_binom(m, k[l - 1]);
            if (ak % 2) ck = -ck;

            std::vector<int> js(l + 1), ks(l + 1);
            js[0] = 0;
            int k0 = m - k[l - 1];
            for (int r = 0; r < l - 1; ++r) k0 += prof.q[r] - k[r];
            ks[0] = k0;
            for (int r = 1; r <= l; ++r) {
              js[r] = j[r - 1];
              ks[r] = k[r - 1];
            }

            for (int i = 0; i <= l; ++i) {
              SymAlg prefix = sunit(order);
              for (int gg = 0; gg < i; ++gg)
                prefix *= series_pow(x, js[gg]) * series_pow(tbar, ks[gg]);
              SymAlg suffix = sunit(order);
              for (int gg = i + 1; gg <= l; ++gg)
                suffix *= series_pow(x, js[gg]) * series_pow(tbar, ks[gg]);
              SymBim bracket(order, 3);
              for (int n = 1; n <= ks[i]; ++n)
                bracket += whisker(series_pow(x, js[i]) * series_pow(tbar, n - 1), LR,
                                   series_pow(tbar, ks[i] - n));
              for (int n = 1; n <= js[i]; ++n)
                bracket -= whisker(series_pow(x, n - 1), ins,
                                   series_pow(x, js[i] - n) * series_pow(tbar, ks[i]));
              if (bracket.is_zero()) continue;
              inner += whisker(prefix, bracket, suffix).scaled(ck);
            }
          } while (next_multi(k, kb));
          M += ad_pow_bim(t13, inner, prof.q[l - 1] - m - 1);
        }
        for (int i = l; i < g; ++i)
          M = ad_pow_bim(t13, bimodule_act(series_pow(x, j[i]), M, Side::Right), prof.q[i]);
        val += bimodule_act(series_pow(x, wp - aj), M, Side::Right).scaled_coeff(zj);
      }
    } while (next_multi(j, prof.p));
  }

  ModificationSeries ms;
  ms.name = variant == 213 ? "phi_shift_213" : "phi_shift_231";
  ms.value = val;
  ms.source = phi_sub(order, gx, T13);
  ms.target = phi_of(order, x, tbar);
  return ms;
}

ModificationSeries phi_lambda_comm_modification(int order) {
  SymAlg t12 = sgen3(order, T12);
  SymAlg t13 = sgen3(order, T13);
  SymAlg lam = lambda_series<SymCoeff>(order);
  SymBim L = sletter(order, ML);
  SymBim LR = sletter(order, ML) + sletter(order, MR);
  SymBim val(order, 3);

  for (const auto& prof : lm_profiles(order - 1)) {
    int g = static_cast<int>(prof.p.size());
    int wp = 0, wq = 0;
    for (int v2 : prof.p) wp += v2;
    for (int v2 : prof.q) wq += v2;
    ZetaIndex tuple = profile_tuple(prof);

    std::vector<int> j(g, 0), k(g, 0);
    do {
      std::fill(k.begin(), k.end(), 0);
      do {
        int aj = 0, ak = 0;
        Rational c = 1;
        for (int l = 0; l < g; ++l) {
          aj += j[l];
          ak += k[l];
          c *= rat_binom(prof.p[l], j[l]) * rat_binom(prof.q[l], k[l]);
        }
        if ((wp + aj + ak) % 2) c = -c;
        SymCoeff zjk = SymCoeff::zeta(tuple, c);

        std::vector<int> js(g + 2), ks(g + 2);
        js[0] = 0;
        ks[0] = wq - ak;
        for (int l = 1; l <= g; ++l) {
          js[l] = j[l - 1];
          ks[l] = k[l - 1];
        }
        js[g + 1] = wp - aj;
        ks[g + 1] = 0;

        for (int s = 1; wp + wq + s <= order; ++s) {
          SymCoeff coeff = zjk * SymCoeff::ipi(s, rat_inv_factorial(s));
          for (int a = 1; a <= s; ++a) {
            for (int l = 0; l <= g + 1; ++l) {
              if (js[l] == 0 && ks[l] == 0) continue;
              SymAlg prefix = series_pow(lam, a - 1);
              for (int n = 0; n < l; ++n)
                prefix *= series_pow(t12, js[n]) * series_pow(t13, ks[n]);
              SymAlg suffix = sunit(order);
              for (int n = l + 1; n <= g + 1; ++n)
                suffix *= series_pow(t12, js[n]) * series_pow(t13, ks[n]);
              suffix *= series_pow(lam, s - a);
              SymBim bracket(order, 3);
              for (int mm = 1; mm <= js[l]; ++mm)
                bracket += whisker(series_pow(t12, mm - 1), L,
                                   series_pow(t12, js[l] - mm) * series_pow(t13, ks[l]));
              for (int mm = 1; mm <= ks[l]; ++mm)
                bracket -= whisker(series_pow(t12, js[l]) * series_pow(t13, mm - 1), LR,
                                   series_pow(t13, ks[l] - mm));
              if (bracket.is_zero()) continue;
              val += whisker(prefix, bracket, suffix).scaled_coeff(coeff);
            }
          }
        }
      } while (next_multi(k, prof.q));
    } while (next_multi(j, prof.p));
  }

  ModificationSeries ms;
  ms.name = "phi_lambda_comm";
  ms.value = val;
  SymAlg phi213 = phi_sub(order, T12, T13);
  ms.source = phi213 * exp_ipi(lam);
  ms.target = exp_ipi(lam) * phi213;
  return ms;
}

ModificationSeries prehex_direct(int order) {
  SymAlg t12 = sgen3(order, T12);
  SymAlg t13 = sgen3(order, T13);
  SymAlg t23 = sgen3(order, T23);
  SymAlg T = t123_grouped_series<SymCoeff>(order);
  SymAlg lam = lambda_series<SymCoeff>(order);
  SymAlg tbar = tbar13_series<SymCoeff>(order);

  ModificationSeries qvi = exp_shift_modification(ExpShift::QVI, order);
  ModificationSeries qiv = exp_shift_modification(ExpShift::QIV, order);
  ModificationSeries plc = phi_lambda_comm_modification(order);
  ModificationSeries s213 = phi_shift_modification(213, order);
  ModificationSeries s231 = phi_shift_modification(231, order);

  SymAlg phi213 = phi_sub(order, T12, T13);
  SymAlg phi321 = phi_sub(order, T23, T12);
  SymAlg phi231 = phi_sub(order, T23, T13);
  SymAlg e_mt12 = exp_of(t12, SymCoeff::ipi(1, -1));
  SymAlg e_lam = exp_ipi(lam);
  SymAlg e_tbar = exp_ipi(tbar);
  SymAlg e_t23 = exp_ipi(t23);

  SymBim val = whisker(phi213, qvi.value, phi321);
  val += whisker(sunit(order), plc.value, e_mt12 * phi321);
  val += whisker(e_lam, s213.value, e_mt12 * phi321);
  val -= whisker(e_lam * e_tbar, s231.value, e_t23);
  val -= whisker(sunit(order), qiv.value, phi231 * e_t23);

  ModificationSeries ms;
  ms.name = "prehex_direct";
  ms.value = val;
  ms.source = phi213 * exp_ipi(T) * phi321;
  ms.target = exp_ipi(t13) * phi231 * e_t23;
  return ms;
}

std::vector<ModificationSeries> all_modification_builders(int order) {
  std::vector<ModificationSeries> v;
  v.push_back(congruence_series(ML, order));
  v.push_back(congruence_series(MR, order));
  v.push_back(bch_modification(order));
  v.push_back(phi_shift_modification(213, order));
  v.push_back(phi_shift_modification(231, order));
  v.push_back(phi_lambda_comm_modification(order));
  v.push_back(exp_shift_modification(ExpShift::QVI, order));
  v.push_back(exp_shift_modification(ExpShift::QIV, order));
  v.push_back(exp_shift_modification(ExpShift::PIV, order));
  v.push_back(prehex_direct(order));
  return v;
}

// ---- numeric route ------------------------------------------------------------

Holonomy2Assembly p_assembly(const PathParams& prm) {
  Holonomy2Assembly A;
  A.push_back({+1, {}, make_2path("PV", prm), {make_path("pVI", prm), make_path("pI", prm)}});
  A.push_back({-1, {}, make_2path("PIV", prm), {make_path("cIII", prm), make_path("pII", prm)}});
  A.push_back({-1, {make_path("pIV", prm)}, make_2path("PIII", prm), {make_path("pII", prm)}});
  return A;
}

Holonomy2Assembly q_assembly(const PathParams& prm) {
  Holonomy2Assembly A;
  A.push_back({+1, {make_path("qV", prm)}, make_2path("QVI", prm), {make_path("pI", prm)}});
  A.push_back({+1, {}, make_2path("QV", prm), {make_path("pVI", prm), make_path("pI", prm)}});
  Path1 qdown = make_path("qdown", prm);
  for (auto term : p_assembly(prm)) {
    term.left.insert(term.left.begin(), qdown);
    A.push_back(term);
  }
  A.push_back({-1, {}, make_2path("QIV", prm), {make_path("pIII", prm), make_path("pII", prm)}});
  return A;
}

NumBim prehex_holonomy(int order, double eps, const QuadratureSpec& q) {
  PathParams prm{eps, 1.0};
  Connection base = Connection::base();
  NumBim WQ = assembly_holonomy(q_assembly(prm), base, order, q);

  double le = std::log(eps);
  NumAlg t12 = NumAlg::generator(order, 3, T12);
  NumAlg t13 = NumAlg::generator(order, 3, T13);
  NumAlg t23 = NumAlg::generator(order, 3, T23);
  NumAlg conj_l = series_exp(t13.scaled_coeff(-le));
  NumAlg conj_r = series_exp(t23.scaled_coeff(le));
  NumBim lhs = whisker(conj_l, WQ, conj_r);

  auto zeta_fn = [](const ZetaIndex& idx) { return mzv_eval_cached(idx); };
  NumBim teps = series_eval(t_eps_series(order), eps, zeta_fn);
  NumAlg phi213 = substitute_pair(phi_transport_eps(order, eps, q), t12, t13);
  NumAlg phi321 = substitute_pair(phi_transport_eps(order, eps, q), t23, t12);
  return lhs - whisker(phi213, teps, phi321);
}

CheckReport lemma_ad_relation_check(int order) {
  SymAlg t12 = sgen3(order, T12);
  SymBim cong = congruence_series(ML, order).value;
  SymBim teps = t_eps_series(order);
  SymBim comm = triangle_act(exp_ipi(t12), teps);
  SymAlg E = exp_lneps(t12);
  SymAlg Einv = exp_of(t12, SymCoeff::lneps(1, -1));
  SymBim diff = whisker(E, cong + comm, Einv) - cong;
  CheckReport rep;
  rep.name = "lemma_ad_relation";
  rep.max_by_grade.assign(order + 1, 0.0);
  for (const auto& [m, c] : diff.terms()) {
    double a = c.max_abs_rational();
    rep.max_by_grade[m.grade()] = std::max(rep.max_by_grade[m.grade()], a);
    rep.max_abs = std::max(rep.max_abs, a);
  }
  return rep;
}

BreenSymbolicReport breen_symbolic_check(int order) {
  SymAlg t12 = sgen3(order, T12);
  SymAlg t23 = sgen3(order, T23);
  SymBim R = prehex_direct(order).value;
  SymBim R213 = permute_labels(R, Perm3::from_key(213));
  SymBim R321 = permute_labels(R, Perm3::from_key(321));
  SymBim R231 = permute_labels(R, Perm3::from_key(231));
  SymBim congL = congruence_series(ML, order).value;
  SymBim congR = congruence_series(MR, order).value;

  SymAlg phi = phi_sub(order, T12, T23);
  SymAlg phi213 = phi_sub(order, T12, T13);
  SymAlg phi321 = phi_sub(order, T23, T12);
  SymAlg phi132 = phi_sub(order, T13, T23);
  SymAlg phi231 = phi_sub(order, T23, T13);
  SymAlg phi312 = phi_sub(order, T13, T12);
  SymAlg e12 = exp_ipi(t12);
  SymAlg e23 = exp_ipi(t23);

  SymBim lhs = congL;
  lhs += whisker(phi321, R213, phi213 * e12);
  lhs -= whisker(phi321 * e23 * phi132, R321, sunit(order));
  lhs += whisker(phi321, congR, phi);
  lhs += whisker(sunit(order), R231, phi231 * e23 * phi);
  SymBim rhs = whisker(e12 * phi312, R, phi);
  SymBim diff = lhs - rhs;

  BreenSymbolicReport rep;
  rep.sym_by_grade.assign(order + 1, 0.0);
  rep.num_by_grade.assign(order + 1, 0.0);
  auto zeta_fn = [](const ZetaIndex& idx) { return mzv_eval_cached(idx); };
  for (const auto& [m, c] : diff.terms()) {
    int g = m.grade();
    rep.sym_by_grade[g] = std::max(rep.sym_by_grade[g], c.basel_reduced().max_abs_rational());
    rep.num_by_grade[g] = std::max(rep.num_by_grade[g], std::abs(c.eval(0.5, zeta_fn)));
  }
  return rep;
}

Breen2LoopReport breen_2loop_check(int order, double eps, const QuadratureSpec& q,
                                   bool gate_globularity) {
  Connection base = Connection::base();
  PathParams prmP{eps, 1.0};
  PathParams prmM{eps, -1.0};

  Holonomy2Assembly Q = q_assembly(prmP);
  Holonomy2Assembly Q213 = tau_assembly(Tau::by_name("12"), q_assembly(prmP));
  Holonomy2Assembly Q321 = tau_assembly(Tau::by_name("13"), q_assembly(prmM));
  Holonomy2Assembly Q312 = tau_assembly(Tau::by_name("(12)3"), q_assembly(prmM));

  Path1 pI = make_path("pI", prmP);
  Path1 pV = make_path("pV", prmP);
  Path1 cI = make_path("cI", prmP);
  Path1 cII = make_path("cII", prmP);
  Path1 cVI = make_path("cVI", prmP);
  Path1 pIII = make_path("pIII", prmP);

  auto with_whiskers = [](Holonomy2Assembly a, std::vector<Path1> l, std::vector<Path1> r,
                          int sign = 1) {
    for (auto& t : a) {
      t.left.insert(t.left.begin(), l.begin(), l.end());
      t.right.insert(t.right.end(), r.begin(), r.end());
      t.sign *= sign;
    }
    return a;
  };

  Holonomy2Assembly lhs;
  lhs.push_back({+1, {}, make_2path("PL", prmP), {}});
  for (auto& t : with_whiskers(Q213, {pI}, {pV, cVI})) lhs.push_back(t);
  for (auto& t : with_whiskers(Q321, {pI, cII, path_reverse(pIII)}, {}, -1)) lhs.push_back(t);
  lhs.push_back({+1, {pI}, make_2path("PR", prmP), {cI}});
  for (auto& t : with_whiskers(Q312, {}, {pIII, cII, cI})) lhs.push_back(t);
  Holonomy2Assembly rhs = with_whiskers(Q, {cVI, path_reverse(pV)}, {cI});

  Breen2LoopReport rep;
  rep.eps = eps;

  if (gate_globularity) {
    for (const auto& t : lhs) {
      auto g = globularity_check(t.patch, base, order, q);
      rep.max_globularity_residual = std::max(rep.max_globularity_residual, g.max_residual);
    }
    for (const auto& t : rhs) {
      auto g = globularity_check(t.patch, base, order, q);
      rep.max_globularity_residual = std::max(rep.max_globularity_residual, g.max_residual);
    }
  }

  NumBim L = assembly_holonomy(lhs, base, order, q);
  NumBim Rv = assembly_holonomy(rhs, base, order, q);
  NumBim diff = L - Rv;
  rep.lhs_minus_rhs_by_grade.assign(order + 1, 0.0);
  rep.scale_by_grade.assign(order + 1, 0.0);
  for (const auto& [m, c] : diff.terms())
    rep.lhs_minus_rhs_by_grade[m.grade()] =
        std::max(rep.lhs_minus_rhs_by_grade[m.grade()], std::abs(c));
  for (const auto& [m, c] : L.terms())
    rep.scale_by_grade[m.grade()] = std::max(rep.scale_by_grade[m.grade()], std::abs(c));
  for (const auto& [m, c] : Rv.terms())
    rep.scale_by_grade[m.grade()] = std::max(rep.scale_by_grade[m.grade()], std::abs(c));

  // tau-equivariance: transformed 2-paths with the base connection against the
  // original 2-paths with the pullback connection.
  {
    NumBim a = assembly_holonomy(tau_assembly(Tau::by_name("12"), p_assembly(prmP)), base, order, q);
    NumBim b = assembly_holonomy(p_assembly(prmP), Connection::pullback(Tau::by_name("12")), order, q);
    rep.tau_equivariance_residual = series_max_abs(a - b);
  }

  // Prop 5.3: (W^{P_L})_2 -> (i pi)^2 L
  {
    NumBim WPL = assembly_holonomy({{+1, {}, make_2path("PL", prmP), {}}}, base, order, q);
    ModWord mL, mR;
    mL.letter = ML;
    mR.letter = MR;
    Complex target(-std::numbers::pi * std::numbers::pi, 0.0);
    rep.congruence_grade2_error =
        std::max(std::abs(WPL.coeff(mL) - target), std::abs(WPL.coeff(mR))) / std::abs(target);
  }
  return rep;
}

NumBim predicted_grade2(const std::string& key, int order, double eps) {
  const double pi = std::numbers::pi;
  double le = std::log(eps);
  Complex cL(0.0, 0.0), cR(0.0, 0.0);
  if (key == "PV") {
    cL = Complex(-pi * pi / 6.0 - 0.5 * le * le, 0.0);
    cR = Complex(-0.5 * le * le, 0.0);
  } else if (key == "PIII") {
    cL = Complex(-0.5 * le * le, 0.0);
    cR = Complex(-pi * pi / 6.0 - 0.5 * le * le, 0.0);
  } else if (key == "PIV") {
    cL = cR = Complex(0.0, -pi * le);
  } else if (key == "QVI") {
    cL = Complex(pi * pi / 2.0, 0.0);
  } else if (key == "QV") {
    cL = Complex(0.0, -2.0 * pi * le);
    cR = Complex(0.0, -pi * le);
  } else if (key == "QIV") {
    cL = cR = Complex(pi * pi / 2.0, 0.0);
  } else if (key == "PL") {
    cL = Complex(-pi * pi, 0.0);
  } else if (key == "PR") {
    cR = Complex(-pi * pi, 0.0);
  } else {
    throw HexError("predicted_grade2: no prediction for " + key);
  }
  NumBim out(order, 3);
  ModWord mL, mR;
  mL.letter = ML;
  mR.letter = MR;
  out.add_term(mL, cL);
  out.add_term(mR, cR);
  return out;
}

}  // namespace cmkz
