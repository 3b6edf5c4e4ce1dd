#include "cmkz/transport.hpp"

#include <algorithm>
#include <cmath>

namespace cmkz {

namespace {

// Coefficients of L and R in Delta[dP/ds, dP/dr] at (s, r).
using DeltaSampler = std::function<std::array<Complex, 2>(double)>;

AlgebraSeries<Complex> prepend_letters(const std::array<Complex, 3>& A, int nletters,
                                       const AlgebraSeries<Complex>& W) {
  AlgebraSeries<Complex> out(W.order(), W.alphabet());
  for (const auto& [w, c] : W.terms()) {
    if (w.size() + 1 > W.order()) continue;
    for (uint8_t g = 0; g < nletters; ++g) {
      if (A[g] == Complex(0.0, 0.0)) continue;
      Word nw;
      nw.push_back(g);
      out.add_term(nw.concat(w), A[g] * c);
    }
  }
  return out;
}

struct SweepState {
  AlgebraSeries<Complex> W;  // partial transport from the sweep start
  BimoduleSeries<Complex> J; // accumulated int W^{-1} Delta W
};

double dist(const SweepState& a, const SweepState& b) {
  double m = 0.0;
  for (const auto& [w, c] : a.W.terms()) m = std::max(m, std::abs(c - b.W.coeff(w)));
  for (const auto& [w, c] : b.W.terms()) m = std::max(m, std::abs(c - a.W.coeff(w)));
  for (const auto& [mw, c] : a.J.terms()) m = std::max(m, std::abs(c - b.J.coeff(mw)));
  for (const auto& [mw, c] : b.J.terms()) m = std::max(m, std::abs(c - a.J.coeff(mw)));
  return m;
}

// One collocation panel: advance W (and J when delta != null) across [a,b].
SweepState advance_panel(const GenSampler& A, const DeltaSampler* delta, int nletters, int order,
                         const GaussRule& g, double a, double b, const SweepState& in) {
  double h = b - a;
  int n = g.n;
  std::vector<std::array<Complex, 3>> As(n);
  for (int i = 0; i < n; ++i) As[i] = A(a + h * g.x[i]);

  // node values of W grade by grade
  std::vector<AlgebraSeries<Complex>> Wnode(n, AlgebraSeries<Complex>(order, in.W.alphabet()));
  AlgebraSeries<Complex> Wend(order, in.W.alphabet());
  for (int k = 0; k <= order; ++k) {
    AlgebraSeries<Complex> ink = extract_order(in.W, k);
    if (k == 0) {
      for (int i = 0; i < n; ++i) Wnode[i] += ink;
      Wend += ink;
      continue;
    }
    std::vector<AlgebraSeries<Complex>> integrand(n, AlgebraSeries<Complex>(order, in.W.alphabet()));
    for (int i = 0; i < n; ++i) integrand[i] = prepend_letters(As[i], nletters, extract_order(Wnode[i], k - 1));
    for (int i = 0; i < n; ++i) {
      AlgebraSeries<Complex> acc = ink;
      for (int j = 0; j < n; ++j) acc += integrand[j].scaled_coeff(h * g.S[i][j]);
      Wnode[i] += acc;
    }
    AlgebraSeries<Complex> acc = ink;
    for (int j = 0; j < n; ++j) acc += integrand[j].scaled_coeff(h * g.w[j]);
    Wend += acc;
  }

  SweepState out{Wend, in.J};
  if (delta) {
    for (int i = 0; i < n; ++i) {
      auto d = (*delta)(a + h * g.x[i]);
      if (d[0] == Complex(0.0, 0.0) && d[1] == Complex(0.0, 0.0)) continue;
      BimoduleSeries<Complex> D(order, in.W.alphabet());
      for (uint8_t l = 0; l < 2; ++l) {
        ModWord m;
        m.letter = l;
        D.add_term(m, d[l]);
      }
      BimoduleSeries<Complex> term =
          whisker(series_inverse(Wnode[i]), D, Wnode[i]).scaled_coeff(h * g.w[i]);
      out.J += term;
    }
  }
  return out;
}

void advance_adaptive(const GenSampler& A, const DeltaSampler* delta, int nletters, int order,
                      const GaussRule& g, double a, double b, SweepState& st, double tol_per_len,
                      int depth, int max_depth) {
  SweepState one = advance_panel(A, delta, nletters, order, g, a, b, st);
  SweepState h1 = advance_panel(A, delta, nletters, order, g, a, 0.5 * (a + b), st);
  SweepState h2 = advance_panel(A, delta, nletters, order, g, 0.5 * (a + b), b, h1);
  double err = dist(one, h2);
  double scale = std::max({1.0, series_max_abs(h2.W), series_max_abs(h2.J)});
  double target = std::max(tol_per_len * std::abs(b - a), 5e-15 * scale);
  if (err <= target) {
    st = h2;
    return;
  }
  if (depth >= max_depth) {
    if (err > 1e3 * target) throw TransportError("transport: tolerance not met at max depth");
    st = h2;
    return;
  }
  advance_adaptive(A, delta, nletters, order, g, a, 0.5 * (a + b), st, tol_per_len, depth + 1,
                   max_depth);
  advance_adaptive(A, delta, nletters, order, g, 0.5 * (a + b), b, st, tol_per_len, depth + 1,
                   max_depth);
}

SweepState sweep(const GenSampler& A, const DeltaSampler* delta, int nletters, int order,
                 double r0, double r1, const std::vector<double>& breaks, const QuadratureSpec& q) {
  const GaussRule& g = GaussRule::get(q.rule_order);
  SweepState st{AlgebraSeries<Complex>::unit(order, nletters), BimoduleSeries<Complex>(order, nletters)};
  std::vector<double> pts = {r0};
  for (double t : breaks)
    if (r0 + 1e-14 < t && t < r1 - 1e-14) pts.push_back(t);
  pts.push_back(r1);
  std::sort(pts.begin(), pts.end());
  double tol_per_len = (q.abs_tol + q.rel_tol) / std::max(1e-12, std::abs(r1 - r0));
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    advance_adaptive(A, delta, nletters, order, g, pts[i], pts[i + 1], st, tol_per_len, 0,
                     q.max_depth);
  return st;
}

GenSampler connection_sampler(const Path1& p, const Connection& c) {
  auto f = p.f;
  auto df = p.df;
  return [f, df, c](double r) { return c.nabla(f(r), df(r)); };
}

}  // namespace

AlgebraSeries<Complex> ode_transport(const GenSampler& A, int nletters, int order, double r0,
                                     double r1, const std::vector<double>& breaks,
                                     const QuadratureSpec& q) {
  return sweep(A, nullptr, nletters, order, r0, r1, breaks, q).W;
}

AlgebraSeries<Complex> parallel_transport(const Path1& p, const Connection& c, int order,
                                          const QuadratureSpec& q) {
  return partial_transport(p, c, order, q, 0.0, 1.0);
}

AlgebraSeries<Complex> partial_transport(const Path1& p, const Connection& c, int order,
                                         const QuadratureSpec& q, double r0, double r1) {
  if (r0 > r1) throw TransportError("partial_transport: r0 > r1");
  return ode_transport(connection_sampler(p, c), 3, order, r0, r1, p.corners, q);
}

BimoduleSeries<Complex> surface_holonomy(const Path2& P, const Connection& c, int order,
                                         const QuadratureSpec& q) {
  const GaussRule& g = GaussRule::get(q.rule_order);

  // M(s) = W^{P^s}_{10} . int (W^{P^s}_{r0})^{-1} Delta[dP/ds, dP/dr] W^{P^s}_{r0} dr
  auto cross_section = [&](double s) -> BimoduleSeries<Complex> {
    auto f = P.f;
    auto pp = P.partials;
    GenSampler A = [f, pp, c, s](double r) {
      auto [ds, dr] = pp(s, r);
      (void)ds;
      return c.nabla(f(s, r), dr);
    };
    auto sup = P.support(s);
    DeltaSampler D = [f, pp, c, s, sup](double r) -> std::array<Complex, 2> {
      bool inside = false;
      for (auto [a, b] : sup)
        if (r >= a - 1e-14 && r <= b + 1e-14) inside = true;
      if (!inside) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
      auto [ds, dr] = pp(s, r);
      return c.delta(f(s, r), ds, dr);
    };
    std::vector<double> breaks = P.r_corners(s);
    for (auto [a, b] : sup) {
      breaks.push_back(a);
      breaks.push_back(b);
    }
    std::sort(breaks.begin(), breaks.end());
    SweepState st = sweep(A, &D, 3, order, 0.0, 1.0, breaks, q);
    return bimodule_act(st.W, st.J, Side::Left);
  };

  // adaptive s-integration of the bimodule-valued cross-section
  std::function<BimoduleSeries<Complex>(double, double, int)> integrate =
      [&](double a, double b, int depth) -> BimoduleSeries<Complex> {
    double h = b - a;
    BimoduleSeries<Complex> one(order, 3), two(order, 3);
    for (int i = 0; i < g.n; ++i) one += cross_section(a + h * g.x[i]).scaled_coeff(h * g.w[i]);
    for (int i = 0; i < g.n; ++i) {
      two += cross_section(a + 0.5 * h * g.x[i]).scaled_coeff(0.5 * h * g.w[i]);
      two += cross_section(a + 0.5 * h + 0.5 * h * g.x[i]).scaled_coeff(0.5 * h * g.w[i]);
    }
    double err = 0.0;
    for (const auto& [m, v] : one.terms()) err = std::max(err, std::abs(v - two.coeff(m)));
    for (const auto& [m, v] : two.terms()) err = std::max(err, std::abs(v - one.coeff(m)));
    double scale = std::max(1.0, series_max_abs(two));
    double target = std::max((q.abs_tol + q.rel_tol) * std::abs(h), 5e-15 * scale);
    if (err <= target) return two;
    if (depth >= q.max_depth) {
      if (err > 1e3 * target) throw TransportError("surface_holonomy: s-integral tolerance not met");
      return two;
    }
    return integrate(a, 0.5 * (a + b), depth + 1) + integrate(0.5 * (a + b), b, depth + 1);
  };

  std::vector<double> spts = {0.0};
  for (double t : P.s_corners)
    if (t > 1e-14 && t < 1.0 - 1e-14) spts.push_back(t);
  spts.push_back(1.0);
  std::sort(spts.begin(), spts.end());
  BimoduleSeries<Complex> total(order, 3);
  for (size_t i = 0; i + 1 < spts.size(); ++i) total += integrate(spts[i], spts[i + 1], 0);
  return total;
}

GlobularityReport globularity_check(const Path2& P, const Connection& c, int order,
                                    const QuadratureSpec& q) {
  BimoduleSeries<Complex> W = surface_holonomy(P, c, order, q);
  AlgebraSeries<Complex> src = parallel_transport(P.source, c, order, q);
  AlgebraSeries<Complex> tgt = parallel_transport(P.target, c, order, q);
  AlgebraSeries<Complex> lhs = coboundary(W);
  AlgebraSeries<Complex> rhs = src - tgt;
  AlgebraSeries<Complex> diff = lhs - rhs;
  GlobularityReport rep;
  rep.residual_by_grade.assign(order + 1, 0.0);
  for (const auto& [w, v] : diff.terms())
    rep.residual_by_grade[w.size()] = std::max(rep.residual_by_grade[w.size()], std::abs(v));
  for (double r : rep.residual_by_grade) rep.max_residual = std::max(rep.max_residual, r);
  rep.scale = std::max({series_max_abs(src), series_max_abs(tgt), 1.0});
  return rep;
}

FlatnessReport flatness_checks(const Connection& c, const std::vector<Pt>& sample) {
  FlatnessReport rep;
  const int order = 3;
  for (const Pt& pt : sample) {
    check_regular(pt);
    // fake flatness: with nabla = P(z) dz + Q(v) dv the cross partials
    // d_v P and d_z Q of the closed-form coefficients vanish identically,
    // so the curvature reduces to [nabla[u], nabla[w]].
    Tangent uz{1.0, 0.0}, uv{0.0, 1.0};
    AlgebraSeries<Complex> Pz = c.nabla_series(pt, uz, order);
    AlgebraSeries<Complex> Qv = c.nabla_series(pt, uv, order);
    AlgebraSeries<Complex> curv = commutator(Pz, Qv);
    BimoduleSeries<Complex> D = c.delta_series(pt, uz, uv, order);
    AlgebraSeries<Complex> diff = curv - coboundary(D);
    rep.max_fake_flat = std::max(rep.max_fake_flat, series_max_abs(diff));

    // 2-flatness: alternating sum of d Delta and nabla |> Delta over a
    // generic complex tangent triple (necessarily linearly dependent).
    auto density_series = [&](const std::array<Complex, 2>& d) {
      BimoduleSeries<Complex> s(order, 3);
      for (uint8_t l = 0; l < 2; ++l) {
        ModWord m;
        m.letter = l;
        s.add_term(m, d[l]);
      }
      return s;
    };
    // base densities and their closed-form z/v derivatives, permuted by the label
    auto permuted = [&](Complex cl, Complex cr) {
      std::array<Complex, 2> out{};
      for (const auto& [letter, sign] : permute_mod_letter(ML, c.label)) out[letter] += double(sign) * cl;
      for (const auto& [letter, sign] : permute_mod_letter(MR, c.label)) out[letter] += double(sign) * cr;
      return out;
    };
    Complex z = pt.z, v = pt.v;
    BimoduleSeries<Complex> dens = density_series(permuted(1.0 / (z * v), 1.0 / ((z - 1.0) * v)));
    BimoduleSeries<Complex> dens_dz =
        density_series(permuted(-1.0 / (z * z * v), -1.0 / ((z - 1.0) * (z - 1.0) * v)));
    BimoduleSeries<Complex> dens_dv =
        density_series(permuted(-1.0 / (z * v * v), -1.0 / ((z - 1.0) * v * v)));

    std::array<Tangent, 3> t = {Tangent{Complex(0.3, 0.1), Complex(-0.2, 0.7)},
                                Tangent{Complex(-0.5, 0.45), Complex(0.9, 0.2)},
                                Tangent{Complex(0.8, -0.6), Complex(0.1, -0.4)}};
    auto det = [](const Tangent& a, const Tangent& b) { return a.dz * b.dv - a.dv * b.dz; };
    auto ddelta = [&](const Tangent& a, const Tangent& b, const Tangent& cc) {
      return (dens_dz.scaled_coeff(a.dz) + dens_dv.scaled_coeff(a.dv)).scaled_coeff(det(b, cc));
    };
    BimoduleSeries<Complex> dD = ddelta(t[0], t[1], t[2]) - ddelta(t[1], t[0], t[2]) +
                                 ddelta(t[2], t[0], t[1]);
    auto nab = [&](const Tangent& a) { return c.nabla_series(pt, a, order); };
    BimoduleSeries<Complex> wedge =
        triangle_act(nab(t[0]), dens.scaled_coeff(det(t[1], t[2]))) -
        triangle_act(nab(t[1]), dens.scaled_coeff(det(t[0], t[2]))) +
        triangle_act(nab(t[2]), dens.scaled_coeff(det(t[0], t[1])));
    rep.max_two_flat = std::max(rep.max_two_flat, series_max_abs(dD + wedge));
  }
  return rep;
}

BimoduleSeries<Complex> assembly_holonomy(const Holonomy2Assembly& terms, const Connection& c,
                                          int order, const QuadratureSpec& q) {
  if (terms.empty()) throw TransportError("assembly_holonomy: empty assembly");
  BimoduleSeries<Complex> total(order, 3);
  for (const auto& term : terms) {
    BimoduleSeries<Complex> W = surface_holonomy(term.patch, c, order, q);
    AlgebraSeries<Complex> L = AlgebraSeries<Complex>::unit(order, 3);
    for (const auto& p : term.left) L *= parallel_transport(p, c, order, q);
    AlgebraSeries<Complex> R = AlgebraSeries<Complex>::unit(order, 3);
    for (const auto& p : term.right) R *= parallel_transport(p, c, order, q);
    total += whisker(L, W, R).scaled(Rational(term.sign));
  }
  return total;
}

Holonomy2Assembly tau_assembly(const Tau& t, const Holonomy2Assembly& a) {
  Holonomy2Assembly out;
  for (const auto& term : a) {
    HolonomyTerm nt;
    nt.sign = term.sign;
    for (const auto& p : term.left) nt.left.push_back(tau_path(t, p));
    nt.patch = tau_path2(t, term.patch);
    for (const auto& p : term.right) nt.right.push_back(tau_path(t, p));
    out.push_back(nt);
  }
  return out;
}

}  // namespace cmkz
