#include "cmkz/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cmkz {

namespace {
constexpr double kPi = std::numbers::pi;
const Complex I(0.0, 1.0);
}  // namespace

// ---- tau maps ------------------------------------------------------------------

const std::vector<Tau>& Tau::all() {
  static const std::vector<Tau> taus = [] {
    std::vector<Tau> v;
    v.push_back(Tau{
        "12",
        [](const Pt& p) { return Pt{p.z / (p.z - 1.0), (1.0 - p.z) * p.v}; },
        [](const Pt& p, const Tangent& t) {
          return Tangent{-t.dz / ((p.z - 1.0) * (p.z - 1.0)), -p.v * t.dz + (1.0 - p.z) * t.dv};
        },
        Perm3{{2, 1, 3}}});
    v.push_back(Tau{
        "23",
        [](const Pt& p) { return Pt{1.0 / p.z, p.z * p.v}; },
        [](const Pt& p, const Tangent& t) {
          return Tangent{-t.dz / (p.z * p.z), p.v * t.dz + p.z * t.dv};
        },
        Perm3{{1, 3, 2}}});
    v.push_back(Tau{
        "13",
        [](const Pt& p) { return Pt{1.0 - p.z, -p.v}; },
        [](const Pt&, const Tangent& t) {
          return Tangent{-t.dz, -t.dv};
        },
        Perm3{{3, 2, 1}}});
    v.push_back(Tau{
        "(12)3",
        [](const Pt& p) { return Pt{1.0 / (1.0 - p.z), (p.z - 1.0) * p.v}; },
        [](const Pt& p, const Tangent& t) {
          return Tangent{t.dz / ((1.0 - p.z) * (1.0 - p.z)), p.v * t.dz + (p.z - 1.0) * t.dv};
        },
        Perm3{{2, 3, 1}}});
    v.push_back(Tau{
        "1(23)",
        [](const Pt& p) { return Pt{(p.z - 1.0) / p.z, -p.z * p.v}; },
        [](const Pt& p, const Tangent& t) {
          return Tangent{t.dz / (p.z * p.z), -p.v * t.dz - p.z * t.dv};
        },
        Perm3{{3, 1, 2}}});
    return v;
  }();
  return taus;
}

const Tau& Tau::by_name(const std::string& name) {
  for (const auto& t : all())
    if (t.name == name) return t;
  throw GeometryError("unknown tau map: " + name);
}

// ---- 1-path combinators ----------------------------------------------------------

Path1 path_reverse(const Path1& p) {
  Path1 r;
  r.id = p.id + "^rev";
  auto f = p.f;
  auto df = p.df;
  r.f = [f](double t) { return f(1.0 - t); };
  r.df = [df](double t) {
    Tangent d = df(1.0 - t);
    return Tangent{-d.dz, -d.dv};
  };
  for (auto it = p.corners.rbegin(); it != p.corners.rend(); ++it) r.corners.push_back(1.0 - *it);
  return r;
}

Path1 path_concat(const Path1& p, const Path1& q) {
  Pt pe = p.end(), qs = q.start();
  double scale = std::max({1.0, std::abs(pe.z), std::abs(pe.v)});
  if (std::abs(pe.z - qs.z) + std::abs(pe.v - qs.v) > 1e-12 * scale)
    throw GeometryError("path_concat: endpoint mismatch between " + p.id + " and " + q.id);
  Path1 r;
  r.id = p.id + "*" + q.id;
  auto pf = p.f, qf = q.f;
  auto pdf = p.df, qdf = q.df;
  r.f = [pf, qf](double t) { return t <= 0.5 ? pf(2.0 * t) : qf(2.0 * t - 1.0); };
  r.df = [pdf, qdf](double t) {
    Tangent d = t <= 0.5 ? pdf(2.0 * t) : qdf(2.0 * t - 1.0);
    return Tangent{2.0 * d.dz, 2.0 * d.dv};
  };
  for (double c : p.corners) r.corners.push_back(0.5 * c);
  r.corners.push_back(0.5);
  for (double c : q.corners) r.corners.push_back(0.5 + 0.5 * c);
  return r;
}

Path1 tau_path(const Tau& t, const Path1& p) {
  Path1 r;
  r.id = "tau" + t.name + "(" + p.id + ")";
  auto f = p.f;
  auto df = p.df;
  auto map = t.map;
  auto push = t.push;
  r.f = [f, map](double u) { return map(f(u)); };
  r.df = [f, df, push](double u) { return push(f(u), df(u)); };
  r.corners = p.corners;
  return r;
}

Path1 const_path(const Pt& x) {
  Path1 r;
  r.id = "const";
  r.f = [x](double) { return x; };
  r.df = [](double) { return Tangent{0.0, 0.0}; };
  return r;
}

Path1 segment_path(const Pt& x, const Pt& y) {
  Path1 r;
  r.id = "segment";
  r.f = [x, y](double t) { return Pt{x.z + t * (y.z - x.z), x.v + t * (y.v - x.v)}; };
  r.df = [x, y](double) { return Tangent{y.z - x.z, y.v - x.v}; };
  return r;
}

double check_path(const Path1& p, int grid, double threshold) {
  double dmin = 1e300;
  for (int i = 0; i <= grid; ++i) dmin = std::min(dmin, puncture_distance(p.f(double(i) / grid)));
  if (dmin < threshold)
    throw GeometryError("path " + p.id + " collides with a puncture (d=" + std::to_string(dmin) + ")");
  return dmin;
}

// ---- 2-path combinators -----------------------------------------------------------

Path2 tau_path2(const Tau& t, const Path2& P) {
  Path2 r;
  r.id = "tau" + t.name + "(" + P.id + ")";
  auto f = P.f;
  auto pp = P.partials;
  auto map = t.map;
  auto push = t.push;
  r.f = [f, map](double s, double u) { return map(f(s, u)); };
  r.partials = [f, pp, push](double s, double u) {
    Pt p = f(s, u);
    auto [ds, dr] = pp(s, u);
    return std::make_pair(push(p, ds), push(p, dr));
  };
  r.r_corners = P.r_corners;
  r.s_corners = P.s_corners;
  r.support = P.support;
  r.source = tau_path(t, P.source);
  r.target = tau_path(t, P.target);
  return r;
}

Path2 path2_vconcat(const Path2& lower, const Path2& upper) {
  Path2 r;
  r.id = lower.id + "|" + upper.id;
  auto lf = lower.f, uf = upper.f;
  auto lp = lower.partials, up = upper.partials;
  r.f = [lf, uf](double s, double u) { return s <= 0.5 ? lf(2.0 * s, u) : uf(2.0 * s - 1.0, u); };
  r.partials = [lp, up](double s, double u) {
    auto [ds, dr] = s <= 0.5 ? lp(2.0 * s, u) : up(2.0 * s - 1.0, u);
    return std::make_pair(Tangent{2.0 * ds.dz, 2.0 * ds.dv}, dr);
  };
  auto lrc = lower.r_corners, urc = upper.r_corners;
  r.r_corners = [lrc, urc](double s) { return s <= 0.5 ? lrc(2.0 * s) : urc(2.0 * s - 1.0); };
  r.s_corners.push_back(0.5);
  for (double c : lower.s_corners) r.s_corners.push_back(0.5 * c);
  for (double c : upper.s_corners) r.s_corners.push_back(0.5 + 0.5 * c);
  std::sort(r.s_corners.begin(), r.s_corners.end());
  auto lsu = lower.support, usu = upper.support;
  r.support = [lsu, usu](double s) { return s <= 0.5 ? lsu(2.0 * s) : usu(2.0 * s - 1.0); };
  r.source = lower.source;
  r.target = upper.target;
  return r;
}

Path2 path2_hconcat(const Path2& first, const Path2& second) {
  Path2 r;
  r.id = first.id + "&" + second.id;
  auto ff = first.f, sf = second.f;
  auto fp = first.partials, sp = second.partials;
  r.f = [ff, sf](double s, double u) { return u <= 0.5 ? ff(s, 2.0 * u) : sf(s, 2.0 * u - 1.0); };
  r.partials = [fp, sp](double s, double u) {
    auto [ds, dr] = u <= 0.5 ? fp(s, 2.0 * u) : sp(s, 2.0 * u - 1.0);
    return std::make_pair(ds, Tangent{2.0 * dr.dz, 2.0 * dr.dv});
  };
  auto frc = first.r_corners, src2 = second.r_corners;
  r.r_corners = [frc, src2](double s) {
    std::vector<double> c;
    for (double x : frc(s)) c.push_back(0.5 * x);
    c.push_back(0.5);
    for (double x : src2(s)) c.push_back(0.5 + 0.5 * x);
    return c;
  };
  r.s_corners = first.s_corners;
  for (double c : second.s_corners) r.s_corners.push_back(c);
  std::sort(r.s_corners.begin(), r.s_corners.end());
  r.s_corners.erase(std::unique(r.s_corners.begin(), r.s_corners.end()), r.s_corners.end());
  auto fsu = first.support, ssu = second.support;
  r.support = [fsu, ssu](double s) {
    std::vector<std::pair<double, double>> iv;
    for (auto [a, b] : fsu(s)) iv.emplace_back(0.5 * a, 0.5 * b);
    for (auto [a, b] : ssu(s)) iv.emplace_back(0.5 + 0.5 * a, 0.5 + 0.5 * b);
    return iv;
  };
  r.source = path_concat(first.source, second.source);
  r.target = path_concat(first.target, second.target);
  return r;
}

Path2 path2_reverse(const Path2& P) {
  Path2 r;
  r.id = P.id + "^rev";
  auto f = P.f;
  auto pp = P.partials;
  r.f = [f](double s, double u) { return f(1.0 - s, u); };
  r.partials = [pp](double s, double u) {
    auto [ds, dr] = pp(1.0 - s, u);
    return std::make_pair(Tangent{-ds.dz, -ds.dv}, dr);
  };
  auto rc = P.r_corners;
  r.r_corners = [rc](double s) { return rc(1.0 - s); };
  for (auto it = P.s_corners.rbegin(); it != P.s_corners.rend(); ++it)
    r.s_corners.push_back(1.0 - *it);
  auto su = P.support;
  r.support = [su](double s) { return su(1.0 - s); };
  r.source = P.target;
  r.target = P.source;
  return r;
}

Path2 const_path2(const Path1& p) {
  Path2 r;
  r.id = "1_(" + p.id + ")";
  auto f = p.f;
  auto df = p.df;
  r.f = [f](double, double u) { return f(u); };
  r.partials = [df](double, double u) { return std::make_pair(Tangent{0.0, 0.0}, df(u)); };
  auto corners = p.corners;
  r.r_corners = [corners](double) { return corners; };
  r.support = [](double) { return std::vector<std::pair<double, double>>{}; };
  r.source = p;
  r.target = p;
  return r;
}

Path2 straight_homotopy(const std::string& id, const Path1& p, const Path1& q) {
  Pt p0 = p.start(), q0 = q.start(), p1 = p.end(), q1 = q.end();
  if (std::abs(p0.z - q0.z) + std::abs(p0.v - q0.v) + std::abs(p1.z - q1.z) +
          std::abs(p1.v - q1.v) >
      1e-9 * std::max({1.0, std::abs(p0.z), std::abs(p1.z)}))
    throw GeometryError("straight_homotopy: boundary endpoints differ");
  Path2 r;
  r.id = id;
  auto pf = p.f, qf = q.f;
  auto pdf = p.df, qdf = q.df;
  r.f = [pf, qf](double s, double u) {
    Pt a = pf(u), b = qf(u);
    return Pt{(1.0 - s) * a.z + s * b.z, (1.0 - s) * a.v + s * b.v};
  };
  r.partials = [pf, qf, pdf, qdf](double s, double u) {
    Pt a = pf(u), b = qf(u);
    Tangent da = pdf(u), db = qdf(u);
    Tangent ds{b.z - a.z, b.v - a.v};
    Tangent dr{(1.0 - s) * da.dz + s * db.dz, (1.0 - s) * da.dv + s * db.dv};
    return std::make_pair(ds, dr);
  };
  auto pc = p.corners, qc = q.corners;
  r.r_corners = [pc, qc](double) {
    std::vector<double> c = pc;
    c.insert(c.end(), qc.begin(), qc.end());
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
  };
  r.support = [](double) {
    return std::vector<std::pair<double, double>>{{0.0, 1.0}};
  };
  r.source = p;
  r.target = q;
  return r;
}

double check_path2(const Path2& P, int grid, double threshold) {
  double dmin = 1e300;
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j)
      dmin = std::min(dmin, puncture_distance(P.f(double(i) / grid, double(j) / grid)));
  if (dmin < threshold)
    throw GeometryError("2-path " + P.id + " collides with a puncture (d=" + std::to_string(dmin) + ")");
  return dmin;
}

// ---- the BRW curves ---------------------------------------------------------------

namespace {

// All z-curves of the adapted BRW hexagon, as analytic functions of the
// parameter (usable outside [0,1] where the catalog needs translates).
struct Curves {
  double eps;
  Complex a;

  double cIp() const { return 1.0 - 2.0 * eps; }
  Complex cI(double r) const { return eps + r * (1.0 - 2.0 * eps); }
  Complex cIoi(double r) const { return cI(1.0 - r); }

  Complex cII(double r) const {
    Complex E = std::exp(I * kPi * r);
    return (2.0 - eps - eps * E) / (2.0 - eps + eps * E);
  }
  Complex cIIp(double r) const {
    Complex E = std::exp(I * kPi * r);
    Complex D = 2.0 - eps + eps * E;
    return -2.0 * eps * (2.0 - eps) * I * kPi * E / (D * D);
  }

  Complex cIII(double r) const { return 1.0 / (1.0 - cI(r)); }
  Complex cIIIp(double r) const {
    Complex d = 1.0 - cI(r);
    return cIp() / (d * d);
  }

  Complex cIV(double r) const { return 0.5 + (1.0 / eps - 0.5) * std::exp(-I * kPi * r); }
  Complex cIVp(double r) const { return -I * kPi * (1.0 / eps - 0.5) * std::exp(-I * kPi * r); }

  Complex cVoi(double r) const { return cI(r) / (cI(r) - 1.0); }
  Complex cVoip(double r) const {
    Complex d = cI(r) - 1.0;
    return -cIp() / (d * d);
  }
  Complex cV(double r) const { return cVoi(1.0 - r); }
  Complex cVp(double r) const { return -cVoip(1.0 - r); }

  Complex cVI(double r) const { return 2.0 * eps / (eps - (2.0 - eps) * std::exp(-I * kPi * r)); }
  Complex cVIp(double r) const {
    Complex D = eps - (2.0 - eps) * std::exp(-I * kPi * r);
    return -2.0 * eps * I * kPi * (2.0 - eps) * std::exp(-I * kPi * r) / (D * D);
  }
  Complex cVIoi(double r) const { return 2.0 * eps / (eps + (2.0 - eps) * std::exp(I * kPi * r)); }
  Complex cVIoip(double r) const {
    Complex D = eps + (2.0 - eps) * std::exp(I * kPi * r);
    return -2.0 * eps * (2.0 - eps) * I * kPi * std::exp(I * kPi * r) / (D * D);
  }

  Complex zSE(double r) const { return 2.0 * eps / (eps + (eps - 2.0) * std::exp(I * kPi * r)); }
  Complex zSEp(double r) const {
    Complex D = eps + (eps - 2.0) * std::exp(I * kPi * r);
    return -2.0 * eps * (eps - 2.0) * I * kPi * std::exp(I * kPi * r) / (D * D);
  }
  Complex vSE(double r) const { return (eps / 2.0 + (1.0 - eps / 2.0) * std::exp(I * kPi * r)) * a; }
  Complex vSEp(double r) const { return I * kPi * (1.0 - eps / 2.0) * std::exp(I * kPi * r) * a; }

  // vertical profile shared by the p-side drops: v(u) = (1 - cI(u)) a / (1-eps)
  Complex vp_profile(double u) const { return (1.0 - cI(u)) * a / (1.0 - eps); }
  Complex vp_profile_d(double) const { return -cIp() * a / (1.0 - eps); }
};

Path1 horizontal(const std::string& id, std::function<Complex(double)> z,
                 std::function<Complex(double)> dz, Complex v) {
  Path1 p;
  p.id = id;
  p.f = [z, v](double r) { return Pt{z(r), v}; };
  p.df = [dz](double r) { return Tangent{dz(r), 0.0}; };
  return p;
}

Path1 vertical(const std::string& id, Complex z, std::function<Complex(double)> v,
               std::function<Complex(double)> dv) {
  Path1 p;
  p.id = id;
  p.f = [z, v](double r) { return Pt{z, v(r)}; };
  p.df = [dv](double r) { return Tangent{0.0, dv(r)}; };
  return p;
}

struct Piece {
  std::function<double(double)> lo, hi;  // of s
  std::function<Pt(double, double)> f;   // (s, r) on the piece
  std::function<std::pair<Tangent, Tangent>(double, double)> df;
  bool moving = false;
};

Path2 assemble(const std::string& id, std::vector<Piece> pieces) {
  Path2 P;
  P.id = id;
  auto find = [pieces](double s, double r) -> std::pair<const Piece*, double> {
    for (size_t i = 0; i < pieces.size(); ++i) {
      double lo = pieces[i].lo(s), hi = pieces[i].hi(s);
      if (hi - lo < 1e-15) continue;
      if (r <= hi + 1e-14 || i + 1 == pieces.size())
        return {&pieces[i], std::clamp(r, lo, hi)};
    }
    throw GeometryError("2-path piece lookup failed");
  };
  P.f = [find](double s, double r) {
    auto [pc, rr] = find(s, r);
    return pc->f(s, rr);
  };
  P.partials = [find](double s, double r) {
    auto [pc, rr] = find(s, r);
    return pc->df(s, rr);
  };
  P.r_corners = [pieces](double s) {
    std::vector<double> c;
    for (const auto& pc : pieces) {
      double lo = pc.lo(s), hi = pc.hi(s);
      if (hi - lo < 1e-15) continue;
      if (lo > 1e-14) c.push_back(lo);
      if (hi < 1.0 - 1e-14) c.push_back(hi);
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
  };
  P.support = [pieces](double s) {
    std::vector<std::pair<double, double>> iv;
    for (const auto& pc : pieces) {
      if (!pc.moving) continue;
      double lo = pc.lo(s), hi = pc.hi(s);
      if (hi - lo > 1e-14) iv.emplace_back(lo, hi);
    }
    return iv;
  };
  Path1 src, tgt;
  src.id = id + ".src";
  tgt.id = id + ".tgt";
  auto f = P.f;
  auto pp = P.partials;
  src.f = [f](double r) { return f(0.0, r); };
  src.df = [pp](double r) { return pp(0.0, r).second; };
  src.corners = P.r_corners(0.0);
  tgt.f = [f](double r) { return f(1.0, r); };
  tgt.df = [pp](double r) { return pp(1.0, r).second; };
  tgt.corners = P.r_corners(1.0);
  P.source = src;
  P.target = tgt;
  return P;
}

// The three-piece vertically-interpolative pattern: a fixed leg traversed at
// double speed, a purely vertical midsection at the interpolated z, and the
// remaining tail of the source 1-path.
Path2 add_checked(Path2 P, const PathParams& prm) {
  double thr = prm.eps >= 1e-4 ? 1e-9 : 1e-12;
  check_path2(P, 48, thr);
  return P;
}

}  // namespace

// ---- catalog: 1-paths ---------------------------------------------------------------

Path1 make_path(const std::string& key, const PathParams& prm) {
  if (prm.eps <= 0.0 || prm.eps > 0.25) throw GeometryError("make_path: eps must be in (0, 1/4]");
  if (prm.a == Complex(0.0, 0.0)) throw GeometryError("make_path: a must be nonzero");
  Curves c{prm.eps, prm.a};
  double eps = prm.eps;
  Complex a = prm.a;
  Path1 p;

  if (key == "pI") {
    p = horizontal(key, [c](double r) { return c.cIoi(r); },
                   [c](double) { return Complex(-c.cIp()); }, a);
  } else if (key == "pII") {
    p = horizontal(key, [c](double r) { return c.cII(r); }, [c](double r) { return c.cIIp(r); }, a);
  } else if (key == "pIII") {
    p.id = key;
    p.f = [c](double r) { return Pt{c.cIII(r), c.vp_profile(r)}; };
    p.df = [c](double r) { return Tangent{c.cIIIp(r), c.vp_profile_d(r)}; };
  } else if (key == "pIV") {
    p = horizontal(key, [c](double r) { return c.cIV(r); }, [c](double r) { return c.cIVp(r); },
                   a * eps / (1.0 - eps));
  } else if (key == "pV") {
    p.id = key;
    p.f = [c](double r) { return Pt{c.cVoi(r), c.vp_profile(r)}; };
    p.df = [c](double r) { return Tangent{c.cVoip(r), c.vp_profile_d(r)}; };
  } else if (key == "pVI") {
    p = horizontal(key, [c](double r) { return c.cVIoi(r); }, [c](double r) { return c.cVIoip(r); },
                   a);
  } else if (key == "qIV") {
    p.id = key;
    p.f = [c, a](double r) { return Pt{c.cIV(r), a / (c.cIV(r) - 1.0)}; };
    p.df = [c, a](double r) {
      Complex d = c.cIV(r) - 1.0;
      return Tangent{c.cIVp(r), -a * c.cIVp(r) / (d * d)};
    };
  } else if (key == "qV") {
    p.id = key;
    p.f = [c, a](double r) { return Pt{c.cVoi(r), (c.cI(r) - 1.0) * a}; };
    p.df = [c, a](double r) { return Tangent{c.cVoip(r), c.cIp() * a}; };
  } else if (key == "qVI") {
    p.id = key;
    p.f = [c, a, eps](double r) { return Pt{c.cVIoi(r), a * eps / c.cVIoi(r)}; };
    p.df = [c, a, eps](double r) {
      Complex z = c.cVIoi(r);
      return Tangent{c.cVIoip(r), -a * eps * c.cVIoip(r) / (z * z)};
    };
  } else if (key == "qSE") {
    p.id = key;
    p.f = [c](double r) { return Pt{c.zSE(r), c.vSE(r)}; };
    p.df = [c](double r) { return Tangent{c.zSEp(r), c.vSEp(r)}; };
  } else if (key == "cI") {
    p = horizontal(key, [c](double r) { return c.cI(r); }, [c](double) { return Complex(c.cIp()); },
                   a);
  } else if (key == "cII") {
    p = horizontal(key, [c](double r) { return c.cII(r); }, [c](double r) { return c.cIIp(r); }, a);
  } else if (key == "cIII") {
    p = horizontal(key, [c](double r) { return c.cIII(r); }, [c](double r) { return c.cIIIp(r); },
                   a);
  } else if (key == "cIV") {
    p = horizontal(key, [c](double r) { return c.cIV(r); }, [c](double r) { return c.cIVp(r); }, a);
  } else if (key == "cV") {
    p = horizontal(key, [c](double r) { return c.cV(r); }, [c](double r) { return c.cVp(r); }, a);
  } else if (key == "cVI") {
    p = horizontal(key, [c](double r) { return c.cVI(r); }, [c](double r) { return c.cVIp(r); }, a);
  } else if (key == "pdownV") {
    p = vertical(key, c.cVoi(1.0), [c](double u) { return c.vp_profile(u); },
                 [c](double u) { return c.vp_profile_d(u); });
  } else if (key == "pdownIII") {
    p = vertical(key, c.cIII(1.0), [c](double u) { return c.vp_profile(u); },
                 [c](double u) { return c.vp_profile_d(u); });
  } else if (key == "pdownIV") {
    p = vertical(key, c.cIV(1.0), [c](double u) { return c.vp_profile(u); },
                 [c](double u) { return c.vp_profile_d(u); });
  } else if (key == "qdown") {
    p = vertical(key, c.cVIoi(1.0), [c, a, eps](double u) { return a * eps / c.cVIoi(u); },
                 [c, a, eps](double u) {
                   Complex z = c.cVIoi(u);
                   return -a * eps * c.cVIoip(u) / (z * z);
                 });
  } else if (key == "qleft") {
    p = vertical(key, c.cVoi(1.0),
                 [c, a, eps](double u) { return a * eps * eps / ((1.0 - eps) * c.cVIoi(u)); },
                 [c, a, eps](double u) {
                   Complex z = c.cVIoi(u);
                   return -a * eps * eps * c.cVIoip(u) / ((1.0 - eps) * z * z);
                 });
  } else if (key == "qdownIV") {
    p = vertical(key, c.cIV(1.0), [c, a](double u) { return a / (c.cIV(u) - 1.0); },
                 [c, a](double u) {
                   Complex d = c.cIV(u) - 1.0;
                   return -a * c.cIVp(u) / (d * d);
                 });
  } else {
    throw GeometryError("unknown 1-path key: " + key);
  }
  check_path(p, 1000, prm.eps >= 1e-4 ? 1e-9 : 1e-12);
  return p;
}

std::vector<std::string> path1_keys() {
  return {"pI",  "pII",    "pIII",     "pIV",     "pV",    "pVI",   "qIV",    "qV",
          "qVI", "qSE",    "cI",       "cII",     "cIII",  "cIV",   "cV",     "cVI",
          "pdownV", "pdownIII", "pdownIV", "qdown", "qleft", "qdownIV"};
}

// ---- catalog: 2-paths ---------------------------------------------------------------

Path2 make_2path(const std::string& key, const PathParams& prm) {
  if (prm.eps <= 0.0 || prm.eps > 0.25) throw GeometryError("make_2path: eps must be in (0, 1/4]");
  Curves c{prm.eps, prm.a};
  Complex a = prm.a;
  double eps = prm.eps;

  auto half = [](double s) { return 0.5 * s; };
  auto ident = [](double s) { return s; };
  auto zero = [](double) { return 0.0; };
  auto one = [](double) { return 1.0; };

  if (key == "PV" || key == "PIII") {
    bool isV = (key == "PV");
    auto zfun = [c, isV](double t) { return isV ? c.cVoi(t) : c.cIII(t); };
    auto zder = [c, isV](double t) { return isV ? c.cVoip(t) : c.cIIIp(t); };
    Piece A{zero, half,
            [zfun, a](double, double r) { return Pt{zfun(2.0 * r), a}; },
            [zder](double, double r) {
              return std::make_pair(Tangent{0.0, 0.0}, Tangent{2.0 * zder(2.0 * r), 0.0});
            },
            false};
    Piece B{half, ident,
            [zfun, c](double s, double r) { return Pt{zfun(s), c.vp_profile(2.0 * r - s)}; },
            [zfun, zder, c](double s, double r) {
              double u = 2.0 * r - s;
              Tangent ds{zder(s), -c.vp_profile_d(u)};
              Tangent dr{0.0, 2.0 * c.vp_profile_d(u)};
              return std::make_pair(ds, dr);
            },
            true};
    Piece C{ident, one,
            [c, isV](double, double r) {
              return isV ? Pt{c.cVoi(r), c.vp_profile(r)} : Pt{c.cIII(r), c.vp_profile(r)};
            },
            [c, zder](double, double r) {
              return std::make_pair(Tangent{0.0, 0.0}, Tangent{zder(r), c.vp_profile_d(r)});
            },
            false};
    return add_checked(assemble(key, {A, B, C}), prm);
  }

  if (key == "PIV") {
    auto mid = [](double s) { return 0.5 * (1.0 + s); };
    Piece A{zero, half,
            [c, a](double, double r) { return Pt{c.cIV(2.0 * r), a}; },
            [c](double, double r) {
              return std::make_pair(Tangent{0.0, 0.0}, Tangent{2.0 * c.cIVp(2.0 * r), 0.0});
            },
            false};
    Piece B{half, mid,
            [c](double s, double r) { return Pt{c.cIV(s), c.vp_profile(2.0 * r - s)}; },
            [c](double s, double r) {
              double u = 2.0 * r - s;
              Tangent ds{c.cIVp(s), -c.vp_profile_d(u)};
              Tangent dr{0.0, 2.0 * c.vp_profile_d(u)};
              return std::make_pair(ds, dr);
            },
            true};
    Piece C{mid, one,
            [c, a, eps](double, double r) {
              return Pt{c.cIV(2.0 * r - 1.0), a * eps / (1.0 - eps)};
            },
            [c](double, double r) {
              return std::make_pair(Tangent{0.0, 0.0}, Tangent{2.0 * c.cIVp(2.0 * r - 1.0), 0.0});
            },
            false};
    return add_checked(assemble(key, {A, B, C}), prm);
  }

  if (key == "QVI") {
    Piece A{zero, half,
            [c, a](double, double r) { return Pt{c.cVIoi(2.0 * r), a}; },
            [c](double, double r) {
              return std::make_pair(Tangent{0.0, 0.0}, Tangent{2.0 * c.cVIoip(2.0 * r), 0.0});
            },
            false};
    Piece B{half, ident,
            [c, a, eps](double s, double r) {
              return Pt{c.cVIoi(s), a * eps / c.cVIoi(2.0 * r - s)};
            },
            [c, a, eps](double s, double r) {
              double u = 2.0 * r - s;
              Complex g = c.cVIoi(u), gp = c.cVIoip(u);
              Tangent ds{c.cVIoip(s), a * eps * gp / (g * g)};
              Tangent dr{0.0, -2.0 * a * eps * gp / (g * g)};
              return std::make_pair(ds, dr);
            },
            true};
    Piece C{ident, one,
            [c, a, eps](double, double r) { return Pt{c.cVIoi(r), a * eps / c.cVIoi(r)}; },
            [c, a, eps](double, double r) {
              Complex g = c.cVIoi(r);
              return std::make_pair(Tangent{0.0, 0.0},
                                    Tangent{c.cVIoip(r), -a * eps * c.cVIoip(r) / (g * g)});
            },
            false};
    return add_checked(assemble(key, {A, B, C}), prm);
  }

  if (key == "QV") {
    auto mid = [](double s) { return 0.5 * (1.0 + s); };
    Piece A{zero, half,
            [c](double, double r) { return Pt{c.cVoi(2.0 * r), c.vp_profile(2.0 * r)}; },
            [c](double, double r) {
              return std::make_pair(Tangent{0.0, 0.0},
                                    Tangent{2.0 * c.cVoip(2.0 * r), 2.0 * c.vp_profile_d(2.0 * r)});
            },
            false};
    Piece B{half, mid,
            [c, a, eps](double s, double r) {
              double u = 2.0 * r - s;
              Complex num = a * eps * (1.0 - c.cI(s));
              return Pt{c.cVoi(s), num / ((1.0 - eps) * c.cVIoi(u))};
            },
            [c, a, eps](double s, double r) {
              double u = 2.0 * r - s;
              Complex g = c.cVIoi(u), gp = c.cVIoip(u);
              Complex pref = a * eps / (1.0 - eps);
              Complex oneMinus = 1.0 - c.cI(s);
              Tangent ds{c.cVoip(s), pref * (-c.cIp() / g + oneMinus * gp / (g * g))};
              Tangent dr{0.0, -2.0 * pref * oneMinus * gp / (g * g)};
              return std::make_pair(ds, dr);
            },
            true};
    Piece C{mid, one,
            [c, a](double, double r) {
              double u = 2.0 * r - 1.0;
              return Pt{c.cVoi(u), (c.cI(u) - 1.0) * a};
            },
            [c, a](double, double r) {
              double u = 2.0 * r - 1.0;
              return std::make_pair(Tangent{0.0, 0.0},
                                    Tangent{2.0 * c.cVoip(u), 2.0 * c.cIp() * a});
            },
            false};
    return add_checked(assemble(key, {A, B, C}), prm);
  }

  if (key == "QIV") {
    Piece A{zero, half,
            [c, a, eps](double, double r) { return Pt{c.cIV(2.0 * r), a * eps / (1.0 - eps)}; },
            [c](double, double r) {
              return std::make_pair(Tangent{0.0, 0.0}, Tangent{2.0 * c.cIVp(2.0 * r), 0.0});
            },
            false};
    Piece B{half, ident,
            [c, a](double s, double r) {
              return Pt{c.cIV(s), a / (c.cIV(2.0 * r - s) - 1.0)};
            },
            [c, a](double s, double r) {
              double u = 2.0 * r - s;
              Complex d = c.cIV(u) - 1.0, hp = c.cIVp(u);
              Tangent ds{c.cIVp(s), a * hp / (d * d)};
              Tangent dr{0.0, -2.0 * a * hp / (d * d)};
              return std::make_pair(ds, dr);
            },
            true};
    Piece C{ident, one,
            [c, a](double, double r) { return Pt{c.cIV(r), a / (c.cIV(r) - 1.0)}; },
            [c, a](double, double r) {
              Complex d = c.cIV(r) - 1.0;
              return std::make_pair(Tangent{0.0, 0.0},
                                    Tangent{c.cIVp(r), -a * c.cIVp(r) / (d * d)});
            },
            false};
    return add_checked(assemble(key, {A, B, C}), prm);
  }

  if (key == "Pva") {
    // Purely horizontal homotopy at v = a between the two composites of the
    // BRW hexagon, bulged into the lower half plane to clear the punctures.
    auto g0 = [c](double r) {
      if (r <= 1.0 / 3) return c.cIoi(3.0 * r);
      if (r <= 2.0 / 3) return c.cVIoi(3.0 * r - 1.0);
      return c.cVoi(3.0 * r - 2.0);
    };
    auto g0p = [c](double r) {
      if (r <= 1.0 / 3) return Complex(-3.0 * c.cIp());
      if (r <= 2.0 / 3) return 3.0 * c.cVIoip(3.0 * r - 1.0);
      return 3.0 * c.cVoip(3.0 * r - 2.0);
    };
    auto g1 = [c](double r) {
      if (r <= 1.0 / 3) return c.cII(3.0 * r);
      if (r <= 2.0 / 3) return c.cIII(3.0 * r - 1.0);
      return c.cIV(3.0 * r - 2.0);
    };
    auto g1p = [c](double r) {
      if (r <= 1.0 / 3) return 3.0 * c.cIIp(3.0 * r);
      if (r <= 2.0 / 3) return 3.0 * c.cIIIp(3.0 * r - 1.0);
      return 3.0 * c.cIVp(3.0 * r - 2.0);
    };
    const double K = 2.0;
    Path2 P;
    P.id = key;
    P.f = [g0, g1, a, K](double s, double r) {
      Complex z = (1.0 - s) * g0(r) + s * g1(r) - I * K * s * (1.0 - s) * r * (1.0 - r);
      return Pt{z, a};
    };
    P.partials = [g0, g1, g0p, g1p, K](double s, double r) {
      Tangent ds{g1(r) - g0(r) - I * K * (1.0 - 2.0 * s) * r * (1.0 - r), 0.0};
      Tangent dr{(1.0 - s) * g0p(r) + s * g1p(r) - I * K * s * (1.0 - s) * (1.0 - 2.0 * r), 0.0};
      return std::make_pair(ds, dr);
    };
    P.r_corners = [](double) { return std::vector<double>{1.0 / 3, 2.0 / 3}; };
    P.support = [](double) {
      return std::vector<std::pair<double, double>>{{0.0, 1.0}};
    };
    Path1 src, tgt;
    src.id = key + ".src";
    src.f = [g0, a](double r) { return Pt{g0(r), a}; };
    src.df = [g0p](double r) { return Tangent{g0p(r), 0.0}; };
    src.corners = {1.0 / 3, 2.0 / 3};
    tgt.id = key + ".tgt";
    tgt.f = [g1, a](double r) { return Pt{g1(r), a}; };
    tgt.df = [g1p](double r) { return Tangent{g1p(r), 0.0}; };
    tgt.corners = {1.0 / 3, 2.0 / 3};
    P.source = src;
    P.target = tgt;
    return add_checked(P, prm);
  }

  if (key == "PL") {
    auto lo1 = [](double s) { return 0.5 * (1.0 - s); };
    auto hi1 = [](double s) { return 1.0 - 0.5 * s; };
    Piece A{zero, lo1,
            [c, a, eps](double, double r) {
              double u = 2.0 * r;
              Complex g = c.cVIoi(u);
              return Pt{g, a * eps / g};
            },
            [c, a, eps](double, double r) {
              double u = 2.0 * r;
              Complex g = c.cVIoi(u), gp = c.cVIoip(u);
              return std::make_pair(Tangent{0.0, 0.0},
                                    Tangent{2.0 * gp, -2.0 * a * eps * gp / (g * g)});
            },
            false};
    Piece B{lo1, hi1,
            [c, a, eps](double s, double r) {
              double rho = 2.0 * r + 2.0 * s - 1.0;
              return Pt{c.cVI(rho), c.cIV(s - 1.0) * eps * a};
            },
            [c, a, eps](double s, double r) {
              double rho = 2.0 * r + 2.0 * s - 1.0;
              Complex zp = c.cVIp(rho);
              Tangent ds{2.0 * zp, c.cIVp(s - 1.0) * eps * a};
              Tangent dr{2.0 * zp, 0.0};
              return std::make_pair(ds, dr);
            },
            true};
    Piece C{hi1, one,
            [c](double, double r) {
              double u = 2.0 * r - 1.0;
              return Pt{c.zSE(u), c.vSE(u)};
            },
            [c](double, double r) {
              double u = 2.0 * r - 1.0;
              return std::make_pair(Tangent{0.0, 0.0}, Tangent{2.0 * c.zSEp(u), 2.0 * c.vSEp(u)});
            },
            false};
    return add_checked(assemble(key, {A, B, C}), prm);
  }

  if (key == "PR") return tau_path2(Tau::by_name("13"), make_2path("PL", prm));

  if (key == "H213") {
    // Representative harmless 2-path of the Breen loop: q_searrow deformed to
    // the whiskered tau12-image of q_VI.
    Path1 qse = make_path("qSE", prm);
    Path1 v1 = vertical("v1", eps / (eps - 1.0), [a, eps](double r) { return (1.0 - r * eps) * a; },
                        [a, eps](double) { return -eps * a; });
    Path1 tq = tau_path(Tau::by_name("12"), make_path("qVI", prm));
    Path1 v2 = vertical("v2", Complex(eps, 0.0), [a, eps](double r) { return (r * eps - 1.0) * a; },
                        [a, eps](double) { return eps * a; });
    return add_checked(straight_homotopy(key, qse, path_concat(path_concat(v1, tq), v2)), prm);
  }

  throw GeometryError("unknown 2-path key: " + key);
}

std::vector<std::string> path2_keys() {
  return {"PV", "PIII", "PIV", "QVI", "QV", "QIV", "Pva", "PL", "PR", "H213"};
}

// ---- the 2-connection -----------------------------------------------------------------

void check_regular(const Pt& pt, double threshold) {
  if (puncture_distance(pt) < threshold)
    throw GeometryError("point too close to the singular locus");
}

std::array<Complex, 3> Connection::nabla(const Pt& pt, const Tangent& u) const {
  check_regular(pt);
  Complex zpart = u.dz / pt.z;
  Complex z1part = u.dz / (pt.z - 1.0);
  Complex vpart = u.dv / pt.v;
  std::array<Complex, 3> base{};
  base[T12] = zpart + vpart;
  base[T23] = z1part + vpart;
  base[T13] = vpart;
  std::array<Complex, 3> out{};
  for (uint8_t g = 0; g < 3; ++g) out[permute_generator(g, label)] += base[g];
  return out;
}

std::array<Complex, 2> Connection::delta(const Pt& pt, const Tangent& u, const Tangent& w) const {
  check_regular(pt);
  Complex wedge = u.dz * w.dv - u.dv * w.dz;
  Complex cl = wedge / (pt.z * pt.v);
  Complex cr = wedge / ((pt.z - 1.0) * pt.v);
  std::array<Complex, 2> out{};
  for (const auto& [letter, sign] : permute_mod_letter(ML, label)) out[letter] += double(sign) * cl;
  for (const auto& [letter, sign] : permute_mod_letter(MR, label)) out[letter] += double(sign) * cr;
  return out;
}

AlgebraSeries<Complex> Connection::nabla_series(const Pt& pt, const Tangent& u, int order) const {
  auto c = nabla(pt, u);
  AlgebraSeries<Complex> s(order, 3);
  for (uint8_t g = 0; g < 3; ++g) {
    Word w;
    w.push_back(g);
    s.add_term(w, c[g]);
  }
  return s;
}

BimoduleSeries<Complex> Connection::delta_series(const Pt& pt, const Tangent& u, const Tangent& w,
                                                 int order) const {
  auto c = delta(pt, u, w);
  BimoduleSeries<Complex> s(order, 3);
  for (uint8_t l = 0; l < 2; ++l) {
    ModWord m;
    m.letter = l;
    s.add_term(m, c[l]);
  }
  return s;
}

}  // namespace cmkz
