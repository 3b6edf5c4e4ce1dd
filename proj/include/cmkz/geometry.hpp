#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cmkz/series.hpp"

// Configuration-space geometry: points of C^{xx} x C^x, the catalog of
// 1-paths and 2-paths with closed-form derivatives, the pulled-back
// 2-connection (nabla, Delta) and the S3 maps tau.

namespace cmkz {

struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

struct Pt {
  Complex z;  // != 0, 1
  Complex v;  // != 0
};

struct Tangent {
  Complex dz;
  Complex dv;
};

inline double puncture_distance(const Pt& p) {
  return std::min({std::abs(p.z), std::abs(p.z - 1.0), std::abs(p.v)});
}

// ---- the S3 point maps -------------------------------------------------------

// tau maps on (z, v) with their Jacobian action and the label arrangement of
// the corresponding pullback on the connection.
struct Tau {
  std::string name;                         // "12", "23", "13", "(12)3", "1(23)"
  std::function<Pt(const Pt&)> map;
  std::function<Tangent(const Pt&, const Tangent&)> push;
  Perm3 arrangement;                        // pullback acts by this label substitution

  static const Tau& by_name(const std::string& name);
  static const std::vector<Tau>& all();
};

// ---- 1-paths -----------------------------------------------------------------

struct Path1 {
  std::string id;
  std::function<Pt(double)> f;
  std::function<Tangent(double)> df;
  std::vector<double> corners;  // interior breakpoints, sorted

  Pt at(double r) const { return f(r); }
  Tangent deriv(double r) const { return df(r); }
  Pt start() const { return f(0.0); }
  Pt end() const { return f(1.0); }
};

Path1 path_reverse(const Path1& p);
// p followed by q
Path1 path_concat(const Path1& p, const Path1& q);
Path1 tau_path(const Tau& t, const Path1& p);
Path1 const_path(const Pt& x);
// straight segment between two points
Path1 segment_path(const Pt& x, const Pt& y);

// Minimum puncture distance over a sample grid; throws on collision.
double check_path(const Path1& p, int grid = 1000, double threshold = 1e-9);

// ---- 2-paths -----------------------------------------------------------------

struct Path2 {
  std::string id;
  std::function<Pt(double, double)> f;  // (s, r)
  std::function<std::pair<Tangent, Tangent>(double, double)> partials;  // (d/ds, d/dr)
  std::function<std::vector<double>(double)> r_corners;  // interior r breakpoints at fixed s
  std::vector<double> s_corners;
  // r-intervals where the s-derivative can be nonzero
  std::function<std::vector<std::pair<double, double>>(double)> support;
  Path1 source;  // f(0, .)
  Path1 target;  // f(1, .)

  Pt at(double s, double r) const { return f(s, r); }
};

Path2 tau_path2(const Tau& t, const Path2& P);
Path2 path2_vconcat(const Path2& lower, const Path2& upper);  // lower first in s
Path2 path2_hconcat(const Path2& first, const Path2& second); // first in r
Path2 path2_reverse(const Path2& P);
Path2 const_path2(const Path1& p);
// straight-line homotopy in (z, v) between 1-paths with common endpoints
Path2 straight_homotopy(const std::string& id, const Path1& p, const Path1& q);

double check_path2(const Path2& P, int grid = 60, double threshold = 1e-9);

// ---- catalog -----------------------------------------------------------------

struct PathParams {
  double eps = 0.05;   // in (0, 1/4]
  Complex a = 1.0;     // free basepoint parameter, != 0
};

// 1-path keys: pI..pVI, qIV, qV, qVI, qSE (the searrow path), cI..cVI
// (horizontal at v = a), plus the vertical segments pdown1_V, pdown1_III,
// pdown1_IV_src, pdown1_IV_tgt, qdown1, qleft1, qdown1_IV.
Path1 make_path(const std::string& key, const PathParams& prm);
std::vector<std::string> path1_keys();

// 2-path keys: PV, PIII, PIV, QVI, QV, QIV, Pva, PL, PR.
Path2 make_2path(const std::string& key, const PathParams& prm);
std::vector<std::string> path2_keys();

// ---- the 2-connection --------------------------------------------------------

// nabla = (t12/z + t23/(z-1)) dz + (Lambda/v) dv and
// Delta[u,w] = (L/(zv) + R/((z-1)v)) (u_z w_v - u_v w_z), pulled back along
// the label arrangement. Values are reported as per-generator coefficients.
struct Connection {
  Perm3 label = Perm3::id();

  static Connection base() { return Connection{}; }
  static Connection pullback(const Tau& t) { return Connection{t.arrangement}; }
  Connection pullback_by(const Perm3& p) const { return Connection{Perm3::compose(label, p)}; }

  // coefficient of (t12, t13, t23) in nabla[u] at pt
  std::array<Complex, 3> nabla(const Pt& pt, const Tangent& u) const;
  // coefficient of (L, R) in Delta[u, w] at pt
  std::array<Complex, 2> delta(const Pt& pt, const Tangent& u, const Tangent& w) const;

  AlgebraSeries<Complex> nabla_series(const Pt& pt, const Tangent& u, int order) const;
  BimoduleSeries<Complex> delta_series(const Pt& pt, const Tangent& u, const Tangent& w,
                                       int order) const;
};

void check_regular(const Pt& pt, double threshold = 1e-9);

}  // namespace cmkz
