#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "cmkz/geometry.hpp"
#include "doctest.h"

using namespace cmkz;

namespace {

const double kEps = 0.05;
const PathParams kPrm{kEps, Complex(1.0, 0.0)};

bool close_pt(const Pt& a, const Pt& b, double tol = 1e-11) {
  return std::abs(a.z - b.z) < tol && std::abs(a.v - b.v) < tol;
}

// central finite difference of a path
Tangent fd1(const Path1& p, double r, double h = 1e-6) {
  Pt a = p.f(r - h), b = p.f(r + h);
  return Tangent{(b.z - a.z) / (2.0 * h), (b.v - a.v) / (2.0 * h)};
}

bool off_corners(double r, const std::vector<double>& corners, double h) {
  for (double c : corners)
    if (std::abs(r - c) < 2.0 * h) return false;
  return true;
}

}  // namespace

TEST_CASE("catalog endpoints match the hexagon web") {
  double e = kEps;
  Path1 pI = make_path("pI", kPrm);
  CHECK(close_pt(pI.start(), Pt{1.0 - e, 1.0}));
  CHECK(close_pt(pI.end(), Pt{e, 1.0}));

  Path1 pVI = make_path("pVI", kPrm);
  CHECK(close_pt(pVI.start(), Pt{e, 1.0}));
  CHECK(close_pt(pVI.end(), Pt{e / (e - 1.0), 1.0}));

  Path1 pV = make_path("pV", kPrm);
  CHECK(close_pt(pV.start(), Pt{e / (e - 1.0), 1.0}));
  CHECK(close_pt(pV.end(), Pt{(e - 1.0) / e, e / (1.0 - e)}));

  Path1 pII = make_path("pII", kPrm);
  CHECK(close_pt(pII.start(), Pt{1.0 - e, 1.0}));
  CHECK(close_pt(pII.end(), Pt{1.0 / (1.0 - e), 1.0}));

  Path1 pIII = make_path("pIII", kPrm);
  CHECK(close_pt(pIII.start(), Pt{1.0 / (1.0 - e), 1.0}));
  CHECK(close_pt(pIII.end(), Pt{1.0 / e, e / (1.0 - e)}));

  Path1 pIV = make_path("pIV", kPrm);
  CHECK(close_pt(pIV.start(), Pt{1.0 / e, e / (1.0 - e)}));
  CHECK(close_pt(pIV.end(), Pt{(e - 1.0) / e, e / (1.0 - e)}));

  // q-web
  Path1 qV = make_path("qV", kPrm);
  CHECK(close_pt(qV.start(), Pt{e / (e - 1.0), e - 1.0}));
  Path1 qVI = make_path("qVI", kPrm);
  CHECK(close_pt(qVI.start(), Pt{e, 1.0}));
  CHECK(close_pt(qVI.end(), Pt{e / (e - 1.0), e - 1.0}));
  Path1 qIV = make_path("qIV", kPrm);
  CHECK(close_pt(qIV.start(), Pt{1.0 / e, 1.0 / (1.0 / e - 1.0)}));
}

TEST_CASE("tau-transformed paths match the closed forms") {
  double e = kEps;
  // tau12 qVI from the Breen-loop list
  Path1 tq = tau_path(Tau::by_name("12"), make_path("qVI", kPrm));
  for (double r : {0.0, 0.3, 0.7, 1.0}) {
    Complex E = std::exp(Complex(0, std::numbers::pi * r));
    Pt expect{e / (e / 2.0 + (e / 2.0 - 1.0) * E), (1.0 - e / 2.0) * E - e / 2.0};
    CHECK(close_pt(tq.f(r), expect));
  }
  // tau12 qV = (cI(r), -a)
  Path1 tqv = tau_path(Tau::by_name("12"), make_path("qV", kPrm));
  for (double r : {0.0, 0.5, 1.0})
    CHECK(close_pt(tqv.f(r), Pt{e + r * (1.0 - 2.0 * e), -1.0}));
  // tau(12)3 qV = (1 - eps + r(2 eps - 1), a) on the a = -1 copy
  PathParams prmM{e, Complex(-1.0, 0.0)};
  Path1 tqv2 = tau_path(Tau::by_name("(12)3"), make_path("qV", prmM));
  for (double r : {0.0, 0.5, 1.0})
    CHECK(close_pt(tqv2.f(r), Pt{1.0 - e + r * (2.0 * e - 1.0), -1.0}));
}

TEST_CASE("closed-form derivatives match finite differences") {
  for (const auto& key : path1_keys()) {
    Path1 p = make_path(key, kPrm);
    for (double r : {0.11, 0.37, 0.52, 0.83}) {
      if (!off_corners(r, p.corners, 1e-6)) continue;
      Tangent d = p.df(r), fd = fd1(p, r);
      double scale = std::max({1.0, std::abs(d.dz), std::abs(d.dv)});
      CAPTURE(key); CAPTURE(r);
      CHECK(std::abs(d.dz - fd.dz) < 1e-6 * scale);
      CHECK(std::abs(d.dv - fd.dv) < 1e-6 * scale);
    }
  }
  for (const auto& key : path2_keys()) {
    Path2 P = make_2path(key, kPrm);
    for (double s : {0.23, 0.61, 0.89}) {
      auto corners = P.r_corners(s);
      for (double r : {0.13, 0.42, 0.71, 0.93}) {
        if (!off_corners(r, corners, 1e-6)) continue;
        auto [ds, dr] = P.partials(s, r);
        double h = 1e-6;
        Pt s0 = P.f(s - h, r), s1 = P.f(s + h, r);
        Pt r0 = P.f(s, r - h), r1 = P.f(s, r + h);
        Tangent fds{(s1.z - s0.z) / (2 * h), (s1.v - s0.v) / (2 * h)};
        Tangent fdr{(r1.z - r0.z) / (2 * h), (r1.v - r0.v) / (2 * h)};
        double sc = std::max({1.0, std::abs(ds.dz), std::abs(ds.dv), std::abs(dr.dz),
                              std::abs(dr.dv)});
        CAPTURE(key); CAPTURE(s); CAPTURE(r);
        CHECK(std::abs(ds.dz - fds.dz) < 2e-5 * sc);
        CHECK(std::abs(ds.dv - fds.dv) < 2e-5 * sc);
        CHECK(std::abs(dr.dz - fdr.dz) < 2e-5 * sc);
        CHECK(std::abs(dr.dv - fdr.dv) < 2e-5 * sc);
      }
    }
  }
}

TEST_CASE("puncture clearance on a 1000-point grid") {
  for (double eps : {0.05, 1e-3}) {
    PathParams prm{eps, 1.0};
    for (const auto& key : path1_keys()) {
      double d = check_path(make_path(key, prm));
      CAPTURE(key); CAPTURE(eps);
      CHECK(d > 1e-9);
    }
    for (const auto& key : path2_keys()) {
      double d = check_path2(make_2path(key, prm), 40);
      CAPTURE(key); CAPTURE(eps);
      CHECK(d > 1e-9);
    }
  }
}

TEST_CASE("2-path boundary conditions") {
  for (const auto& key : path2_keys()) {
    Path2 P = make_2path(key, kPrm);
    for (double r : {0.0, 0.21, 0.5, 0.77, 1.0}) {
      CAPTURE(key); CAPTURE(r);
      CHECK(close_pt(P.f(0.0, r), P.source.f(r), 1e-9));
      CHECK(close_pt(P.f(1.0, r), P.target.f(r), 1e-9));
    }
    Pt x = P.f(0.0, 0.0), y = P.f(0.0, 1.0);
    for (double s : {0.3, 0.66, 1.0}) {
      CAPTURE(key); CAPTURE(s);
      CHECK(close_pt(P.f(s, 0.0), x, 1e-9));
      CHECK(close_pt(P.f(s, 1.0), y, 1e-9));
    }
  }
}

TEST_CASE("path combinators") {
  Path1 p = make_path("pI", kPrm);
  Path1 q = make_path("pVI", kPrm);
  Path1 pq = path_concat(p, q);
  CHECK(close_pt(pq.f(0.25), p.f(0.5)));
  CHECK(close_pt(pq.f(0.75), q.f(0.5)));
  Path1 rev = path_reverse(p);
  CHECK(close_pt(rev.f(0.0), p.f(1.0)));
  Path1 loop = path_concat(p, rev);
  CHECK(close_pt(loop.f(0.0), loop.f(1.0)));
  CHECK_THROWS_AS(path_concat(p, make_path("pIII", kPrm)), GeometryError);

  Path2 A = const_path2(p), B = const_path2(q);
  Path2 AB = path2_hconcat(A, B);
  for (double s : {0.2, 0.8}) {
    CHECK(close_pt(AB.f(s, 0.4999), A.f(s, 0.9998), 1e-9));
    CHECK(close_pt(AB.f(s, 0.5001), B.f(s, 0.0002), 1e-9));
  }
}

TEST_CASE("tau maps compose per the S3 table") {
  Pt pt{Complex(0.3, 0.42), Complex(-0.8, 0.27)};
  const auto& taus = Tau::all();
  CHECK(close_pt(Tau::by_name("23").map(Pt{2.0, 3.0}), Pt{0.5, 6.0}, 1e-14));
  for (const auto& a : taus)
    for (const auto& b : taus) {
      Pt comp = a.map(b.map(pt));
      Perm3 arr = Perm3::compose(a.arrangement, b.arrangement);
      if (arr.key() == 123) {
        CHECK(close_pt(comp, pt, 1e-12));
        continue;
      }
      bool found = false;
      for (const auto& c : taus)
        if (c.arrangement.key() == arr.key()) {
          CAPTURE(a.name); CAPTURE(b.name); CAPTURE(c.name);
          CHECK(close_pt(comp, c.map(pt), 1e-12));
          found = true;
        }
      CHECK(found);
    }
}

TEST_CASE("connection evaluation") {
  Connection c = Connection::base();
  Pt pt{Complex(0.4, 0.2), Complex(1.3, -0.5)};
  Tangent u{Complex(0.7, -0.1), 0.0}, w{Complex(-0.2, 0.4), 0.0};
  auto d = c.delta(pt, u, w);
  CHECK(std::abs(d[0]) == 0.0);
  CHECK(std::abs(d[1]) == 0.0);

  Tangent uv{0.0, Complex(0.9, 0.1)};
  auto n = c.nabla(pt, uv);
  Complex lam = uv.dv / pt.v;
  CHECK(std::abs(n[T12] - lam) < 1e-14);
  CHECK(std::abs(n[T13] - lam) < 1e-14);
  CHECK(std::abs(n[T23] - lam) < 1e-14);

  Tangent a{Complex(0.3, 0.2), Complex(-0.4, 0.6)}, b{Complex(0.1, -0.7), Complex(0.2, 0.3)};
  auto dab = c.delta(pt, a, b);
  auto dba = c.delta(pt, b, a);
  CHECK(std::abs(dab[0] + dba[0]) < 1e-14);
  CHECK(std::abs(dab[1] + dba[1]) < 1e-14);

  CHECK_THROWS_AS(c.nabla(Pt{Complex(1e-12, 0.0), 1.0},
                          Tangent{Complex(1.0, 0.0), 0.0}),
                  GeometryError);
}

TEST_CASE("the five pullback connections match the stated patterns") {
  // nabla(x, y, .) lists the letters carrying dz/z and dz/(z-1); the Delta
  // pattern lists the images of L and R in the span {L, R, -(L+R)}.
  struct Row {
    const char* tau;
    uint8_t at_z, at_z1;                       // letters of dz/z and dz/(z-1)
    std::array<std::array<int, 2>, 2> dl;      // (L-part, R-part) of L and R images
  };
  const std::vector<Row> table = {
      {"12", T12, T13, {{{1, 0}, {-1, -1}}}},
      {"23", T13, T23, {{{-1, -1}, {0, 1}}}},
      {"13", T23, T12, {{{0, 1}, {1, 0}}}},
      {"(12)3", T23, T13, {{{0, 1}, {-1, -1}}}},
      {"1(23)", T13, T12, {{{-1, -1}, {1, 0}}}},
  };
  Pt pt{Complex(0.4, 0.2), Complex(1.3, -0.5)};
  Tangent uz{Complex(1.0, 0.0), 0.0}, uv{0.0, Complex(1.0, 0.0)};
  for (const auto& row : table) {
    Connection c = Connection::pullback(Tau::by_name(row.tau));
    auto n = c.nabla(pt, uz);
    Complex z = pt.z;
    std::array<Complex, 3> expect{};
    expect[row.at_z] += 1.0 / z;
    expect[row.at_z1] += 1.0 / (z - 1.0);
    for (uint8_t g = 0; g < 3; ++g) {
      CAPTURE(row.tau);
      CHECK(std::abs(n[g] - expect[g]) < 1e-14);
    }
    // the Lambda dv-part is permutation invariant
    auto nv = c.nabla(pt, uv);
    for (uint8_t g = 0; g < 3; ++g) CHECK(std::abs(nv[g] - 1.0 / pt.v) < 1e-14);

    auto d = c.delta(pt, uz, uv);
    Complex cl = 1.0 / (pt.z * pt.v), cr = 1.0 / ((pt.z - 1.0) * pt.v);
    Complex el = double(row.dl[0][0]) * cl + double(row.dl[1][0]) * cr;
    Complex er = double(row.dl[0][1]) * cl + double(row.dl[1][1]) * cr;
    CAPTURE(row.tau);
    CHECK(std::abs(d[ML] - el) < 1e-14);
    CHECK(std::abs(d[MR] - er) < 1e-14);
  }
}

TEST_CASE("make_path parameter validation") {
  CHECK_THROWS_AS(make_path("pI", PathParams{0.3, 1.0}), GeometryError);
  CHECK_THROWS_AS(make_path("pI", PathParams{0.05, 0.0}), GeometryError);
  CHECK_THROWS_AS(make_path("nope", kPrm), GeometryError);
  CHECK_THROWS_AS(make_2path("nope", kPrm), GeometryError);
}
