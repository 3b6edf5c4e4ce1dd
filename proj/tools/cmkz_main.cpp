// Batch command-line front end: runs the verification suites and emits
// machine-readable reports and plot-ready convergence tables.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cmkz/hexagonator.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace cmkz;

namespace {

json coeff_json(const Complex& c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

json coeff_json(const SymCoeff& c) {
  json arr = json::array();
  for (const auto& [k, v] : c.terms()) {
    json zs = json::array();
    for (const auto& z : k.zetas.factors) zs.push_back(z);
    arr.push_back(json{{"ipi", k.ipi}, {"lneps", k.lneps}, {"zetas", zs}, {"coeff", v.get_str()}});
  }
  return arr;
}

template <class C>
json series_json(const AlgebraSeries<C>& a) {
  json terms = json::array();
  for (const auto& [w, c] : a.terms())
    terms.push_back(json{{"word", word_to_string(w, a.alphabet())}, {"coeff", coeff_json(c)}});
  return json{{"order", a.order()}, {"terms", terms}};
}

template <class C>
json series_json(const BimoduleSeries<C>& a) {
  json terms = json::array();
  for (const auto& [m, c] : a.terms())
    terms.push_back(json{{"left", word_to_string(m.left, a.alphabet())},
                         {"letter", m.letter == ML ? "L" : "R"},
                         {"right", word_to_string(m.right, a.alphabet())},
                         {"coeff", coeff_json(c)}});
  return json{{"order", a.order()}, {"modterms", terms}};
}

struct Output {
  std::string path;
  void emit(const json& j) const {
    if (path.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::ofstream f(path);
      f << j.dump(2) << "\n";
    }
  }
  void emit_text(const std::string& s) const {
    if (path.empty()) {
      std::cout << s;
    } else {
      std::ofstream f(path);
      f << s;
    }
  }
};

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> g;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) g.push_back(std::stod(item));
  if (g.empty()) throw std::runtime_error("empty eps grid");
  for (size_t i = 1; i < g.size(); ++i)
    if (g[i] >= g[i - 1]) throw std::runtime_error("eps grid must be strictly decreasing");
  return g;
}

double zeta_cached(const ZetaIndex& i) { return mzv_eval_cached(i); }

int run_mzv(const Output& out, double tol) {
  json rows = json::array();
  std::vector<ZetaIndex> idxs = {{2}, {3}, {2, 1}};
  for (const auto& idx : idxs) {
    rows.push_back(json{{"index", idx},
                        {"value", mzv_eval(idx, tol)},
                        {"value_iterint", mzv_eval_iterint(idx, tol)},
                        {"tol", tol},
                        {"method", "holder-convolution / regularized iterated integral"}});
  }
  out.emit(json{{"command", "mzv"}, {"rows", rows}});
  return 0;
}

int run_associator(const Output& out, int order, const std::string& method, double eps,
                   const QuadratureSpec& q) {
  if (method == "lm") {
    out.emit(json{{"command", "associator"}, {"method", method}, {"series", series_json(phi_symbolic(order))}});
  } else if (method == "brw") {
    out.emit(json{{"command", "associator"}, {"method", method}, {"series", series_json(phi_numeric_brw(order, 1e-10))}});
  } else if (method == "eps") {
    out.emit(json{{"command", "associator"},
                  {"method", method},
                  {"eps", eps},
                  {"series", series_json(phi_transport_eps(order, eps, q))}});
  } else {
    std::cerr << "unknown associator method " << method << "\n";
    return 2;
  }
  return 0;
}

int run_paths(const Output& out, bool list, const std::string& key, double eps, int n) {
  if (list) {
    PathParams prm{eps, 1.0};
    json p1 = json::array(), p2 = json::array();
    for (const auto& k : path1_keys())
      p1.push_back(json{{"key", k}, {"puncture_clearance", check_path(make_path(k, prm))}});
    for (const auto& k : path2_keys())
      p2.push_back(json{{"key", k}, {"puncture_clearance", check_path2(make_2path(k, prm), 40)}});
    out.emit(json{{"eps", eps}, {"path1", p1}, {"path2", p2}});
    return 0;
  }
  PathParams prm{eps, 1.0};
  Path1 p = make_path(key, prm);
  std::ostringstream os;
  os << "r,re_z,im_z,re_v,im_v\n";
  os.setf(std::ios::scientific);
  os.precision(12);
  for (int i = 0; i <= n; ++i) {
    double r = double(i) / n;
    Pt pt = p.at(r);
    os << r << "," << pt.z.real() << "," << pt.z.imag() << "," << pt.v.real() << ","
       << pt.v.imag() << "\n";
  }
  out.emit_text(os.str());
  return 0;
}

int run_transport(const Output& out, const std::string& key, double eps, int order,
                  const QuadratureSpec& q) {
  PathParams prm{eps, 1.0};
  AlgebraSeries<Complex> W = parallel_transport(make_path(key, prm), Connection::base(), order, q);
  out.emit(json{{"command", "transport"}, {"path", key}, {"eps", eps}, {"series", series_json(W)}});
  return 0;
}

int run_holonomy(const Output& out, const std::string& key, double eps, int order,
                 const QuadratureSpec& q, bool csv) {
  PathParams prm{eps, 1.0};
  NumBim W = surface_holonomy(make_2path(key, prm), Connection::base(), order, q);
  json j{{"command", "holonomy"}, {"path2", key}, {"eps", eps}, {"series", series_json(W)}};
  json conv = json::array();
  try {
    NumBim pred = predicted_grade2(key, order, eps);
    for (const auto& [m, c] : pred.terms()) {
      Complex got = W.coeff(m);
      conv.push_back(json{{"eps", eps},
                          {"grade", m.grade()},
                          {"term_key", modword_to_string(m, 3)},
                          {"predicted_re", c.real()},
                          {"predicted_im", c.imag()},
                          {"computed_re", got.real()},
                          {"computed_im", got.imag()},
                          {"abs_err", std::abs(got - c)}});
    }
    j["convergence"] = conv;
  } catch (const HexError&) {
  }
  if (csv) {
    std::ostringstream os;
    os << "eps,grade,term_key,predicted_re,predicted_im,computed_re,computed_im,abs_err\n";
    os.setf(std::ios::scientific);
    os.precision(12);
    for (const auto& row : conv)
      os << row["eps"].get<double>() << "," << row["grade"].get<int>() << ","
         << row["term_key"].get<std::string>() << "," << row["predicted_re"].get<double>() << ","
         << row["predicted_im"].get<double>() << "," << row["computed_re"].get<double>() << ","
         << row["computed_im"].get<double>() << "," << row["abs_err"].get<double>() << "\n";
    out.emit_text(os.str());
    return 0;
  }
  out.emit(j);
  return 0;
}

int run_flatness(const Output& out, int nsamples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Pt> pts;
  while (pts.size() < size_t(nsamples)) {
    Pt p{Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
    if (puncture_distance(p) > 0.1) pts.push_back(p);
  }
  json rows = json::array();
  double worst = 0.0;
  std::vector<std::string> labels = {"base", "12", "23", "13", "(12)3", "1(23)"};
  for (const auto& lbl : labels) {
    Connection c = lbl == "base" ? Connection::base() : Connection::pullback(Tau::by_name(lbl));
    FlatnessReport r = flatness_checks(c, pts);
    worst = std::max({worst, r.max_fake_flat, r.max_two_flat});
    rows.push_back(json{{"connection", lbl},
                        {"fake_flat_residual", r.max_fake_flat},
                        {"two_flat_residual", r.max_two_flat}});
  }
  bool pass = worst < 1e-10;
  out.emit(json{{"command", "flatness-check"}, {"samples", nsamples}, {"rows", rows}, {"pass", pass}});
  return pass ? 0 : 1;
}

int run_dpartial(const Output& out, int order) {
  json rows = json::array();
  bool all_pass = true;
  for (const auto& m : all_modification_builders(order)) {
    SymAlg res = dpartial_residual(m);
    double sym_max = 0.0, num_max = 0.0;
    for (const auto& [w, c] : res.terms()) {
      sym_max = std::max(sym_max, c.max_abs_rational());
      num_max = std::max(num_max, std::abs(c.eval(0.5, zeta_cached)));
    }
    bool formal = m.name != "prehex_direct";
    bool pass = formal ? (sym_max == 0.0) : (num_max < 1e-10);
    all_pass = all_pass && pass;
    rows.push_back(json{{"name", m.name},
                        {"grade", order},
                        {"max_abs_residual", formal ? sym_max : num_max},
                        {"exact_symbolic", formal},
                        {"pass", pass}});
  }
  out.emit(json{{"command", "dpartial-check"}, {"order", order}, {"rows", rows}, {"pass", all_pass}});
  return all_pass ? 0 : 1;
}

int run_hexagon(const Output& out, int order, const std::vector<double>& grid,
                const QuadratureSpec& q) {
  ModificationSeries R = prehex_direct(std::max(order, 2));
  ModWord mL, mR;
  mL.letter = ML;
  mR.letter = MR;
  SymCoeff cl = R.value.coeff(mL).basel_reduced();
  SymCoeff cr = R.value.coeff(mR).basel_reduced();
  SymCoeff target_l = SymCoeff::ipi(2, Rational(1, 6));
  SymCoeff target_r = SymCoeff::ipi(2, Rational(1, 3));
  bool exact = (cl - target_l).is_zero() && (cr - target_r).is_zero();

  json conv = json::array();
  double prev_err = -1.0;
  bool monotone = true, within = true;
  for (double eps : grid) {
    NumBim Reps = prehex_holonomy(2, eps, q);
    double pi2 = std::numbers::pi * std::numbers::pi;
    Complex gotL = Reps.coeff(mL), gotR = Reps.coeff(mR);
    Complex tgtL(-pi2 / 6.0, 0.0), tgtR(-pi2 / 3.0, 0.0);
    double err = std::max(std::abs(gotL - tgtL) / std::abs(tgtL),
                          std::abs(gotR - tgtR) / std::abs(tgtR));
    if (prev_err >= 0 && err > prev_err) monotone = false;
    prev_err = err;
    conv.push_back(json{{"eps", eps},
                        {"grade", 2},
                        {"rel_err", err},
                        {"computed_L_re", gotL.real()},
                        {"computed_R_re", gotR.real()}});
    if (eps <= 1.001e-3) within = within && (err < 0.02);
  }
  bool pass = exact && monotone && within;
  out.emit(json{{"command", "hexagon-check"},
                {"grade2_exact", exact},
                {"holonomy_convergence", conv},
                {"monotone", monotone},
                {"pass", pass}});
  return pass ? 0 : 1;
}

int run_breen(const Output& out, int order, const std::vector<double>& grid,
              const QuadratureSpec& q) {
  BreenSymbolicReport sym = breen_symbolic_check(std::max(order, 2));
  bool grade2_zero = sym.sym_by_grade.size() > 2 && sym.sym_by_grade[2] == 0.0;
  json rows = json::array();
  double prev = -1.0;
  bool shrinking = true;
  for (double eps : grid) {
    Breen2LoopReport r = breen_2loop_check(2, eps, q, /*gate=*/eps == grid.front());
    double rel = r.scale_by_grade[2] > 0 ? r.lhs_minus_rhs_by_grade[2] / r.scale_by_grade[2] : 0.0;
    if (prev >= 0 && rel > prev) shrinking = false;
    prev = rel;
    rows.push_back(json{{"eps", eps},
                        {"grade2_residual", r.lhs_minus_rhs_by_grade[2]},
                        {"grade2_scale", r.scale_by_grade[2]},
                        {"grade2_rel", rel},
                        {"tau_equivariance_residual", r.tau_equivariance_residual},
                        {"congruence_grade2_rel_err", r.congruence_grade2_error},
                        {"max_globularity_residual", r.max_globularity_residual}});
  }
  bool pass = grade2_zero && shrinking;
  json symj = json::array();
  for (size_t g = 0; g < sym.sym_by_grade.size(); ++g)
    symj.push_back(json{{"grade", g}, {"sym", sym.sym_by_grade[g]}, {"num", sym.num_by_grade[g]}});
  out.emit(json{{"command", "breen-check"},
                {"symbolic_by_grade", symj},
                {"grade2_exact_zero", grade2_zero},
                {"two_loop", rows},
                {"residual_shrinking", shrinking},
                {"pass", pass}});
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hexagonator series as 2-holonomies of the CMKZ 2-connection"};
  app.require_subcommand(1);
  app.fallthrough();

  int order = 2;
  double eps = 0.05;
  std::string eps_grid_str = "1e-1,3e-2,1e-2";
  double quad_tol = 1e-8;
  std::string out_path;
  uint64_t seed = 12345;
  std::string config_path;
  bool as_json = false, as_csv = false;
  app.add_option("--order", order, "truncation order");
  app.add_option("--eps", eps, "regularization parameter");
  app.add_option("--eps-grid", eps_grid_str, "comma-separated strictly decreasing eps grid");
  app.add_option("--quad-tol", quad_tol, "relative quadrature tolerance");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--seed", seed, "seed for randomized suites");
  app.add_option("--config", config_path, "JSON config file (flags override)");
  app.add_flag("--json", as_json, "emit JSON (default)");
  app.add_flag("--csv", as_csv, "emit CSV where supported (holonomy convergence, paths)");

  auto* c_mzv = app.add_subcommand("mzv", "MZV golden values");
  double mzv_tol = 1e-10;
  c_mzv->add_option("--tol", mzv_tol, "target tolerance");

  auto* c_assoc = app.add_subcommand("associator", "Drinfeld KZ associator series");
  std::string method = "lm";
  c_assoc->add_option("--method", method, "lm | brw | eps");

  auto* c_paths = app.add_subcommand("paths", "path catalog");
  bool list = false;
  std::string sample_key;
  int nsample = 100;
  c_paths->add_flag("--list", list, "list catalog keys");
  c_paths->add_option("--sample", sample_key, "sample a 1-path as CSV");
  c_paths->add_option("--n", nsample, "number of sample points");

  auto* c_tr = app.add_subcommand("transport", "parallel transport along a catalog path");
  std::string tr_key = "pI";
  c_tr->add_option("--path", tr_key, "1-path key");

  auto* c_hol = app.add_subcommand("holonomy", "surface holonomy of a catalog 2-path");
  std::string hol_key = "PV";
  c_hol->add_option("--path2", hol_key, "2-path key");

  auto* c_flat = app.add_subcommand("flatness-check", "fake/2-flatness residuals");
  int nsamples = 100;
  c_flat->add_option("--samples", nsamples, "number of sample points");

  auto* c_dp = app.add_subcommand("dpartial-check", "all modification-builder contracts");
  bool dp_all = false;
  c_dp->add_flag("--all", dp_all, "run every builder (default anyway)");

  auto* c_hex = app.add_subcommand("hexagon-check", "infinitesimal hexagonator checks");
  auto* c_breen = app.add_subcommand("breen-check", "Breen equation checks");
  auto* c_all = app.add_subcommand("all", "full suite");

  CLI11_PARSE(app, argc, argv);

  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "cannot read config " << config_path << "\n";
      return 2;
    }
    json cfg = json::parse(f);
    if (cfg.contains("order") && app.count("--order") == 0) order = cfg["order"];
    if (cfg.contains("eps") && app.count("--eps") == 0) eps = cfg["eps"];
    if (cfg.contains("eps_grid") && app.count("--eps-grid") == 0) eps_grid_str = cfg["eps_grid"];
    if (cfg.contains("quad_tol") && app.count("--quad-tol") == 0) quad_tol = cfg["quad_tol"];
    if (cfg.contains("seed") && app.count("--seed") == 0) seed = cfg["seed"];
  }

  QuadratureSpec q;
  q.rel_tol = quad_tol;
  q.abs_tol = quad_tol * 1e-3;
  Output out{out_path};

  try {
    std::vector<double> grid = parse_grid(eps_grid_str);
    if (c_mzv->parsed()) return run_mzv(out, mzv_tol);
    if (c_assoc->parsed()) return run_associator(out, order, method, eps, q);
    if (c_paths->parsed()) return run_paths(out, list || sample_key.empty(), sample_key, eps, nsample);
    if (c_tr->parsed()) return run_transport(out, tr_key, eps, order, q);
    if (c_hol->parsed()) return run_holonomy(out, hol_key, eps, order, q, as_csv && !as_json);
    if (c_flat->parsed()) return run_flatness(out, nsamples, seed);
    if (c_dp->parsed()) return run_dpartial(out, std::max(order, 4));
    if (c_hex->parsed()) return run_hexagon(out, order, grid, q);
    if (c_breen->parsed()) return run_breen(out, order, grid, q);
    if (c_all->parsed()) {
      int rc = 0;
      rc |= run_mzv(out, 1e-10);
      rc |= run_flatness(out, 100, seed);
      rc |= run_dpartial(out, std::max(order, 4));
      rc |= run_hexagon(out, order, grid, q);
      rc |= run_breen(out, order, grid, q);
      return rc;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
