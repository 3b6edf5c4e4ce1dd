#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmkz/coeff.hpp"

// Truncated noncommutative series over the generators of the 2nd
// Drinfeld-Kohno differential crossed module: words in {t12, t13, t23} in
// degree 0 and modification words w1.X.w2 with X in {L, R} in degree -1.
// Every t generator carries hbar-grade 1 and L, R carry hbar-grade 2 (they
// absorb hbar^2, matching the 2-form normalisation); truncation is by total
// grade. The same machinery runs over a two-letter alphabet {A, B} for the
// Drinfeld associator.

namespace cmkz {

struct SeriesError : std::runtime_error {
  explicit SeriesError(const std::string& what) : std::runtime_error(what) {}
};

// Three-letter alphabet.
inline constexpr uint8_t T12 = 0;
inline constexpr uint8_t T13 = 1;
inline constexpr uint8_t T23 = 2;
// Two-letter alphabet.
inline constexpr uint8_t GA = 0;
inline constexpr uint8_t GB = 1;

inline constexpr uint8_t ML = 0;  // left 4-term relationator
inline constexpr uint8_t MR = 1;  // right 4-term relationator

inline constexpr int kModLetterGrade = 2;

// Packed generator word, two bits per letter, letter 0 in the low bits.
struct Word {
  uint8_t len = 0;
  uint64_t bits = 0;

  static constexpr int kMaxLen = 30;

  Word() = default;
  Word(std::initializer_list<int> gens) {
    for (int g : gens) push_back(static_cast<uint8_t>(g));
  }

  int size() const { return len; }
  uint8_t at(int i) const { return static_cast<uint8_t>((bits >> (2 * i)) & 3u); }
  void push_back(uint8_t g) {
    if (len >= kMaxLen) throw SeriesError("word too long");
    bits |= (uint64_t(g & 3u) << (2 * len));
    ++len;
  }
  Word concat(const Word& o) const {
    if (len + o.len > kMaxLen) throw SeriesError("word too long");
    Word r;
    r.len = static_cast<uint8_t>(len + o.len);
    r.bits = bits | (o.bits << (2 * len));
    return r;
  }

  friend bool operator==(const Word& a, const Word& b) { return a.len == b.len && a.bits == b.bits; }
  friend bool operator<(const Word& a, const Word& b) {
    if (a.len != b.len) return a.len < b.len;
    for (int i = 0; i < a.len; ++i)
      if (a.at(i) != b.at(i)) return a.at(i) < b.at(i);
    return false;
  }
};

inline std::string gen_name(uint8_t g, int alphabet) {
  static const char* three[] = {"t12", "t13", "t23"};
  static const char* two[] = {"A", "B"};
  return alphabet == 3 ? three[g] : two[g];
}

inline std::string word_to_string(const Word& w, int alphabet) {
  if (w.len == 0) return "1";
  std::string s;
  for (int i = 0; i < w.len; ++i) {
    if (i) s += ".";
    s += gen_name(w.at(i), alphabet);
  }
  return s;
}

// Modification word w1.X.w2, grade = |w1| + |w2| + 2.
struct ModWord {
  Word left;
  uint8_t letter = ML;
  Word right;

  int grade() const { return left.size() + right.size() + kModLetterGrade; }

  friend bool operator==(const ModWord& a, const ModWord& b) {
    return a.letter == b.letter && a.left == b.left && a.right == b.right;
  }
  friend bool operator<(const ModWord& a, const ModWord& b) {
    if (a.grade() != b.grade()) return a.grade() < b.grade();
    if (a.left != b.left) return a.left < b.left;
    if (a.letter != b.letter) return a.letter < b.letter;
    return a.right < b.right;
  }
};

inline std::string modword_to_string(const ModWord& m, int alphabet) {
  std::string s = m.left.len ? word_to_string(m.left, alphabet) + "." : "";
  s += (m.letter == ML) ? "L" : "R";
  if (m.right.len) s += "." + word_to_string(m.right, alphabet);
  return s;
}

template <class C>
class AlgebraSeries {
 public:
  AlgebraSeries() = default;
  AlgebraSeries(int order, int alphabet) : order_(order), alphabet_(alphabet) {}

  static AlgebraSeries zero(int order, int alphabet) { return AlgebraSeries(order, alphabet); }
  static AlgebraSeries unit(int order, int alphabet) {
    AlgebraSeries s(order, alphabet);
    s.add_term(Word{}, CoeffOps<C>::one());
    return s;
  }
  static AlgebraSeries generator(int order, int alphabet, uint8_t g, C coeff = CoeffOps<C>::one()) {
    AlgebraSeries s(order, alphabet);
    Word w;
    w.push_back(g);
    s.add_term(w, std::move(coeff));
    return s;
  }

  int order() const { return order_; }
  int alphabet() const { return alphabet_; }
  const std::map<Word, C>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  void add_term(const Word& w, C coeff) {
    if (w.size() > order_) return;
    if (CoeffOps<C>::is_zero(coeff)) return;
    auto it = t_.find(w);
    if (it == t_.end()) {
      t_.emplace(w, std::move(coeff));
    } else {
      it->second += coeff;
      if (CoeffOps<C>::is_zero(it->second)) t_.erase(it);
    }
  }

  C coeff(const Word& w) const {
    auto it = t_.find(w);
    return it == t_.end() ? CoeffOps<C>::zero() : it->second;
  }
  C constant_term() const { return coeff(Word{}); }

  void check_compatible(const AlgebraSeries& o, const char* op) const {
    if (order_ != o.order_ || alphabet_ != o.alphabet_)
      throw SeriesError(std::string("series mismatch in ") + op);
  }

  AlgebraSeries& operator+=(const AlgebraSeries& o) {
    check_compatible(o, "add");
    for (const auto& [w, c] : o.t_) add_term(w, c);
    return *this;
  }
  AlgebraSeries& operator-=(const AlgebraSeries& o) {
    check_compatible(o, "sub");
    for (const auto& [w, c] : o.t_) add_term(w, CoeffOps<C>::scale(c, Rational(-1)));
    return *this;
  }
  AlgebraSeries operator+(const AlgebraSeries& o) const {
    AlgebraSeries r = *this;
    r += o;
    return r;
  }
  AlgebraSeries operator-(const AlgebraSeries& o) const {
    AlgebraSeries r = *this;
    r -= o;
    return r;
  }
  AlgebraSeries operator-() const { return scaled(Rational(-1)); }

  AlgebraSeries scaled(const Rational& r) const {
    AlgebraSeries s(order_, alphabet_);
    for (const auto& [w, c] : t_) s.add_term(w, CoeffOps<C>::scale(c, r));
    return s;
  }
  AlgebraSeries scaled_coeff(const C& k) const {
    AlgebraSeries s(order_, alphabet_);
    for (const auto& [w, c] : t_) s.add_term(w, c * k);
    return s;
  }

  AlgebraSeries operator*(const AlgebraSeries& o) const {
    check_compatible(o, "mul");
    AlgebraSeries r(order_, alphabet_);
    for (const auto& [wa, ca] : t_) {
      if (wa.size() > order_) continue;
      for (const auto& [wb, cb] : o.t_) {
        if (wa.size() + wb.size() > order_) break;  // keys sorted by grade
        r.add_term(wa.concat(wb), ca * cb);
      }
    }
    return r;
  }
  AlgebraSeries& operator*=(const AlgebraSeries& o) {
    *this = *this * o;
    return *this;
  }

  int min_grade() const { return t_.empty() ? order_ + 1 : t_.begin()->first.size(); }

 private:
  int order_ = 0;
  int alphabet_ = 3;
  std::map<Word, C> t_;
};

template <class C>
class BimoduleSeries {
 public:
  BimoduleSeries() = default;
  BimoduleSeries(int order, int alphabet) : order_(order), alphabet_(alphabet) {}

  static BimoduleSeries zero(int order, int alphabet) { return BimoduleSeries(order, alphabet); }
  static BimoduleSeries letter(int order, int alphabet, uint8_t l, C coeff = CoeffOps<C>::one()) {
    BimoduleSeries s(order, alphabet);
    ModWord m;
    m.letter = l;
    s.add_term(m, std::move(coeff));
    return s;
  }

  int order() const { return order_; }
  int alphabet() const { return alphabet_; }
  const std::map<ModWord, C>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  void add_term(const ModWord& m, C coeff) {
    if (m.grade() > order_) return;
    if (CoeffOps<C>::is_zero(coeff)) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
      t_.emplace(m, std::move(coeff));
    } else {
      it->second += coeff;
      if (CoeffOps<C>::is_zero(it->second)) t_.erase(it);
    }
  }

  C coeff(const ModWord& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? CoeffOps<C>::zero() : it->second;
  }

  void check_compatible(const BimoduleSeries& o, const char* op) const {
    if (order_ != o.order_ || alphabet_ != o.alphabet_)
      throw SeriesError(std::string("series mismatch in ") + op);
  }

  BimoduleSeries& operator+=(const BimoduleSeries& o) {
    check_compatible(o, "add");
    for (const auto& [m, c] : o.t_) add_term(m, c);
    return *this;
  }
  BimoduleSeries& operator-=(const BimoduleSeries& o) {
    check_compatible(o, "sub");
    for (const auto& [m, c] : o.t_) add_term(m, CoeffOps<C>::scale(c, Rational(-1)));
    return *this;
  }
  BimoduleSeries operator+(const BimoduleSeries& o) const {
    BimoduleSeries r = *this;
    r += o;
    return r;
  }
  BimoduleSeries operator-(const BimoduleSeries& o) const {
    BimoduleSeries r = *this;
    r -= o;
    return r;
  }
  BimoduleSeries operator-() const { return scaled(Rational(-1)); }

  BimoduleSeries scaled(const Rational& r) const {
    BimoduleSeries s(order_, alphabet_);
    for (const auto& [m, c] : t_) s.add_term(m, CoeffOps<C>::scale(c, r));
    return s;
  }
  BimoduleSeries scaled_coeff(const C& k) const {
    BimoduleSeries s(order_, alphabet_);
    for (const auto& [m, c] : t_) s.add_term(m, c * k);
    return s;
  }

 private:
  int order_ = 0;
  int alphabet_ = 3;
  std::map<ModWord, C> t_;
};

// ---- algebra operations ----------------------------------------------------

template <class C>
AlgebraSeries<C> series_pow(const AlgebraSeries<C>& a, int n) {
  AlgebraSeries<C> r = AlgebraSeries<C>::unit(a.order(), a.alphabet());
  for (int i = 0; i < n; ++i) r *= a;
  return r;
}

// exp of a series with zero constant term, truncated at the series order.
template <class C>
AlgebraSeries<C> series_exp(const AlgebraSeries<C>& a) {
  if (!CoeffOps<C>::is_zero(a.constant_term()))
    throw SeriesError("series_exp: nonzero constant term");
  AlgebraSeries<C> r = AlgebraSeries<C>::unit(a.order(), a.alphabet());
  AlgebraSeries<C> p = r;
  for (int k = 1; k <= a.order(); ++k) {
    p = p * a;
    if (p.is_zero()) break;
    r += p.scaled(rat_inv_factorial(k));
  }
  return r;
}

// Inverse of a series with unit constant term (geometric series on the
// augmentation ideal).
template <class C>
AlgebraSeries<C> series_inverse(const AlgebraSeries<C>& a) {
  if (!CoeffOps<C>::is_zero(a.constant_term() - CoeffOps<C>::one()))
    throw SeriesError("series_inverse: constant term is not 1");
  AlgebraSeries<C> x = AlgebraSeries<C>::unit(a.order(), a.alphabet()) - a;
  AlgebraSeries<C> r = AlgebraSeries<C>::unit(a.order(), a.alphabet());
  AlgebraSeries<C> p = AlgebraSeries<C>::unit(a.order(), a.alphabet());
  for (int k = 1; k <= a.order(); ++k) {
    p = p * x;
    if (p.is_zero()) break;
    r += p;
  }
  return r;
}

template <class C>
AlgebraSeries<C> commutator(const AlgebraSeries<C>& a, const AlgebraSeries<C>& b) {
  return a * b - b * a;
}

// grade-k part
template <class C>
AlgebraSeries<C> extract_order(const AlgebraSeries<C>& a, int k) {
  AlgebraSeries<C> r(a.order(), a.alphabet());
  for (const auto& [w, c] : a.terms())
    if (w.size() == k) r.add_term(w, c);
  return r;
}

template <class C>
BimoduleSeries<C> extract_order(const BimoduleSeries<C>& a, int k) {
  BimoduleSeries<C> r(a.order(), a.alphabet());
  for (const auto& [m, c] : a.terms())
    if (m.grade() == k) r.add_term(m, c);
  return r;
}

// ---- bimodule operations ---------------------------------------------------

enum class Side { Left, Right };

template <class C>
BimoduleSeries<C> bimodule_act(const AlgebraSeries<C>& a, const BimoduleSeries<C>& m, Side side) {
  if (a.order() != m.order() || a.alphabet() != m.alphabet())
    throw SeriesError("bimodule_act: series mismatch");
  BimoduleSeries<C> r(m.order(), m.alphabet());
  for (const auto& [w, ca] : a.terms())
    for (const auto& [mw, cm] : m.terms()) {
      ModWord n;
      n.letter = mw.letter;
      if (side == Side::Left) {
        n.left = w.concat(mw.left);
        n.right = mw.right;
      } else {
        n.left = mw.left;
        n.right = mw.right.concat(w);
      }
      if (n.grade() > r.order()) continue;
      r.add_term(n, ca * cm);
    }
  return r;
}

template <class C>
BimoduleSeries<C> whisker(const AlgebraSeries<C>& a, const BimoduleSeries<C>& m,
                          const AlgebraSeries<C>& b) {
  return bimodule_act(b, bimodule_act(a, m, Side::Left), Side::Right);
}

// theta |> Xi := theta.Xi - Xi.theta
template <class C>
BimoduleSeries<C> triangle_act(const AlgebraSeries<C>& a, const BimoduleSeries<C>& m) {
  return bimodule_act(a, m, Side::Left) - bimodule_act(a, m, Side::Right);
}

// dL = [t12, t13+t23], dR = [t23, t12+t13]; extended as a bimodule map.
template <class C>
AlgebraSeries<C> coboundary(const BimoduleSeries<C>& m) {
  if (m.alphabet() != 3) throw SeriesError("coboundary: three-letter alphabet required");
  AlgebraSeries<C> r(m.order(), 3);
  // (generator pair, sign) lists for dL and dR
  static const std::array<std::array<int, 3>, 4> dl = {{{T12, T13, +1}, {T12, T23, +1}, {T13, T12, -1}, {T23, T12, -1}}};
  static const std::array<std::array<int, 3>, 4> dr = {{{T23, T12, +1}, {T23, T13, +1}, {T12, T23, -1}, {T13, T23, -1}}};
  for (const auto& [mw, c] : m.terms()) {
    const auto& tab = (mw.letter == ML) ? dl : dr;
    for (const auto& e : tab) {
      Word mid;
      mid.push_back(static_cast<uint8_t>(e[0]));
      mid.push_back(static_cast<uint8_t>(e[1]));
      r.add_term(mw.left.concat(mid).concat(mw.right), CoeffOps<C>::scale(c, Rational(e[2])));
    }
  }
  return r;
}

// Peiffer-realised bracket [m1, m2] := d(m1).m2 - d(m2).m1
template <class C>
BimoduleSeries<C> bimodule_bracket(const BimoduleSeries<C>& m1, const BimoduleSeries<C>& m2) {
  return bimodule_act(coboundary(m1), m2, Side::Left) -
         bimodule_act(coboundary(m2), m1, Side::Left);
}

// ---- S3 relabeling ----------------------------------------------------------

// Arrangement (w1 w2 w3): digit d of every generator index maps to w_d. The
// relationators map into the span {L, R, -(L+R)} along the closed orbit:
//   L = L_{213},  R = L_{231} = L_{321},  -(L+R) = L_{132} = L_{312}
//   R = R_{132},  L = R_{312} = R_{321},  -(L+R) = R_{213} = R_{231}.
struct Perm3 {
  std::array<uint8_t, 3> to;  // to[d-1] = image of digit d

  uint8_t operator()(uint8_t d) const { return to[d - 1]; }
  int key() const { return to[0] * 100 + to[1] * 10 + to[2]; }

  static Perm3 id() { return {{1, 2, 3}}; }
  static Perm3 from_key(int k) {
    return {{static_cast<uint8_t>(k / 100), static_cast<uint8_t>((k / 10) % 10),
             static_cast<uint8_t>(k % 10)}};
  }
  // compose(u, w)(d) = u(w(d)): apply w first, then u.
  static Perm3 compose(const Perm3& u, const Perm3& w) {
    Perm3 r{};
    for (int d = 1; d <= 3; ++d) r.to[d - 1] = u(w(d));
    return r;
  }
  static const std::array<Perm3, 6>& all() {
    static const std::array<Perm3, 6> a = {Perm3{{1, 2, 3}}, Perm3{{2, 1, 3}}, Perm3{{2, 3, 1}},
                                           Perm3{{3, 2, 1}}, Perm3{{1, 3, 2}}, Perm3{{3, 1, 2}}};
    return a;
  }
};

inline uint8_t permute_generator(uint8_t g, const Perm3& p) {
  static const std::array<std::array<uint8_t, 2>, 3> idx = {{{1, 2}, {1, 3}, {2, 3}}};
  uint8_t i = p(idx[g][0]), j = p(idx[g][1]);
  if (i > j) std::swap(i, j);
  if (i == 1 && j == 2) return T12;
  if (i == 1 && j == 3) return T13;
  return T23;
}

// letter orbit: list of (letter, sign) making up the image of L or R
inline const std::vector<std::pair<uint8_t, int>>& permute_mod_letter(uint8_t letter, const Perm3& p) {
  static const std::vector<std::pair<uint8_t, int>> just_l = {{ML, +1}};
  static const std::vector<std::pair<uint8_t, int>> just_r = {{MR, +1}};
  static const std::vector<std::pair<uint8_t, int>> minus_lr = {{ML, -1}, {MR, -1}};
  switch (p.key()) {
    case 123: return letter == ML ? just_l : just_r;
    case 213: return letter == ML ? just_l : minus_lr;
    case 231: return letter == ML ? just_r : minus_lr;
    case 321: return letter == ML ? just_r : just_l;
    case 132: return letter == ML ? minus_lr : just_r;
    case 312: return letter == ML ? minus_lr : just_l;
    default: throw SeriesError("invalid permutation");
  }
}

template <class C>
AlgebraSeries<C> permute_labels(const AlgebraSeries<C>& a, const Perm3& p) {
  if (a.alphabet() != 3) throw SeriesError("permute_labels: three-letter alphabet required");
  AlgebraSeries<C> r(a.order(), 3);
  for (const auto& [w, c] : a.terms()) {
    Word nw;
    for (int i = 0; i < w.size(); ++i) nw.push_back(permute_generator(w.at(i), p));
    r.add_term(nw, c);
  }
  return r;
}

template <class C>
BimoduleSeries<C> permute_labels(const BimoduleSeries<C>& m, const Perm3& p) {
  if (m.alphabet() != 3) throw SeriesError("permute_labels: three-letter alphabet required");
  BimoduleSeries<C> r(m.order(), 3);
  for (const auto& [mw, c] : m.terms()) {
    Word nl, nr;
    for (int i = 0; i < mw.left.size(); ++i) nl.push_back(permute_generator(mw.left.at(i), p));
    for (int i = 0; i < mw.right.size(); ++i) nr.push_back(permute_generator(mw.right.at(i), p));
    for (const auto& [letter, sign] : permute_mod_letter(mw.letter, p)) {
      ModWord nm;
      nm.left = nl;
      nm.letter = letter;
      nm.right = nr;
      r.add_term(nm, CoeffOps<C>::scale(c, Rational(sign)));
    }
  }
  return r;
}

// ---- combinatorial expansions -----------------------------------------------

enum class BinomialForm { Easy, Hard };

// (A+B)^n expanded per the two recursion formulas; must agree with the direct
// power of (A+B).
template <class C>
AlgebraSeries<C> noncomm_binomial_expand(const AlgebraSeries<C>& A, const AlgebraSeries<C>& B,
                                         int n, BinomialForm form) {
  AlgebraSeries<C> sum = A + B;
  if (form == BinomialForm::Easy) {
    // (A+B)^n = A^n + sum_m (A+B)^{n-1-m} B A^m
    AlgebraSeries<C> r = series_pow(A, n);
    for (int m = 0; m <= n - 1; ++m) r += series_pow(sum, n - 1 - m) * B * series_pow(A, m);
    return r;
  }
  // (A+B)^n = sum_p C(n,p) A^{n-p}B^p
  //         + sum_{j=1}^{n-1} sum_{k=0}^{n-1-j} C(n-j,k) (A+B)^{j-1} [B, A^{n-j-k}] B^k
  AlgebraSeries<C> r(A.order(), A.alphabet());
  for (int p = 0; p <= n; ++p)
    r += (series_pow(A, n - p) * series_pow(B, p)).scaled(rat_binom(n, p));
  for (int j = 1; j <= n - 1; ++j)
    for (int k = 0; k <= n - 1 - j; ++k)
      r += (series_pow(sum, j - 1) * commutator(B, series_pow(A, n - j - k)) * series_pow(B, k))
               .scaled(rat_binom(n - j, k));
  return r;
}

// ad_B^q(A), either iterated or in the closed binomial form.
template <class C>
AlgebraSeries<C> ad_power(const AlgebraSeries<C>& B, const AlgebraSeries<C>& A, int q,
                          bool closed_form = false) {
  if (!closed_form) {
    AlgebraSeries<C> r = A;
    for (int i = 0; i < q; ++i) r = commutator(B, r);
    return r;
  }
  AlgebraSeries<C> r(A.order(), A.alphabet());
  for (int k = 0; k <= q; ++k) {
    Rational c = rat_binom(q, k);
    if (k % 2) c = -c;
    r += (series_pow(B, q - k) * A * series_pow(B, k)).scaled(c);
  }
  return r;
}

// ---- substitution and evaluation ---------------------------------------------

// Word-by-word substitution of the letters of a two-letter series by algebra
// series with zero constant term.
template <class C>
AlgebraSeries<C> substitute_pair(const AlgebraSeries<C>& phi, const AlgebraSeries<C>& X,
                                 const AlgebraSeries<C>& Y) {
  if (phi.alphabet() != 2) throw SeriesError("substitute_pair: two-letter source required");
  if (!CoeffOps<C>::is_zero(X.constant_term()) || !CoeffOps<C>::is_zero(Y.constant_term()))
    throw SeriesError("substitute_pair: targets must have zero constant term");
  X.check_compatible(Y, "substitute_pair");
  AlgebraSeries<C> r(X.order(), X.alphabet());
  for (const auto& [w, c] : phi.terms()) {
    if (w.size() > r.order()) continue;
    AlgebraSeries<C> p = AlgebraSeries<C>::unit(X.order(), X.alphabet());
    for (int i = 0; i < w.size(); ++i) p *= (w.at(i) == GA) ? X : Y;
    r += p.scaled_coeff(c);
  }
  return r;
}

inline AlgebraSeries<Complex> series_eval(const AlgebraSeries<SymCoeff>& a, double eps,
                                          const std::function<double(const ZetaIndex&)>& zeta_fn) {
  AlgebraSeries<Complex> r(a.order(), a.alphabet());
  for (const auto& [w, c] : a.terms()) r.add_term(w, c.eval(eps, zeta_fn));
  return r;
}

inline BimoduleSeries<Complex> series_eval(const BimoduleSeries<SymCoeff>& a, double eps,
                                           const std::function<double(const ZetaIndex&)>& zeta_fn) {
  BimoduleSeries<Complex> r(a.order(), a.alphabet());
  for (const auto& [m, c] : a.terms()) r.add_term(m, c.eval(eps, zeta_fn));
  return r;
}

// ---- norms and printing ------------------------------------------------------

inline double series_max_abs(const AlgebraSeries<Complex>& a, int grade = -1) {
  double m = 0.0;
  for (const auto& [w, c] : a.terms())
    if (grade < 0 || w.size() == grade) m = std::max(m, std::abs(c));
  return m;
}

inline double series_max_abs(const BimoduleSeries<Complex>& a, int grade = -1) {
  double m = 0.0;
  for (const auto& [mw, c] : a.terms())
    if (grade < 0 || mw.grade() == grade) m = std::max(m, std::abs(c));
  return m;
}

template <class C>
std::string to_string(const AlgebraSeries<C>& a);
template <class C>
std::string to_string(const BimoduleSeries<C>& a);

inline std::string coeff_to_string(const SymCoeff& c) { return "(" + c.to_string() + ")"; }
inline std::string coeff_to_string(const Complex& c) {
  std::ostringstream os;
  os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
  return os.str();
}

template <class C>
std::string to_string(const AlgebraSeries<C>& a) {
  if (a.is_zero()) return "0";
  std::string s;
  for (const auto& [w, c] : a.terms()) {
    if (!s.empty()) s += " + ";
    s += coeff_to_string(c) + " " + word_to_string(w, a.alphabet());
  }
  return s;
}

template <class C>
std::string to_string(const BimoduleSeries<C>& a) {
  if (a.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : a.terms()) {
    if (!s.empty()) s += " + ";
    s += coeff_to_string(c) + " " + modword_to_string(m, a.alphabet());
  }
  return s;
}

// ---- stock elements of the three-letter algebra -------------------------------

template <class C>
AlgebraSeries<C> gen(int order, uint8_t g) {
  return AlgebraSeries<C>::generator(order, 3, g);
}

// Lambda = t12 + t13 + t23
template <class C>
AlgebraSeries<C> lambda_series(int order) {
  return gen<C>(order, T12) + gen<C>(order, T13) + gen<C>(order, T23);
}

// t_(12)3 = t13 + t23
template <class C>
AlgebraSeries<C> t123_grouped_series(int order) {
  return gen<C>(order, T13) + gen<C>(order, T23);
}

// t_1(23) = t12 + t13
template <class C>
AlgebraSeries<C> t1_23_grouped_series(int order) {
  return gen<C>(order, T12) + gen<C>(order, T13);
}

// tbar13 = t13 - Lambda = -(t12 + t23)
template <class C>
AlgebraSeries<C> tbar13_series(int order) {
  return -(gen<C>(order, T12) + gen<C>(order, T23));
}

}  // namespace cmkz
