#ifndef TWLOOP_LOOPLIE_HPP
#define TWLOOP_LOOPLIE_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "twloop/fold.hpp"
#include "twloop/liealg.hpp"

namespace twloop {

/// Polynomial with Scalar coefficients, lowest degree first, no trailing zeros.
struct Poly {
  std::vector<Scalar> c;

  Poly() = default;
  explicit Poly(std::vector<Scalar> coeffs) : c(std::move(coeffs)) { trim(); }

  static Poly monomial(int deg, Scalar coef = Scalar(1)) {
    std::vector<Scalar> v(static_cast<std::size_t>(deg) + 1, Scalar(0));
    v.back() = coef;
    return Poly(v);
  }
  /// (u - a)^k
  static Poly linear_power(const Scalar& a, int k) {
    Poly p(std::vector<Scalar>{Scalar(1)});
    Poly lin(std::vector<Scalar>{-a, Scalar(1)});
    for (int i = 0; i < k; ++i) p = p * lin;
    return p;
  }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  Scalar coeff(int i) const { return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : Scalar(0); }

  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }

  friend Poly operator*(const Poly& x, const Poly& y) {
    if (x.is_zero() || y.is_zero()) return {};
    std::vector<Scalar> r(x.c.size() + y.c.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < x.c.size(); ++i)
      for (std::size_t j = 0; j < y.c.size(); ++j) r[i + j] += x.c[i] * y.c[j];
    return Poly(r);
  }
  friend Poly operator+(const Poly& x, const Poly& y) {
    std::vector<Scalar> r(std::max(x.c.size(), y.c.size()), Scalar(0));
    for (std::size_t i = 0; i < x.c.size(); ++i) r[i] += x.c[i];
    for (std::size_t i = 0; i < y.c.size(); ++i) r[i] += y.c[i];
    return Poly(r);
  }
  friend bool operator==(const Poly& x, const Poly& y) { return x.c == y.c; }

  /// remainder modulo a monic q
  Poly mod(const Poly& q) const {
    std::vector<Scalar> r = c;
    int d = q.degree();
    for (int k = static_cast<int>(r.size()) - 1; k >= d; --k) {
      Scalar lead = r[k];
      if (lead.is_zero()) continue;
      for (int i = 0; i <= d; ++i) r[k - d + i] -= lead * q.c[i];
    }
    if (static_cast<int>(r.size()) > d) r.resize(static_cast<std::size_t>(d));
    return Poly(r);
  }

  Scalar eval(const Scalar& x) const {
    Scalar s(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
    return s;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c[i].str() + ")u^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }
};

/// u^e modulo q for any integer e; needs q(0) != 0 when e < 0.
inline Poly u_power_mod(long e, const Poly& q) {
  if (e >= 0) {
    Poly r(std::vector<Scalar>{Scalar(1)});
    Poly base = Poly::monomial(1).mod(q);
    long k = e;
    while (k > 0) {
      if (k & 1) r = (r * base).mod(q);
      base = (base * base).mod(q);
      k >>= 1;
    }
    return r.mod(q);
  }
  // u * (q(u) - q(0)) / u = -q(0)  =>  u^{-1} = -(q(u) - q(0)) / (u q(0))
  Scalar q0 = q.coeff(0);
  if (q0.is_zero()) throw std::domain_error("u is not invertible modulo q");
  std::vector<Scalar> inv;
  for (int i = 1; i <= q.degree(); ++i) inv.push_back(-q.c[i] / q0);
  Poly ui(inv);
  Poly r(std::vector<Scalar>{Scalar(1)});
  for (long k = 0; k < -e; ++k) r = (r * ui).mod(q);
  return r;
}

/// binom(k, l) for any integer k, l >= 0
inline Rational gen_binomial(long k, long l) {
  Rational r = 1;
  for (long i = 0; i < l; ++i) r = r * Rational(k - i) / Rational(i + 1);
  return r;
}

/// Finite sum of x (x) t^k, one g-vector per exponent.
struct LoopElement {
  std::map<long, GVec> terms;

  LoopElement() = default;
  LoopElement(const GVec& x, long k) {
    if (!x.empty()) terms[k] = x;
  }

  bool is_zero() const { return terms.empty(); }
  void add(const Scalar& c, const LoopElement& o) {
    for (const auto& [k, v] : o.terms) {
      GVec& t = terms[k];
      sv_axpy(t, c, v);
      if (t.empty()) terms.erase(k);
    }
  }
  friend bool operator==(const LoopElement& a, const LoopElement& b) { return a.terms == b.terms; }
};

inline LoopElement loop_scale(LoopElement x, const Scalar& c) {
  LoopElement r;
  r.add(c, x);
  return r;
}

inline LoopElement loop_bracket(const ChevalleyAlgebra& g, const LoopElement& x, const LoopElement& y) {
  LoopElement r;
  for (const auto& [k, v] : x.terms)
    for (const auto& [l, w] : y.terms) r.add(Scalar(1), LoopElement(g.bracket(v, w), k + l));
  return r;
}

/// x in L^Gamma(g): every term x_k (x) t^k has x_k in g_{-k mod m}.
inline bool is_twisted(const LiftedAut& L, const LoopElement& x) {
  int m = L.aut.m;
  for (const auto& [k, v] : x.terms)
    if (!in_piece(L, v, static_cast<int>(((-k) % m + m) % m))) return false;
  return true;
}

/// Finite-dimensional Lie algebra with the data the module engine needs.
struct FinLie {
  int dim = 0;
  std::vector<SparseVec> table;  // dim * dim
  std::vector<int> kind;         // -1 lowering, 0 Cartan-type, +1 raising
  std::vector<IntVec> grade;     // additive grading (weights, degrees)
  std::vector<int> height;       // weight height (negative for lowering)
  std::vector<long> loop_degree;
  std::vector<std::string> labels;

  const SparseVec& bracket_basis(int a, int b) const {
    return table[static_cast<std::size_t>(a) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(b)];
  }
  SparseVec bracket(const SparseVec& x, const SparseVec& y) const {
    SparseVec out;
    for (const auto& [i, c] : x)
      for (const auto& [j, d] : y) {
        const SparseVec& t = bracket_basis(i, j);
        if (!t.empty()) sv_axpy(out, c * d, t);
      }
    return out;
  }
  void set(int a, int b, SparseVec v) {
    table[static_cast<std::size_t>(a) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(b)] = std::move(v);
  }
};

inline bool check_jacobi(const FinLie& L, std::string* witness = nullptr) {
  for (int a = 0; a < L.dim; ++a)
    for (int b = 0; b < L.dim; ++b) {
      SparseVec s = L.bracket_basis(a, b);
      sv_axpy(s, Scalar(1), L.bracket_basis(b, a));
      if (!s.empty()) {
        if (witness) *witness = "antisymmetry " + L.labels[a] + "," + L.labels[b];
        return false;
      }
    }
  for (int a = 0; a < L.dim; ++a)
    for (int b = a + 1; b < L.dim; ++b)
      for (int c = b + 1; c < L.dim; ++c) {
        SparseVec s = L.bracket(SparseVec{{a, Scalar(1)}}, L.bracket_basis(b, c));
        sv_axpy(s, Scalar(1), L.bracket(SparseVec{{b, Scalar(1)}}, L.bracket_basis(c, a)));
        sv_axpy(s, Scalar(1), L.bracket(SparseVec{{c, Scalar(1)}}, L.bracket_basis(a, b)));
        if (!s.empty()) {
          if (witness) *witness = L.labels[a] + "," + L.labels[b] + "," + L.labels[c];
          return false;
        }
      }
  return true;
}

/// Grading must be additive on every nonzero bracket.
inline bool check_grading(const FinLie& L) {
  for (int a = 0; a < L.dim; ++a)
    for (int b = 0; b < L.dim; ++b)
      for (const auto& [i, c] : L.bracket_basis(a, b)) {
        IntVec s = L.grade[a];
        for (std::size_t k = 0; k < s.size(); ++k) s[k] += L.grade[b][k];
        if (s != L.grade[i]) return false;
      }
  return true;
}

inline int kind_of_weight(const IntVec& w) {
  bool pos = false, neg = false;
  for (int c : w) {
    pos = pos || c > 0;
    neg = neg || c < 0;
  }
  if (pos && neg) throw std::logic_error("mixed-sign root");
  return pos ? 1 : (neg ? -1 : 0);
}

/// (L g (x) A) / (g (x) J) with J generated by q(u); u = t (untwisted) or t^m (twisted).
struct TruncatedLie : FinLie {
  bool twisted = false;
  int m = 1;
  Poly q;
  // basis element -> (piece s, vector index in piece or Chevalley index, power j of u)
  std::vector<std::tuple<int, int, int>> origin;
  std::vector<GVec> vec;  // g-part of each basis element
  DenseMat graded_inverse;  // Chevalley -> graded-basis coordinates (twisted)
  std::vector<std::pair<int, int>> graded_index;  // flat graded index -> (s, p)

  int deg() const { return q.degree(); }
  int index_of(int s, int p, int j) const {
    for (int i = 0; i < dim; ++i)
      if (origin[i] == std::make_tuple(s, p, j)) return i;
    return -1;
  }
};

namespace detail {

inline std::vector<std::pair<int, Scalar>> graded_coords(const TruncatedLie& T, const GVec& v) {
  std::vector<std::pair<int, Scalar>> out;
  std::size_t D = T.graded_inverse.size();
  for (std::size_t r = 0; r < D; ++r) {
    Scalar c(0);
    for (const auto& [i, x] : v)
      if (!T.graded_inverse[r][i].is_zero()) c += T.graded_inverse[r][i] * x;
    if (!c.is_zero()) out.emplace_back(static_cast<int>(r), c);
  }
  return out;
}

}  // namespace detail

inline TruncatedLie truncate(const TwistedSetup& ts, const Poly& q, bool twisted) {
  if (q.degree() < 1) throw std::invalid_argument("truncation polynomial must have positive degree");
  if (!q.c.back().is_one()) throw std::invalid_argument("truncation polynomial must be monic");
  if (q.coeff(0).is_zero()) throw std::invalid_argument("truncation polynomial must not vanish at 0");
  const ChevalleyAlgebra& g = ts.g;
  TruncatedLie T;
  T.twisted = twisted;
  T.m = twisted ? ts.aut.m : 1;
  T.q = q;
  int d = q.degree();
  int m = T.m;
  if (!twisted) {
    for (int b = 0; b < g.dim(); ++b)
      for (int j = 0; j < d; ++j) {
        T.origin.emplace_back(0, b, j);
        T.vec.push_back(GVec{{b, Scalar(1)}});
        IntVec w = g.root_of(b);
        T.grade.push_back(w);
        T.kind.push_back(kind_of_weight(w));
        T.height.push_back(height(w));
        T.loop_degree.push_back(j);
        T.labels.push_back(g.label(b) + "u^" + std::to_string(j));
      }
  } else {
    for (int s = 0; s < m; ++s)
      for (int p = 0; p < ts.pieces.dim(s); ++p) T.graded_index.emplace_back(s, p);
    std::size_t D = T.graded_index.size();
    DenseMat basis = zero_matrix(D, D);
    for (std::size_t c = 0; c < D; ++c) {
      auto [s, p] = T.graded_index[c];
      for (const auto& [i, x] : ts.pieces.basis[s][p]) basis[i][c] = x.with_order(m);
    }
    auto inv = matrix_inverse(basis);
    if (!inv) throw std::logic_error("graded pieces do not form a basis");
    T.graded_inverse = *inv;
    for (std::size_t c = 0; c < D; ++c) {
      auto [s, p] = T.graded_index[c];
      for (int j = 0; j < d; ++j) {
        T.origin.emplace_back(s, p, j);
        T.vec.push_back(ts.pieces.basis[s][p]);
        IntVec w = ts.pieces.weight[s][p];
        T.grade.push_back(w);
        T.kind.push_back(kind_of_weight(w));
        T.height.push_back(height(w));
        T.loop_degree.push_back(-s + static_cast<long>(m) * j);
        T.labels.push_back("g" + std::to_string(s) + "[" + std::to_string(p) + "]t^" +
                           std::to_string(-s + m * j));
      }
    }
  }
  T.dim = static_cast<int>(T.origin.size());
  T.table.assign(static_cast<std::size_t>(T.dim) * static_cast<std::size_t>(T.dim), SparseVec{});
  // flat position of (s,p) or Chevalley b times d plus j
  std::vector<Poly> upow;
  for (int e = -1; e <= 2 * (d - 1); ++e) upow.push_back(u_power_mod(e, q));
  for (int a = 0; a < T.dim; ++a)
    for (int b = 0; b < T.dim; ++b) {
      auto [sa, pa, ja] = T.origin[a];
      auto [sb, pb, jb] = T.origin[b];
      GVec br = g.bracket(T.vec[a], T.vec[b]);
      if (br.empty()) continue;
      int e = ja + jb;
      std::vector<std::pair<int, Scalar>> coords;
      if (!twisted) {
        coords = br;
      } else {
        if (sa + sb >= m) e -= 1;
        coords = detail::graded_coords(T, br);
      }
      const Poly& pw = upow[static_cast<std::size_t>(e + 1)];
      SparseVec out;
      for (const auto& [c, x] : coords)
        for (int j = 0; j < d; ++j) {
          Scalar y = pw.coeff(j);
          if (!y.is_zero()) out.emplace_back(c * d + j, x * y);
        }
      sv_clean(out);
      T.set(a, b, out);
    }
  return T;
}

/// Coordinates of a loop element in T; throws if it is not twisted when T is.
inline SparseVec truncated_coords(const TruncatedLie& T, const LoopElement& x) {
  int d = T.deg();
  SparseVec out;
  for (const auto& [k, v] : x.terms) {
    if (!T.twisted) {
      Poly pw = u_power_mod(k, T.q);
      for (const auto& [b, c] : v)
        for (int j = 0; j < d; ++j)
          if (!pw.coeff(j).is_zero()) out.emplace_back(b * d + j, c * pw.coeff(j));
      continue;
    }
    for (const auto& [r, c] : detail::graded_coords(T, v)) {
      int s = T.graded_index[r].first;
      long e = k + s;
      if (((e % T.m) + T.m) % T.m != 0) throw std::invalid_argument("loop element is not twisted");
      Poly pw = u_power_mod(e / T.m, T.q);
      for (int j = 0; j < d; ++j)
        if (!pw.coeff(j).is_zero()) out.emplace_back(r * d + j, c * pw.coeff(j));
    }
  }
  sv_clean(out);
  return out;
}

/// g (x) C[t]/(prod_a (t-a)^N) in the Chinese-remainder basis x (x) s_a^l e_a, s_a = t - a.
/// Grade: per point, the root followed by the s-degree.
struct CrtLie : FinLie {
  std::vector<Scalar> points;
  int depth = 1;
  int gdim = 0;
  int rank = 0;

  int index(int point, int b, int l) const { return (point * gdim + b) * depth + l; }
};

inline CrtLie crt_lie(const ChevalleyAlgebra& g, const std::vector<Scalar>& points, int N) {
  if (N < 1) throw std::invalid_argument("depth must be at least 1");
  for (const auto& a : points)
    if (a.is_zero()) throw std::invalid_argument("0 is not a point of C*");
  CrtLie C;
  C.points = points;
  C.depth = N;
  C.gdim = g.dim();
  C.rank = g.n;
  int P = static_cast<int>(points.size());
  int slot = g.n + 1;
  C.dim = P * g.dim() * N;
  for (int a = 0; a < P; ++a)
    for (int b = 0; b < g.dim(); ++b)
      for (int l = 0; l < N; ++l) {
        IntVec gr(static_cast<std::size_t>(P * slot), 0);
        IntVec r = g.root_of(b);
        for (int i = 0; i < g.n; ++i) gr[a * slot + i] = r[i];
        gr[a * slot + g.n] = l;
        C.grade.push_back(gr);
        C.kind.push_back(kind_of_weight(r));
        C.height.push_back(height(r));
        C.loop_degree.push_back(l);
        C.labels.push_back(g.label(b) + "s^" + std::to_string(l) + "@" + points[a].str());
      }
  C.table.assign(static_cast<std::size_t>(C.dim) * static_cast<std::size_t>(C.dim), SparseVec{});
  for (int a = 0; a < P; ++a)
    for (int x = 0; x < g.dim(); ++x)
      for (int y = 0; y < g.dim(); ++y) {
        const GVec& br = g.bracket_basis(x, y);
        if (br.empty()) continue;
        for (int k = 0; k < N; ++k)
          for (int l = 0; k + l < N; ++l) {
            SparseVec out;
            for (const auto& [z, c] : br) out.emplace_back(C.index(a, z, k + l), c);
            sv_clean(out);
            C.set(C.index(a, x, k), C.index(a, y, l), out);
          }
      }
  return C;
}

/// Image of a loop element: t^k = sum_l binom(k,l) a^{k-l} s_a^l on the a-component.
inline SparseVec crt_coords(const CrtLie& C, const LoopElement& x) {
  SparseVec out;
  for (const auto& [k, v] : x.terms)
    for (std::size_t a = 0; a < C.points.size(); ++a)
      for (int l = 0; l < C.depth; ++l) {
        Scalar c = Scalar(gen_binomial(k, l)) * C.points[a].pow(k - l);
        if (c.is_zero()) continue;
        for (const auto& [b, y] : v) out.emplace_back(C.index(static_cast<int>(a), b, l), c * y);
      }
  sv_clean(out);
  return out;
}

// Named loop elements of L^Gamma(g) built from the averaged generators.
// X(alpha, +-, k) = x_alpha^{+-}((-k) mod m) (x) t^k, likewise H(alpha, k).

inline int residue(long k, int m) { return static_cast<int>(((-k) % m + m) % m); }

inline LoopElement loop_x(const TwistedSetup& ts, int root0, int sign, long k) {
  const TwistedRoot& r = ts.gens.roots[root0];
  int s = residue(k, ts.aut.m);
  return LoopElement(sign > 0 ? r.xp[s] : r.xm[s], k);
}

inline LoopElement loop_h(const TwistedSetup& ts, int root0, long k) {
  const TwistedRoot& r = ts.gens.roots[root0];
  return LoopElement(r.h[residue(k, ts.aut.m)], k);
}

/// x_{2alpha}^{+-}(1) (x) t^k, k odd (A_2n short roots, normalized sl2 triple).
inline LoopElement loop_x2(const TwistedSetup& ts, int root0, int sign, long k) {
  const TwistedRoot& r = ts.gens.roots[root0];
  if (!r.has_double) throw std::invalid_argument("root has no x_{2alpha}");
  if (k % 2 == 0) throw std::invalid_argument("x_{2alpha}(1) needs an odd exponent");
  return LoopElement(sign > 0 ? r.e2 : r.f2, k);
}

enum class SmallCase { long_a2n, short_a2n, long_other, short_other };

inline std::string small_case_name(SmallCase c) {
  switch (c) {
    case SmallCase::long_a2n: return "A2n-long:L(sl2)";
    case SmallCase::short_a2n: return "A2n-short:LGamma(sl3)";
    case SmallCase::long_other: return "long:L(sl2)";
    case SmallCase::short_other: return "short:L(sl2)";
  }
  return "";
}

struct SmallSubalgebra {
  SmallCase tag = SmallCase::long_other;
  int root0 = -1;
  int window = 0;
  // generating elements with exponents in [-window, window]
  std::vector<std::string> labels;
  std::vector<LoopElement> elements;
  bool verified = false;
  std::string witness;
};

/// The copy of L(sl2) or L^Gamma(sl3) attached to a positive root of g_0,
/// with the isomorphism checked on brackets for exponents in [-window, window].
inline SmallSubalgebra small_subalgebra(const TwistedSetup& ts, int root0, int window = 3);

namespace detail {

struct ModelElem {
  int type;  // 0: X+, 1: X-, 2: H, 3: X2+, 4: X2-
  long k;
};

inline LoopElement model_image(const TwistedSetup& ts, int root0, SmallCase tag, const ModelElem& e) {
  int m = ts.aut.m;
  auto mk = [&](int type, long k) -> LoopElement {
    if (tag == SmallCase::long_other) {
      // e (x) t^s -> x(0) (x) t^{ms}
      const TwistedRoot& r = ts.gens.roots[root0];
      const GVec& v = type == 0 ? r.xp[0] : (type == 1 ? r.xm[0] : r.h[0]);
      return LoopElement(v, k * m);
    }
    if (type == 2) return loop_h(ts, root0, k);
    if (type <= 1) return loop_x(ts, root0, type == 0 ? 1 : -1, k);
    return loop_x2(ts, root0, type == 3 ? 1 : -1, k);
  };
  return mk(e.type, e.k);
}

}  // namespace detail

inline SmallSubalgebra small_subalgebra(const TwistedSetup& ts, int root0, int window) {
  SmallSubalgebra out;
  out.root0 = root0;
  out.window = window;
  const FoldedRootData& fd = ts.fd;
  bool shrt = fd.r0_short[root0];
  if (fd.type_a_even) out.tag = shrt ? SmallCase::short_a2n : SmallCase::long_a2n;
  else out.tag = shrt ? SmallCase::short_other : SmallCase::long_other;
  // model algebra: sl3 with its swap for the short A_2n case, sl2 otherwise
  TwistedSetup model = out.tag == SmallCase::short_a2n ? make_setup('A', 2, IntVec{1, 0})
                                                        : make_setup('A', 1, IntVec{0});
  SmallCase mtag = out.tag == SmallCase::short_a2n ? SmallCase::short_a2n : SmallCase::short_other;
  std::vector<detail::ModelElem> elems;
  for (long k = -window; k <= window; ++k) {
    elems.push_back({0, k});
    elems.push_back({1, k});
    elems.push_back({2, k});
    if (mtag == SmallCase::short_a2n && (k % 2 != 0)) {
      elems.push_back({3, k});
      elems.push_back({4, k});
    }
  }
  const char* names[] = {"x+", "x-", "h", "x2+", "x2-"};
  for (const auto& e : elems) {
    LoopElement img = detail::model_image(ts, root0, out.tag, e);
    out.labels.push_back(std::string(names[e.type]) + "@" + std::to_string(e.k));
    out.elements.push_back(img);
    if (img.is_zero()) {
      out.witness = "zero image for " + out.labels.back();
      return out;
    }
  }
  // model coordinates of a model loop element in the chosen elements at exponent k
  auto model_coords = [&](const LoopElement& x, std::vector<std::pair<std::size_t, Scalar>>& co) -> bool {
    for (const auto& [k, v] : x.terms) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < elems.size(); ++i)
        if (elems[i].k == k) idx.push_back(i);
      if (idx.empty()) return false;  // outside the window
      std::size_t D = static_cast<std::size_t>(model.g.dim());
      DenseMat a = zero_matrix(D, idx.size() + 1);
      for (std::size_t c = 0; c < idx.size(); ++c) {
        LoopElement me = detail::model_image(model, 0, mtag, elems[idx[c]]);
        for (const auto& [i, y] : me.terms.at(k)) a[i][c] = y;
      }
      for (const auto& [i, y] : v) a[i][idx.size()] = y;
      auto piv = rref(a);
      if (!piv.empty() && piv.back() == static_cast<int>(idx.size())) throw std::logic_error("model element outside span");
      for (std::size_t r = 0; r < piv.size(); ++r)
        if (!a[r][idx.size()].is_zero()) co.emplace_back(idx[piv[r]], a[r][idx.size()]);
    }
    return true;
  };
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j) {
      LoopElement mb = loop_bracket(model.g, detail::model_image(model, 0, mtag, elems[i]),
                                    detail::model_image(model, 0, mtag, elems[j]));
      std::vector<std::pair<std::size_t, Scalar>> co;
      if (!model_coords(mb, co)) continue;
      LoopElement expect;
      for (const auto& [t, c] : co) expect.add(c, out.elements[t]);
      LoopElement got = loop_bracket(ts.g, out.elements[i], out.elements[j]);
      if (!(got == expect)) {
        out.witness = "[" + out.labels[i] + "," + out.labels[j] + "]";
        return out;
      }
    }
  for (const auto& e : out.elements)
    if (!is_twisted(ts.lift, e)) {
      out.witness = "element outside the twisted loop algebra";
      return out;
    }
  out.verified = true;
  return out;
}

inline nlohmann::json truncated_to_json(const TruncatedLie& T) {
  nlohmann::json j;
  j["twisted"] = T.twisted;
  j["m"] = T.m;
  j["q"] = T.q.str();
  j["dim"] = T.dim;
  std::map<std::string, int> hist;
  for (int i = 0; i < T.dim; ++i) {
    std::string key;
    for (std::size_t k = 0; k < T.grade[i].size(); ++k) key += (k ? "," : "") + std::to_string(T.grade[i][k]);
    hist[key] += 1;
  }
  j["weight_histogram"] = hist;
  return j;
}

}  // namespace twloop

#endif
