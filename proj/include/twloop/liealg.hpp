#ifndef TWLOOP_LIEALG_HPP
#define TWLOOP_LIEALG_HPP

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twloop/linalg.hpp"
#include "twloop/rootdata.hpp"

namespace twloop {

/// Element of g in Chevalley coordinates.
using GVec = SparseVec;

/// Chevalley basis: x+_b (0..P-1), x-_b (P..2P-1), H_i (2P..2P+n-1).
class ChevalleyAlgebra {
 public:
  RootSystem rs;
  int P = 0;
  int n = 0;

  int dim() const { return 2 * P + n; }
  int xp(int b) const { return b; }
  int xm(int b) const { return P + b; }
  int hh(int i) const { return 2 * P + i; }
  bool is_cartan(int idx) const { return idx >= 2 * P; }

  /// Signed root of a basis element (zero for Cartan elements).
  IntVec root_of(int idx) const {
    if (idx >= 2 * P) return IntVec(static_cast<std::size_t>(n), 0);
    IntVec r = rs.positive_roots[idx % P];
    if (idx >= P)
      for (int& c : r) c = -c;
    return r;
  }

  int basis_of_root(const IntVec& r) const {
    bool neg = std::any_of(r.begin(), r.end(), [](int c) { return c < 0; });
    if (!neg) {
      int b = rs.root_index(r);
      return b < 0 ? -1 : xp(b);
    }
    IntVec p(r);
    for (int& c : p) c = -c;
    int b = rs.root_index(p);
    return b < 0 ? -1 : xm(b);
  }

  const GVec& bracket_basis(int a, int b) const {
    return table_[static_cast<std::size_t>(a) * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(b)];
  }

  GVec bracket(const GVec& x, const GVec& y) const {
    GVec out;
    for (const auto& [i, c] : x)
      for (const auto& [j, d] : y) {
        const GVec& t = bracket_basis(i, j);
        if (!t.empty()) sv_axpy(out, c * d, t);
      }
    return out;
  }

  /// N_{alpha,beta} for signed roots; 0 when alpha+beta is not a root.
  int structure_constant(const IntVec& a, const IntVec& b) const {
    int ia = basis_of_root(a), ib = basis_of_root(b);
    if (ia < 0 || ib < 0) return 0;
    const GVec& t = bracket_basis(ia, ib);
    if (t.empty() || is_cartan(t.front().first)) return 0;
    return static_cast<int>(t.front().second.re().get_num().get_si());
  }

  std::string dump() const {
    std::ostringstream os;
    for (int a = 0; a < dim(); ++a)
      for (int b = 0; b < dim(); ++b) {
        const GVec& t = bracket_basis(a, b);
        if (t.empty()) continue;
        os << "[" << label(a) << "," << label(b) << "] =";
        for (const auto& [i, c] : t) os << " " << c.str() << "*" << label(i);
        os << "\n";
      }
    return os.str();
  }

  std::string label(int idx) const {
    std::string s;
    if (idx >= 2 * P) return "H" + std::to_string(idx - 2 * P + 1);
    s = idx < P ? "X+" : "X-";
    s += "(";
    const IntVec& r = rs.positive_roots[idx % P];
    for (std::size_t k = 0; k < r.size(); ++k) s += (k ? "," : "") + std::to_string(r[k]);
    return s + ")";
  }

  std::vector<GVec> table_;
};

namespace detail {

class CarterConstants {
 public:
  explicit CarterConstants(const RootSystem& rs) : rs_(rs) {}

  int N(const IntVec& a, const IntVec& b) {
    IntVec s = add(a, b);
    if (is_zero(s) || !rs_.is_root(s)) return 0;
    auto key = std::make_pair(a, b);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int v = compute(a, b, s);
    memo_[key] = v;
    return v;
  }

 private:
  static IntVec add(const IntVec& a, const IntVec& b) {
    IntVec s(a);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += b[i];
    return s;
  }
  static IntVec neg(IntVec a) {
    for (int& c : a) c = -c;
    return a;
  }
  static bool is_zero(const IntVec& a) {
    return std::all_of(a.begin(), a.end(), [](int c) { return c == 0; });
  }
  static bool positive(const IntVec& a) {
    return std::all_of(a.begin(), a.end(), [](int c) { return c >= 0; });
  }

  int p_value(const IntVec& a, const IntVec& b) const {
    int p = 0;
    IntVec c = b;
    while (true) {
      for (std::size_t i = 0; i < c.size(); ++i) c[i] -= a[i];
      if (!rs_.is_root(c)) return p;
      ++p;
    }
  }

  Rational len(const IntVec& a) const { return rs_.inner(a, a); }

  int scaled(const Rational& num, int n) {
    Rational v = num * n;
    if (v.get_den() != 1) throw std::logic_error("non-integral structure constant");
    return static_cast<int>(v.get_num().get_si());
  }

  int compute(const IntVec& a, const IntVec& b, const IntVec& s) {
    bool pa = positive(a), pb = positive(b);
    if (pa && pb) {
      int ia = rs_.root_index(a), ib = rs_.root_index(b);
      if (ia > ib) return -N(b, a);
      // extraspecial pair of s
      IntVec g, d;
      for (const auto& r : rs_.positive_roots) {
        IntVec rest = s;
        for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= r[i];
        if (positive(rest) && rs_.is_root(rest)) {
          g = r;
          d = rest;
          break;
        }
      }
      int ngd = p_value(g, d) + 1;
      if (a == g) return ngd;
      // N_{a,b} N_{-g,-d}/(s,s) + N_{b,-g} N_{a,-d}/(b-g,b-g) + N_{-g,a} N_{b,-d}/(a-g,a-g) = 0
      Rational acc = 0;
      IntVec bg = add(b, neg(g)), ag = add(a, neg(g));
      if (rs_.is_root(bg)) acc += Rational(N(b, neg(g)) * N(a, neg(d))) / len(bg);
      if (rs_.is_root(ag)) acc += Rational(N(neg(g), a) * N(b, neg(d))) / len(ag);
      // N_{-g,-d} = -N_{g,d}
      Rational v = acc * len(s) / ngd;
      if (v.get_den() != 1) throw std::logic_error("non-integral structure constant");
      return static_cast<int>(v.get_num().get_si());
    }
    if (!pa && !pb) return -N(neg(a), neg(b));
    IntVec c = neg(s);
    // N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b)
    if (pa) {
      if (!positive(c)) return scaled(len(c) / len(a), N(b, c));
      return scaled(len(c) / len(b), N(c, a));
    }
    if (!positive(c)) return scaled(len(c) / len(b), N(c, a));
    return scaled(len(c) / len(a), N(b, c));
  }

  const RootSystem& rs_;
  std::map<std::pair<IntVec, IntVec>, int> memo_;
};

}  // namespace detail

inline bool check_jacobi(const ChevalleyAlgebra& g, std::string* witness = nullptr);

inline ChevalleyAlgebra build_chevalley(const RootSystem& rs) {
  ChevalleyAlgebra g;
  g.rs = rs;
  g.P = rs.num_positive();
  g.n = rs.rank;
  int D = g.dim();
  g.table_.assign(static_cast<std::size_t>(D) * static_cast<std::size_t>(D), GVec{});
  detail::CarterConstants carter(rs);
  auto set = [&](int a, int b, GVec v) {
    g.table_[static_cast<std::size_t>(a) * static_cast<std::size_t>(D) + static_cast<std::size_t>(b)] = std::move(v);
  };
  for (int a = 0; a < 2 * g.P; ++a) {
    IntVec ra = g.root_of(a);
    for (int b = 0; b < 2 * g.P; ++b) {
      IntVec rb = g.root_of(b);
      IntVec s(ra);
      bool zero = true;
      for (int i = 0; i < g.n; ++i) {
        s[i] += rb[i];
        zero = zero && s[i] == 0;
      }
      if (zero) {
        // [x_r, x_-r] = H_r, [x_-r, x_r] = -H_r
        IntVec pr = a < g.P ? ra : rb;
        auto cc = rs.coroot_coeffs(pr);
        GVec v;
        for (int i = 0; i < g.n; ++i)
          if (cc[i] != 0) v.emplace_back(g.hh(i), Scalar(a < g.P ? cc[i] : Rational(-cc[i])));
        set(a, b, v);
        continue;
      }
      int nab = carter.N(ra, rb);
      if (nab != 0) set(a, b, GVec{{g.basis_of_root(s), Scalar(nab)}});
    }
  }
  for (int i = 0; i < g.n; ++i)
    for (int b = 0; b < 2 * g.P; ++b) {
      IntVec rb = g.root_of(b);
      int ev = 0;
      for (int j = 0; j < g.n; ++j) ev += rs.cartan[i][j] * rb[j];
      if (ev == 0) continue;
      set(g.hh(i), b, GVec{{b, Scalar(ev)}});
      set(b, g.hh(i), GVec{{b, Scalar(-ev)}});
    }
  for (int a = 0; a < 2 * g.P; ++a)
    for (int b = 0; b < 2 * g.P; ++b) {
      const GVec& t = g.bracket_basis(a, b);
      if (!t.empty() && !g.is_cartan(t.front().first)) {
        long v = t.front().second.re().get_num().get_si();
        if (v > 3 || v < -3) throw std::logic_error("structure constant exceeds 3");
      }
    }
  std::string w;
  if (!check_jacobi(g, &w)) throw std::logic_error("Jacobi identity fails: " + w);
  return g;
}

/// Exhaustive antisymmetry and Jacobi check over basis triples.
inline bool check_jacobi(const ChevalleyAlgebra& g, std::string* witness) {
  int D = g.dim();
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) {
      GVec s = g.bracket_basis(a, b);
      sv_axpy(s, Scalar(1), g.bracket_basis(b, a));
      if (!s.empty()) {
        if (witness) *witness = "antisymmetry " + g.label(a) + "," + g.label(b);
        return false;
      }
    }
  for (int a = 0; a < D; ++a)
    for (int b = a + 1; b < D; ++b)
      for (int c = b + 1; c < D; ++c) {
        GVec s = g.bracket(GVec{{a, Scalar(1)}}, g.bracket_basis(b, c));
        sv_axpy(s, Scalar(1), g.bracket(GVec{{b, Scalar(1)}}, g.bracket_basis(c, a)));
        sv_axpy(s, Scalar(1), g.bracket(GVec{{c, Scalar(1)}}, g.bracket_basis(a, b)));
        if (!s.empty()) {
          if (witness) *witness = g.label(a) + "," + g.label(b) + "," + g.label(c);
          return false;
        }
      }
  return true;
}

/// Lie algebra automorphism induced by a diagram automorphism, as a signed
/// permutation of the Chevalley basis.
struct LiftedAut {
  DiagramAut aut;
  std::vector<std::pair<int, Scalar>> images;  // basis index -> (target, coefficient)

  GVec apply(const GVec& x, int times = 1) const {
    GVec v = x;
    int k = ((times % aut.m) + aut.m) % aut.m;
    for (int t = 0; t < k; ++t) {
      GVec out;
      for (const auto& [i, c] : v) out.emplace_back(images[i].first, c * images[i].second);
      sv_clean(out);
      v = std::move(out);
    }
    return v;
  }

  DenseMat matrix() const {
    std::size_t D = images.size();
    DenseMat m = zero_matrix(D, D);
    for (std::size_t j = 0; j < D; ++j) m[images[j].first][j] = images[j].second;
    return m;
  }
};

inline IntVec permute_root(const DiagramAut& aut, const IntVec& beta) {
  IntVec r(beta.size(), 0);
  for (std::size_t j = 0; j < beta.size(); ++j) r[aut.perm[j]] = beta[j];
  return r;
}

inline LiftedAut lift_automorphism(const ChevalleyAlgebra& g, const DiagramAut& aut) {
  LiftedAut L;
  L.aut = aut;
  int D = g.dim();
  L.images.assign(static_cast<std::size_t>(D), {-1, Scalar(0)});
  for (int i = 0; i < g.n; ++i) L.images[g.hh(i)] = {g.hh(aut.perm[i]), Scalar(1)};
  const auto& roots = g.rs.positive_roots;
  for (int sign = 0; sign < 2; ++sign) {
    for (int b = 0; b < g.P; ++b) {
      const IntVec& xi = roots[b];
      int idx = sign == 0 ? g.xp(b) : g.xm(b);
      IntVec target = permute_root(aut, xi);
      int tb = g.rs.root_index(target);
      if (tb < 0) throw std::logic_error("diagram automorphism does not permute roots");
      int tidx = sign == 0 ? g.xp(tb) : g.xm(tb);
      if (height(xi) == 1) {
        L.images[idx] = {tidx, Scalar(1)};
        continue;
      }
      bool have = false;
      Scalar coef;
      for (int i = 0; i < g.n; ++i) {
        IntVec eta = xi;
        eta[i] -= 1;
        int e = g.rs.root_index(eta);
        if (e < 0) continue;
        // x_xi = [x_i, x_eta] / N_{i,eta}
        IntVec ai(static_cast<std::size_t>(g.n), 0);
        ai[i] = 1;
        IntVec sai = permute_root(aut, ai), seta = permute_root(aut, eta);
        if (sign == 1) {
          for (int& c : ai) c = -c;
          for (int& c : eta) c = -c;
          for (int& c : sai) c = -c;
          for (int& c : seta) c = -c;
        }
        int eidx = sign == 0 ? g.xp(e) : g.xm(e);
        const Scalar& ce = L.images[eidx].second;
        Scalar c = ce * Scalar(g.structure_constant(sai, seta)) / Scalar(g.structure_constant(ai, eta));
        if (!have) {
          coef = c;
          have = true;
        } else if (c != coef) {
          throw std::logic_error("automorphism lift is inconsistent at " + g.label(idx));
        }
      }
      L.images[idx] = {tidx, coef};
    }
  }
  return L;
}

/// sigma[x,y] = [sigma x, sigma y] on all basis pairs and sigma^m = id.
inline bool check_automorphism(const ChevalleyAlgebra& g, const LiftedAut& L, std::string* witness = nullptr) {
  int D = g.dim();
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) {
      GVec lhs = L.apply(g.bracket_basis(a, b));
      GVec rhs = g.bracket(L.apply(GVec{{a, Scalar(1)}}), L.apply(GVec{{b, Scalar(1)}}));
      if (lhs != rhs) {
        if (witness) *witness = "bracket " + g.label(a) + "," + g.label(b);
        return false;
      }
    }
  for (int a = 0; a < D; ++a) {
    GVec e{{a, Scalar(1)}};
    GVec v = e;
    for (int t = 0; t < L.aut.m; ++t) v = L.apply(v);
    if (v != e) {
      if (witness) *witness = "order on " + g.label(a);
      return false;
    }
  }
  return true;
}

/// g = sum of g_s, g_s the zeta^s eigenspace of sigma.  Basis vectors are
/// weight vectors for h_0.
struct GradedPieces {
  int m = 1;
  std::vector<std::vector<GVec>> basis;     // basis[s]
  std::vector<std::vector<IntVec>> weight;  // restricted root per vector (folded simple-root coords)

  int dim(int s) const { return static_cast<int>(basis[s].size()); }
};

inline GradedPieces graded_decomposition(const ChevalleyAlgebra& g, const LiftedAut& L) {
  int m = L.aut.m;
  NodeOrbits o = node_orbits(g.rs, L.aut);
  GradedPieces gp;
  gp.m = m;
  gp.basis.assign(static_cast<std::size_t>(m), {});
  gp.weight.assign(static_cast<std::size_t>(m), {});
  std::map<IntVec, std::vector<int>> groups;
  for (int a = 0; a < g.dim(); ++a) groups[restrict_root(o, g.root_of(a))].push_back(a);
  // deterministic: negative weights last
  std::vector<IntVec> keys;
  for (const auto& [k, v] : groups) keys.push_back(k);
  std::stable_sort(keys.begin(), keys.end(), [](const IntVec& x, const IntVec& y) {
    int hx = height(x), hy = height(y);
    if (hx != hy) return hx > hy;
    return x < y;
  });
  for (const auto& key : keys) {
    const auto& idx = groups[key];
    std::size_t k = idx.size();
    std::map<int, int> pos;
    for (std::size_t t = 0; t < k; ++t) pos[idx[t]] = static_cast<int>(t);
    DenseMat sig = zero_matrix(k, k);
    for (std::size_t t = 0; t < k; ++t) {
      auto [to, c] = L.images[idx[t]];
      sig[pos.at(to)][t] = c.with_order(m);
    }
    for (int s = 0; s < m; ++s) {
      DenseMat a = sig;
      Scalar z = zeta_power(m, s);
      for (std::size_t t = 0; t < k; ++t) a[t][t] -= z;
      for (auto& vec : nullspace(a, k)) {
        GVec v;
        for (std::size_t t = 0; t < k; ++t)
          if (!vec[t].is_zero()) v.emplace_back(idx[t], vec[t].with_order(m));
        sv_clean(v);
        gp.basis[s].push_back(v);
        gp.weight[s].push_back(key);
      }
    }
  }
  return gp;
}

inline bool in_piece(const LiftedAut& L, const GVec& v, int s) {
  GVec lhs = L.apply(v);
  return lhs == sv_scale(v, zeta_power(L.aut.m, s));
}

/// [g_s, g_s'] inside g_{s+s'} for all basis pairs.
inline bool check_grading(const ChevalleyAlgebra& g, const LiftedAut& L, const GradedPieces& gp) {
  int m = gp.m;
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t)
      for (const auto& x : gp.basis[s])
        for (const auto& y : gp.basis[t]) {
          GVec b = g.bracket(x, y);
          if (!b.empty() && !in_piece(L, b, (s + t) % m)) return false;
        }
  return true;
}

/// The averaged elements attached to a root of g_0.
struct TwistedRoot {
  IntVec root0;      // folded simple-root coordinates (positive)
  int preimage = -1;  // index of a positive root of g
  int stab = 1;       // |Gamma_beta|
  std::vector<GVec> h, xp, xm;  // indexed by k = 0..m-1
  Scalar eig;        // alpha(h_alpha(0)) as eigenvalue on x+(0)
  Scalar kappa;      // 2 / eig: factor making (x+, kappa x-, kappa h) a standard sl2 triple
  bool short_root = false;
  bool has_double = false;      // A_2n short root: x_{2 alpha}(1)
  GVec x2p, x2m;                // spans of x_{2alpha}^{+/-}(1)
  GVec e2, f2, h2;              // standard sl2 triple for 2 alpha
};

struct TwistedGenerators {
  int m = 1;
  std::vector<TwistedRoot> roots;  // R_0^+ in the order of the folded root system
  std::vector<int> simple;         // position in roots of each simple root of g_0
  IntMat folded_cartan;            // computed from the brackets of the generators
  std::vector<std::string> discrepancies;
};

inline Scalar eigen_ratio(const GVec& image, const GVec& v) {
  if (v.empty()) throw std::logic_error("eigenvector is zero");
  Scalar c = sv_get(image, v.front().first) / v.front().second;
  if (image != sv_scale(v, c)) throw std::logic_error("not an eigenvector");
  return c;
}

/// Averaged generators h_alpha(k), x_alpha^{+/-}(k) for alpha in R_0^+, weighted by
/// zeta^{-kj} so that they lie in g_k.
/// X_{sigma^j(beta)} is read as sigma^j(X_beta); the literal reading with the raw
/// Chevalley vector is checked and any failure is listed in discrepancies.
inline TwistedGenerators twisted_generators(const ChevalleyAlgebra& g, const LiftedAut& L,
                                            const RootSystem& rs0, bool type_a_even) {
  TwistedGenerators tg;
  int m = L.aut.m;
  tg.m = m;
  NodeOrbits o = node_orbits(g.rs, L.aut);
  Scalar z = Scalar::zeta(m);
  for (const auto& a0 : rs0.positive_roots) {
    TwistedRoot tr;
    tr.root0 = a0;
    // simple roots of g_0 are lifted from the orbit representative's simple root
    std::vector<int> cand;
    for (int b = 0; b < g.P; ++b) cand.push_back(b);
    for (std::size_t i = 0; i < a0.size(); ++i) {
      IntVec unit(a0.size(), 0);
      unit[i] = 1;
      if (a0 != unit) continue;
      IntVec e(static_cast<std::size_t>(g.n), 0);
      e[o.reps[i]] = 1;
      int r = g.rs.root_index(e);
      cand.erase(std::find(cand.begin(), cand.end(), r));
      cand.insert(cand.begin(), r);
    }
    for (int b : cand) {
      if (tr.preimage >= 0) break;
      if (restrict_root(o, g.rs.positive_roots[b]) != a0) continue;
      IntVec beta = g.rs.positive_roots[b];
      int orb = 0;
      IntVec cur = beta;
      do {
        ++orb;
        cur = permute_root(L.aut, cur);
      } while (cur != beta);
      int stab = m / orb;
      GVec x0;
      for (int j = 0; j < m; ++j) sv_axpy(x0, Scalar(1), L.apply(GVec{{g.xp(b), Scalar(1)}}, j));
      if (x0.empty()) continue;
      tr.preimage = b;
      tr.stab = stab;
    }
    if (tr.preimage < 0) throw std::logic_error("no preimage with nonzero average for a root of g_0");
    int b = tr.preimage;
    Scalar inv = Scalar(1) / Scalar(tr.stab);
    for (int k = 0; k < m; ++k) {
      GVec h, xp, xm, lit;
      IntVec cur = g.rs.positive_roots[b];
      for (int j = 0; j < m; ++j) {
        Scalar c = zeta_power(m, -static_cast<long>(k) * j) * inv;
        auto cc = g.rs.coroot_coeffs(cur);
        for (int i = 0; i < g.n; ++i)
          if (cc[i] != 0) h.emplace_back(g.hh(i), c * Scalar(cc[i]));
        sv_axpy(xp, c, L.apply(GVec{{g.xp(b), Scalar(1)}}, j));
        sv_axpy(xm, c, L.apply(GVec{{g.xm(b), Scalar(1)}}, j));
        lit.emplace_back(g.xp(g.rs.root_index(cur)), c);
        cur = permute_root(L.aut, cur);
      }
      sv_clean(h);
      sv_clean(lit);
      if (!lit.empty() && !in_piece(L, lit, k)) {
        tg.discrepancies.push_back("raw-vector average for root " + g.label(g.xp(b)) + " with k=" +
                                   std::to_string(k) + " is not in g_" + std::to_string(k));
      }
      if (!in_piece(L, xp, k) || !in_piece(L, xm, k) || !in_piece(L, h, k))
        throw std::logic_error("averaged element outside its graded piece");
      tr.h.push_back(h);
      tr.xp.push_back(xp);
      tr.xm.push_back(xm);
    }
    if (tr.stab == m) {
      for (int k = 1; k < m; ++k)
        if (tr.h[k] != tr.h[0])
          tg.discrepancies.push_back("h(0) != h(" + std::to_string(k) + ") for the fixed root " +
                                     g.label(g.xp(b)) + (tr.h[k].empty() ? " (h(k) = 0)" : ""));
    }
    GVec br = g.bracket(tr.xp[0], tr.xm[0]);
    if (br != tr.h[0])
      tg.discrepancies.push_back("[x+(0), x-(0)] != h(0) for " + g.label(g.xp(b)));
    tr.eig = eigen_ratio(g.bracket(tr.h[0], tr.xp[0]), tr.xp[0]);
    if (tr.eig.is_zero()) throw std::logic_error("h(0) acts trivially on x+(0)");
    tr.kappa = Scalar(2) / tr.eig;
    if (tr.eig != Scalar(2))
      tg.discrepancies.push_back("h(0) has eigenvalue " + tr.eig.str() + " on x+(0) for " + g.label(g.xp(b)) +
                                 " (standard sl2 triple needs 2)");
    if (type_a_even && m == 2) {
      GVec sx = L.apply(GVec{{g.xp(b), Scalar(1)}});
      GVec sy = L.apply(GVec{{g.xm(b), Scalar(1)}});
      GVec e = g.bracket(GVec{{g.xp(b), Scalar(1)}}, sx);
      GVec f = g.bracket(GVec{{g.xm(b), Scalar(1)}}, sy);
      if (!e.empty()) {
        tr.has_double = true;
        tr.x2p = e;
        tr.x2m = f;
        GVec hh = g.bracket(e, f);
        Scalar mu = eigen_ratio(g.bracket(hh, e), e);
        tr.e2 = e;
        tr.f2 = sv_scale(f, Scalar(2) / mu);
        tr.h2 = sv_scale(hh, Scalar(2) / mu);
      }
    }
    tg.roots.push_back(std::move(tr));
  }
  for (int i = 0; i < rs0.rank; ++i) {
    IntVec e(static_cast<std::size_t>(rs0.rank), 0);
    e[i] = 1;
    tg.simple.push_back(rs0.root_index(e));
  }
  int n0 = rs0.rank;
  tg.folded_cartan.assign(static_cast<std::size_t>(n0), IntVec(static_cast<std::size_t>(n0), 0));
  for (int i = 0; i < n0; ++i) {
    const auto& ri = tg.roots[tg.simple[i]];
    for (int j = 0; j < n0; ++j) {
      const auto& rj = tg.roots[tg.simple[j]];
      Scalar c = eigen_ratio(g.bracket(ri.h[0], rj.xp[0]), rj.xp[0]) * ri.kappa;
      if (!c.is_rational() || c.re().get_den() != 1) throw std::logic_error("non-integral folded Cartan entry");
      tg.folded_cartan[i][j] = static_cast<int>(c.re().get_num().get_si());
    }
  }
  return tg;
}

}  // namespace twloop

#endif
