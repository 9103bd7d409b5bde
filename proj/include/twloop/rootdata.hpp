#ifndef TWLOOP_ROOTDATA_HPP
#define TWLOOP_ROOTDATA_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "twloop/scalar.hpp"

namespace twloop {

using IntVec = std::vector<int>;
using IntMat = std::vector<IntVec>;

/// Coordinates in the fundamental weight basis.
using Weight = IntVec;

inline bool is_dominant(const Weight& w) {
  return std::all_of(w.begin(), w.end(), [](int c) { return c >= 0; });
}

inline Weight weight_add(Weight a, const Weight& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline int height(const IntVec& v) { return std::accumulate(v.begin(), v.end(), 0); }

/// Finite root system.  Cartan convention: cartan[i][j] = alpha_j(H_i).
struct RootSystem {
  char type = 'A';
  int rank = 0;
  IntMat cartan;
  IntMat positive_roots;  // simple-root coordinates, ordered by height then lexicographically
  int theta = -1;
  std::vector<Rational> sym;  // sym[i] = (alpha_i, alpha_i) / 2, long roots of a simply-laced type have 1

  int num_positive() const { return static_cast<int>(positive_roots.size()); }

  int root_index(const IntVec& r) const {
    auto it = std::find(positive_roots.begin(), positive_roots.end(), r);
    return it == positive_roots.end() ? -1 : static_cast<int>(it - positive_roots.begin());
  }
  bool is_root(const IntVec& r) const {
    if (std::all_of(r.begin(), r.end(), [](int c) { return c >= 0; })) return root_index(r) >= 0;
    if (std::all_of(r.begin(), r.end(), [](int c) { return c <= 0; })) {
      IntVec n(r);
      for (int& c : n) c = -c;
      return root_index(n) >= 0;
    }
    return false;
  }

  /// Fundamental-weight coordinates of a root lattice element.
  Weight root_to_weight(const IntVec& k) const {
    Weight w(static_cast<std::size_t>(rank), 0);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) w[i] += cartan[i][j] * k[j];
    return w;
  }

  Rational inner(const IntVec& x, const IntVec& y) const {
    Rational s = 0;
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j)
        if (x[i] != 0 && y[j] != 0) s += sym[i] * cartan[i][j] * x[i] * y[j];
    return s;
  }

  /// <mu, beta^vee> for a weight mu and a root beta (simple-root coordinates).
  Rational coroot_pairing(const Weight& mu, const IntVec& beta) const {
    Rational bb = inner(beta, beta);
    Rational s = 0;
    for (int j = 0; j < rank; ++j) s += Rational(beta[j]) * 2 * sym[j] * mu[j];
    return s / bb;
  }

  /// Coefficients of H_beta in the basis H_1..H_n.
  std::vector<Rational> coroot_coeffs(const IntVec& beta) const {
    Rational bb = inner(beta, beta);
    std::vector<Rational> c(static_cast<std::size_t>(rank));
    for (int j = 0; j < rank; ++j) c[j] = Rational(beta[j]) * 2 * sym[j] / bb;
    return c;
  }
};

inline std::vector<Rational> symmetrizer(const IntMat& a) {
  int n = static_cast<int>(a.size());
  std::vector<Rational> d(static_cast<std::size_t>(n), Rational(0));
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    d[s] = 1;
    seen[s] = true;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (i == j || a[i][j] == 0 || seen[j]) continue;
        d[j] = d[i] * a[i][j] / a[j][i];
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  // scale so that the longest simple root in each component has d = 1
  Rational mx = *std::max_element(d.begin(), d.end());
  for (auto& x : d) x /= mx;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (d[i] * a[i][j] != d[j] * a[j][i]) throw std::invalid_argument("Cartan matrix not symmetrizable");
  return d;
}

inline void validate_cartan(const IntMat& a) {
  int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(a[i].size()) != n) throw std::invalid_argument("Cartan matrix not square");
    if (a[i][i] != 2) throw std::invalid_argument("Cartan diagonal must be 2");
    for (int j = 0; j < n; ++j) {
      if (i != j && a[i][j] > 0) throw std::invalid_argument("Cartan off-diagonal must be <= 0");
      if ((a[i][j] == 0) != (a[j][i] == 0)) throw std::invalid_argument("Cartan zero pattern asymmetric");
    }
  }
}

inline IntMat positive_roots_from_cartan(const IntMat& a) {
  int n = static_cast<int>(a.size());
  std::vector<IntVec> roots;
  std::set<IntVec> have;
  for (int i = 0; i < n; ++i) {
    IntVec e(static_cast<std::size_t>(n), 0);
    e[i] = 1;
    roots.push_back(e);
    have.insert(e);
  }
  for (std::size_t idx = 0; idx < roots.size(); ++idx) {
    IntVec beta = roots[idx];
    for (int i = 0; i < n; ++i) {
      int p = 0;
      IntVec down = beta;
      while (true) {
        down[i] -= 1;
        if (!have.count(down)) break;
        ++p;
      }
      int pair = 0;
      for (int j = 0; j < n; ++j) pair += a[i][j] * beta[j];
      int q = p - pair;
      if (q > 0) {
        IntVec up = beta;
        up[i] += 1;
        if (!have.count(up)) {
          have.insert(up);
          roots.push_back(up);
        }
      }
      if (roots.size() > 200) throw std::invalid_argument("Cartan matrix is not of finite type");
    }
  }
  std::sort(roots.begin(), roots.end(), [](const IntVec& x, const IntVec& y) {
    int hx = height(x), hy = height(y);
    if (hx != hy) return hx < hy;
    return x < y;
  });
  return roots;
}

inline RootSystem root_system_from_cartan(const IntMat& a, char type = '?') {
  validate_cartan(a);
  RootSystem rs;
  rs.type = type;
  rs.rank = static_cast<int>(a.size());
  rs.cartan = a;
  rs.sym = symmetrizer(a);
  rs.positive_roots = positive_roots_from_cartan(a);
  // a finite-type form is positive definite: check on all positive roots
  for (const auto& r : rs.positive_roots)
    if (rs.inner(r, r) <= 0) throw std::invalid_argument("Cartan matrix is not of finite type");
  int best = 0;
  for (int i = 1; i < rs.num_positive(); ++i)
    if (height(rs.positive_roots[i]) > height(rs.positive_roots[best])) best = i;
  rs.theta = best;
  for (int i = 0; i < rs.num_positive(); ++i) {
    if (i == best) continue;
    IntVec diff = rs.positive_roots[best];
    for (int j = 0; j < rs.rank; ++j) diff[j] -= rs.positive_roots[i][j];
    if (std::any_of(diff.begin(), diff.end(), [](int c) { return c < 0; }))
      throw std::logic_error("highest root is not maximal");
  }
  return rs;
}

inline IntMat cartan_matrix(char type, int n) {
  auto bad = [&] {
    return std::invalid_argument(std::string("invalid type/rank ") + type + std::to_string(n));
  };
  if (n < 1) throw bad();
  IntMat a(static_cast<std::size_t>(n), IntVec(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) a[i][i] = 2;
  auto link = [&](int i, int j) { a[i][j] = a[j][i] = -1; };
  switch (type) {
    case 'A':
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'B':
      if (n < 2) throw bad();
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      a[n - 1][n - 2] = -2;
      break;
    case 'C':
      if (n < 2) throw bad();
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      a[n - 2][n - 1] = -2;
      break;
    case 'D':
      if (n < 4) throw bad();
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      link(n - 3, n - 1);
      break;
    case 'E':
      if (n < 6 || n > 8) throw bad();
      link(0, 2);
      link(1, 3);
      link(2, 3);
      for (int i = 3; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'F':
      if (n != 4) throw bad();
      link(0, 1);
      link(2, 3);
      a[1][2] = -1;
      a[2][1] = -2;
      break;
    case 'G':
      if (n != 2) throw bad();
      a[0][1] = -3;
      a[1][0] = -1;
      break;
    default:
      throw bad();
  }
  return a;
}

inline RootSystem build_root_system(char type, int rank) {
  return root_system_from_cartan(cartan_matrix(type, rank), type);
}

/// Names the type of a Cartan matrix, e.g. "C2"; relabels nodes if needed.
inline std::string identify_type(const IntMat& a) {
  int n = static_cast<int>(a.size());
  const std::string types = "ABCDEFG";
  for (char t : types) {
    try {
      if (cartan_matrix(t, n) == a) return std::string(1, t) + std::to_string(n);
    } catch (const std::invalid_argument&) {
    }
  }
  for (char t : types) {
    IntMat ref;
    try {
      ref = cartan_matrix(t, n);
    } catch (const std::invalid_argument&) {
      continue;
    }
    IntVec p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    if (n > 8) continue;
    do {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        for (int j = 0; j < n && ok; ++j) ok = a[p[i]][p[j]] == ref[i][j];
      if (ok) return std::string(1, t) + std::to_string(n);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return "unknown";
}

/// Permutation of the nodes (0-based) preserving the Cartan matrix.
struct DiagramAut {
  IntVec perm;
  int m = 1;

  int apply(int i, int times = 1) const {
    int k = ((times % m) + m) % m;
    for (int t = 0; t < k; ++t) i = perm[i];
    return i;
  }
};

inline DiagramAut make_diagram_aut(const RootSystem& rs, const IntVec& perm) {
  int n = rs.rank;
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation has wrong length");
  std::vector<bool> hit(static_cast<std::size_t>(n), false);
  for (int p : perm) {
    if (p < 0 || p >= n || hit[p]) throw std::invalid_argument("not a permutation");
    hit[p] = true;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (rs.cartan[perm[i]][perm[j]] != rs.cartan[i][j])
        throw std::invalid_argument("permutation does not preserve the Cartan matrix");
  DiagramAut d{perm, 1};
  IntVec cur = perm;
  IntVec id(static_cast<std::size_t>(n));
  std::iota(id.begin(), id.end(), 0);
  while (cur != id) {
    IntVec nxt(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) nxt[i] = perm[cur[i]];
    cur = nxt;
    ++d.m;
    if (d.m > 3) throw std::invalid_argument("diagram automorphism of order > 3");
  }
  return d;
}

/// Parses "2,1" style 1-based permutations.
inline IntVec parse_perm(const std::string& s) {
  IntVec out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw std::invalid_argument("bad permutation: " + s);
    for (char c : cur)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad permutation: " + s);
    out.push_back(std::stoi(cur) - 1);
    cur.clear();
  };
  for (char c : s) {
    if (c == ',') flush();
    else if (!std::isspace(static_cast<unsigned char>(c))) cur += c;
  }
  flush();
  return out;
}

/// Node orbits of a diagram automorphism; representative = smallest index.
struct NodeOrbits {
  std::vector<IntVec> orbits;  // each sorted, ordered by representative
  IntVec reps;                 // I_0 as node indices of g
  IntVec rep_of;               // node -> position of its orbit in reps
  IntVec stab;                 // |Gamma_i| per representative
};

inline NodeOrbits node_orbits(const RootSystem& rs, const DiagramAut& aut) {
  NodeOrbits o;
  o.rep_of.assign(static_cast<std::size_t>(rs.rank), -1);
  for (int i = 0; i < rs.rank; ++i) {
    if (o.rep_of[i] >= 0) continue;
    IntVec orb;
    int j = i;
    do {
      orb.push_back(j);
      j = aut.perm[j];
    } while (j != i);
    std::sort(orb.begin(), orb.end());
    int pos = static_cast<int>(o.reps.size());
    for (int k : orb) o.rep_of[k] = pos;
    o.reps.push_back(orb.front());
    o.stab.push_back(aut.m / static_cast<int>(orb.size()));
    o.orbits.push_back(orb);
  }
  return o;
}

/// Folded Cartan matrix from node combinatorics alone: with h_i = sum of H_k
/// over the orbit and x_j = sum of X_l, alpha_l(h_i) is constant on the orbit.
inline IntMat folded_cartan_combinatorial(const RootSystem& rs, const NodeOrbits& o) {
  int n0 = static_cast<int>(o.reps.size());
  IntMat raw(static_cast<std::size_t>(n0), IntVec(static_cast<std::size_t>(n0), 0));
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j)
      for (int k : o.orbits[i]) raw[i][j] += rs.cartan[k][o.reps[j]];
  IntMat a(static_cast<std::size_t>(n0), IntVec(static_cast<std::size_t>(n0), 0));
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j) a[i][j] = 2 * raw[i][j] / raw[i][i];
  return a;
}

/// lambda restricted to h_0: coordinate i is lambda(h_i(0)) = orbit sum.
inline Weight restrict_weight_orbits(const NodeOrbits& o, const Weight& lambda) {
  Weight r(o.reps.size(), 0);
  for (std::size_t k = 0; k < lambda.size(); ++k) r[o.rep_of[k]] += lambda[k];
  return r;
}

/// Restriction of a root (simple-root coordinates of g) to h_0, in folded simple roots.
inline IntVec restrict_root(const NodeOrbits& o, const IntVec& beta) {
  IntVec r(o.reps.size(), 0);
  for (std::size_t k = 0; k < beta.size(); ++k) r[o.rep_of[k]] += beta[k];
  return r;
}

/// {z^j a : 0 <= j < m} without repetitions, in the order j = 0, 1, ...
inline std::vector<Scalar> orbit_of_point(int m, const Scalar& a) {
  if (a.is_zero()) throw std::domain_error("0 is not a point of C*");
  std::vector<Scalar> out;
  Scalar p = a.with_order(m);
  for (int j = 0; j < m; ++j) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    p *= Scalar::zeta(m);
  }
  return out;
}

/// Depth vectors d (simple-root coordinates) with lambda - d a weight of V(lambda).
inline std::set<IntVec> weight_depths(const RootSystem& rs, const Weight& lambda) {
  std::set<IntVec> out;
  std::vector<IntVec> todo;
  IntVec zero(static_cast<std::size_t>(rs.rank), 0);
  out.insert(zero);
  todo.push_back(zero);
  while (!todo.empty()) {
    IntVec d = todo.back();
    todo.pop_back();
    Weight mu = lambda;
    Weight dw = rs.root_to_weight(d);
    for (int i = 0; i < rs.rank; ++i) mu[i] -= dw[i];
    for (const auto& beta : rs.positive_roots) {
      Rational c = rs.coroot_pairing(mu, beta);
      for (long k = 1; k <= c; ++k) {
        IntVec nd = d;
        for (int i = 0; i < rs.rank; ++i) nd[i] += static_cast<int>(k) * beta[i];
        if (out.insert(nd).second) todo.push_back(nd);
      }
    }
  }
  return out;
}

}  // namespace twloop

#endif
