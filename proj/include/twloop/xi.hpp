#ifndef TWLOOP_XI_HPP
#define TWLOOP_XI_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "twloop/fold.hpp"
#include "twloop/rootdata.hpp"
#include "twloop/scalar.hpp"

namespace twloop {

struct ScalarLess {
  bool operator()(const Scalar& a, const Scalar& b) const { return lex_less(a, b); }
};

/// Finitely supported map from points of Q(z_m)* to dominant weights.
struct XiFunction {
  int m = 1;
  std::map<Scalar, Weight, ScalarLess> entries;

  XiFunction() = default;
  explicit XiFunction(int order) : m(order) {}

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }

  Weight at(const Scalar& a, int rank) const {
    auto it = entries.find(a.with_order(m));
    return it == entries.end() ? Weight(static_cast<std::size_t>(rank), 0) : it->second;
  }

  /// Adds mu at a; zero values are dropped so that keys = support.
  void add(const Scalar& a, const Weight& mu) {
    if (a.is_zero()) throw std::domain_error("0 is not a point of C*");
    if (!is_dominant(mu)) throw std::invalid_argument("value is not dominant");
    Scalar p = a.with_order(m);
    auto it = entries.find(p);
    Weight v = it == entries.end() ? mu : weight_add(it->second, mu);
    if (std::all_of(v.begin(), v.end(), [](int c) { return c == 0; })) {
      if (it != entries.end()) entries.erase(it);
      return;
    }
    entries[p] = v;
  }

  friend bool operator==(const XiFunction& x, const XiFunction& y) {
    return x.m == y.m && x.entries == y.entries;
  }
  friend XiFunction operator+(XiFunction x, const XiFunction& y) {
    for (const auto& [a, mu] : y.entries) x.add(a, mu);
    return x;
  }
};

inline Weight xi_weight(const XiFunction& xi, int rank) {
  Weight w(static_cast<std::size_t>(rank), 0);
  for (const auto& [a, mu] : xi.entries) w = weight_add(w, mu);
  return w;
}

/// sigma^times on weights, sigma(omega_i) = omega_{sigma(i)}.
inline Weight act_weight(const DiagramAut& aut, const Weight& mu, int times = 1) {
  Weight r(mu.size(), 0);
  for (std::size_t i = 0; i < mu.size(); ++i) r[aut.apply(static_cast<int>(i), times)] = mu[i];
  return r;
}

/// xi(z a) = sigma^{-1}(xi(a)) for all a.  With g_s the z^s-eigenspace and
/// L^Gamma = sum g_s (x) t^{-s}, this is the direction under which evaluation at
/// a and at z a restrict to isomorphic L^Gamma(g)-modules.  For m = 2 both
/// directions coincide.
inline bool is_equivariant(const XiFunction& xi, const DiagramAut& aut) {
  if (xi.m != aut.m && !xi.empty()) return false;
  Scalar z = Scalar::zeta(aut.m);
  int rank = static_cast<int>(aut.perm.size());
  for (const auto& [a, mu] : xi.entries) {
    if (xi.at(a * z, rank) != act_weight(aut, mu, -1)) return false;
  }
  return true;
}

inline bool is_admissible(const XiFunction& xi, int m) {
  std::vector<std::vector<Scalar>> orbits;
  for (const auto& [a, mu] : xi.entries) {
    for (const auto& o : orbits)
      if (std::find(o.begin(), o.end(), a.with_order(m)) != o.end()) return false;
    orbits.push_back(orbit_of_point(m, a));
  }
  return true;
}

/// Sigma(xi)(b) = sum_j sigma^j(xi(z^j b)).
inline XiFunction symmetrize(const XiFunction& xi, const DiagramAut& aut) {
  XiFunction out(aut.m);
  Scalar zi = Scalar::zeta(aut.m).inverse();
  for (const auto& [a, mu] : xi.entries) {
    Scalar b = a.with_order(aut.m);
    for (int j = 0; j < aut.m; ++j) {
      // b = z^{-j} a contributes sigma^j(mu)
      out.add(b, act_weight(aut, mu, j));
      b = b * zi;
    }
  }
  return out;
}

inline Scalar orbit_min(int m, const Scalar& a) {
  auto o = orbit_of_point(m, a);
  return *std::min_element(o.begin(), o.end(), [](const Scalar& x, const Scalar& y) { return lex_less(x, y); });
}

/// One support point per Gamma-orbit, the lexicographically smallest.
inline std::vector<Scalar> x_adm(const XiFunction& chi) {
  std::vector<Scalar> reps;
  for (const auto& [a, mu] : chi.entries) {
    Scalar r = orbit_min(chi.m, a);
    if (std::find(reps.begin(), reps.end(), r) == reps.end()) reps.push_back(r);
  }
  std::sort(reps.begin(), reps.end(), ScalarLess{});
  return reps;
}

inline XiFunction restrict_to(const XiFunction& chi, const std::vector<Scalar>& pts) {
  XiFunction xi(chi.m);
  int rank = chi.empty() ? 0 : static_cast<int>(chi.entries.begin()->second.size());
  for (const auto& a : pts) {
    Weight v = chi.at(a, rank);
    if (std::any_of(v.begin(), v.end(), [](int c) { return c != 0; })) xi.add(a, v);
  }
  return xi;
}

inline XiFunction chi_admissible(const XiFunction& chi, const DiagramAut& aut) {
  if (!is_equivariant(chi, aut)) throw std::invalid_argument("function is not equivariant");
  XiFunction xi = restrict_to(chi, x_adm(chi));
  if (!(symmetrize(xi, aut) == chi)) throw std::logic_error("symmetrizer does not recover the input");
  return xi;
}

/// Every choice of one support point per orbit (m^{#orbits} choices).
inline std::vector<XiFunction> all_chi_admissible(const XiFunction& chi, const DiagramAut& aut) {
  if (!is_equivariant(chi, aut)) throw std::invalid_argument("function is not equivariant");
  std::vector<std::vector<Scalar>> orbits;
  for (const auto& r : x_adm(chi)) orbits.push_back(orbit_of_point(chi.m, r));
  std::vector<XiFunction> out;
  std::vector<std::size_t> pick(orbits.size(), 0);
  while (true) {
    std::vector<Scalar> pts;
    for (std::size_t k = 0; k < orbits.size(); ++k) pts.push_back(orbits[k][pick[k]]);
    out.push_back(restrict_to(chi, pts));
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == orbits[k].size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return out;
}

/// wt_0 in restricted coordinates (omega-bar_i = restriction of omega_rep).
inline Weight wt0(const XiFunction& chi, const DiagramAut& aut, const FoldedRootData& fd) {
  XiFunction xi = chi_admissible(chi, aut);
  return restrict_weight(fd, xi_weight(xi, static_cast<int>(aut.perm.size())));
}

/// Per node of I_0: multiset of Gamma_i-orbits, keyed by a^{|Gamma_i|}.
struct OrbitMultiset {
  struct Entry {
    int count = 0;
    Scalar rep;  // lexicographically smallest point of the Gamma_i-orbit
  };
  int m = 1;
  std::vector<std::map<Scalar, Entry, ScalarLess>> f;  // f[i] for i in I_0

  friend bool operator==(const OrbitMultiset& x, const OrbitMultiset& y) {
    if (x.m != y.m || x.f.size() != y.f.size()) return false;
    for (std::size_t i = 0; i < x.f.size(); ++i) {
      if (x.f[i].size() != y.f[i].size()) return false;
      for (const auto& [k, e] : x.f[i]) {
        auto it = y.f[i].find(k);
        if (it == y.f[i].end() || it->second.count != e.count || it->second.rep != e.rep) return false;
      }
    }
    return true;
  }

  void add(int i, const Scalar& a, int stab, int count) {
    if (count == 0) return;
    Scalar key = a.with_order(m).pow(stab);
    Scalar rep = stab == 1 ? a.with_order(m) : orbit_min(m, a);
    auto& e = f[i][key];
    e.count += count;
    e.rep = rep;
  }

  Weight weight() const {
    Weight w(f.size(), 0);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (const auto& [k, e] : f[i]) w[i] += e.count;
    return w;
  }

  friend OrbitMultiset operator+(OrbitMultiset x, const OrbitMultiset& y) {
    for (std::size_t i = 0; i < y.f.size(); ++i)
      for (const auto& [k, e] : y.f[i]) {
        auto& t = x.f[i][k];
        t.count += e.count;
        t.rep = e.rep;
      }
    return x;
  }
};

inline OrbitMultiset empty_multiset(const FoldedRootData& fd) {
  OrbitMultiset o;
  o.m = fd.m;
  o.f.assign(fd.nodes.reps.size(), {});
  return o;
}

/// alpha(xi)_i = pi_i(f_i) / |Gamma_i| with f_i(a) = xi(a)_i.
inline OrbitMultiset alpha_iso(const XiFunction& xi, const DiagramAut& aut, const FoldedRootData& fd) {
  if (!is_equivariant(xi, aut)) throw std::invalid_argument("function is not equivariant");
  OrbitMultiset out = empty_multiset(fd);
  for (std::size_t i = 0; i < fd.nodes.reps.size(); ++i) {
    int node = fd.nodes.reps[i];
    int stab = fd.nodes.stab[i];
    // pi_i(f_i)(orbit) = |Gamma_i| f_i(a); dividing gives f_i(a) once per Gamma_i-orbit
    std::map<Scalar, bool, ScalarLess> seen;
    for (const auto& [a, mu] : xi.entries) {
      if (mu[node] == 0) continue;
      Scalar key = a.pow(stab);
      if (seen[key]) continue;
      seen[key] = true;
      out.add(static_cast<int>(i), a, stab, mu[node]);
    }
  }
  return out;
}

inline XiFunction alpha_inv(const OrbitMultiset& fh, const DiagramAut& aut, const FoldedRootData& fd) {
  XiFunction xi(fd.m);
  int rank = static_cast<int>(aut.perm.size());
  Scalar z = Scalar::zeta(fd.m);
  for (std::size_t i = 0; i < fh.f.size(); ++i) {
    int node = fd.nodes.reps[i];
    int stab = fd.nodes.stab[i];
    for (const auto& [key, e] : fh.f[i]) {
      Weight w(static_cast<std::size_t>(rank), 0);
      if (stab == 1) {
        // extend by equivariance: xi(z^j a) = sigma^{-j}(xi(a))
        Scalar b = e.rep;
        for (int j = 0; j < fd.m; ++j) {
          Weight v(static_cast<std::size_t>(rank), 0);
          v[aut.apply(node, -j)] = e.count;
          xi.add(b, v);
          b = b * z;
        }
      } else {
        w[node] = e.count;
        for (const auto& b : orbit_of_point(fd.m, e.rep)) xi.add(b, w);
      }
    }
  }
  return xi;
}

/// pi_i(f_i) = pi_i(f_{gamma(i)}) read with pi_i the Gamma_i-orbit projection.
inline bool pi_prop1_literal(const XiFunction& xi, const DiagramAut& aut, const FoldedRootData& fd) {
  for (std::size_t i = 0; i < fd.nodes.reps.size(); ++i) {
    int node = fd.nodes.reps[i];
    int stab = fd.nodes.stab[i];
    for (int g = 0; g < aut.m; ++g) {
      int other = aut.apply(node, g);
      std::map<Scalar, int, ScalarLess> p1, p2;
      for (const auto& [a, mu] : xi.entries) {
        Scalar key = a.pow(stab);
        if (mu[node]) p1[key] += mu[node];
        if (mu[other]) p2[key] += mu[other];
      }
      if (p1 != p2) return false;
    }
  }
  return true;
}

/// The same statement with the projection onto full Gamma-orbits.
inline bool pi_prop1_full_orbit(const XiFunction& xi, const DiagramAut& aut, const FoldedRootData& fd) {
  for (std::size_t i = 0; i < fd.nodes.reps.size(); ++i) {
    int node = fd.nodes.reps[i];
    for (int g = 0; g < aut.m; ++g) {
      int other = aut.apply(node, g);
      std::map<Scalar, int, ScalarLess> p1, p2;
      for (const auto& [a, mu] : xi.entries) {
        Scalar key = a.pow(aut.m);
        if (mu[node]) p1[key] += mu[node];
        if (mu[other]) p2[key] += mu[other];
      }
      if (p1 != p2) return false;
    }
  }
  return true;
}

// ---- JSON: {"point": [coords], ...}

inline nlohmann::json xi_to_json(const XiFunction& xi) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [a, mu] : xi.entries) j[a.str()] = mu;
  return j;
}

inline XiFunction xi_from_json(const nlohmann::json& j, int m, int rank) {
  if (!j.is_object()) throw std::invalid_argument("function must be a JSON object");
  XiFunction xi(m);
  for (const auto& [k, v] : j.items()) {
    if (!v.is_array() || static_cast<int>(v.size()) != rank)
      throw std::invalid_argument("weight for point " + k + " must have " + std::to_string(rank) + " entries");
    Weight w;
    for (const auto& c : v) {
      if (!c.is_number_integer()) throw std::invalid_argument("weight entries must be integers");
      w.push_back(c.get<int>());
    }
    xi.add(parse_scalar(k, m), w);
  }
  return xi;
}

inline nlohmann::json multiset_to_json(const OrbitMultiset& o) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& fi : o.f) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [k, e] : fi) a.push_back({{"key", k.str()}, {"rep", e.rep.str()}, {"count", e.count}});
    j.push_back(a);
  }
  return j;
}

inline OrbitMultiset multiset_from_json(const nlohmann::json& j, const FoldedRootData& fd) {
  OrbitMultiset o = empty_multiset(fd);
  if (!j.is_array() || j.size() != o.f.size()) throw std::invalid_argument("one list per folded node expected");
  for (std::size_t i = 0; i < j.size(); ++i)
    for (const auto& e : j[i]) o.add(static_cast<int>(i), parse_scalar(e.at("rep").get<std::string>(), fd.m),
                                     fd.nodes.stab[i], e.at("count").get<int>());
  return o;
}

}  // namespace twloop

#endif
