#ifndef TWLOOP_HWALG_HPP
#define TWLOOP_HWALG_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "twloop/fold.hpp"
#include "twloop/linalg.hpp"
#include "twloop/looplie.hpp"
#include "twloop/xi.hpp"

namespace twloop {

using ExpVec = std::vector<long>;

/// All distinct permutations of e.
inline std::vector<ExpVec> distinct_perms(ExpVec e) {
  std::sort(e.begin(), e.end());
  std::vector<ExpVec> out;
  do {
    out.push_back(e);
  } while (std::next_permutation(e.begin(), e.end()));
  return out;
}

/// Element of a tensor product of symmetric Laurent polynomial rings, one factor
/// per node with sizes[i] variables, in the basis of monomial symmetric functions
/// m_e (e sorted ascending).  Exponents are exponents of t.
struct SymLaurent {
  std::vector<int> sizes;
  std::vector<int> step;  // exponents in factor i are multiples of step[i]
  std::map<std::vector<ExpVec>, Scalar> terms;

  static SymLaurent one(std::vector<int> sizes, std::vector<int> step) {
    SymLaurent s;
    s.sizes = sizes;
    s.step = step;
    std::vector<ExpVec> key;
    for (int r : sizes) key.push_back(ExpVec(static_cast<std::size_t>(r), 0));
    s.terms[key] = Scalar(1);
    return s;
  }
  SymLaurent zero_like() const {
    SymLaurent s;
    s.sizes = sizes;
    s.step = step;
    return s;
  }
  bool is_zero() const { return terms.empty(); }

  void add(const std::vector<ExpVec>& key, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms.find(key);
    if (it == terms.end()) {
      terms.emplace(key, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
  void add(const Scalar& c, const SymLaurent& o) {
    for (const auto& [k, v] : o.terms) add(k, c * v);
  }
  friend bool operator==(const SymLaurent& a, const SymLaurent& b) {
    return a.sizes == b.sizes && a.terms == b.terms;
  }
};

/// m_e * m_f in one factor: coefficient of m_g is #{p in perms(f) : g - p in perms(e)}.
inline std::map<ExpVec, long> monomial_product(const ExpVec& e, const ExpVec& f) {
  std::map<ExpVec, long> out;
  auto pf = distinct_perms(f);
  ExpVec es = e;
  std::sort(es.begin(), es.end());
  std::vector<ExpVec> cands;
  for (const auto& p : pf) {
    ExpVec g(es.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = es[i] + p[i];
    std::sort(g.begin(), g.end());
    cands.push_back(g);
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  for (const auto& g : cands) {
    long c = 0;
    for (const auto& p : pf) {
      ExpVec d(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) d[i] = g[i] - p[i];
      std::sort(d.begin(), d.end());
      if (d == es) ++c;
    }
    if (c) out[g] = c;
  }
  return out;
}

inline SymLaurent operator*(const SymLaurent& x, const SymLaurent& y) {
  if (x.sizes != y.sizes) throw std::invalid_argument("different ambient algebras");
  SymLaurent r = x.zero_like();
  std::size_t F = x.sizes.size();
  for (const auto& [kx, cx] : x.terms)
    for (const auto& [ky, cy] : y.terms) {
      std::vector<std::map<ExpVec, long>> per(F);
      for (std::size_t i = 0; i < F; ++i) per[i] = monomial_product(kx[i], ky[i]);
      // cartesian product over factors
      std::vector<std::pair<std::vector<ExpVec>, long>> acc{{{}, 1}};
      for (std::size_t i = 0; i < F; ++i) {
        std::vector<std::pair<std::vector<ExpVec>, long>> next;
        for (const auto& [k, c] : acc)
          for (const auto& [g, d] : per[i]) {
            auto nk = k;
            nk.push_back(g);
            next.emplace_back(std::move(nk), c * d);
          }
        acc = std::move(next);
      }
      Scalar c = cx * cy;
      for (const auto& [k, d] : acc) r.add(k, c * Scalar(d));
    }
  return r;
}

/// A^Gamma_lambda for lambda in P_0^+ (restricted coordinates r_i = lambda(h_i)).
struct HWAlgebra {
  Weight lambda;
  std::vector<int> stab;  // |Gamma_i|
  int m = 1;

  HWAlgebra(const FoldedRootData& fd, Weight lam) : lambda(std::move(lam)), stab(fd.nodes.stab), m(fd.m) {
    if (lambda.size() != stab.size()) throw std::invalid_argument("weight has the wrong rank");
    if (!is_dominant(lambda)) throw std::invalid_argument("weight is not dominant");
  }
  HWAlgebra(Weight lam, std::vector<int> st, int order) : lambda(std::move(lam)), stab(std::move(st)), m(order) {}

  SymLaurent one() const { return SymLaurent::one(lambda, stab); }
};

/// sym^i_lambda(t^k): the power sum of degree k in factor i.
inline SymLaurent sym_generator(const HWAlgebra& A, int i, long k) {
  if (k % A.stab[i] != 0) throw std::invalid_argument("exponent not divisible by |Gamma_i|");
  int r = A.lambda[i];
  if (r == 0) throw std::invalid_argument("factor absent: lambda(h_i) = 0");
  SymLaurent s = A.one().zero_like();
  std::vector<ExpVec> key;
  for (int n : A.lambda) key.push_back(ExpVec(static_cast<std::size_t>(n), 0));
  if (k == 0) {
    s.add(key, Scalar(r));
    return s;
  }
  key[i].back() = k;
  std::sort(key[i].begin(), key[i].end());
  s.add(key, Scalar(1));
  return s;
}

/// prod h_i(k-bar) (x) t^{-k}, sorted by (i, k).
struct HMonomial {
  std::vector<std::pair<int, long>> factors;

  void normalize() { std::sort(factors.begin(), factors.end()); }
  friend HMonomial operator*(HMonomial a, const HMonomial& b) {
    a.factors.insert(a.factors.end(), b.factors.begin(), b.factors.end());
    a.normalize();
    return a;
  }
};

/// tau(h_i(k-bar) (x) t^{-k}) = sym^i(t^{-k}); zero when h_i(k-bar) = 0, i.e.
/// Gamma_i = Gamma and m does not divide k.
inline SymLaurent tau_image(const HWAlgebra& A, const HMonomial& mono) {
  SymLaurent r = A.one();
  for (const auto& [i, k] : mono.factors) {
    if (k % A.stab[i] != 0) return A.one().zero_like();
    if (A.lambda[i] == 0) {
      // the factor is absent; the image of h_i(k-bar) (x) t^{-k} is 0 unless
      // it acts by lambda(h_i) = 0 anyway
      return A.one().zero_like();
    }
    r = r * sym_generator(A, i, -k);
  }
  return r;
}

/// h_i(k) in Chevalley coordinates (coefficients of H_j), from the setup.
inline std::vector<Scalar> h_coords(const TwistedSetup& ts, int i, long k) {
  int n = ts.rs.rank;
  int m = ts.aut.m;
  std::vector<Scalar> c(static_cast<std::size_t>(n), Scalar(0));
  const GVec& h = ts.gens.roots[ts.gens.simple[i]].h[residue(-k, m)];
  for (const auto& [idx, v] : h) c[idx - 2 * ts.g.P] = v;
  return c;
}

/// ev_xi(h_i(k-bar) (x) t^{-k}) = sum over one support point a per orbit of
/// a^{-k} xi(a)(h_i(k-bar)), extended multiplicatively.  For non-admissible
/// input the sum runs over the orbit representatives present in the support.
inline Scalar ev_xi(const XiFunction& xi, const HMonomial& mono, const TwistedSetup& ts) {
  Scalar total = Scalar(1);
  std::vector<Scalar> reps;
  for (const auto& [a, mu] : xi.entries) {
    Scalar r = orbit_min(xi.m, a);
    bool have = std::any_of(reps.begin(), reps.end(), [&](const Scalar& b) { return orbit_min(xi.m, b) == r; });
    if (!have) reps.push_back(a);
  }
  for (const auto& [i, k] : mono.factors) {
    auto hc = h_coords(ts, i, k);
    Scalar s(0);
    for (const auto& a : reps) {
      const Weight& mu = xi.entries.at(a);
      Scalar v(0);
      for (std::size_t j = 0; j < mu.size(); ++j)
        if (mu[j]) v += hc[j] * Scalar(mu[j]);
      if (!v.is_zero()) s += a.pow(-k) * v;
    }
    total *= s;
  }
  return total;
}

/// Evaluation of an element at the maximal ideal given by an orbit multiset:
/// t^{|Gamma_i|} in factor i is replaced by the orbit keys.
inline Scalar ev_multiset(const OrbitMultiset& fh, const SymLaurent& x) {
  std::size_t F = x.sizes.size();
  std::vector<std::vector<Scalar>> vals(F);
  for (std::size_t i = 0; i < F; ++i) {
    for (const auto& [key, e] : fh.f[i])
      for (int c = 0; c < e.count; ++c) vals[i].push_back(key);
    if (static_cast<int>(vals[i].size()) != x.sizes[i])
      throw std::invalid_argument("multiset size does not match lambda(h_i)");
  }
  Scalar total(0);
  for (const auto& [key, c] : x.terms) {
    Scalar prod(1);
    for (std::size_t i = 0; i < F && !prod.is_zero(); ++i) {
      Scalar fsum(0);
      for (const auto& p : distinct_perms(key[i])) {
        Scalar t(1);
        for (std::size_t v = 0; v < p.size(); ++v) t *= vals[i][v].pow(p[v] / x.step[i]);
        fsum += t;
      }
      prod *= fsum;
    }
    total += c * prod;
  }
  return total;
}

// ---- the embedding of A^Gamma_{lambda-bar} into A_lambda

struct IotaData {
  Weight lambda;        // in P (untwisted)
  Weight lambda_bar;    // restricted coordinates
  bool surjective = false;  // closed-form criterion
  // per folded node i: the target variables (node of g, slot) and coefficient
  std::vector<std::vector<std::tuple<int, int, Scalar>>> var_map;
};

inline IotaData embed_iota(const Weight& lambda, const DiagramAut& aut, const FoldedRootData& fd) {
  IotaData d;
  d.lambda = lambda;
  d.lambda_bar = restrict_weight(fd, lambda);
  int n = static_cast<int>(lambda.size());
  bool ok = true;
  for (int i = 0; i < n; ++i) {
    bool fixed = aut.perm[i] == i;
    if (fixed && lambda[i] != 0) ok = false;
    if (lambda[i] != 0)
      for (int g = 1; g < aut.m; ++g) {
        int j = aut.apply(i, g);
        if (j != i && lambda[j] != 0) ok = false;
      }
  }
  d.surjective = ok;
  Scalar z = Scalar::zeta(aut.m);
  for (std::size_t i = 0; i < fd.nodes.reps.size(); ++i) {
    std::vector<std::tuple<int, int, Scalar>> vm;
    int node = fd.nodes.reps[i];
    if (fd.nodes.stab[i] == 1) {
      // h_i(k) = sum_j z^{-kj} H_{sigma^j i}: the variables of node sigma^j(i) enter scaled by z^j
      for (int j = 0; j < aut.m; ++j) {
        int tgt = aut.apply(node, j);
        for (int s = 0; s < lambda[tgt]; ++s) vm.emplace_back(tgt, s, z.pow(j));
      }
    } else {
      for (int s = 0; s < lambda[node]; ++s) vm.emplace_back(node, s, Scalar(aut.m, 1));
    }
    d.var_map.push_back(vm);
  }
  return d;
}

/// iota on a basis element of A^Gamma_{lambda-bar}: substitute variables and
/// read off coefficients at sorted exponent vectors.
inline SymLaurent iota_apply(const IotaData& d, const SymLaurent& x) {
  std::vector<int> steps(d.lambda.size(), 1);
  SymLaurent out = SymLaurent::one(d.lambda, steps).zero_like();
  for (const auto& [key, c] : x.terms) {
    // expand each domain factor into its distinct permutations, then combine
    std::vector<std::pair<std::vector<ExpVec>, Scalar>> acc;
    {
      std::vector<ExpVec> base;
      for (int r : d.lambda) base.push_back(ExpVec(static_cast<std::size_t>(r), 0));
      acc.emplace_back(base, c);
    }
    for (std::size_t i = 0; i < key.size(); ++i) {
      std::vector<std::pair<std::vector<ExpVec>, Scalar>> next;
      for (const auto& p : distinct_perms(key[i]))
        for (const auto& [k, v] : acc) {
          auto nk = k;
          Scalar nv = v;
          for (std::size_t s = 0; s < p.size(); ++s) {
            auto [node, slot, coef] = d.var_map[i][s];
            nk[node][slot] += p[s];
            nv *= coef.pow(p[s]);
          }
          next.emplace_back(std::move(nk), nv);
        }
      acc = std::move(next);
    }
    for (const auto& [k, v] : acc) {
      bool sorted = true;
      for (const auto& e : k) sorted = sorted && std::is_sorted(e.begin(), e.end());
      if (sorted) out.add(k, v);
    }
  }
  return out;
}

/// Sorted exponent vectors of length r with entries in step*[-B, B].
inline std::vector<ExpVec> bounded_keys(int r, int B, int step) {
  std::vector<ExpVec> out;
  ExpVec cur;
  std::function<void(long)> rec = [&](long lo) {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (long e = lo; e <= B; ++e) {
      cur.push_back(e * step);
      rec(e);
      cur.pop_back();
    }
  };
  rec(-B);
  return out;
}

inline std::vector<std::vector<ExpVec>> cartesian_keys(const std::vector<std::vector<ExpVec>>& per) {
  std::vector<std::vector<ExpVec>> acc{{}};
  for (const auto& opts : per) {
    std::vector<std::vector<ExpVec>> next;
    for (const auto& a : acc)
      for (const auto& o : opts) {
        auto n = a;
        n.push_back(o);
        next.push_back(std::move(n));
      }
    acc = std::move(next);
  }
  return acc;
}

struct IotaCheck {
  int bound = 0;
  std::size_t image_rank = 0;
  std::size_t target_dim = 0;
  bool brute_surjective = false;
};

/// Rank of the image of the bounded domain space versus the bounded target.
inline IotaCheck iota_brute_force(const IotaData& d, const FoldedRootData& fd, int B) {
  IotaCheck c;
  c.bound = B;
  std::vector<std::vector<ExpVec>> dom, tgt;
  for (std::size_t i = 0; i < d.lambda_bar.size(); ++i)
    dom.push_back(bounded_keys(d.lambda_bar[i], B / fd.nodes.stab[i], fd.nodes.stab[i]));
  for (int r : d.lambda) tgt.push_back(bounded_keys(r, B, 1));
  auto tkeys = cartesian_keys(tgt);
  std::map<std::vector<ExpVec>, int> tindex;
  for (std::size_t k = 0; k < tkeys.size(); ++k) tindex[tkeys[k]] = static_cast<int>(k);
  c.target_dim = tkeys.size();
  EchelonBasis eb;
  for (const auto& key : cartesian_keys(dom)) {
    SymLaurent x;
    x.sizes = d.lambda_bar;
    x.step = fd.nodes.stab;
    x.terms[key] = Scalar(1);
    SymLaurent img = iota_apply(d, x);
    SparseVec v;
    for (const auto& [k, s] : img.terms) {
      auto it = tindex.find(k);
      if (it == tindex.end()) throw std::logic_error("image leaves the bounded target");
      v.emplace_back(it->second, s);
    }
    sv_clean(v);
    eb.insert(v);
  }
  c.image_rank = eb.rank();
  c.brute_surjective = c.image_rank == c.target_dim;
  return c;
}

// ---- spanning family and independence

struct SpanningReport {
  int bound = 0;
  std::size_t family_size = 0;
  std::size_t rank = 0;
  bool independent = false;
  bool reduction_ok = true;  // products of lambda(h_i)+1 power sums lie in the shorter span
  std::string witness;
};

/// Multisets of nonzero exponents k in step*[-B,B] of size at most r.
inline std::vector<std::vector<long>> bounded_multisets(int r, int B, int step) {
  std::vector<std::vector<long>> out{{}};
  std::vector<long> cur;
  std::function<void(long)> rec = [&](long lo) {
    if (static_cast<int>(cur.size()) == r) return;
    for (long e = lo; e <= B; ++e) {
      if (e == 0) continue;
      cur.push_back(e * step);
      out.push_back(cur);
      rec(e);
      cur.pop_back();
    }
  };
  rec(-B);
  return out;
}

inline SymLaurent power_sum_product(const HWAlgebra& A, int i, const std::vector<long>& ks) {
  SymLaurent r = A.one();
  for (long k : ks) r = r * sym_generator(A, i, k);
  return r;
}

inline SparseVec sym_coords(const SymLaurent& x, std::map<std::vector<ExpVec>, int>& index) {
  SparseVec v;
  for (const auto& [k, c] : x.terms) {
    auto it = index.find(k);
    int id;
    if (it == index.end()) {
      id = static_cast<int>(index.size());
      index[k] = id;
    } else {
      id = it->second;
    }
    v.emplace_back(id, c);
  }
  sv_clean(v);
  return v;
}

/// Independence of the products of at most lambda(h_i) power sums (|k| <= B |Gamma_i|),
/// per factor; and reduction of longer products into the span of shorter ones.
inline SpanningReport basis_spanning_check(const HWAlgebra& A, int B) {
  SpanningReport rep;
  rep.bound = B;
  rep.independent = true;
  for (std::size_t i = 0; i < A.lambda.size(); ++i) {
    int r = A.lambda[i];
    if (r == 0) continue;
    int st = A.stab[i];
    std::map<std::vector<ExpVec>, int> index;
    EchelonBasis eb;
    auto fam = bounded_multisets(r, B, st);
    for (const auto& ks : fam) {
      if (!eb.insert(sym_coords(power_sum_product(A, static_cast<int>(i), ks), index))) {
        rep.independent = false;
        std::string w = "factor " + std::to_string(i + 1) + ": dependent product of power sums";
        for (long k : ks) w += " " + std::to_string(k);
        if (rep.witness.empty()) rep.witness = w;
      }
    }
    rep.family_size += fam.size();
    rep.rank += eb.rank();
    // r+1 factors with |k| <= B reduce to the span of at most r factors with |k| <= (r+1)B
    std::map<std::vector<ExpVec>, int> index2;
    EchelonBasis shorter;
    for (const auto& ks : bounded_multisets(r, (r + 1) * B, st))
      shorter.insert(sym_coords(power_sum_product(A, static_cast<int>(i), ks), index2));
    std::vector<long> longer;
    for (int s = 0; s <= r; ++s) longer.push_back((s % 2 == 0 ? 1 : -1) * (1 + (s / 2) % B) * static_cast<long>(st));
    if (!shorter.contains(sym_coords(power_sum_product(A, static_cast<int>(i), longer), index2))) {
      rep.reduction_ok = false;
      if (rep.witness.empty()) rep.witness = "factor " + std::to_string(i + 1) + ": longer product not reduced";
    }
  }
  return rep;
}

/// Elementary symmetric e_j in the variables t^{step} of factor i (j = 1..r), and
/// e_r^{-1}, built by Newton's identities from power sums with |k| <= r.
struct NewtonCheck {
  bool ok = true;
  std::string witness;
};

inline NewtonCheck newton_check(const HWAlgebra& A, int i) {
  NewtonCheck res;
  int r = A.lambda[i];
  int st = A.stab[i];
  for (int sign : {1, -1}) {
    // j e_j = sum_{k=1}^{j} (-1)^{k-1} e_{j-k} p_k
    std::vector<SymLaurent> e{A.one()};
    for (int j = 1; j <= r; ++j) {
      SymLaurent acc = A.one().zero_like();
      for (int k = 1; k <= j; ++k) {
        SymLaurent t = e[static_cast<std::size_t>(j - k)] * sym_generator(A, i, sign * k * st);
        acc.add(Scalar(k % 2 == 1 ? 1 : -1), t);
      }
      SymLaurent ej = acc.zero_like();
      ej.add(Scalar(make_rational(1, j)), acc);
      e.push_back(ej);
      // direct: m_{(0,..,0,s,..,s)} with j entries equal to sign*st
      SymLaurent direct = A.one().zero_like();
      std::vector<ExpVec> key;
      for (int n : A.lambda) key.push_back(ExpVec(static_cast<std::size_t>(n), 0));
      for (int v = 0; v < j; ++v) key[i][static_cast<std::size_t>(v)] = sign * st;
      std::sort(key[i].begin(), key[i].end());
      direct.add(key, Scalar(1));
      if (!(ej == direct)) {
        res.ok = false;
        res.witness = "e_" + std::to_string(j) + (sign < 0 ? " (inverse variables)" : "");
        return res;
      }
    }
    if (sign < 0) {
      // e_r(t^{-1}) * e_r(t) = 1 exhibits e_r^{-1} in the subring
      std::vector<ExpVec> key;
      for (int n : A.lambda) key.push_back(ExpVec(static_cast<std::size_t>(n), 0));
      SymLaurent er = A.one().zero_like();
      for (auto& v : key[i]) v = st;
      er.add(key, Scalar(1));
      if (!(e.back() * er == A.one())) {
        res.ok = false;
        res.witness = "e_r^{-1}";
      }
    }
  }
  return res;
}

inline nlohmann::json sym_to_json(const SymLaurent& x) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [k, c] : x.terms) j.push_back({{"exponents", k}, {"coeff", c.str()}});
  return j;
}

}  // namespace twloop

#endif
