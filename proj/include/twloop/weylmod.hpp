#ifndef TWLOOP_WEYLMOD_HPP
#define TWLOOP_WEYLMOD_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "twloop/fold.hpp"
#include "twloop/hwalg.hpp"
#include "twloop/linalg.hpp"
#include "twloop/looplie.hpp"
#include "twloop/xi.hpp"

namespace twloop {

// ---- threads

/// WEYL_THREADS, defaulting to 1.
inline int thread_count() {
  const char* s = std::getenv("WEYL_THREADS");
  if (!s || !*s) return 1;
  int n = std::atoi(s);
  return n < 1 ? 1 : n;
}

/// Runs f(0..n-1) on up to thread_count() workers.  Each call must only touch
/// its own output slot.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
  std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errs(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < t; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

// ---- PBW order and straightening in U(L)

/// Position of each basis element in the PBW order: n- (height descending, then
/// loop degree, then index), then Cartan-type, then n+.
inline std::vector<int> pbw_positions(const FinLie& L) {
  std::vector<int> idx(static_cast<std::size_t>(L.dim));
  for (int i = 0; i < L.dim; ++i) idx[i] = i;
  auto key = [&](int i) {
    int block = L.kind[i] < 0 ? 0 : (L.kind[i] == 0 ? 1 : 2);
    return std::make_tuple(block, -L.height[i], L.loop_degree[i], i);
  };
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return key(a) < key(b); });
  std::vector<int> pos(static_cast<std::size_t>(L.dim));
  for (int p = 0; p < L.dim; ++p) pos[idx[p]] = p;
  return pos;
}

using PBWMonomial = std::vector<int>;
using PBWVec = std::map<PBWMonomial, Scalar>;

inline void pbw_add(PBWVec& v, const PBWMonomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = v.find(m);
  if (it == v.end()) {
    v.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) v.erase(it);
}

enum class Schedule { first_inversion, last_inversion };

/// Normal form of a word by adjacent swaps xy -> yx + [x,y].
inline PBWVec pbw_straighten(const std::vector<int>& word, const FinLie& L,
                             Schedule sched = Schedule::first_inversion) {
  std::vector<int> pos = pbw_positions(L);
  std::map<std::vector<int>, PBWVec> memo;
  std::function<PBWVec(const std::vector<int>&)> nf = [&](const std::vector<int>& w) -> PBWVec {
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    std::vector<std::size_t> inv;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (pos[w[i]] > pos[w[i + 1]]) inv.push_back(i);
    PBWVec out;
    if (inv.empty()) {
      out[w] = Scalar(1);
    } else {
      std::size_t i = sched == Schedule::first_inversion ? inv.front() : inv.back();
      std::vector<int> sw = w;
      std::swap(sw[i], sw[i + 1]);
      for (const auto& [m, c] : nf(sw)) pbw_add(out, m, c);
      for (const auto& [b, c] : L.bracket_basis(w[i], w[i + 1])) {
        std::vector<int> sh(w.begin(), w.begin() + static_cast<long>(i));
        sh.push_back(b);
        sh.insert(sh.end(), w.begin() + static_cast<long>(i) + 2, w.end());
        for (const auto& [m, d] : nf(sh)) pbw_add(out, m, c * d);
      }
    }
    memo[w] = out;
    return out;
  };
  return nf(word);
}

// ---- cyclic highest-weight quotients

struct EngineSpec {
  std::shared_ptr<const FinLie> lie;
  std::function<Scalar(int)> ev;                  // scalar of a Cartan-type basis element on w
  std::vector<std::vector<SparseVec>> seeds;      // y_1 ... y_k, applied to w right to left
  std::function<bool(const IntVec&)> in_domain;   // grades that are computed
  std::function<bool(const IntVec&)> in_hull;     // grades where the module may live
};

struct HWModule {
  std::shared_ptr<const FinLie> lie;
  int dim = 0;
  std::vector<IntVec> grade;
  std::vector<std::string> labels;
  std::vector<SparseMat> action;  // per basis element of lie
  std::size_t monomials = 0;
  std::size_t relation_rank = 0;
  bool hull_ok = true;
  std::vector<IntVec> stray_grades;

  SparseMat op(const SparseVec& x) const {
    SparseMat r(dim);
    for (const auto& [b, c] : x) r.axpy(c, action[static_cast<std::size_t>(b)]);
    return r;
  }
};

namespace detail {

/// Elements of `subset` of height +-1 if they generate span(subset) under brackets, else all.
inline std::vector<int> lie_generators(const FinLie& L, const std::vector<int>& subset) {
  std::vector<int> gens;
  for (int b : subset)
    if (L.height[b] == 1 || L.height[b] == -1) gens.push_back(b);
  EchelonBasis eb;
  std::vector<SparseVec> found;
  for (int b : gens) {
    SparseVec v{{b, Scalar(1)}};
    if (eb.insert(v)) found.push_back(v);
  }
  for (std::size_t i = 0; i < found.size(); ++i)
    for (int b : gens) {
      SparseVec v = L.bracket(SparseVec{{b, Scalar(1)}}, found[i]);
      if (!v.empty() && eb.insert(v)) found.push_back(v);
    }
  if (eb.rank() == subset.size()) return gens;
  return subset;
}

class CyclicQuotient {
 public:
  explicit CyclicQuotient(EngineSpec spec) : spec_(std::move(spec)), L_(*spec_.lie) {
    pos_ = pbw_positions(L_);
    std::vector<int> low, zero, high;
    for (int b = 0; b < L_.dim; ++b) {
      if (L_.kind[b] < 0) low.push_back(b);
      if (L_.kind[b] == 0) zero.push_back(b);
      if (L_.kind[b] > 0) high.push_back(b);
    }
    std::sort(low.begin(), low.end(), [&](int a, int b) { return pos_[a] < pos_[b]; });
    lowering_ = low;
    low_gens_ = lie_generators(L_, low);
    b_gens_ = lie_generators(L_, high);
    b_gens_.insert(b_gens_.end(), zero.begin(), zero.end());
    gsize_ = L_.grade.empty() ? 0 : L_.grade[0].size();
  }

  HWModule run() {
    enumerate();
    close_borel();
    build_relations();
    return extract();
  }

 private:
  EngineSpec spec_;
  const FinLie& L_;
  std::vector<int> pos_, lowering_, low_gens_, b_gens_;
  std::size_t gsize_ = 0;

  std::map<std::vector<int>, int> mono_id_;
  std::vector<std::vector<int>> monos_;
  std::vector<int> mono_grade_;
  std::map<IntVec, int> grade_id_;
  std::vector<IntVec> grades_;
  std::vector<int> grade_height_;
  std::vector<std::vector<int>> grade_monos_;
  std::vector<EchelonBasis> borel_, rel_;
  std::unordered_map<std::uint64_t, SparseVec> memo_;

  IntVec add_grade(IntVec g, const IntVec& h) const {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += h[i];
    return g;
  }

  int grade_of(const IntVec& g, int height) {
    auto it = grade_id_.find(g);
    if (it != grade_id_.end()) return it->second;
    int id = static_cast<int>(grades_.size());
    grade_id_[g] = id;
    grades_.push_back(g);
    grade_height_.push_back(height);
    grade_monos_.emplace_back();
    borel_.emplace_back();
    rel_.emplace_back();
    return id;
  }

  int intern(const std::vector<int>& m) {
    auto it = mono_id_.find(m);
    if (it != mono_id_.end()) return it->second;
    IntVec g(gsize_, 0);
    int h = 0;
    for (int b : m) {
      g = add_grade(g, L_.grade[b]);
      h += L_.height[b];
    }
    int id = static_cast<int>(monos_.size());
    mono_id_[m] = id;
    monos_.push_back(m);
    int gid = grade_of(g, h);
    mono_grade_.push_back(gid);
    grade_monos_[gid].push_back(id);
    return id;
  }

  void enumerate() {
    std::vector<int> cur;
    IntVec g(gsize_, 0);
    intern(cur);
    std::function<void(std::size_t, const IntVec&)> rec = [&](std::size_t from, const IntVec& gr) {
      for (std::size_t i = from; i < lowering_.size(); ++i) {
        int b = lowering_[i];
        IntVec ng = add_grade(gr, L_.grade[b]);
        if (!spec_.in_domain(ng)) continue;
        cur.push_back(b);
        intern(cur);
        rec(i, ng);
        cur.pop_back();
      }
    };
    rec(0, g);
  }

  SparseVec act(int x, int mono) {
    std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint32_t>(mono);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    SparseVec out;
    const std::vector<int> Y = monos_[mono];
    IntVec target = add_grade(grades_[mono_grade_[mono]], L_.grade[x]);
    if (!spec_.in_domain(target)) {
      // the module vanishes there
    } else if (Y.empty()) {
      if (L_.kind[x] < 0) out.emplace_back(intern({x}), Scalar(1));
      if (L_.kind[x] == 0) {
        Scalar c = spec_.ev(x);
        if (!c.is_zero()) out.emplace_back(mono, c);
      }
    } else if (L_.kind[x] < 0 && pos_[x] <= pos_[Y[0]]) {
      std::vector<int> m{x};
      m.insert(m.end(), Y.begin(), Y.end());
      out.emplace_back(intern(m), Scalar(1));
    } else {
      int y0 = Y[0];
      int rest = intern(std::vector<int>(Y.begin() + 1, Y.end()));
      SparseVec inner = act(x, rest);
      for (const auto& [z, c] : inner) sv_axpy(out, c, act(y0, z));
      for (const auto& [b, c] : L_.bracket_basis(x, y0)) sv_axpy(out, c, act(b, rest));
    }
    memo_[key] = out;
    return out;
  }

  SparseVec act_vec(const SparseVec& x, const SparseVec& v) {
    SparseVec out;
    for (const auto& [b, c] : x)
      for (const auto& [m, d] : v) sv_axpy(out, c * d, act(b, m));
    return out;
  }

  void close_borel() {
    std::vector<SparseVec> queue;
    int w = intern({});
    for (const auto& word : spec_.seeds) {
      SparseVec v{{w, Scalar(1)}};
      for (auto it = word.rbegin(); it != word.rend(); ++it) v = act_vec(*it, v);
      // split into homogeneous parts
      std::map<int, SparseVec> parts;
      for (const auto& e : v) parts[mono_grade_[e.first]].push_back(e);
      for (auto& [g, p] : parts) queue.push_back(p);
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      SparseVec v = queue[qi];
      if (v.empty()) continue;
      int g = mono_grade_[v.front().first];
      SparseVec r = borel_[g].reduce(v);
      if (r.empty()) continue;
      borel_[g].insert(r);
      for (int x : b_gens_) {
        SparseVec u;
        for (const auto& [m, c] : r) sv_axpy(u, c, act(x, m));
        if (!u.empty()) queue.push_back(std::move(u));
      }
    }
  }

  void build_relations() {
    std::vector<int> order(grades_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return grade_height_[a] > grade_height_[b]; });
    for (int g : order) {
      EchelonBasis& N = rel_[g];
      for (const auto& [p, row] : borel_[g].rows()) N.insert(row);
      for (int y : low_gens_) {
        IntVec src = grades_[g];
        for (std::size_t i = 0; i < src.size(); ++i) src[i] -= L_.grade[y][i];
        auto it = grade_id_.find(src);
        if (it == grade_id_.end()) continue;
        for (const auto& [p, row] : rel_[it->second].rows()) {
          SparseVec u;
          for (const auto& [m, c] : row) sv_axpy(u, c, act(y, m));
          if (!u.empty()) N.insert(u);
        }
      }
    }
  }

  HWModule extract() {
    HWModule M;
    M.lie = spec_.lie;
    M.monomials = monos_.size();
    std::vector<int> order(grades_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return grade_height_[a] > grade_height_[b]; });
    std::map<int, int> basis_of_mono;
    std::vector<int> basis_mono;
    for (int g : order) {
      M.relation_rank += rel_[g].rank();
      int count = 0;
      for (int m : grade_monos_[g]) {
        if (rel_[g].is_pivot(m)) continue;
        basis_of_mono[m] = static_cast<int>(basis_mono.size());
        basis_mono.push_back(m);
        ++count;
      }
      if (count && spec_.in_hull && !spec_.in_hull(grades_[g])) {
        M.hull_ok = false;
        M.stray_grades.push_back(grades_[g]);
      }
    }
    M.dim = static_cast<int>(basis_mono.size());
    for (int m : basis_mono) {
      M.grade.push_back(grades_[mono_grade_[m]]);
      std::string lab;
      for (int b : monos_[m]) lab += L_.labels[b] + ".";
      M.labels.push_back(lab + "w");
    }
    M.action.assign(static_cast<std::size_t>(L_.dim), SparseMat(M.dim));
    for (int x = 0; x < L_.dim; ++x)
      for (int j = 0; j < M.dim; ++j) {
        SparseVec u = act(x, basis_mono[j]);
        if (u.empty()) continue;
        int g = mono_grade_[u.front().first];
        u = rel_[g].reduce(u);
        SparseVec col;
        for (const auto& [m, c] : u) col.emplace_back(basis_of_mono.at(m), c);
        sv_clean(col);
        M.action[x].col[static_cast<std::size_t>(j)] = std::move(col);
      }
    return M;
  }
};

}  // namespace detail

inline HWModule cyclic_quotient(EngineSpec spec) { return detail::CyclicQuotient(std::move(spec)).run(); }

/// Depth vectors componentwise below some member of s.
inline std::set<IntVec> downward_closure(const std::set<IntVec>& s) {
  std::set<IntVec> out;
  for (const auto& top : s) {
    IntVec cur(top.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == top.size()) {
        out.insert(cur);
        return;
      }
      for (int v = 0; v <= top[i]; ++v) {
        cur[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }
  return out;
}

// ---- module checks

/// rho([x,y]) = [rho(x), rho(y)] on all basis pairs.
inline bool check_bracket_relations(const HWModule& M, std::string* witness = nullptr) {
  const FinLie& L = *M.lie;
  for (int a = 0; a < L.dim; ++a)
    for (int b = a + 1; b < L.dim; ++b) {
      SparseMat lhs = M.op(L.bracket_basis(a, b));
      SparseMat rhs = SparseMat::commutator(M.action[a], M.action[b]);
      if (!(lhs == rhs)) {
        if (witness) *witness = "[" + L.labels[a] + ", " + L.labels[b] + "]";
        return false;
      }
    }
  return true;
}

/// Closure of v under the given operators.
inline std::size_t generated_dimension(const std::vector<SparseMat>& ops, const SparseVec& v) {
  EchelonBasis eb;
  std::vector<SparseVec> found;
  if (v.empty()) return 0;
  eb.insert(v);
  found.push_back(v);
  for (std::size_t i = 0; i < found.size(); ++i)
    for (const auto& A : ops) {
      SparseVec u = A.apply(found[i]);
      if (!u.empty() && eb.insert(u)) found.push_back(u);
    }
  return eb.rank();
}

inline std::size_t generated_submodule(const HWModule& M, const SparseVec& v) {
  return generated_dimension(M.action, v);
}

inline SparseVec hw_vector() { return SparseVec{{0, Scalar(1)}}; }

// ---- untwisted local Weyl modules over the CRT truncation

struct LocalWeyl {
  XiFunction xi;
  Weight tau;
  int depth = 1;
  std::shared_ptr<CrtLie> crt;
  HWModule M;
  std::vector<Weight> weights;  // weight of g per basis vector
  bool relations_ok = false;
  std::string relation_witness;
};

namespace detail {

inline IntVec crt_depth(const CrtLie& C, const IntVec& g, int point) {
  int slot = C.rank + 1;
  IntVec d(static_cast<std::size_t>(C.rank));
  for (int i = 0; i < C.rank; ++i) d[i] = -g[point * slot + i];
  return d;
}

}  // namespace detail

/// W(xi) over the CRT truncation at explicit points; a point may carry the zero
/// weight, in which case its whole component acts by 0.
inline LocalWeyl build_local_weyl_at(const ChevalleyAlgebra& g, std::vector<Scalar> points, std::vector<Weight> wts,
                                     int depth) {
  if (points.size() != wts.size()) throw std::invalid_argument("one weight per point");
  LocalWeyl out;
  out.depth = depth;
  int n = g.n;
  out.xi.m = points.empty() ? 1 : points.front().order();
  for (std::size_t a = 0; a < points.size(); ++a)
    if (!std::all_of(wts[a].begin(), wts[a].end(), [](int c) { return c == 0; })) out.xi.add(points[a], wts[a]);
  out.tau = xi_weight(out.xi, n);
  if (points.empty()) {
    // trivial module: one point carrying the zero weight
    points.push_back(Scalar(1));
    wts.push_back(Weight(static_cast<std::size_t>(n), 0));
  }
  auto C = std::make_shared<CrtLie>(crt_lie(g, points, depth));
  out.crt = C;
  int P = static_cast<int>(points.size());
  std::vector<std::set<IntVec>> hull(static_cast<std::size_t>(P)), dom(static_cast<std::size_t>(P));
  EngineSpec spec;
  spec.lie = C;
  for (int a = 0; a < P; ++a) {
    hull[a] = weight_depths(g.rs, wts[a]);
    std::set<IntVec> tops = hull[a];
    for (int i = 0; i < n; ++i) {
      IntVec e(static_cast<std::size_t>(n), 0);
      e[i] = 1;
      int b = g.rs.root_index(e);
      std::vector<SparseVec> word(static_cast<std::size_t>(wts[a][i] + 1),
                                  SparseVec{{C->index(a, g.xm(b), 0), Scalar(1)}});
      spec.seeds.push_back(word);
      e[i] = wts[a][i] + 1;
      tops.insert(e);
    }
    dom[a] = downward_closure(tops);
  }
  spec.ev = [C, wts, &g](int b) -> Scalar {
    int l = b % C->depth;
    int x = (b / C->depth) % C->gdim;
    int a = b / (C->depth * C->gdim);
    if (l != 0 || !g.is_cartan(x)) return Scalar(0);
    return Scalar(wts[a][x - 2 * g.P]);
  };
  spec.in_domain = [C, dom, P](const IntVec& gr) {
    for (int a = 0; a < P; ++a)
      if (!dom[a].count(detail::crt_depth(*C, gr, a))) return false;
    return true;
  };
  spec.in_hull = [C, hull, P](const IntVec& gr) {
    for (int a = 0; a < P; ++a)
      if (!hull[a].count(detail::crt_depth(*C, gr, a))) return false;
    return true;
  };
  out.M = cyclic_quotient(spec);
  for (const auto& gr : out.M.grade) {
    Weight mu = out.tau;
    for (int a = 0; a < P; ++a) {
      Weight dw = g.rs.root_to_weight(detail::crt_depth(*C, gr, a));
      for (int i = 0; i < n; ++i) mu[i] -= dw[i];
    }
    out.weights.push_back(mu);
  }
  // defining relations on w
  out.relations_ok = true;
  const HWModule& M = out.M;
  auto fail = [&](const std::string& w) {
    if (out.relations_ok) out.relation_witness = w;
    out.relations_ok = false;
  };
  if (M.dim == 0) fail("module is zero");
  for (int b = 0; b < C->dim && M.dim > 0; ++b) {
    SparseVec img = M.action[b].apply(hw_vector());
    if (C->kind[b] > 0 && !img.empty()) fail(C->labels[b] + " does not kill w");
    if (C->kind[b] == 0) {
      Scalar c = spec.ev(b);
      SparseVec want;
      if (!c.is_zero()) want.emplace_back(0, c);
      if (img != want) fail(C->labels[b] + " does not act on w by its evaluation");
    }
  }
  for (int a = 0; a < P && M.dim > 0; ++a)
    for (int i = 0; i < n; ++i) {
      IntVec e(static_cast<std::size_t>(n), 0);
      e[i] = 1;
      const SparseMat& F = M.action[C->index(a, g.xm(g.rs.root_index(e)), 0)];
      SparseVec v = hw_vector();
      for (int k = 0; k < wts[a][i]; ++k) v = F.apply(v);
      if (v.empty()) fail("lowering power vanishes too early");
      if (!F.apply(v).empty()) fail("integrability relation fails");
    }
  return out;
}

inline LocalWeyl build_local_weyl_untwisted(const ChevalleyAlgebra& g, const XiFunction& xi, int depth) {
  std::vector<Scalar> points;
  std::vector<Weight> wts;
  for (const auto& [a, mu] : xi.entries) {
    points.push_back(a);
    wts.push_back(mu);
  }
  LocalWeyl out = build_local_weyl_at(g, points, wts, depth);
  out.xi = xi;
  return out;
}

struct StableResult {
  int depth = 0;               // reported depth
  std::vector<int> dims;       // dims at depth 1, 2, ...
  bool stabilized = false;
};

/// Deepens until two consecutive depths give the same dimension.
inline LocalWeyl build_stable_untwisted(const ChevalleyAlgebra& g, const XiFunction& xi, int max_depth,
                                        StableResult* cert = nullptr) {
  StableResult sr;
  LocalWeyl prev = build_local_weyl_untwisted(g, xi, 1);
  sr.dims.push_back(prev.M.dim);
  for (int N = 2; N <= max_depth; ++N) {
    LocalWeyl cur = build_local_weyl_untwisted(g, xi, N);
    sr.dims.push_back(cur.M.dim);
    if (cur.M.dim == prev.M.dim) {
      sr.depth = N - 1;
      sr.stabilized = true;
      if (cert) *cert = sr;
      return prev;
    }
    prev = std::move(cur);
  }
  sr.depth = max_depth;
  if (cert) *cert = sr;
  throw std::runtime_error("depth did not stabilize up to " + std::to_string(max_depth));
}

inline LocalWeyl evaluation_module(const ChevalleyAlgebra& g, const Weight& lambda, const Scalar& a) {
  if (a.is_zero()) throw std::invalid_argument("evaluation point must be nonzero");
  XiFunction xi;
  xi.m = a.order();
  xi.add(a, lambda);
  return build_local_weyl_untwisted(g, xi, 1);
}

/// V(lambda) evaluated at points[at], as a module over the depth-1 truncation at all
/// of `points`; modules built on the same point list can be tensored.
inline LocalWeyl evaluation_module_on(const ChevalleyAlgebra& g, const std::vector<Scalar>& points, std::size_t at,
                                      const Weight& lambda) {
  if (at >= points.size()) throw std::invalid_argument("point index out of range");
  std::vector<Weight> wts(points.size(), Weight(static_cast<std::size_t>(g.n), 0));
  wts[at] = lambda;
  return build_local_weyl_at(g, points, wts, 1);
}

/// Tensor product of modules over the same algebra via x -> x(x)1 + 1(x)x.
inline HWModule tensor_modules(const std::vector<const HWModule*>& mods) {
  if (mods.empty()) throw std::invalid_argument("no modules");
  HWModule cur = *mods[0];
  for (std::size_t k = 1; k < mods.size(); ++k) {
    const HWModule& B = *mods[k];
    if (B.lie->dim != cur.lie->dim || B.lie->table != cur.lie->table)
      throw std::invalid_argument("incompatible truncations");
    HWModule T;
    T.lie = cur.lie;
    T.dim = cur.dim * B.dim;
    for (int i = 0; i < cur.dim; ++i)
      for (int j = 0; j < B.dim; ++j) {
        IntVec gr = cur.grade[i];
        for (std::size_t t = 0; t < gr.size(); ++t) gr[t] += B.grade[j][t];
        T.grade.push_back(gr);
        T.labels.push_back(cur.labels[i] + "(x)" + B.labels[j]);
      }
    T.action.assign(cur.action.size(), SparseMat(T.dim));
    for (std::size_t x = 0; x < cur.action.size(); ++x)
      for (int i = 0; i < cur.dim; ++i)
        for (int j = 0; j < B.dim; ++j) {
          SparseVec col;
          for (const auto& [r, c] : cur.action[x].col[i]) col.emplace_back(r * B.dim + j, c);
          for (const auto& [r, c] : B.action[x].col[j]) col.emplace_back(i * B.dim + r, c);
          sv_clean(col);
          T.action[x].col[static_cast<std::size_t>(i * B.dim + j)] = std::move(col);
        }
    cur = std::move(T);
  }
  return cur;
}

inline std::map<Weight, long> character_g(const LocalWeyl& W) {
  std::map<Weight, long> ch;
  for (const auto& w : W.weights) ++ch[w];
  return ch;
}

// ---- twisted modules

struct TwistedModule {
  XiFunction chi, xi;
  Weight tau;
  Weight lambda_bar;  // restricted coordinates
  int depth = 1;
  bool direct = false;
  HWModule M;
  std::function<SparseVec(const LoopElement&)> coords;
  std::vector<Weight> restricted_weights;
  std::vector<SparseMat> twisted_ops;
  std::vector<std::string> twisted_labels;
  std::shared_ptr<LocalWeyl> untwisted;  // set for the restriction route
  bool relations_ok = false;
  std::string relation_witness;

  SparseMat op(const LoopElement& x) const { return M.op(coords(x)); }
};

inline std::map<Weight, long> character_g0(const TwistedModule& W) {
  std::map<Weight, long> ch;
  for (const auto& w : W.restricted_weights) ++ch[w];
  return ch;
}

/// Independent images of the twisted elements g_s (x) t^k, k = -s mod m, |k| <= K.
inline void collect_twisted_ops(const TwistedSetup& ts, TwistedModule& W, int K) {
  int m = ts.aut.m;
  EchelonBasis eb;
  for (int s = 0; s < m; ++s)
    for (int p = 0; p < ts.pieces.dim(s); ++p)
      for (long k = -K; k <= K; ++k) {
        if (residue(k, m) != s) continue;
        SparseVec c = W.coords(LoopElement(ts.pieces.basis[s][p], k));
        if (c.empty() || !eb.insert(c)) continue;
        W.twisted_ops.push_back(W.M.op(c));
        W.twisted_labels.push_back("g" + std::to_string(s) + "[" + std::to_string(p) + "]t^" + std::to_string(k));
      }
}

/// Twisted defining relations on w: L^Gamma(n+) kills w, L^Gamma(h) acts by ev_chi,
/// (x_i^-(0))^{kappa_i c_i + 1} w = 0 with kappa_i c_i = lambda(kappa_i h_i(0)).
inline void check_twisted_relations(const TwistedSetup& ts, TwistedModule& W, int K) {
  W.relations_ok = true;
  auto fail = [&](const std::string& w) {
    if (W.relations_ok) W.relation_witness = w;
    W.relations_ok = false;
  };
  if (W.M.dim == 0) {
    fail("module is zero");
    return;
  }
  int n0 = ts.fd.rank0();
  for (std::size_t r = 0; r < ts.gens.roots.size(); ++r)
    for (long k = -K; k <= K; ++k) {
      if (!W.op(loop_x(ts, static_cast<int>(r), 1, k)).apply(hw_vector()).empty())
        fail("x+ of root " + std::to_string(r) + " at t^" + std::to_string(k) + " does not kill w");
    }
  for (int i = 0; i < n0; ++i) {
    for (long k = -K; k <= K; ++k) {
      HMonomial mono{{{i, -k}}};
      SparseVec img = W.op(loop_h(ts, ts.gens.simple[i], k)).apply(hw_vector());
      Scalar c = ev_xi(W.chi, mono, ts);
      SparseVec want;
      if (!c.is_zero()) want.emplace_back(0, c);
      if (img != want) fail("h_" + std::to_string(i + 1) + " at t^" + std::to_string(k) + " is not ev_chi on w");
    }
    SparseMat F = W.op(loop_x(ts, ts.gens.simple[i], -1, 0));
    int e = ts.fd.kappa[i] * W.lambda_bar[i];
    SparseVec v = hw_vector();
    for (int j = 0; j < e; ++j) v = F.apply(v);
    if (v.empty()) fail("x-_" + std::to_string(i + 1) + "(0) power vanishes below kappa c");
    if (!F.apply(v).empty()) fail("(x-_" + std::to_string(i + 1) + "(0))^(kappa c + 1) w != 0");
  }
}

/// Fills W with the restriction of an untwisted module to L^Gamma(g).  Works for
/// any xi; only admissible ones are expected to stay cyclic.
inline void restrict_untwisted(const TwistedSetup& ts, std::shared_ptr<LocalWeyl> U, TwistedModule& W) {
  W.untwisted = U;
  W.depth = U->depth;
  W.M = U->M;
  std::shared_ptr<CrtLie> C = U->crt;
  W.coords = [C](const LoopElement& x) { return crt_coords(*C, x); };
  W.restricted_weights.clear();
  for (const auto& mu : U->weights) W.restricted_weights.push_back(restrict_weight(ts.fd, mu));
  W.twisted_ops.clear();
  W.twisted_labels.clear();
  int K = ts.aut.m * (static_cast<int>(C->points.size()) * U->depth + 1);
  collect_twisted_ops(ts, W, K);
}

/// W^Gamma(chi) as the restriction of W(xi), xi the chi-admissible function.
inline TwistedModule build_local_weyl_twisted(const TwistedSetup& ts, const XiFunction& chi, int depth) {
  if (!is_equivariant(chi, ts.aut)) throw std::invalid_argument("chi is not equivariant");
  TwistedModule W;
  W.chi = chi;
  W.xi = chi_admissible(chi, ts.aut);
  W.tau = xi_weight(W.xi, ts.rs.rank);
  W.lambda_bar = wt0(chi, ts.aut, ts.fd);
  W.depth = depth;
  restrict_untwisted(ts, std::make_shared<LocalWeyl>(build_local_weyl_untwisted(ts.g, W.xi, depth)), W);
  check_twisted_relations(ts, W, ts.aut.m * 2);
  return W;
}

/// Direct presentation over the twisted truncation q = prod (u - a^m)^N, u = t^m,
/// a over the admissible support.  Graded only by the restricted weight, so it is
/// practical for small cases only.
inline TwistedModule build_local_weyl_twisted_direct_truncated(const TwistedSetup& ts, const XiFunction& chi, int depth) {
  if (!is_equivariant(chi, ts.aut)) throw std::invalid_argument("chi is not equivariant");
  TwistedModule W;
  W.direct = true;
  W.chi = chi;
  W.xi = chi_admissible(chi, ts.aut);
  W.tau = xi_weight(W.xi, ts.rs.rank);
  W.lambda_bar = wt0(chi, ts.aut, ts.fd);
  W.depth = depth;
  int m = ts.aut.m;
  Poly q(std::vector<Scalar>{Scalar(1)});
  std::vector<Scalar> adm;
  for (const auto& [a, mu] : W.xi.entries) adm.push_back(a);
  if (adm.empty()) adm.push_back(Scalar(1));
  for (const auto& a : adm) q = q * Poly::linear_power(a.pow(m), depth);
  auto T = std::make_shared<TruncatedLie>(truncate(ts, q, true));
  int n = ts.rs.rank;
  int n0 = ts.fd.rank0();
  const ChevalleyAlgebra& g = ts.g;
  XiFunction xi = W.xi;
  EngineSpec spec;
  spec.lie = T;
  spec.ev = [T, xi, adm, n, &g](int b) -> Scalar {
    auto [s, p, j] = T->origin[b];
    long e = T->loop_degree[b];
    Scalar tot(0);
    for (const auto& a : adm) {
      Weight mu = xi.at(a, n);
      Scalar v(0);
      for (const auto& [idx, c] : T->vec[b])
        if (g.is_cartan(idx)) v += c * Scalar(mu[idx - 2 * g.P]);
      if (!v.is_zero()) tot += a.pow(e) * v;
    }
    return tot;
  };
  std::set<IntVec> hull;
  NodeOrbits orb = ts.fd.nodes;
  for (const auto& d : weight_depths(g.rs, W.tau)) hull.insert(restrict_root(orb, d));
  std::set<IntVec> tops = hull;
  for (int i = 0; i < n0; ++i) {
    int e = ts.fd.kappa[i] * W.lambda_bar[i] + 1;
    SparseVec f = truncated_coords(*T, loop_x(ts, ts.gens.simple[i], -1, 0));
    spec.seeds.push_back(std::vector<SparseVec>(static_cast<std::size_t>(e), f));
    IntVec top(static_cast<std::size_t>(n0), 0);
    top[i] = e;
    tops.insert(top);
  }
  std::set<IntVec> dom = downward_closure(tops);
  spec.in_domain = [dom](const IntVec& gr) {
    IntVec d(gr.size());
    for (std::size_t i = 0; i < gr.size(); ++i) d[i] = -gr[i];
    return dom.count(d) > 0;
  };
  spec.in_hull = [hull](const IntVec& gr) {
    IntVec d(gr.size());
    for (std::size_t i = 0; i < gr.size(); ++i) d[i] = -gr[i];
    return hull.count(d) > 0;
  };
  W.M = cyclic_quotient(spec);
  W.coords = [T](const LoopElement& x) { return truncated_coords(*T, x); };
  // restricted weight = lambda-bar - depth, in the restricted (orbit-sum) coordinates
  for (const auto& gr : W.M.grade) {
    Weight mu = W.lambda_bar;
    IntVec d(gr.size());
    for (std::size_t i = 0; i < gr.size(); ++i) d[i] = -gr[i];
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n0; ++j) mu[i] -= d[j] * ts.fd.folded_cartan[i][j] / ts.fd.kappa[i];
    W.restricted_weights.push_back(mu);
  }
  for (int b = 0; b < T->dim; ++b) W.twisted_ops.push_back(W.M.action[b]);
  for (int b = 0; b < T->dim; ++b) W.twisted_labels.push_back(T->labels[b]);
  check_twisted_relations(ts, W, m * 2);
  return W;
}

/// Direct presentation transported to the CRT basis: for an admissible support the
/// twisted truncation is isomorphic to the sum over a of g (x) C[s]/s^N, with
/// L^Gamma(n+) going onto n+ (x) A and L^Gamma(h) onto h (x) A.  The relations are
/// the twisted ones: L^Gamma(n+) w = 0, ev_chi on L^Gamma(h), and
/// (x_i^-(0) (x) 1)^{kappa_i c_i + 1} w = 0 for i in I_0.
inline TwistedModule build_local_weyl_twisted_direct(const TwistedSetup& ts, const XiFunction& chi, int depth,
                                                     std::string* transport_witness = nullptr) {
  if (!is_equivariant(chi, ts.aut)) throw std::invalid_argument("chi is not equivariant");
  TwistedModule W;
  W.direct = true;
  W.chi = chi;
  W.xi = chi_admissible(chi, ts.aut);
  W.tau = xi_weight(W.xi, ts.rs.rank);
  W.lambda_bar = wt0(chi, ts.aut, ts.fd);
  W.depth = depth;
  const ChevalleyAlgebra& g = ts.g;
  int n = g.n;
  int m = ts.aut.m;
  int n0 = ts.fd.rank0();
  std::vector<Scalar> points;
  std::vector<Weight> wts;
  for (const auto& [a, mu] : W.xi.entries) {
    points.push_back(a);
    wts.push_back(mu);
  }
  if (points.empty()) {
    points.push_back(Scalar(1));
    wts.push_back(Weight(static_cast<std::size_t>(n), 0));
  }
  auto C = std::make_shared<CrtLie>(crt_lie(g, points, depth));
  int P = static_cast<int>(points.size());
  W.coords = [C](const LoopElement& x) { return crt_coords(*C, x); };
  auto ev = [C, wts, &g](int b) -> Scalar {
    int l = b % C->depth;
    int x = (b / C->depth) % C->gdim;
    int a = b / (C->depth * C->gdim);
    if (l != 0 || !g.is_cartan(x)) return Scalar(0);
    return Scalar(wts[a][x - 2 * g.P]);
  };
  // the transport: positive twisted elements span n+ (x) A, and ev agrees with ev_chi
  std::string bad;
  {
    int K = m * (P * depth + 1);
    EchelonBasis pos;
    for (std::size_t r = 0; r < ts.gens.roots.size(); ++r)
      for (long k = -K; k <= K; ++k) {
        pos.insert(W.coords(loop_x(ts, static_cast<int>(r), 1, k)));
        if (ts.gens.roots[r].has_double && k % 2 != 0) pos.insert(W.coords(loop_x2(ts, static_cast<int>(r), 1, k)));
      }
    if (pos.rank() != static_cast<std::size_t>(g.P * P * depth)) bad = "L^Gamma(n+) does not map onto n+ (x) A";
    for (int i = 0; i < n0 && bad.empty(); ++i)
      for (long k = -K; k <= K; ++k) {
        Scalar v(0);
        for (const auto& [b, c] : W.coords(loop_h(ts, ts.gens.simple[i], k))) v += c * ev(b);
        if (v != ev_xi(chi, HMonomial{{{i, -k}}}, ts)) {
          bad = "transported evaluation differs from ev_chi";
          break;
        }
      }
  }
  if (transport_witness) *transport_witness = bad;
  EngineSpec spec;
  spec.lie = C;
  spec.ev = ev;
  std::vector<std::set<IntVec>> hull(static_cast<std::size_t>(P)), box(static_cast<std::size_t>(P));
  for (int a = 0; a < P; ++a) {
    hull[a] = weight_depths(g.rs, wts[a]);
    box[a] = downward_closure(hull[a]);
  }
  // the domain is the product of the per-point hulls together with everything below a
  // seed component; a seed component spreads e lowering steps over (point, orbit node)
  using Anchor = std::vector<IntVec>;
  std::vector<Anchor> anchors;
  for (int i = 0; i < n0; ++i) {
    int e = ts.fd.kappa[i] * W.lambda_bar[i] + 1;
    SparseVec f = W.coords(loop_x(ts, ts.gens.simple[i], -1, 0));
    spec.seeds.push_back(std::vector<SparseVec>(static_cast<std::size_t>(e), f));
    const IntVec& orbit = ts.fd.nodes.orbits[i];
    std::size_t slots = orbit.size() * static_cast<std::size_t>(P);
    Anchor an(static_cast<std::size_t>(P), IntVec(static_cast<std::size_t>(n), 0));
    std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
      if (j + 1 == slots) {
        an[j / orbit.size()][orbit[j % orbit.size()]] = left;
        anchors.push_back(an);
        an[j / orbit.size()][orbit[j % orbit.size()]] = 0;
        return;
      }
      for (int c = 0; c <= left; ++c) {
        an[j / orbit.size()][orbit[j % orbit.size()]] = c;
        rec(j + 1, left - c);
      }
      an[j / orbit.size()][orbit[j % orbit.size()]] = 0;
    };
    rec(0, e);
  }
  spec.in_domain = [C, box, anchors, P](const IntVec& gr) {
    std::vector<IntVec> d;
    bool in_box = true;
    for (int a = 0; a < P; ++a) {
      d.push_back(detail::crt_depth(*C, gr, a));
      if (!box[a].count(d.back())) in_box = false;
    }
    if (in_box) return true;
    for (const auto& an : anchors) {
      bool below = true;
      for (int a = 0; a < P && below; ++a)
        for (std::size_t k = 0; k < d[a].size(); ++k)
          if (d[a][k] > an[a][k]) {
            below = false;
            break;
          }
      if (below) return true;
    }
    return false;
  };
  spec.in_hull = [C, hull, P](const IntVec& gr) {
    for (int a = 0; a < P; ++a)
      if (!hull[a].count(detail::crt_depth(*C, gr, a))) return false;
    return true;
  };
  W.M = cyclic_quotient(spec);
  for (const auto& gr : W.M.grade) {
    Weight mu = W.tau;
    for (int a = 0; a < P; ++a) {
      Weight dw = g.rs.root_to_weight(detail::crt_depth(*C, gr, a));
      for (int i = 0; i < n; ++i) mu[i] -= dw[i];
    }
    W.restricted_weights.push_back(restrict_weight(ts.fd, mu));
  }
  collect_twisted_ops(ts, W, m * (P * depth + 1));
  check_twisted_relations(ts, W, m * 2);
  if (!bad.empty() && W.relations_ok) {
    W.relations_ok = false;
    W.relation_witness = bad;
  }
  return W;
}

/// Deepening for either construction.
template <class Build>
TwistedModule build_stable_twisted(Build build, int max_depth, StableResult* cert = nullptr) {
  StableResult sr;
  TwistedModule prev = build(1);
  sr.dims.push_back(prev.M.dim);
  for (int N = 2; N <= max_depth; ++N) {
    TwistedModule cur = build(N);
    sr.dims.push_back(cur.M.dim);
    if (cur.M.dim == prev.M.dim) {
      sr.depth = N - 1;
      sr.stabilized = true;
      if (cert) *cert = sr;
      return prev;
    }
    prev = std::move(cur);
  }
  if (cert) *cert = sr;
  throw std::runtime_error("depth did not stabilize up to " + std::to_string(max_depth));
}

inline std::size_t twisted_cyclic_dimension(const TwistedModule& W) {
  return generated_dimension(W.twisted_ops, hw_vector());
}

// ---- Garland series

using CommPoly = std::map<std::vector<int>, Rational>;  // exponents of h_1..h_J

struct GarlandSeries {
  int root = 0;
  int ell = 1;
  int J = 0;
  std::vector<CommPoly> p;
};

/// Coefficients of exp(-sum_k h_k u^k / k) up to u^J, h_k standing for h_alpha (x) t^{ell k}.
inline GarlandSeries garland_coeffs(int root, int ell, int J) {
  if (J < 0) throw std::invalid_argument("J must be nonnegative");
  GarlandSeries s;
  s.root = root;
  s.ell = ell;
  s.J = J;
  s.p.push_back(CommPoly{{std::vector<int>(static_cast<std::size_t>(J), 0), Rational(1)}});
  // n p_n = -sum_{k=1}^n h_k p_{n-k}
  for (int n = 1; n <= J; ++n) {
    CommPoly pn;
    for (int k = 1; k <= n; ++k)
      for (const auto& [e, c] : s.p[static_cast<std::size_t>(n - k)]) {
        auto ne = e;
        ne[static_cast<std::size_t>(k - 1)] += 1;
        pn[ne] -= c / n;
      }
    std::erase_if(pn, [](const auto& kv) { return kv.second == 0; });
    s.p.push_back(pn);
  }
  return s;
}

inline Scalar eval_comm(const CommPoly& p, const std::vector<Scalar>& vals) {
  Scalar tot(0);
  for (const auto& [e, c] : p) {
    Scalar t(c);
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k]) t *= vals[k].pow(e[k]);
    tot += t;
  }
  return tot;
}

inline int ell_for_root(const FoldedRootData& fd, int root0) {
  bool s = fd.r0_short[static_cast<std::size_t>(root0)];
  if (fd.type_a_even) return s ? 2 : 1;
  return s ? 1 : fd.m;
}

enum class GarlandVariant { standard, double_root };

struct GarlandResult {
  int root = 0;
  int r = 0;
  int ell = 1;
  GarlandVariant variant = GarlandVariant::standard;
  int lambda_h = 0;            // eigenvalue of the normalized h on w
  bool ok = false;             // the annihilation identity
  bool rearranged_ok = true;   // F_r w = -sum_{j<r} F_j p^{r-j} w when r = lambda(h)
  bool literal_sign_ok = true; // the same with the factor (-1)^r
  std::string witness;
};

/// [E^(r) F_0^(r+1) + (-1)^{r+1} sum_j F_j p^{r-j}] w = 0 in the module (divided powers), where
/// standard:    E = x+ (x) t^ell, F_j = kappa x- (x) t^{ell j}, H_k = kappa h (x) t^{ell k}
/// double_root: E = e2 (x) t^3,   F_j = f2 (x) t^{2j-1},       H_k = h2 (x) t^{2k}
inline GarlandResult verify_garland(const TwistedSetup& ts, const TwistedModule& W, int root0, int r,
                                    GarlandVariant variant) {
  GarlandResult res;
  res.root = root0;
  res.r = r;
  res.variant = variant;
  const TwistedRoot& tr = ts.gens.roots[static_cast<std::size_t>(root0)];
  Scalar kappa = tr.kappa;
  int ell = variant == GarlandVariant::standard ? ell_for_root(ts.fd, root0) : 2;
  res.ell = ell;
  auto E = [&]() {
    return variant == GarlandVariant::standard ? loop_x(ts, root0, 1, ell) : loop_x2(ts, root0, 1, 3);
  };
  auto F = [&](long j) {
    if (variant == GarlandVariant::standard) return loop_scale(loop_x(ts, root0, -1, ell * j), kappa);
    return loop_x2(ts, root0, -1, 2 * j - 1);
  };
  auto H = [&](long k) {
    if (variant == GarlandVariant::standard) return loop_scale(loop_h(ts, root0, ell * k), kappa);
    return LoopElement(tr.h2, 2 * k);
  };
  SparseVec w = hw_vector();
  auto eigen = [&](const LoopElement& h, Scalar& out) {
    SparseVec img = W.op(h).apply(w);
    if (img.empty()) {
      out = Scalar(0);
      return true;
    }
    if (img.size() != 1 || img[0].first != 0) return false;
    out = img[0].second;
    return true;
  };
  Scalar h0;
  if (!eigen(H(0), h0)) {
    res.witness = "w is not an eigenvector of h";
    return res;
  }
  res.lambda_h = static_cast<int>(h0.re().get_num().get_si());
  std::vector<Scalar> c;
  for (int k = 1; k <= r; ++k) {
    Scalar v;
    if (!eigen(H(k), v)) {
      res.witness = "w is not an eigenvector of h (x) t^" + std::to_string(k);
      return res;
    }
    c.push_back(v);
  }
  GarlandSeries p = garland_coeffs(root0, ell, r);
  SparseMat Em = W.op(E());
  SparseMat F0 = W.op(F(0));
  SparseVec v = w;
  for (int i = 0; i <= r; ++i) v = F0.apply(v);
  for (int i = 0; i < r; ++i) v = Em.apply(v);
  // divided powers E^(r) F^(r+1)
  Rational fact = 1;
  for (int i = 2; i <= r; ++i) fact *= i;
  for (int i = 2; i <= r + 1; ++i) fact *= i;
  v = sv_scale(v, Scalar(Rational(1) / fact));
  Scalar sign = (r + 1) % 2 == 0 ? Scalar(1) : Scalar(-1);
  SparseVec sum;
  std::vector<SparseVec> Fw;
  for (int j = 0; j <= r; ++j) {
    Fw.push_back(W.op(F(j)).apply(w));
    sv_axpy(sum, eval_comm(p.p[static_cast<std::size_t>(r - j)], c), Fw.back());
  }
  sv_axpy(v, sign, sum);
  res.ok = v.empty();
  if (!res.ok) {
    res.witness = "nonzero remainder with " + std::to_string(v.size()) + " terms, first on basis vector " +
                  std::to_string(v.front().first) + " (" + W.M.labels[static_cast<std::size_t>(v.front().first)] +
                  ") coefficient " + v.front().second.str();
  }
  if (r == res.lambda_h) {
    SparseVec rhs, lit;
    for (int j = 0; j < r; ++j) sv_axpy(rhs, -eval_comm(p.p[static_cast<std::size_t>(r - j)], c), Fw[j]);
    lit = sv_scale(rhs, r % 2 == 0 ? Scalar(-1) : Scalar(1));
    res.rearranged_ok = Fw[static_cast<std::size_t>(r)] == rhs;
    res.literal_sign_ok = Fw[static_cast<std::size_t>(r)] == lit;
  }
  return res;
}

// ---- embedding chain

struct EmbeddingCase {
  XiFunction chi;
  XiFunction xi;
  Weight tau;
  std::size_t twisted_dim = 0;     // W^Gamma-local(chi)
  std::size_t untwisted_dim = 0;   // W(tau) (x) C_xi
  std::size_t twisted_cyclic = 0;  // U(L^Gamma) w_tau
  std::size_t direct_dim = 0;      // direct presentation, when built
  bool direct_built = false;
  std::map<Weight, long> character;
  int depth = 0;
  bool relations_ok = false;
  std::string witness;
};

struct EmbeddingReport {
  Weight lambda_bar;
  std::vector<EmbeddingCase> cases;
  bool dims_equal = true;
  bool characters_equal = true;
  bool cyclic = true;
  bool direct_agrees = true;
  std::vector<std::size_t> fundamental_dims;  // dim W(omega_i), one point
  std::size_t rank_product = 0;               // prod_i dim W(omega_i)^{tau_i}
  bool rank_product_ok = true;
  bool ok = false;
};

/// dim of the local Weyl module W(omega_i) at a single point (the point is irrelevant).
inline std::size_t fundamental_local_dim(const ChevalleyAlgebra& g, int i, int max_depth) {
  XiFunction x;
  Weight w(static_cast<std::size_t>(g.n), 0);
  w[static_cast<std::size_t>(i)] = 1;
  x.add(Scalar(1), w);
  return static_cast<std::size_t>(build_stable_untwisted(g, x, max_depth).M.dim);
}

inline EmbeddingReport verify_embedding_chain(const TwistedSetup& ts, const Weight& lambda_bar,
                                              const std::vector<XiFunction>& chis, int max_depth,
                                              bool with_direct = false) {
  EmbeddingReport rep;
  rep.lambda_bar = lambda_bar;
  rep.cases.resize(chis.size());
  parallel_for(chis.size(), [&](std::size_t i) {
    EmbeddingCase& c = rep.cases[i];
    c.chi = chis[i];
    if (wt0(c.chi, ts.aut, ts.fd) != lambda_bar) throw std::invalid_argument("chi has the wrong weight");
    StableResult sr;
    TwistedModule W = build_stable_twisted(
        [&](int N) { return build_local_weyl_twisted(ts, c.chi, N); }, max_depth, &sr);
    c.depth = sr.depth;
    c.xi = W.xi;
    c.tau = W.tau;
    c.twisted_dim = static_cast<std::size_t>(W.M.dim);
    StableResult su;
    LocalWeyl U = build_stable_untwisted(ts.g, W.xi, max_depth, &su);
    c.untwisted_dim = static_cast<std::size_t>(U.M.dim);
    c.twisted_cyclic = twisted_cyclic_dimension(W);
    c.character = character_g0(W);
    c.relations_ok = W.relations_ok && U.relations_ok && W.M.hull_ok;
    c.witness = W.relation_witness;
    if (with_direct) {
      TwistedModule D = build_stable_twisted(
          [&](int N) { return build_local_weyl_twisted_direct(ts, c.chi, N); }, max_depth);
      c.direct_built = true;
      c.direct_dim = static_cast<std::size_t>(D.M.dim);
    }
  });
  for (int i = 0; i < ts.g.n; ++i) rep.fundamental_dims.push_back(fundamental_local_dim(ts.g, i, max_depth));
  for (std::size_t q = 0; q < rep.cases.size(); ++q) {
    std::size_t prod = 1;
    for (int i = 0; i < ts.g.n; ++i)
      for (long k = 0; k < rep.cases[q].tau[static_cast<std::size_t>(i)]; ++k) prod *= rep.fundamental_dims[i];
    if (q == 0) rep.rank_product = prod;
    if (rep.cases[q].untwisted_dim != prod) rep.rank_product_ok = false;
  }
  for (const auto& c : rep.cases) {
    if (c.twisted_dim != rep.cases.front().twisted_dim) rep.dims_equal = false;
    if (c.twisted_dim != c.untwisted_dim) rep.dims_equal = false;
    if (c.character != rep.cases.front().character) rep.characters_equal = false;
    if (c.twisted_cyclic != c.twisted_dim) rep.cyclic = false;
    if (c.direct_built && (c.direct_dim != c.twisted_dim)) rep.direct_agrees = false;
  }
  rep.ok = rep.dims_equal && rep.characters_equal && rep.cyclic && rep.direct_agrees && rep.rank_product_ok &&
           std::all_of(rep.cases.begin(), rep.cases.end(), [](const EmbeddingCase& c) { return c.relations_ok; });
  return rep;
}

/// Distinct equivariant functions of restricted weight lambda-bar.  Each unit of
/// c_i is placed at one of `points` (assumed in distinct orbits) on one node of the
/// orbit of i; assignments are enumerated in mixed radix and symmetrized.
inline std::vector<XiFunction> sample_chis(const TwistedSetup& ts, const Weight& lambda_bar, std::size_t count,
                                           const std::vector<Scalar>& points) {
  int n = ts.rs.rank;
  int m = ts.aut.m;
  std::vector<int> units;
  for (std::size_t i = 0; i < lambda_bar.size(); ++i)
    for (int k = 0; k < lambda_bar[i]; ++k) units.push_back(static_cast<int>(i));
  std::vector<XiFunction> out;
  std::size_t radix = points.size() * static_cast<std::size_t>(m);
  std::size_t total = 1;
  for (std::size_t u = 0; u < units.size(); ++u) total *= radix;
  for (std::size_t code = 0; code < total && out.size() < count; ++code) {
    std::map<std::size_t, Weight> at;
    std::size_t c = code;
    for (int i : units) {
      std::size_t digit = c % radix;
      c /= radix;
      std::size_t pi = digit % points.size();
      int shift = static_cast<int>(digit / points.size());
      int node = ts.aut.apply(ts.fd.nodes.reps[i], shift);
      auto& w = at.try_emplace(pi, Weight(static_cast<std::size_t>(n), 0)).first->second;
      w[node] += 1;
    }
    XiFunction xi;
    xi.m = m;
    for (const auto& [pi, w] : at) xi.add(points[pi], w);
    XiFunction chi = symmetrize(xi, ts.aut);
    if (std::none_of(out.begin(), out.end(), [&](const XiFunction& o) { return o == chi; })) out.push_back(chi);
  }
  return out;
}

struct PullbackCheck {
  int node = 0;
  std::size_t dim_a = 0, dim_za = 0;
  bool characters_match = false;
  bool ok = false;
};

/// W(omega_i) at a against W(omega_sigma(i)) at z a: equal dimension, and the
/// characters differ by sigma.
inline PullbackCheck verify_pullback(const TwistedSetup& ts, int node, const Scalar& a, int max_depth) {
  PullbackCheck pc;
  pc.node = node;
  int n = ts.rs.rank;
  int m = ts.aut.m;
  Weight w1(static_cast<std::size_t>(n), 0), w2(static_cast<std::size_t>(n), 0);
  w1[node] = 1;
  w2[ts.aut.apply(node, 1)] = 1;
  XiFunction x1, x2;
  x1.m = x2.m = m;
  x1.add(a, w1);
  x2.add(a * Scalar::zeta(m), w2);
  LocalWeyl A = build_stable_untwisted(ts.g, x1, max_depth);
  LocalWeyl B = build_stable_untwisted(ts.g, x2, max_depth);
  pc.dim_a = static_cast<std::size_t>(A.M.dim);
  pc.dim_za = static_cast<std::size_t>(B.M.dim);
  std::map<Weight, long> ca;
  for (const auto& [w, c] : character_g(A)) ca[act_weight(ts.aut, w, 1)] += c;
  pc.characters_match = ca == character_g(B);
  pc.ok = pc.dim_a == pc.dim_za && pc.characters_match;
  return pc;
}

// ---- JSON

inline nlohmann::json module_summary(const TwistedModule& W) {
  nlohmann::json j;
  j["dim"] = W.M.dim;
  j["chi"] = xi_to_json(W.chi);
  j["xi"] = xi_to_json(W.xi);
  j["tau"] = W.tau;
  j["lambda_bar"] = W.lambda_bar;
  j["depth"] = W.depth;
  j["construction"] = W.direct ? "direct" : "restriction";
  nlohmann::json ch = nlohmann::json::array();
  for (const auto& [w, c] : character_g0(W)) ch.push_back({{"weight", w}, {"mult", c}});
  j["character_g0"] = ch;
  j["relations_ok"] = W.relations_ok;
  if (!W.relations_ok) j["relation_witness"] = W.relation_witness;
  j["hull_ok"] = W.M.hull_ok;
  j["twisted_cyclic_dim"] = twisted_cyclic_dimension(W);
  j["pbw_monomials"] = W.M.monomials;
  j["relation_rank"] = W.M.relation_rank;
  return j;
}

inline nlohmann::json action_dump(const HWModule& M) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t x = 0; x < M.action.size(); ++x) {
    nlohmann::json trip = nlohmann::json::array();
    for (int c = 0; c < M.dim; ++c)
      for (const auto& [r, v] : M.action[x].col[static_cast<std::size_t>(c)]) trip.push_back({r, c, v.str()});
    j.push_back({{"element", M.lie->labels[x]}, {"entries", trip}});
  }
  return j;
}

}  // namespace twloop

#endif
