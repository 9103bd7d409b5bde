#ifndef TWLOOP_SUITES_HPP
#define TWLOOP_SUITES_HPP

// Verification suites shared by the command-line tool and the acceptance runner.
// Every suite returns a JSON report plus a pass flag; nothing here reads clocks,
// so reports are byte-stable.

#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "twloop/fold.hpp"
#include "twloop/hwalg.hpp"
#include "twloop/weylmod.hpp"
#include "twloop/xi.hpp"

namespace twloop {

struct SuiteResult {
  bool pass = true;
  nlohmann::json report;
};

inline std::string perm_string(const IntVec& perm) {
  std::string s;
  for (std::size_t i = 0; i < perm.size(); ++i) s += (i ? "," : "") + std::to_string(perm[i] + 1);
  return s;
}

inline IntVec identity_perm(int n) {
  IntVec p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

// ---- folding

inline SuiteResult fold_suite(const TwistedSetup& ts) {
  SuiteResult r;
  nlohmann::json& j = r.report;
  j["type"] = std::string(1, ts.rs.type) + std::to_string(ts.rs.rank);
  j["perm"] = perm_string(ts.aut.perm);
  j["folded"] = folded_to_json(ts.fd);
  nlohmann::json dims = nlohmann::json::array();
  for (int s = 0; s < ts.aut.m; ++s) dims.push_back(ts.pieces.dim(s));
  j["graded_dims"] = dims;
  // make_setup already refuses to continue when the two Cartan matrices differ
  IntMat comb = folded_cartan_combinatorial(ts.rs, ts.fd.nodes);
  j["cartan_rootdata"] = comb;
  j["cartan_generators"] = ts.gens.folded_cartan;
  j["cartan_agree"] = comb == ts.gens.folded_cartan;
  r.pass = comb == ts.gens.folded_cartan;
  return r;
}

// ---- algebra integrity

inline SuiteResult jacobi_suite(const TwistedSetup& ts) {
  SuiteResult r;
  nlohmann::json& j = r.report;
  j["type"] = std::string(1, ts.rs.type) + std::to_string(ts.rs.rank);
  j["perm"] = perm_string(ts.aut.perm);
  j["dim"] = ts.g.dim();
  std::string w;
  bool jac = check_jacobi(ts.g, &w);
  j["jacobi"] = jac;
  if (!jac) j["jacobi_witness"] = w;
  w.clear();
  bool aut = check_automorphism(ts.g, ts.lift, &w);
  j["automorphism"] = aut;
  if (!aut) j["automorphism_witness"] = w;
  bool gr = check_grading(ts.g, ts.lift, ts.pieces);
  j["grading"] = gr;
  j["order"] = ts.aut.m;
  r.pass = jac && aut && gr;
  return r;
}

// ---- random equivariant functions

inline std::vector<Scalar> point_pool(int m) {
  std::vector<Scalar> out;
  for (long v : {2L, 3L, -3L, 5L, 7L, -11L}) out.push_back(Scalar(m, Rational(v)));
  if (m == 3) {
    out.push_back(Scalar(3, Rational(1), Rational(2)));
    out.push_back(Scalar(3, Rational(-2), Rational(5)));
  }
  return out;
}

/// symmetrize of a random function with up to `maxpts` points and entries in [0, maxc].
inline XiFunction random_equivariant(const TwistedSetup& ts, std::mt19937_64& rng, int maxpts, int maxc) {
  int m = ts.aut.m;
  int n = ts.rs.rank;
  auto pool = point_pool(m);
  XiFunction xi(m);
  int npts = std::uniform_int_distribution<int>(0, maxpts)(rng);
  for (int p = 0; p < npts; ++p) {
    Scalar a = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    a = a * Scalar::zeta(m).pow(std::uniform_int_distribution<int>(0, m - 1)(rng));
    Weight w(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) w[i] = std::uniform_int_distribution<int>(0, maxc)(rng);
    xi.add(a, w);
  }
  return symmetrize(xi, ts.aut);
}

inline HMonomial random_hmonomial(const TwistedSetup& ts, std::mt19937_64& rng) {
  HMonomial mono;
  int len = std::uniform_int_distribution<int>(0, 3)(rng);
  for (int f = 0; f < len; ++f)
    mono.factors.emplace_back(std::uniform_int_distribution<int>(0, ts.fd.rank0() - 1)(rng),
                              std::uniform_int_distribution<long>(-4, 4)(rng));
  mono.normalize();
  return mono;
}

inline nlohmann::json hmonomial_json(const HMonomial& m) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [i, k] : m.factors) j.push_back({i + 1, k});
  return j;
}

// ---- highest-weight algebra

struct HwalgOptions {
  int pairs = 100;
  int functions = 100;
  int bound = 2;       // exponent bound for the spanning family
  int iota_bound = 2;  // truncation for the brute-force image
  std::uint64_t seed = 1;
};

inline SuiteResult hwalg_suite(const TwistedSetup& ts, const HwalgOptions& opt) {
  SuiteResult r;
  nlohmann::json& j = r.report;
  j["type"] = std::string(1, ts.rs.type) + std::to_string(ts.rs.rank);
  j["perm"] = perm_string(ts.aut.perm);
  std::mt19937_64 rng(opt.seed);

  // commuting diagram: ev_{alpha^{-1}(f)}(mono) = ev_f(tau(mono))
  {
    int bad = 0;
    nlohmann::json first;
    for (int t = 0; t < opt.pairs; ++t) {
      XiFunction chi = random_equivariant(ts, rng, 2, 2);
      OrbitMultiset fh = alpha_iso(chi, ts.aut, ts.fd);
      HWAlgebra A(ts.fd, fh.weight());
      HMonomial mono = random_hmonomial(ts, rng);
      Scalar lhs = ev_xi(alpha_inv(fh, ts.aut, ts.fd), mono, ts);
      Scalar rhs = ev_multiset(fh, tau_image(A, mono));
      if (lhs != rhs) {
        if (!bad)
          first = {{"chi", xi_to_json(chi)}, {"mono", hmonomial_json(mono)}, {"lhs", lhs.str()}, {"rhs", rhs.str()}};
        ++bad;
      }
    }
    j["commdiag"] = {{"pairs", opt.pairs}, {"failures", bad}};
    if (bad) j["commdiag"]["witness"] = first;
    r.pass = r.pass && bad == 0;
  }

  // alpha roundtrip and wt0 = wt(alpha)
  {
    int bad_round = 0, bad_weight = 0;
    nlohmann::json first;
    for (int t = 0; t < opt.functions; ++t) {
      XiFunction chi = random_equivariant(ts, rng, 3, 2);
      OrbitMultiset fh = alpha_iso(chi, ts.aut, ts.fd);
      bool round = alpha_inv(fh, ts.aut, ts.fd) == chi;
      bool weight = wt0(chi, ts.aut, ts.fd) == fh.weight();
      if (!round) ++bad_round;
      if (!weight) ++bad_weight;
      if ((!round || !weight) && first.is_null()) first = xi_to_json(chi);
    }
    j["alpha"] = {{"functions", opt.functions}, {"roundtrip_failures", bad_round}, {"weight_zero_failures", bad_weight}};
    if (!first.is_null()) j["alpha"]["witness"] = first;
    r.pass = r.pass && bad_round == 0 && bad_weight == 0;
  }

  // spanning family at lambda(h_i) <= 2
  {
    nlohmann::json arr = nlohmann::json::array();
    int n0 = ts.fd.rank0();
    std::vector<Weight> lams;
    for (int i = 0; i < n0; ++i)
      for (int c = 1; c <= 2; ++c) {
        Weight w(static_cast<std::size_t>(n0), 0);
        w[i] = c;
        lams.push_back(w);
      }
    if (n0 > 1) lams.push_back(Weight(static_cast<std::size_t>(n0), 1));
    for (const auto& lam : lams) {
      HWAlgebra A(ts.fd, lam);
      SpanningReport sp = basis_spanning_check(A, opt.bound);
      nlohmann::json e = {{"lambda", lam},        {"bound", sp.bound},           {"family", sp.family_size},
                          {"rank", sp.rank},      {"independent", sp.independent}, {"reduction_ok", sp.reduction_ok}};
      if (!sp.witness.empty()) e["witness"] = sp.witness;
      arr.push_back(e);
      r.pass = r.pass && sp.independent && sp.reduction_ok;
    }
    j["spanning"] = arr;
  }

  // iota criterion against the truncated image
  {
    nlohmann::json arr = nlohmann::json::array();
    int n = ts.rs.rank;
    std::vector<Weight> lams;
    for (int i = 0; i < n; ++i) {
      Weight w(static_cast<std::size_t>(n), 0);
      w[i] = 1;
      lams.push_back(w);
      for (int k = i; k < n; ++k) {
        Weight v = w;
        v[k] += 1;
        lams.push_back(v);
      }
    }
    for (const auto& lam : lams) {
      IotaData d = embed_iota(lam, ts.aut, ts.fd);
      bool all = true;
      nlohmann::json ranks = nlohmann::json::array();
      for (int B = 1; B <= opt.iota_bound; ++B) {
        IotaCheck c = iota_brute_force(d, ts.fd, B);
        ranks.push_back({{"bound", B}, {"image_rank", c.image_rank}, {"target_dim", c.target_dim}});
        all = all && c.brute_surjective;
      }
      arr.push_back({{"lambda", lam}, {"criterion", d.surjective}, {"brute_force", all}, {"ranks", ranks}});
      r.pass = r.pass && all == d.surjective;
    }
    j["iota"] = arr;
  }

  // iota followed by untwisted evaluation equals ev of the symmetrized function
  {
    int bad = 0, trials = 0;
    nlohmann::json first;
    int n = ts.rs.rank;
    for (int t = 0; t < opt.pairs / 4 + 1; ++t) {
      // an admissible untwisted function: points in distinct orbits
      auto pool = point_pool(ts.aut.m);
      XiFunction xi(ts.aut.m);
      int npts = std::uniform_int_distribution<int>(1, 2)(rng);
      std::vector<Scalar> used;
      for (int p = 0; p < npts; ++p) {
        Scalar a = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        bool clash = std::any_of(used.begin(), used.end(), [&](const Scalar& b) {
          return orbit_min(ts.aut.m, a) == orbit_min(ts.aut.m, b);
        });
        if (clash) continue;
        used.push_back(a);
        Weight w(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) w[i] = std::uniform_int_distribution<int>(0, 1)(rng);
        xi.add(a, w);
      }
      Weight lam = xi_weight(xi, n);
      IotaData d = embed_iota(lam, ts.aut, ts.fd);
      HWAlgebra A(ts.fd, d.lambda_bar);
      OrbitMultiset ux;
      ux.m = ts.aut.m;
      ux.f.assign(static_cast<std::size_t>(n), {});
      for (const auto& [a, mu] : xi.entries)
        for (int i = 0; i < n; ++i) ux.add(i, a, 1, mu[i]);
      XiFunction sx = symmetrize(xi, ts.aut);
      for (int s = 0; s < 4; ++s) {
        HMonomial mono = random_hmonomial(ts, rng);
        Scalar lhs = ev_multiset(ux, iota_apply(d, tau_image(A, mono)));
        Scalar rhs = ev_xi(sx, mono, ts);
        ++trials;
        if (lhs != rhs) {
          if (!bad)
            first = {{"xi", xi_to_json(xi)}, {"mono", hmonomial_json(mono)}, {"lhs", lhs.str()}, {"rhs", rhs.str()}};
          ++bad;
        }
      }
    }
    j["iota_evaluation"] = {{"trials", trials}, {"failures", bad}};
    if (bad) j["iota_evaluation"]["witness"] = first;
    r.pass = r.pass && bad == 0;
  }
  j["pass"] = r.pass;
  return r;
}

// ---- Garland

struct GarlandOptions {
  int samples = 2;
  int max_depth = 5;
  int margin = 2;  // r runs over 0..lambda(h_alpha)+margin
};

inline nlohmann::json garland_json(const GarlandResult& g) {
  nlohmann::json j = {{"root", g.root},
                      {"r", g.r},
                      {"ell", g.ell},
                      {"variant", g.variant == GarlandVariant::standard ? "standard" : "double_root"},
                      {"lambda_h", g.lambda_h},
                      {"ok", g.ok}};
  if (g.r == g.lambda_h) {
    j["rearranged_ok"] = g.rearranged_ok;
    j["literal_sign_ok"] = g.literal_sign_ok;
  }
  if (!g.witness.empty()) j["witness"] = g.witness;
  return j;
}

/// All roots of R_0^+ on one constructed module.
inline SuiteResult garland_module(const TwistedSetup& ts, const TwistedModule& W, int margin) {
  SuiteResult r;
  nlohmann::json checks = nlohmann::json::array();
  int total = 0, failed = 0;
  for (int root = 0; root < static_cast<int>(ts.gens.roots.size()); ++root) {
    GarlandResult top = verify_garland(ts, W, root, 0, GarlandVariant::standard);
    int rmax = top.lambda_h + margin;
    for (int rr = 0; rr <= rmax; ++rr) {
      GarlandResult g = verify_garland(ts, W, root, rr, GarlandVariant::standard);
      ++total;
      if (!g.ok || !g.rearranged_ok) ++failed;
      if (!g.ok || rr == g.lambda_h) checks.push_back(garland_json(g));
    }
    if (ts.gens.roots[static_cast<std::size_t>(root)].has_double) {
      GarlandResult t2 = verify_garland(ts, W, root, 0, GarlandVariant::double_root);
      for (int rr = 0; rr <= t2.lambda_h + margin; ++rr) {
        GarlandResult g = verify_garland(ts, W, root, rr, GarlandVariant::double_root);
        ++total;
        if (!g.ok || !g.rearranged_ok) ++failed;
        if (!g.ok || rr == g.lambda_h) checks.push_back(garland_json(g));
      }
    }
  }
  r.pass = failed == 0;
  r.report = {{"checks", total}, {"failures", failed}, {"details", checks}};
  return r;
}

inline SuiteResult garland_suite(const TwistedSetup& ts, const Weight& lambda_bar, const GarlandOptions& opt) {
  SuiteResult r;
  nlohmann::json& j = r.report;
  j["type"] = std::string(1, ts.rs.type) + std::to_string(ts.rs.rank);
  j["perm"] = perm_string(ts.aut.perm);
  j["lambda_bar"] = lambda_bar;
  GarlandSeries p = garland_coeffs(0, 1, 4);
  bool p0 = p.p[0].size() == 1 && p.p[0].begin()->second == 1 &&
            std::all_of(p.p[0].begin()->first.begin(), p.p[0].begin()->first.end(), [](int e) { return e == 0; });
  j["p0_is_one"] = p0;
  r.pass = p0;
  nlohmann::json ell = nlohmann::json::array();
  for (int root = 0; root < static_cast<int>(ts.gens.roots.size()); ++root)
    ell.push_back({{"root", ts.gens.roots[static_cast<std::size_t>(root)].root0},
                   {"short", static_cast<bool>(ts.fd.r0_short[static_cast<std::size_t>(root)])},
                   {"ell", ell_for_root(ts.fd, root)}});
  j["ell"] = ell;
  auto chis = sample_chis(ts, lambda_bar, static_cast<std::size_t>(opt.samples), point_pool(ts.aut.m));
  nlohmann::json mods = nlohmann::json::array();
  for (const auto& chi : chis) {
    TwistedModule W = build_stable_twisted([&](int N) { return build_local_weyl_twisted(ts, chi, N); }, opt.max_depth);
    SuiteResult g = garland_module(ts, W, opt.margin);
    g.report["chi"] = xi_to_json(chi);
    g.report["dim"] = W.M.dim;
    mods.push_back(g.report);
    r.pass = r.pass && g.pass;
  }
  j["modules"] = mods;
  j["pass"] = r.pass;
  return r;
}

// ---- embedding chain

struct EmbeddingOptions {
  int samples = 3;
  int max_depth = 5;
  bool direct = true;
};

inline nlohmann::json character_json(const std::map<Weight, long>& ch) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [w, c] : ch) a.push_back({{"weight", w}, {"mult", c}});
  return a;
}

inline SuiteResult embedding_suite(const TwistedSetup& ts, const Weight& lambda_bar, const EmbeddingOptions& opt) {
  SuiteResult r;
  nlohmann::json& j = r.report;
  j["type"] = std::string(1, ts.rs.type) + std::to_string(ts.rs.rank);
  j["perm"] = perm_string(ts.aut.perm);
  j["lambda_bar"] = lambda_bar;
  auto chis = sample_chis(ts, lambda_bar, static_cast<std::size_t>(opt.samples), point_pool(ts.aut.m));
  EmbeddingReport rep = verify_embedding_chain(ts, lambda_bar, chis, opt.max_depth, opt.direct);
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : rep.cases) {
    nlohmann::json e = {{"chi", xi_to_json(c.chi)},
                        {"xi", xi_to_json(c.xi)},
                        {"tau", c.tau},
                        {"depth", c.depth},
                        {"twisted_dim", c.twisted_dim},
                        {"untwisted_dim", c.untwisted_dim},
                        {"twisted_cyclic_dim", c.twisted_cyclic},
                        {"character_g0", character_json(c.character)},
                        {"relations_ok", c.relations_ok}};
    if (c.direct_built) e["direct_dim"] = c.direct_dim;
    if (!c.witness.empty()) e["witness"] = c.witness;
    cases.push_back(e);
  }
  j["cases"] = cases;
  j["samples_requested"] = opt.samples;
  j["distinct_chi"] = rep.cases.size();
  j["dims_equal"] = rep.dims_equal;
  j["characters_equal"] = rep.characters_equal;
  j["twisted_cyclic"] = rep.cyclic;
  j["direct_agrees"] = rep.direct_agrees;
  j["fundamental_dims"] = rep.fundamental_dims;
  j["rank_product"] = rep.rank_product;
  j["rank_product_ok"] = rep.rank_product_ok;
  r.pass = rep.ok;
  j["pass"] = r.pass;
  return r;
}

/// dim W(omega_i) at a equals dim W(omega_sigma(i)) at zeta a, characters moved by sigma.
inline SuiteResult pullback_suite(const TwistedSetup& ts, int max_depth) {
  SuiteResult r;
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < ts.rs.rank; ++i) {
    PullbackCheck pc = verify_pullback(ts, i, Scalar(ts.aut.m, Rational(2)), max_depth);
    arr.push_back({{"node", i + 1},
                   {"image", ts.aut.apply(i, 1) + 1},
                   {"dim_a", pc.dim_a},
                   {"dim_zeta_a", pc.dim_za},
                   {"characters_match", pc.characters_match}});
    r.pass = r.pass && pc.ok;
  }
  r.report = {{"type", std::string(1, ts.rs.type) + std::to_string(ts.rs.rank)},
              {"perm", perm_string(ts.aut.perm)},
              {"pullback", arr},
              {"pass", r.pass}};
  return r;
}

}  // namespace twloop

#endif
