#include <gtest/gtest.h>

#include <random>

#include <twloop/weylmod.hpp>

using namespace twloop;

namespace {

Weight unit(int n, int i, int c = 1) {
  Weight w(static_cast<std::size_t>(n), 0);
  w[static_cast<std::size_t>(i)] = c;
  return w;
}

XiFunction single(int m, const Scalar& a, const Weight& w) {
  XiFunction x(m);
  x.add(a, w);
  return x;
}

// Weyl dimension formula for sl3
long weyl_dim_sl3(int a, int b) { return static_cast<long>(a + 1) * (b + 1) * (a + b + 2) / 2; }

SparseVec act_word(const HWModule& M, const std::vector<int>& word, SparseVec v) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = M.action[static_cast<std::size_t>(*it)].apply(v);
  return v;
}

SparseVec act_pbw(const HWModule& M, const PBWVec& nf, const SparseVec& v) {
  SparseVec out;
  for (const auto& [mono, c] : nf) sv_axpy(out, c, act_word(M, mono, v));
  return out;
}

const TwistedSetup& a2() {
  static TwistedSetup ts = make_setup('A', 2, parse_perm("2,1"));
  return ts;
}
const TwistedSetup& a3() {
  static TwistedSetup ts = make_setup('A', 3, parse_perm("3,2,1"));
  return ts;
}

}  // namespace

// ---- PBW

TEST(Pbw, SortedWordIsFixed) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 1));
  CrtLie C = crt_lie(g, {Scalar(2)}, 1);
  auto pos = pbw_positions(C);
  std::vector<int> w = {0, 1, 2};
  std::sort(w.begin(), w.end(), [&](int x, int y) { return pos[x] < pos[y]; });
  PBWVec nf = pbw_straighten(w, C);
  ASSERT_EQ(nf.size(), 1u);
  EXPECT_EQ(nf.begin()->first, w);
}

TEST(Pbw, Sl2Swap) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 1));
  CrtLie C = crt_lie(g, {Scalar(2)}, 1);
  int e = C.index(0, g.xp(0), 0), f = C.index(0, g.xm(0), 0), h = C.index(0, g.hh(0), 0);
  PBWVec nf = pbw_straighten({e, f}, C);
  PBWVec want{{{f, e}, Scalar(1)}, {{h}, Scalar(1)}};
  EXPECT_EQ(nf, want);
}

TEST(PbwProperty, ConfluenceAndActionEquality) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 2));
  LocalWeyl W = evaluation_module(g, {1, 1}, Scalar(3));
  ASSERT_EQ(W.M.dim, 8);
  const FinLie& L = *W.M.lie;
  std::mt19937_64 rng(51);
  for (int t = 0; t < 60; ++t) {
    std::vector<int> word;
    for (int k = 0; k < 4; ++k) word.push_back(static_cast<int>(rng() % static_cast<unsigned>(L.dim)));
    PBWVec a = pbw_straighten(word, L, Schedule::first_inversion);
    PBWVec b = pbw_straighten(word, L, Schedule::last_inversion);
    ASSERT_EQ(a, b);
    SparseVec v;
    for (int i = 0; i < W.M.dim; ++i) v.emplace_back(i, Scalar(static_cast<long>(rng() % 7) - 3));
    sv_clean(v);
    ASSERT_EQ(act_pbw(W.M, a, v), act_word(W.M, word, v));
  }
}

// ---- untwisted local Weyl modules

TEST(LocalWeyl, Sl2Dimensions) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 1));
  // oracle: product formula, dim W(omega) = 2 for each fundamental factor
  std::size_t fund = fundamental_local_dim(g, 0, 4);
  EXPECT_EQ(fund, 2u);
  for (int m = 1; m <= 3; ++m) {
    StableResult cert;
    LocalWeyl W = build_stable_untwisted(g, single(1, Scalar(2), {m}), 6, &cert);
    std::size_t want = 1;
    for (int k = 0; k < m; ++k) want *= fund;
    EXPECT_EQ(static_cast<std::size_t>(W.M.dim), want) << m;
    EXPECT_TRUE(cert.stabilized);
    EXPECT_EQ(cert.dims[static_cast<std::size_t>(cert.depth)], cert.dims[static_cast<std::size_t>(cert.depth) - 1]);
    EXPECT_TRUE(W.relations_ok) << W.relation_witness;
    std::string w;
    EXPECT_TRUE(check_bracket_relations(W.M, &w)) << w;
  }
}

TEST(LocalWeyl, Sl3Fundamentals) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 2));
  for (int i = 0; i < 2; ++i) {
    LocalWeyl W = build_stable_untwisted(g, single(1, Scalar(5), unit(2, i)), 4);
    EXPECT_EQ(W.M.dim, 3);
  }
  // two points: the product of the local pieces
  XiFunction x(1);
  x.add(Scalar(2), {1, 0});
  x.add(Scalar(3), {0, 1});
  EXPECT_EQ(build_stable_untwisted(g, x, 4).M.dim, 9);
}

TEST(LocalWeyl, TrivialWeight) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 2));
  LocalWeyl W = build_local_weyl_untwisted(g, XiFunction(1), 1);
  EXPECT_EQ(W.M.dim, 1);
  EXPECT_EQ(character_g(W), (std::map<Weight, long>{{{0, 0}, 1}}));
}

TEST(LocalWeyl, StabilizationCanFail) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 1));
  StableResult cert;
  EXPECT_THROW(build_stable_untwisted(g, single(1, Scalar(2), {3}), 1, &cert), std::runtime_error);
  EXPECT_FALSE(cert.stabilized);
}

// ---- evaluation modules and tensor products

TEST(Evaluation, Dimensions) {
  ChevalleyAlgebra sl2 = build_chevalley(build_root_system('A', 1));
  EXPECT_EQ(evaluation_module(sl2, {1}, Scalar(4)).M.dim, 2);
  ChevalleyAlgebra sl3 = build_chevalley(build_root_system('A', 2));
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, 0}, {2, 1}})
    EXPECT_EQ(evaluation_module(sl3, {a, b}, Scalar(3)).M.dim, weyl_dim_sl3(a, b));
  EXPECT_THROW(evaluation_module(sl2, {1}, Scalar(0)), std::invalid_argument);
}

TEST(Evaluation, LoopVariableActsByPoint) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 2));
  Scalar a(3);
  LocalWeyl W = evaluation_module(g, {1, 1}, a);
  for (int b = g.P; b < 2 * g.P; ++b) {
    GVec x{{b, Scalar(1)}};
    SparseVec v0 = W.M.op(crt_coords(*W.crt, LoopElement(x, 0))).apply(hw_vector());
    for (long k : {1L, 2L, -1L}) {
      SparseVec vk = W.M.op(crt_coords(*W.crt, LoopElement(x, k))).apply(hw_vector());
      EXPECT_EQ(vk, sv_scale(v0, a.pow(k)));
    }
  }
}

TEST(Evaluation, Characters) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 1));
  EXPECT_EQ(character_g(evaluation_module(g, {1}, Scalar(2))), (std::map<Weight, long>{{{1}, 1}, {{-1}, 1}}));
}

TEST(Tensor, DistinctPointsAreCyclic) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 1));
  std::vector<Scalar> pts{Scalar(2), Scalar(3)};
  LocalWeyl A = evaluation_module_on(g, pts, 0, {1});
  LocalWeyl B = evaluation_module_on(g, pts, 1, {1});
  HWModule T = tensor_modules({&A.M, &B.M});
  EXPECT_EQ(T.dim, 4);
  EXPECT_EQ(generated_submodule(T, hw_vector()), 4u);
  std::string w;
  EXPECT_TRUE(check_bracket_relations(T, &w)) << w;
  LocalWeyl lone = evaluation_module(g, {1}, Scalar(2));
  EXPECT_THROW(tensor_modules({&A.M, &lone.M}), std::invalid_argument);
}

TEST(Tensor, SamePointIsNotCyclic) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 1));
  LocalWeyl A = evaluation_module(g, {1}, Scalar(2));
  HWModule T = tensor_modules({&A.M, &A.M});
  EXPECT_EQ(T.dim, 4);
  EXPECT_EQ(generated_submodule(T, hw_vector()), 3u);
}

TEST(Tensor, TrivialFactorAndCharacters) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 2));
  std::vector<Scalar> pts{Scalar(2), Scalar(-5)};
  LocalWeyl A = evaluation_module_on(g, pts, 0, {1, 0});
  LocalWeyl B = evaluation_module_on(g, pts, 1, {0, 1});
  LocalWeyl Z = evaluation_module_on(g, pts, 1, {0, 0});
  ASSERT_EQ(Z.M.dim, 1);
  HWModule AZ = tensor_modules({&A.M, &Z.M});
  EXPECT_EQ(AZ.action, A.M.action);
  HWModule T = tensor_modules({&A.M, &B.M});
  // character of the tensor from the grading of its basis
  std::map<IntVec, long> ct, want;
  for (const auto& gr : T.grade) ++ct[gr];
  for (const auto& x : A.M.grade)
    for (const auto& y : B.M.grade) {
      IntVec s = x;
      for (std::size_t k = 0; k < s.size(); ++k) s[k] += y[k];
      ++want[s];
    }
  EXPECT_EQ(ct, want);
  EXPECT_EQ(generated_submodule(T, hw_vector()), 9u);
}

TEST(Generated, Examples) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 2));
  LocalWeyl W = evaluation_module(g, {1, 1}, Scalar(2));
  EXPECT_EQ(generated_submodule(W.M, SparseVec{}), 0u);
  EXPECT_EQ(generated_submodule(W.M, hw_vector()), 8u);
}

// ---- twisted modules

TEST(Twisted, A2Fundamental) {
  const TwistedSetup& ts = a2();
  XiFunction chi = symmetrize(single(2, Scalar(2), {1, 0}), ts.aut);
  TwistedModule W = build_local_weyl_twisted(ts, chi, 1);
  EXPECT_EQ(W.M.dim, 3);
  EXPECT_EQ(W.lambda_bar, (Weight{1}));
  EXPECT_TRUE(W.relations_ok) << W.relation_witness;
  EXPECT_EQ(twisted_cyclic_dimension(W), 3u);
  auto ch = character_g0(W);
  EXPECT_EQ(ch.size(), 3u);
  for (const auto& [w, c] : ch) {
    Weight neg = w;
    for (auto& x : neg) x = -x;
    EXPECT_EQ(ch.at(neg), c);
  }
}

TEST(Twisted, EmptyChi) {
  TwistedModule W = build_local_weyl_twisted(a2(), XiFunction(2), 1);
  EXPECT_EQ(W.M.dim, 1);
  EXPECT_TRUE(W.relations_ok);
}

TEST(Twisted, AdmissibleChoicesAgree) {
  const TwistedSetup& ts = a3();
  XiFunction chi = symmetrize(single(2, Scalar(2), {1, 0, 0}), ts.aut) +
                   symmetrize(single(2, Scalar(3), {0, 1, 0}), ts.aut);
  auto choices = all_chi_admissible(chi, ts.aut);
  ASSERT_EQ(choices.size(), 4u);
  std::optional<std::pair<int, std::map<Weight, long>>> ref;
  for (const auto& xi : choices) {
    TwistedModule W;
    W.chi = chi;
    W.xi = xi;
    restrict_untwisted(ts, std::make_shared<LocalWeyl>(build_stable_untwisted(ts.g, xi, 4)), W);
    auto key = std::make_pair(W.M.dim, character_g0(W));
    if (!ref) ref = key;
    EXPECT_EQ(key, *ref);
    EXPECT_EQ(twisted_cyclic_dimension(W), static_cast<std::size_t>(W.M.dim));
  }
}

TEST(Twisted, NonAdmissibleIsNotCyclic) {
  const TwistedSetup& ts = a2();
  XiFunction xi(2);
  xi.add(Scalar(2), {1, 0});
  xi.add(Scalar(-2), {1, 0});
  TwistedModule W;
  restrict_untwisted(ts, std::make_shared<LocalWeyl>(build_local_weyl_untwisted(ts.g, xi, 1)), W);
  EXPECT_EQ(W.M.dim, 9);
  EXPECT_EQ(twisted_cyclic_dimension(W), 8u);
}

TEST(Twisted, DirectMatchesRestriction) {
  const TwistedSetup& ts = a2();
  for (int c = 1; c <= 2; ++c) {
    XiFunction chi = symmetrize(single(2, Scalar(3), {c, 0}), ts.aut);
    TwistedModule R = build_stable_twisted([&](int N) { return build_local_weyl_twisted(ts, chi, N); }, 5);
    std::string tw;
    TwistedModule D =
        build_stable_twisted([&](int N) { return build_local_weyl_twisted_direct(ts, chi, N, &tw); }, 5);
    EXPECT_EQ(R.M.dim, D.M.dim);
    EXPECT_EQ(character_g0(R), character_g0(D));
    EXPECT_TRUE(D.relations_ok) << D.relation_witness;
  }
  XiFunction chi = symmetrize(single(2, Scalar(3), {1, 0}), ts.aut);
  EXPECT_EQ(build_local_weyl_twisted_direct_truncated(ts, chi, 1).M.dim, 3);
}

TEST(Twisted, RejectsNonEquivariant) {
  EXPECT_THROW(build_local_weyl_twisted(a2(), single(2, Scalar(2), {1, 0}), 1), std::invalid_argument);
}

// ---- Garland

TEST(Garland, SeriesCoefficients) {
  GarlandSeries s = garland_coeffs(0, 1, 3);
  ASSERT_EQ(s.p.size(), 4u);
  EXPECT_EQ(s.p[0], (CommPoly{{{0, 0, 0}, Rational(1)}}));
  EXPECT_EQ(s.p[1], (CommPoly{{{1, 0, 0}, Rational(-1)}}));
  EXPECT_EQ(s.p[2], (CommPoly{{{2, 0, 0}, make_rational(1, 2)}, {{0, 1, 0}, make_rational(-1, 2)}}));
  // exp(-h u) with only h_1 nonzero: p_n = (-h)^n / n!
  std::vector<Scalar> vals{Scalar(2), Scalar(0), Scalar(0)};
  EXPECT_EQ(eval_comm(s.p[3], vals), Scalar(make_rational(-8, 6)));
  EXPECT_THROW(garland_coeffs(0, 1, -1), std::invalid_argument);
}

TEST(Garland, EllSelection) {
  const TwistedSetup& ts = a3();
  for (std::size_t r = 0; r < ts.gens.roots.size(); ++r)
    EXPECT_EQ(ell_for_root(ts.fd, static_cast<int>(r)), ts.fd.r0_short[r] ? 1 : 2);
  EXPECT_EQ(ell_for_root(a2().fd, 0), 2);
}

TEST(Garland, A2ModulesAllRoots) {
  const TwistedSetup& ts = a2();
  for (int c = 0; c <= 3; ++c) {
    XiFunction chi = symmetrize(single(2, Scalar(2), {c, 0}), ts.aut);
    TwistedModule W = build_stable_twisted([&](int N) { return build_local_weyl_twisted(ts, chi, N); }, 6);
    for (int r = 0; r <= 2 * c + 2; ++r) {
      GarlandResult g = verify_garland(ts, W, 0, r, GarlandVariant::standard);
      EXPECT_TRUE(g.ok) << c << " r=" << r << " " << g.witness;
      EXPECT_TRUE(g.rearranged_ok);
      if (g.r == g.lambda_h && r % 2 == 1) EXPECT_TRUE(g.literal_sign_ok);
      GarlandResult d = verify_garland(ts, W, 0, r, GarlandVariant::double_root);
      EXPECT_TRUE(d.ok) << c << " double r=" << r << " " << d.witness;
    }
  }
}

TEST(Garland, ZeroWeightKillsLowering) {
  const TwistedSetup& ts = a3();
  XiFunction chi = symmetrize(single(2, Scalar(2), {1, 0, 0}), ts.aut);
  TwistedModule W = build_local_weyl_twisted(ts, chi, 1);
  // the fixed node carries weight 0
  int r1 = ts.gens.simple[1];
  EXPECT_TRUE(W.op(loop_x(ts, r1, -1, 0)).apply(hw_vector()).empty());
  EXPECT_TRUE(verify_garland(ts, W, r1, 0, GarlandVariant::standard).ok);
}

TEST(Garland, CorruptedActionFails) {
  const TwistedSetup& ts = a2();
  XiFunction chi = symmetrize(single(2, Scalar(2), {1, 0}), ts.aut);
  TwistedModule W = build_local_weyl_twisted(ts, chi, 2);
  ASSERT_TRUE(verify_garland(ts, W, 0, 1, GarlandVariant::standard).ok);
  // one lowering basis element now also sends w to a multiple of w
  SparseVec c = W.coords(loop_x(ts, 0, -1, 0));
  ASSERT_FALSE(c.empty());
  auto& col = W.M.action[static_cast<std::size_t>(c.front().first)].col[0];
  ASSERT_FALSE(col.empty());
  col.emplace_back(0, Scalar(1));
  sv_clean(col);
  bool any_fail = false;
  std::string witness;
  for (int r = 0; r <= 3; ++r) {
    GarlandResult g = verify_garland(ts, W, 0, r, GarlandVariant::standard);
    if (!g.ok || !g.rearranged_ok) {
      any_fail = true;
      if (witness.empty()) witness = g.witness;
    }
  }
  EXPECT_TRUE(any_fail);
  EXPECT_FALSE(witness.empty());
  std::string w;
  EXPECT_FALSE(check_bracket_relations(W.M, &w));
}

// ---- embedding chain and pullback

TEST(Embedding, A2Fundamental) {
  const TwistedSetup& ts = a2();
  auto chis = sample_chis(ts, {1}, 3, {Scalar(2), Scalar(3), Scalar(-5), Scalar(7)});
  ASSERT_EQ(chis.size(), 3u);
  EmbeddingReport rep = verify_embedding_chain(ts, {1}, chis, 4, true);
  EXPECT_TRUE(rep.ok);
  for (const auto& c : rep.cases) {
    EXPECT_EQ(c.twisted_dim, 3u);
    EXPECT_EQ(c.untwisted_dim, 3u);
    EXPECT_EQ(c.twisted_cyclic, 3u);
    EXPECT_EQ(c.direct_dim, 3u);
  }
  EXPECT_EQ(rep.rank_product, 3u);
}

TEST(Embedding, ZeroWeight) {
  const TwistedSetup& ts = a3();
  EmbeddingReport rep = verify_embedding_chain(ts, {0, 0}, {XiFunction(2)}, 3, false);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.cases.at(0).twisted_dim, 1u);
}

TEST(Embedding, Pullback) {
  const TwistedSetup& ts = a3();
  for (int node = 0; node < 3; ++node) {
    PullbackCheck p = verify_pullback(ts, node, Scalar(2), 4);
    EXPECT_TRUE(p.ok) << node;
    EXPECT_EQ(p.dim_a, p.dim_za);
  }
}

TEST(Embedding, SummaryJson) {
  const TwistedSetup& ts = a2();
  TwistedModule W = build_local_weyl_twisted(ts, symmetrize(single(2, Scalar(2), {1, 0}), ts.aut), 1);
  auto j = module_summary(W);
  EXPECT_EQ(j["dim"], 3);
  EXPECT_EQ(j["twisted_cyclic_dim"], 3);
  EXPECT_EQ(j["construction"], "restriction");
  EXPECT_EQ(action_dump(W.M).size(), W.M.action.size());
}
