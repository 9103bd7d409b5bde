#include <gtest/gtest.h>

#include <random>

#include <twloop/looplie.hpp>

using namespace twloop;

namespace {

LoopElement random_twisted(const TwistedSetup& ts, std::mt19937_64& rng) {
  LoopElement x;
  int nr = static_cast<int>(ts.gens.roots.size());
  for (int t = 0; t < 3; ++t) {
    int r = static_cast<int>(rng() % static_cast<unsigned>(nr));
    long k = static_cast<long>(rng() % 7) - 3;
    Scalar c(static_cast<long>(rng() % 5) - 2);
    switch (rng() % 3) {
      case 0: x.add(c, loop_x(ts, r, 1, k)); break;
      case 1: x.add(c, loop_x(ts, r, -1, k)); break;
      default: x.add(c, loop_h(ts, r, k)); break;
    }
  }
  return x;
}

// ev_a of a truncated basis element: its g-part times a^(loop degree)
GVec evaluate(const TruncatedLie& T, int b, const Scalar& a) {
  return sv_scale(T.vec[static_cast<std::size_t>(b)], a.pow(T.loop_degree[static_cast<std::size_t>(b)]));
}

}  // namespace

TEST(LoopLie, BracketExponentsAdd) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 2));
  int a1 = g.rs.root_index({1, 0});
  LoopElement x(GVec{{g.xp(a1), Scalar(1)}}, 1), y(GVec{{g.xm(a1), Scalar(1)}}, -1);
  LoopElement r = loop_bracket(g, x, y);
  EXPECT_EQ(r, LoopElement(GVec{{g.hh(0), Scalar(1)}}, 0));
  LoopElement h1(GVec{{g.hh(0), Scalar(1)}}, 3), h2(GVec{{g.hh(1), Scalar(1)}}, -5);
  EXPECT_TRUE(loop_bracket(g, h1, h2).is_zero());
}

TEST(LoopLie, TwistedBracketLandsInCartanOfG0) {
  TwistedSetup ts = make_setup('A', 3, parse_perm("3,2,1"));
  for (int r = 0; r < static_cast<int>(ts.gens.roots.size()); ++r) {
    LoopElement b = loop_bracket(ts.g, loop_x(ts, r, 1, -1), loop_x(ts, r, -1, 1));
    ASSERT_TRUE(is_twisted(ts.lift, b));
    for (const auto& [k, v] : b.terms) {
      EXPECT_EQ(k, 0);
      for (const auto& [i, c] : v) EXPECT_TRUE(ts.g.is_cartan(i));
      EXPECT_TRUE(in_piece(ts.lift, v, 0));
    }
  }
}

TEST(LoopLie, TruncationDims) {
  TwistedSetup sl2 = make_setup('A', 1, parse_perm("1"));
  EXPECT_EQ(truncate(sl2, Poly::linear_power(Scalar(2), 1), false).dim, 3);
  TwistedSetup a2 = make_setup('A', 2, parse_perm("2,1"));
  TruncatedLie T = truncate(a2, Poly::linear_power(Scalar(4), 2), true);
  EXPECT_EQ(T.dim, 16);
  EXPECT_TRUE(check_jacobi(T));
  EXPECT_THROW(truncate(a2, Poly::linear_power(Scalar(0), 1), true), std::invalid_argument);
  EXPECT_THROW(truncate(a2, Poly(std::vector<Scalar>{Scalar(1)}), true), std::invalid_argument);
}

TEST(LoopLie, UntwistedTruncationAtPointIsG) {
  TwistedSetup a2 = make_setup('A', 2, parse_perm("1,2"));
  TruncatedLie T = truncate(a2, Poly::linear_power(Scalar(3), 1), false);
  ASSERT_EQ(T.dim, 8);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) EXPECT_EQ(T.bracket_basis(a, b), a2.g.bracket_basis(a, b));
}

TEST(LoopLie, SmallSubalgebraCases) {
  TwistedSetup a2 = make_setup('A', 2, parse_perm("2,1"));
  SmallSubalgebra s = small_subalgebra(a2, 0);
  EXPECT_EQ(s.tag, SmallCase::short_a2n);
  EXPECT_TRUE(s.verified) << s.witness;

  TwistedSetup a3 = make_setup('A', 3, parse_perm("3,2,1"));
  std::set<SmallCase> tags;
  for (int r = 0; r < static_cast<int>(a3.gens.roots.size()); ++r) {
    SmallSubalgebra t = small_subalgebra(a3, r);
    EXPECT_TRUE(t.verified) << t.witness;
    tags.insert(t.tag);
    EXPECT_EQ(t.tag, a3.fd.r0_short[static_cast<std::size_t>(r)] ? SmallCase::short_other : SmallCase::long_other);
  }
  EXPECT_EQ(tags.size(), 2u);

  // A2 fold has no long root, so the long A2n case never fires there
  for (bool s2 : a2.fd.r0_short) EXPECT_TRUE(s2);
}

TEST(LoopLieProperty, TwistedClosure) {
  std::mt19937_64 rng(21);
  for (auto [t, n, p] : std::vector<std::tuple<char, int, std::string>>{
           {'A', 2, "2,1"}, {'A', 3, "3,2,1"}, {'D', 4, "3,2,4,1"}}) {
    TwistedSetup ts = make_setup(t, n, parse_perm(p));
    for (int i = 0; i < 40; ++i) {
      LoopElement x = random_twisted(ts, rng), y = random_twisted(ts, rng);
      ASSERT_TRUE(is_twisted(ts.lift, x));
      ASSERT_TRUE(is_twisted(ts.lift, loop_bracket(ts.g, x, y)));
    }
  }
}

TEST(LoopLieProperty, TruncateIsHomomorphism) {
  std::mt19937_64 rng(22);
  TwistedSetup ts = make_setup('A', 2, parse_perm("2,1"));
  Poly q = Poly::linear_power(Scalar(4), 2) * Poly::linear_power(Scalar(9), 1);
  TruncatedLie T = truncate(ts, q, true);
  for (int i = 0; i < 60; ++i) {
    LoopElement x = random_twisted(ts, rng), y = random_twisted(ts, rng);
    SparseVec lhs = truncated_coords(T, loop_bracket(ts.g, x, y));
    SparseVec rhs = T.bracket(truncated_coords(T, x), truncated_coords(T, y));
    ASSERT_EQ(lhs, rhs);
  }
}

TEST(LoopLieProperty, ChineseRemainderSplitting) {
  // distinct orbits: the joint evaluation T -> g + g + ... is bijective
  for (auto [t, n, p, pts] : std::vector<std::tuple<char, int, std::string, std::vector<long>>>{
           {'A', 2, "2,1", {2, 3}}, {'A', 3, "3,2,1", {2, 5}}, {'A', 2, "2,1", {2, 3, 7}}}) {
    TwistedSetup ts = make_setup(t, n, parse_perm(p));
    Poly q(std::vector<Scalar>{Scalar(1)});
    for (long a : pts) q = q * Poly::linear_power(Scalar(a * a), 1);
    TruncatedLie T = truncate(ts, q, true);
    int D = ts.g.dim();
    ASSERT_EQ(T.dim, D * static_cast<int>(pts.size()));
    DenseMat M = zero_matrix(static_cast<std::size_t>(T.dim), static_cast<std::size_t>(T.dim));
    for (int b = 0; b < T.dim; ++b)
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (const auto& [r, c] : evaluate(T, b, Scalar(pts[i])))
          M[i * static_cast<std::size_t>(D) + static_cast<std::size_t>(r)][static_cast<std::size_t>(b)] = c;
    EXPECT_EQ(matrix_rank(M), static_cast<std::size_t>(T.dim));
  }
  // same orbit twice: not a splitting
  TwistedSetup ts = make_setup('A', 2, parse_perm("2,1"));
  TruncatedLie T = truncate(ts, Poly::linear_power(Scalar(4), 2), true);
  DenseMat M = zero_matrix(16, 16);
  for (int b = 0; b < 16; ++b) {
    for (const auto& [r, c] : evaluate(T, b, Scalar(2))) M[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)] = c;
    for (const auto& [r, c] : evaluate(T, b, Scalar(-2))) M[8 + static_cast<std::size_t>(r)][static_cast<std::size_t>(b)] = c;
  }
  EXPECT_LT(matrix_rank(M), 16u);
}

TEST(LoopLieProperty, CrtLieJacobi) {
  ChevalleyAlgebra g = build_chevalley(build_root_system('A', 2));
  CrtLie C = crt_lie(g, {Scalar(2), Scalar(-3)}, 2);
  EXPECT_EQ(C.dim, 8 * 2 * 2);
  EXPECT_TRUE(check_jacobi(C));
  EXPECT_TRUE(check_grading(C));
}

TEST(LoopLie, JsonDump) {
  TwistedSetup a2 = make_setup('A', 2, parse_perm("2,1"));
  auto j = truncated_to_json(truncate(a2, Poly::linear_power(Scalar(4), 2), true));
  EXPECT_EQ(j["dim"], 16);
}
