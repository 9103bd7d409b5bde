#include <gtest/gtest.h>

#include <random>
#include <set>

#include <twloop/fold.hpp>

using namespace twloop;

namespace {

// Roots as the Weyl-group orbit of the simple roots, by reflections only.
std::set<IntVec> roots_by_reflection(const IntMat& a) {
  int n = static_cast<int>(a.size());
  std::set<IntVec> seen;
  std::vector<IntVec> todo;
  for (int i = 0; i < n; ++i) {
    IntVec e(static_cast<std::size_t>(n), 0);
    e[i] = 1;
    seen.insert(e);
    todo.push_back(e);
  }
  while (!todo.empty()) {
    IntVec b = todo.back();
    todo.pop_back();
    for (int i = 0; i < n; ++i) {
      // <beta, alpha_i^vee> with a[i][j] = <alpha_j, alpha_i^vee>
      int p = 0;
      for (int j = 0; j < n; ++j) p += b[j] * a[i][j];
      IntVec r = b;
      r[i] -= p;
      if (seen.insert(r).second) todo.push_back(r);
    }
  }
  std::set<IntVec> pos;
  for (const auto& r : seen)
    if (std::all_of(r.begin(), r.end(), [](int c) { return c >= 0; })) pos.insert(r);
  return pos;
}

std::size_t expected_positive(char t, int n) {
  switch (t) {
    case 'A': return static_cast<std::size_t>(n * (n + 1) / 2);
    case 'B':
    case 'C': return static_cast<std::size_t>(n * n);
    case 'D': return static_cast<std::size_t>(n * (n - 1));
    case 'G': return 6;
    case 'F': return 24;
    case 'E': return n == 6 ? 36 : n == 7 ? 63 : 120;
  }
  return 0;
}

}  // namespace

TEST(RootData, A2Positive) {
  RootSystem rs = build_root_system('A', 2);
  EXPECT_EQ(rs.num_positive(), 3);
  EXPECT_EQ(rs.positive_roots[static_cast<std::size_t>(rs.theta)], (IntVec{1, 1}));
}

TEST(RootData, D4AndG2Counts) {
  EXPECT_EQ(build_root_system('D', 4).num_positive(), 12);
  EXPECT_EQ(build_root_system('G', 2).num_positive(), 6);
}

TEST(RootData, StringClosureMatchesReflections) {
  std::vector<std::pair<char, int>> cases = {{'A', 1}, {'A', 2}, {'A', 3}, {'A', 4}, {'B', 2}, {'B', 3}, {'C', 3},
                                             {'D', 4}, {'D', 5}, {'G', 2}, {'F', 4}, {'E', 6}};
  for (auto [t, n] : cases) {
    RootSystem rs = build_root_system(t, n);
    std::set<IntVec> ours(rs.positive_roots.begin(), rs.positive_roots.end());
    EXPECT_EQ(ours, roots_by_reflection(rs.cartan)) << t << n;
    EXPECT_EQ(ours.size(), expected_positive(t, n)) << t << n;
  }
}

TEST(RootData, InvalidTypes) {
  EXPECT_THROW(build_root_system('G', 3), std::invalid_argument);
  EXPECT_THROW(build_root_system('X', 2), std::invalid_argument);
  EXPECT_THROW(build_root_system('A', 0), std::invalid_argument);
}

TEST(Fold, A2Swap) {
  TwistedSetup ts = make_setup('A', 2, parse_perm("2,1"));
  EXPECT_EQ(ts.fd.m, 2);
  EXPECT_EQ(ts.fd.g0_type, "A1");
  ASSERT_EQ(ts.fd.orbits().size(), 1u);
  EXPECT_EQ(ts.fd.orbits()[0], (IntVec{0, 1}));
  EXPECT_EQ(ts.fd.stab_sizes(), (IntVec{1}));
}

TEST(Fold, A3Swap) {
  TwistedSetup ts = make_setup('A', 3, parse_perm("3,2,1"));
  EXPECT_EQ(ts.fd.g0_type, "C2");
  ASSERT_EQ(ts.fd.orbits().size(), 2u);
  EXPECT_EQ(ts.fd.orbits()[0], (IntVec{0, 2}));
  EXPECT_EQ(ts.fd.orbits()[1], (IntVec{1}));
  EXPECT_EQ(ts.fd.stab_sizes(), (IntVec{1, 2}));
}

TEST(Fold, D4Triality) {
  TwistedSetup ts = make_setup('D', 4, parse_perm("3,2,4,1"));
  EXPECT_EQ(ts.fd.m, 3);
  EXPECT_EQ(ts.fd.g0_type, "G2");
}

TEST(Fold, A4AndD4Swap) {
  EXPECT_EQ(make_setup('A', 4, parse_perm("4,3,2,1")).fd.g0_type, "B2");
  TwistedSetup d = make_setup('D', 4, parse_perm("1,2,4,3"));
  EXPECT_EQ(d.fd.m, 2);
  EXPECT_EQ(d.fd.g0_type, "B3");
}

TEST(Fold, RejectsNonAutomorphism) {
  RootSystem rs = build_root_system('A', 3);
  EXPECT_THROW(make_diagram_aut(rs, parse_perm("2,1,3")), std::invalid_argument);
  EXPECT_THROW(make_diagram_aut(rs, parse_perm("1,2")), std::invalid_argument);
}

TEST(Fold, FoldedCartanTwoWays) {
  std::vector<std::tuple<char, int, std::string>> cases = {
      {'A', 2, "2,1"}, {'A', 3, "3,2,1"}, {'A', 4, "4,3,2,1"}, {'D', 4, "3,2,4,1"}, {'D', 4, "1,2,4,3"}};
  for (const auto& [t, n, p] : cases) {
    TwistedSetup ts = make_setup(t, n, parse_perm(p));
    EXPECT_EQ(ts.fd.folded_cartan, ts.gens.folded_cartan) << t << n << " " << p;
    EXPECT_EQ(ts.fd.folded_cartan, folded_cartan_combinatorial(ts.rs, ts.fd.nodes));
  }
}

TEST(Fold, RestrictWeightExamples) {
  TwistedSetup a2 = make_setup('A', 2, parse_perm("2,1"));
  EXPECT_EQ(restrict_weight(a2.fd, {1, 0}), (Weight{1}));
  EXPECT_EQ(restrict_weight(a2.fd, {0, 0}), (Weight{0}));
  TwistedSetup a3 = make_setup('A', 3, parse_perm("3,2,1"));
  EXPECT_EQ(restrict_weight(a3.fd, {1, 0, 1}), (Weight{2, 0}));
}

TEST(FoldProperty, RestrictIsAdditive) {
  std::mt19937_64 rng(5);
  TwistedSetup ts = make_setup('D', 4, parse_perm("3,2,4,1"));
  for (int t = 0; t < 100; ++t) {
    Weight x(4), y(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = static_cast<int>(rng() % 5);
      y[i] = static_cast<int>(rng() % 5);
    }
    ASSERT_EQ(weight_add(restrict_weight(ts.fd, x), restrict_weight(ts.fd, y)),
              restrict_weight(ts.fd, weight_add(x, y)));
  }
}

TEST(FoldProperty, OrbitTimesStabilizerIsOrder) {
  std::vector<std::tuple<char, int, std::string>> cases = {
      {'A', 2, "2,1"}, {'A', 3, "3,2,1"}, {'A', 4, "4,3,2,1"}, {'D', 4, "3,2,4,1"}, {'D', 4, "1,2,4,3"}, {'A', 3, "1,2,3"}};
  for (const auto& [t, n, p] : cases) {
    TwistedSetup ts = make_setup(t, n, parse_perm(p));
    for (std::size_t k = 0; k < ts.fd.orbits().size(); ++k)
      EXPECT_EQ(static_cast<int>(ts.fd.orbits()[k].size()) * ts.fd.stab_sizes()[k], ts.fd.m);
  }
}

TEST(Fold, PointOrbits) {
  auto o = orbit_of_point(2, Scalar(5));
  EXPECT_EQ(o, (std::vector<Scalar>{Scalar(5), Scalar(-5)}));
  Scalar z = Scalar::zeta(3);
  EXPECT_EQ(orbit_of_point(3, Scalar(1)), (std::vector<Scalar>{Scalar(1).with_order(3), z, z * z}));
  EXPECT_THROW(orbit_of_point(2, Scalar(0)), std::domain_error);
}

TEST(Fold, A2nKappaAndP0) {
  TwistedSetup a4 = make_setup('A', 4, parse_perm("4,3,2,1"));
  EXPECT_TRUE(a4.fd.type_a_even);
  // exactly one node carries the doubled generator
  EXPECT_EQ(std::count(a4.fd.kappa.begin(), a4.fd.kappa.end(), 2), 1);
  Weight std1 = to_standard_g0(a4.fd, {1, 1});
  EXPECT_TRUE(in_p0_plus(a4.fd, std1));
  Weight odd = std1;
  for (std::size_t i = 0; i < odd.size(); ++i)
    if (a4.fd.kappa[i] == 2) odd[i] += 1;
  EXPECT_FALSE(in_p0_plus(a4.fd, odd));
}

TEST(Fold, JsonExport) {
  auto j = folded_to_json(make_setup('A', 3, parse_perm("3,2,1")).fd);
  EXPECT_TRUE(j.contains("orbits"));
  EXPECT_TRUE(j.contains("folded_cartan"));
  EXPECT_EQ(j["g0_type"], "C2");
}
