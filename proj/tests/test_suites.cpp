#include <gtest/gtest.h>

#include <twloop/suites.hpp>

using namespace twloop;

TEST(Suites, FoldAndJacobi) {
  for (auto [t, n, p] : std::vector<std::tuple<char, int, std::string>>{{'A', 2, "2,1"}, {'D', 4, "3,2,4,1"}, {'B', 3, "1,2,3"}}) {
    TwistedSetup ts = make_setup(t, n, parse_perm(p));
    SuiteResult f = fold_suite(ts);
    EXPECT_TRUE(f.pass) << f.report.dump();
    EXPECT_TRUE(f.report["cartan_agree"].get<bool>());
    SuiteResult j = jacobi_suite(ts);
    EXPECT_TRUE(j.pass) << j.report.dump();
  }
}

TEST(Suites, ReportsAreStable) {
  TwistedSetup ts = make_setup('A', 3, parse_perm("3,2,1"));
  HwalgOptions o;
  o.pairs = 20;
  o.functions = 20;
  EXPECT_EQ(hwalg_suite(ts, o).report.dump(), hwalg_suite(ts, o).report.dump());
  o.seed = 2;
  SuiteResult other = hwalg_suite(ts, o);
  EXPECT_TRUE(other.pass);
}

TEST(Suites, HwalgOnFolds) {
  for (const char* p : {"2,1", "3,2,1"}) {
    int n = std::string(p).size() == 3 ? 2 : 3;
    TwistedSetup ts = make_setup('A', n, parse_perm(p));
    SuiteResult r = hwalg_suite(ts, HwalgOptions{});
    EXPECT_TRUE(r.pass) << r.report.dump();
    EXPECT_EQ(r.report["commdiag"]["failures"], 0);
  }
}

TEST(Suites, GarlandSmall) {
  TwistedSetup ts = make_setup('A', 2, parse_perm("2,1"));
  GarlandOptions o;
  o.samples = 1;
  SuiteResult r = garland_suite(ts, {1}, o);
  EXPECT_TRUE(r.pass) << r.report.dump();
  ASSERT_EQ(r.report["modules"].size(), 1u);
  EXPECT_EQ(r.report["modules"][0]["dim"], 3);
  EXPECT_EQ(r.report["ell"][0]["ell"], 2);
}

TEST(Suites, EmbeddingAndPullback) {
  TwistedSetup ts = make_setup('A', 3, parse_perm("3,2,1"));
  SuiteResult r = embedding_suite(ts, {1, 0}, EmbeddingOptions{});
  EXPECT_TRUE(r.pass) << r.report.dump();
  EXPECT_GE(r.report["distinct_chi"].get<std::size_t>(), 3u);
  for (const auto& c : r.report["cases"]) EXPECT_EQ(c["twisted_dim"], c["untwisted_dim"]);
  SuiteResult pb = pullback_suite(ts, 5);
  EXPECT_TRUE(pb.pass) << pb.report.dump();
  EXPECT_EQ(pb.report["pullback"].size(), 3u);
}

TEST(Suites, PermString) {
  EXPECT_EQ(perm_string({2, 0, 1}), "3,1,2");
  EXPECT_EQ(perm_string(identity_perm(3)), "1,2,3");
}
