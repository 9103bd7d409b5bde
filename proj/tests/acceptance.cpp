// Acceptance runner: one line per criterion, exit status 0 only if all pass.
// Usage: acceptance [path-to-twloop-cli]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <twloop/suites.hpp>

using namespace twloop;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // wall-clock budget, pinned here
  std::function<Outcome()> run;
};

std::string cli_path;

// ---- 1
Outcome folding_table() {
  struct Row {
    char t;
    int n;
    const char* perm;
    const char* want;
    int g1;  // expected dim g_1, -1 = unchecked
  };
  std::vector<Row> rows = {{'A', 2, "2,1", "A1", 5}, {'A', 3, "3,2,1", "C2", -1}, {'A', 4, "4,3,2,1", "B2", -1},
                           {'D', 4, "3,2,4,1", "G2", -1}};
  std::ostringstream d;
  bool ok = true;
  for (const auto& r : rows) {
    TwistedSetup ts = make_setup(r.t, r.n, parse_perm(r.perm));
    SuiteResult s = fold_suite(ts);
    std::string got = ts.fd.g0_type;
    bool row = s.pass && got == r.want && (r.g1 < 0 || ts.pieces.dim(1) == r.g1);
    ok = ok && row;
    d << r.t << r.n << "->" << got << (row ? "" : "(!)") << " ";
  }
  return {ok, d.str()};
}

// ---- 2
Outcome algebra_integrity() {
  std::vector<std::tuple<char, int, std::string>> cases = {{'A', 1, "1"},     {'A', 2, "2,1"},     {'A', 3, "3,2,1"},
                                                           {'A', 4, "4,3,2,1"}, {'D', 4, "3,2,4,1"}, {'G', 2, "1,2"}};
  bool ok = true;
  std::ostringstream d;
  for (const auto& [t, n, p] : cases) {
    TwistedSetup ts = make_setup(t, n, parse_perm(p));
    SuiteResult s = jacobi_suite(ts);
    bool period = true;
    for (int i = 0; i < ts.g.dim(); ++i) {
      GVec b{{i, Scalar(1)}};
      if (ts.lift.apply(b, ts.aut.m) != b) period = false;
    }
    ok = ok && s.pass && period;
    if (!s.pass || !period) d << t << n << " failed ";
  }
  d << cases.size() << " algebras";
  return {ok, d.str()};
}

// ---- 3
Outcome garland() {
  GarlandOptions opt;
  opt.samples = 2;
  opt.max_depth = 6;
  opt.margin = 2;
  struct Case {
    const char* perm;
    char t;
    int n;
    std::vector<Weight> lams;
  };
  std::vector<Case> cases = {{"2,1", 'A', 2, {{1}, {2}, {3}}},
                             {"3,2,1", 'A', 3, {{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}, {3, 0}}}};
  // every lambda(h_alpha) in 0..3 must be hit on both folds (0 is vacuous in rank one); larger values also run
  bool ok = true, saw_ell2 = false, saw_double = false;
  int checks = 0, max_h = 0;
  for (const auto& c : cases) {
    TwistedSetup ts = make_setup(c.t, c.n, parse_perm(c.perm));
    std::set<int> hit;
    for (const auto& lam : c.lams) {
      SuiteResult s = garland_suite(ts, lam, opt);
      ok = ok && s.pass && s.report["p0_is_one"].get<bool>();
      for (const auto& e : s.report["ell"])
        if (e["ell"] == 2 && ts.fd.type_a_even) saw_ell2 = true;
      for (const auto& mod : s.report["modules"]) {
        checks += mod["checks"].get<int>();
        for (const auto& det : mod["details"]) {
          max_h = std::max(max_h, det["lambda_h"].get<int>());
          hit.insert(det["lambda_h"].get<int>());
          if (det["variant"] == "double_root") saw_double = true;
        }
      }
    }
    for (int h = 0; h <= 3; ++h)
      if (!hit.count(h) && !(h == 0 && c.t == 'A' && c.n == 2)) ok = false;
  }
  ok = ok && saw_ell2 && saw_double;
  std::ostringstream d;
  d << checks << " identities, max lambda(h)=" << max_h << ", ell=2 " << (saw_ell2 ? "yes" : "no") << ", x_2a "
    << (saw_double ? "yes" : "no");
  return {ok, d.str()};
}

// ---- 4
Outcome untwisted_dims() {
  ChevalleyAlgebra sl2 = build_chevalley(build_root_system('A', 1));
  std::size_t base = fundamental_local_dim(sl2, 0, 6);
  bool ok = base == 2;
  std::ostringstream d;
  d << "sl2:";
  for (int m = 1; m <= 3; ++m) {
    XiFunction xi(1);
    xi.add(Scalar(2), {m});
    StableResult cert;
    LocalWeyl W = build_stable_untwisted(sl2, xi, 6, &cert);
    std::size_t prod = 1;
    for (int k = 0; k < m; ++k) prod *= base;
    std::size_t want = std::size_t{1} << m;
    ok = ok && cert.stabilized && static_cast<std::size_t>(W.M.dim) == want && prod == want;
    d << " " << W.M.dim << "@depth" << cert.depth;
  }
  ChevalleyAlgebra sl3 = build_chevalley(build_root_system('A', 2));
  d << "; sl3:";
  for (int i = 0; i < 2; ++i) {
    XiFunction xi(1);
    Weight w{0, 0};
    w[static_cast<std::size_t>(i)] = 1;
    xi.add(Scalar(3), w);
    StableResult cert;
    LocalWeyl W = build_stable_untwisted(sl3, xi, 6, &cert);
    ok = ok && cert.stabilized && W.M.dim == 3;
    d << " " << W.M.dim;
  }
  return {ok, d.str()};
}

struct EmbeddingRun {
  bool independence = true;  // 5
  bool chain = true;         // 6
  std::string d5, d6;
};

const EmbeddingRun& embedding_runs() {
  static EmbeddingRun run = [] {
    EmbeddingRun r;
    EmbeddingOptions opt;
    opt.samples = 3;
    opt.max_depth = 6;
    opt.direct = false;
    struct Case {
      char t;
      int n;
      const char* perm;
      std::vector<Weight> lams;
    };
    std::vector<Case> cases = {{'A', 2, "2,1", {{1}, {2}}}, {'A', 3, "3,2,1", {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}}};
    int weights = 0, chis = 0, pull = 0;
    for (const auto& c : cases) {
      TwistedSetup ts = make_setup(c.t, c.n, parse_perm(c.perm));
      for (const auto& lam : c.lams) {
        SuiteResult s = embedding_suite(ts, lam, opt);
        const auto& j = s.report;
        ++weights;
        chis += static_cast<int>(j["distinct_chi"].get<std::size_t>());
        bool ind = j["distinct_chi"].get<std::size_t>() >= 3 && j["dims_equal"].get<bool>() &&
                   j["characters_equal"].get<bool>();
        bool ch = j["twisted_cyclic"].get<bool>();
        for (const auto& e : j["cases"])
          ch = ch && e["twisted_dim"] == e["untwisted_dim"] && e["relations_ok"].get<bool>();
        r.independence = r.independence && ind;
        r.chain = r.chain && ch && s.pass;
      }
      SuiteResult pb = pullback_suite(ts, opt.max_depth);
      pull += static_cast<int>(pb.report["pullback"].size());
      r.chain = r.chain && pb.pass;
    }
    r.d5 = std::to_string(weights) + " weights, " + std::to_string(chis) + " chi";
    r.d6 = r.d5 + ", " + std::to_string(pull) + " pullback nodes";
    return r;
  }();
  return run;
}

// ---- 7
Outcome hwalg() {
  bool ok = true;
  std::ostringstream d;
  for (auto [t, n, p] : std::vector<std::tuple<char, int, const char*>>{{'A', 2, "2,1"}, {'A', 3, "3,2,1"}}) {
    TwistedSetup ts = make_setup(t, n, parse_perm(p));
    HwalgOptions opt;
    SuiteResult s = hwalg_suite(ts, opt);
    ok = ok && s.pass && s.report["commdiag"]["pairs"].get<int>() >= 100 &&
         s.report["alpha"]["functions"].get<int>() >= 100;
    d << t << n << (s.pass ? " ok " : " failed ");
  }
  return {ok, d.str()};
}

// ---- 8
std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome determinism() {
  if (cli_path.empty() || !std::filesystem::exists(cli_path)) return {false, "cli not found: " + cli_path};
  std::vector<std::string> cmds = {
      "fold --type A --rank 2 --perm 2,1",
      "fold --type D --rank 4 --perm 3,2,4,1 --format csv",
      "weyl --type A --rank 2 --perm 2,1 --chi '{\"2\":[1,0]}' --symmetrize --direct",
      "weyl --type A --rank 1 --chi '{\"2\":[2]}' --actions --format text",
      "hwalg --type A --rank 3 --perm 3,2,1 --lambda 1,1",
      "verify jacobi --type G --rank 2",
      "verify fold --type A --rank 4 --perm 4,3,2,1",
      "verify hwalg --type A --rank 2 --perm 2,1",
      "verify garland --type A --rank 2 --perm 2,1 --lambda 2 --samples 2",
      "verify embedding --type A --rank 3 --perm 3,2,1 --lambda 1,0 --samples 3",
  };
  auto dir = std::filesystem::temp_directory_path() / ("twloop_det_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  bool ok = true;
  std::ostringstream d;
  int i = 0;
  for (const auto& c : cmds) {
    std::vector<std::string> outs;
    for (const char* env : {"WEYL_THREADS=1", "WEYL_THREADS=1", "WEYL_THREADS=4"}) {
      std::string out = (dir / ("o" + std::to_string(i) + "_" + std::to_string(outs.size()))).string();
      std::string line = std::string(env) + " '" + cli_path + "' " + c + " > '" + out + "' 2>&1";
      int rc = std::system(line.c_str());
      if (rc == -1) ok = false;
      outs.push_back(slurp(out));
    }
    bool same = !outs[0].empty() && outs[0] == outs[1] && outs[1] == outs[2];
    if (!same) d << "differs: " << c << "; ";
    ok = ok && same;
    ++i;
  }
  std::filesystem::remove_all(dir);
  d << cmds.size() << " commands x 3 runs";
  return {ok, d.str()};
}

}  // namespace

#ifndef TWLOOP_CLI
#define TWLOOP_CLI ""
#endif

int main(int argc, char** argv) {
  cli_path = argc > 1 ? argv[1] : TWLOOP_CLI;
  std::vector<Criterion> all = {
      {1, "folding table", 5.0, folding_table},
      {2, "algebra integrity", 30.0, algebra_integrity},
      {3, "garland identities", 120.0, garland},
      {4, "untwisted local weyl dims", 120.0, untwisted_dims},
      {5, "twisted independence", 300.0,
       [] {
         const auto& r = embedding_runs();
         return Outcome{r.independence, r.d5};
       }},
      {6, "embedding chain", 300.0,
       [] {
         const auto& r = embedding_runs();
         return Outcome{r.chain, r.d6};
       }},
      {7, "highest-weight algebra", 120.0, hwalg},
      {8, "cli determinism", 120.0, determinism},
  };
  bool all_ok = true;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.ok && s <= c.limit_s;
    all_ok = all_ok && pass;
    std::printf("criterion %d %-28s %s  %.2fs/%.0fs  %s\n", c.id, c.name, pass ? "PASS" : "FAIL", s, c.limit_s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
