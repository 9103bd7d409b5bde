// twloop: folding tables, local Weyl modules and verification suites.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "twloop/suites.hpp"

using namespace twloop;
using nlohmann::json;

namespace {

struct JobSpec {
  std::string command;
  std::string suite;
  std::string type = "A";
  int rank = 2;
  std::string perm;  // 1-based, empty = identity
  std::string lambda;
  std::string chi;
  bool symmetrize = false;
  int depth = 5;
  int bound = 2;
  int samples = 3;
  std::uint64_t seed = 1;
  bool direct = false;
  bool actions = false;
  std::string format = "json";
  std::string out;

  json to_json() const {
    json j = {{"command", command}, {"type", type},   {"rank", rank},     {"perm", perm},
              {"depth", depth},     {"bound", bound}, {"format", format}, {"out", out}};
    if (!suite.empty()) j["suite"] = suite;
    if (!lambda.empty()) j["lambda"] = lambda;
    if (!chi.empty()) j["chi"] = chi;
    if (command == "weyl") {
      j["symmetrize"] = symmetrize;
      j["direct"] = direct;
      j["actions"] = actions;
    }
    if (command == "verify") {
      j["samples"] = samples;
      j["seed"] = seed;
    }
    return j;
  }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TwistedSetup setup_for(const JobSpec& job) {
  if (job.type.size() != 1) throw UsageError("type must be a single letter");
  char t = static_cast<char>(std::toupper(static_cast<unsigned char>(job.type[0])));
  RootSystem rs = build_root_system(t, job.rank);
  IntVec perm = job.perm.empty() ? identity_perm(job.rank) : parse_perm(job.perm);
  return make_setup(rs, make_diagram_aut(rs, perm));
}

Weight parse_weight(const std::string& s, int size) {
  Weight w;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("bad weight entry '" + tok + "'");
    }
    if (used != tok.size()) throw UsageError("bad weight entry '" + tok + "'");
    w.push_back(v);
  }
  if (static_cast<int>(w.size()) != size)
    throw UsageError("weight needs " + std::to_string(size) + " coordinates, got '" + s + "'");
  return w;
}

// ---- rendering

void flatten(const json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, rows);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", rows);
  } else {
    rows.emplace_back(path, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
  return o + "\"";
}

std::string render_pairs(const json& doc, const std::string& sep, bool csv) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(doc, "", rows);
  std::ostringstream os;
  if (csv) os << "key,value\n";
  for (const auto& [k, v] : rows) os << (csv ? csv_field(k) : k) << sep << (csv ? csv_field(v) : v) << "\n";
  return os.str();
}

/// CSV tables for modules (character) and the highest-weight algebra (generators, evaluations).
std::string render_csv(const JobSpec& job, const json& doc) {
  const json& res = doc["result"];
  std::ostringstream os;
  if (job.command == "weyl") {
    os << "# dim," << res["dim"].dump() << "\n";
    os << "weight,multiplicity\n";
    for (const auto& e : res["character_g0"]) os << csv_field(e["weight"].dump()) << "," << e["mult"].dump() << "\n";
    return os.str();
  }
  if (job.command == "hwalg") {
    os << "table,node,k,exponents,coefficient\n";
    for (const auto& g : res["generators"])
      for (const auto& t : g["terms"])
        os << "generator," << g["node"].dump() << "," << g["k"].dump() << "," << csv_field(t["exponents"].dump())
           << "," << csv_field(t["coefficient"].get<std::string>()) << "\n";
    if (res.contains("evaluations"))
      for (const auto& e : res["evaluations"])
        os << "evaluation," << e["node"].dump() << "," << e["k"].dump() << ",," << csv_field(e["ev"].get<std::string>())
           << "\n";
    return os.str();
  }
  return render_pairs(doc, ",", true);
}

// ---- commands

json cmd_fold(const JobSpec& job, bool& pass) {
  TwistedSetup ts = setup_for(job);
  SuiteResult r = fold_suite(ts);
  pass = r.pass;
  return r.report;
}

XiFunction chi_from_job(const JobSpec& job, const TwistedSetup& ts) {
  json j;
  try {
    j = json::parse(job.chi.empty() ? std::string("{}") : job.chi);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("chi is not valid JSON: ") + e.what());
  }
  XiFunction chi = xi_from_json(j, ts.aut.m, ts.rs.rank);
  for (const auto& [a, mu] : chi.entries)
    if (!is_dominant(mu)) throw UsageError("chi takes a non-dominant value at " + a.str());
  if (job.symmetrize) chi = symmetrize(chi, ts.aut);
  if (!is_equivariant(chi, ts.aut)) throw UsageError("chi is not equivariant (pass --symmetrize to complete it)");
  return chi;
}

json cmd_weyl(const JobSpec& job, bool& pass) {
  TwistedSetup ts = setup_for(job);
  XiFunction chi = chi_from_job(job, ts);
  StableResult sr;
  TwistedModule W = build_stable_twisted([&](int N) { return build_local_weyl_twisted(ts, chi, N); }, job.depth, &sr);
  json res = module_summary(W);
  res["stabilization"] = {{"depth", sr.depth}, {"dims", sr.dims}, {"stabilized", sr.stabilized}};
  res["admissible_input"] = is_admissible(chi, ts.aut.m);
  res["lambda_bar"] = W.lambda_bar;
  pass = W.relations_ok && W.M.hull_ok;
  if (job.direct) {
    StableResult sd;
    TwistedModule D =
        build_stable_twisted([&](int N) { return build_local_weyl_twisted_direct(ts, chi, N); }, job.depth, &sd);
    res["direct"] = {{"dim", D.M.dim},
                     {"depth", sd.depth},
                     {"relations_ok", D.relations_ok},
                     {"agrees", D.M.dim == W.M.dim && character_g0(D) == character_g0(W)}};
    pass = pass && D.relations_ok && D.M.dim == W.M.dim;
  }
  if (job.actions) res["actions"] = action_dump(W.M);
  return res;
}

json cmd_hwalg(const JobSpec& job, bool& pass) {
  TwistedSetup ts = setup_for(job);
  Weight lam = parse_weight(job.lambda, ts.fd.rank0());
  HWAlgebra A(ts.fd, lam);
  json res;
  res["lambda_bar"] = lam;
  res["stab"] = A.stab;
  json gens = json::array();
  for (int i = 0; i < ts.fd.rank0(); ++i) {
    if (lam[i] == 0) continue;
    for (long k = -job.bound; k <= job.bound; ++k) {
      long e = k * A.stab[i];
      SymLaurent s = sym_generator(A, i, e);
      json terms = json::array();
      for (const auto& [key, c] : s.terms) terms.push_back({{"exponents", key}, {"coefficient", c.str()}});
      gens.push_back({{"node", i + 1}, {"k", e}, {"terms", terms}});
    }
  }
  res["generators"] = gens;
  if (!job.chi.empty()) {
    XiFunction chi = chi_from_job(job, ts);
    if (wt0(chi, ts.aut, ts.fd) != lam) throw UsageError("chi does not have restricted weight lambda");
    OrbitMultiset fh = alpha_iso(chi, ts.aut, ts.fd);
    res["multiset"] = multiset_to_json(fh);
    json evs = json::array();
    bool agree = true;
    for (int i = 0; i < ts.fd.rank0(); ++i)
      for (long k = -job.bound; k <= job.bound; ++k) {
        HMonomial mono{{{i, k}}};
        Scalar a = ev_xi(chi, mono, ts);
        Scalar b = ev_multiset(fh, tau_image(A, mono));
        agree = agree && a == b;
        evs.push_back({{"node", i + 1}, {"k", k}, {"ev", a.str()}});
      }
    res["evaluations"] = evs;
    res["commdiag_ok"] = agree;
    pass = agree;
  }
  return res;
}

json cmd_verify(const JobSpec& job, bool& pass) {
  TwistedSetup ts = setup_for(job);
  SuiteResult r;
  if (job.suite == "jacobi") {
    r = jacobi_suite(ts);
  } else if (job.suite == "fold") {
    r = fold_suite(ts);
  } else if (job.suite == "hwalg") {
    HwalgOptions o;
    o.bound = job.bound;
    o.iota_bound = job.bound;
    o.seed = job.seed;
    r = hwalg_suite(ts, o);
  } else if (job.suite == "garland") {
    GarlandOptions o;
    o.samples = job.samples;
    o.max_depth = job.depth;
    r = garland_suite(ts, parse_weight(job.lambda, ts.fd.rank0()), o);
  } else if (job.suite == "embedding") {
    EmbeddingOptions o;
    o.samples = job.samples;
    o.max_depth = job.depth;
    r = embedding_suite(ts, parse_weight(job.lambda, ts.fd.rank0()), o);
    SuiteResult pb = pullback_suite(ts, job.depth);
    r.report["pullback"] = pb.report["pullback"];
    r.pass = r.pass && pb.pass;
    r.report["pass"] = r.pass;
  } else {
    throw UsageError("unknown suite " + job.suite);
  }
  pass = r.pass;
  return r.report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twisted loop algebras: folding, local Weyl modules, verification"};
  app.require_subcommand(1);
  JobSpec job;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--type", job.type, "Cartan type letter");
    sub->add_option("--rank", job.rank, "rank");
    sub->add_option("--perm", job.perm, "diagram automorphism, 1-based images, e.g. 2,1");
    sub->add_option("--format", job.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", job.out, "write the report here instead of stdout");
  };

  CLI::App* fold = app.add_subcommand("fold", "folded root data of (g, sigma)");
  common(fold);
  fold->add_option("type_pos", job.type, "type letter");
  fold->add_option("rank_pos", job.rank, "rank");

  CLI::App* weyl = app.add_subcommand("weyl", "build the local Weyl module of chi");
  common(weyl);
  weyl->add_option("--chi", job.chi, "JSON map {point: [weight coords]}");
  weyl->add_flag("--symmetrize", job.symmetrize, "complete chi by the symmetrizer");
  weyl->add_option("--depth", job.depth, "maximal truncation depth")->check(CLI::Range(1, 12));
  weyl->add_flag("--direct", job.direct, "also build from the direct presentation and compare");
  weyl->add_flag("--actions", job.actions, "dump action matrices");

  CLI::App* hw = app.add_subcommand("hwalg", "generators of the highest-weight algebra and evaluation tables");
  common(hw);
  hw->add_option("--lambda", job.lambda, "restricted weight, comma separated")->required();
  hw->add_option("--chi", job.chi, "evaluate at this equivariant function");
  hw->add_flag("--symmetrize", job.symmetrize, "complete chi by the symmetrizer");
  hw->add_option("--bound", job.bound, "exponent bound")->check(CLI::Range(0, 8));

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify);
  verify->add_option("suite", job.suite, "garland | embedding | hwalg | jacobi | fold")
      ->required()
      ->check(CLI::IsMember({"garland", "embedding", "hwalg", "jacobi", "fold"}));
  verify->add_option("--lambda", job.lambda, "restricted weight, comma separated");
  verify->add_option("--depth", job.depth, "maximal truncation depth")->check(CLI::Range(1, 12));
  verify->add_option("--bound", job.bound, "degree bound")->check(CLI::Range(1, 6));
  verify->add_option("--samples", job.samples, "number of chi per weight")->check(CLI::Range(1, 50));
  verify->add_option("--seed", job.seed, "seed for random samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  bool pass = true;
  json result;
  try {
    if (fold->parsed()) {
      job.command = "fold";
      result = cmd_fold(job, pass);
    } else if (weyl->parsed()) {
      job.command = "weyl";
      result = cmd_weyl(job, pass);
    } else if (hw->parsed()) {
      job.command = "hwalg";
      result = cmd_hwalg(job, pass);
    } else {
      job.command = "verify";
      if ((job.suite == "garland" || job.suite == "embedding") && job.lambda.empty())
        throw UsageError("suite " + job.suite + " needs --lambda");
      result = cmd_verify(job, pass);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  }

  json doc = {{"job", job.to_json()}, {"result", result}, {"pass", pass}};
  std::string text;
  if (job.format == "json") text = doc.dump(2) + "\n";
  else if (job.format == "csv") text = render_csv(job, doc);
  else text = render_pairs(doc, ": ", false);

  if (job.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(job.out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << job.out << "\n";
      return 2;
    }
    f << text;
  }
  return pass ? 0 : 1;
}
