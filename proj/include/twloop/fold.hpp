#ifndef TWLOOP_FOLD_HPP
#define TWLOOP_FOLD_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "twloop/liealg.hpp"
#include "twloop/rootdata.hpp"

namespace twloop {

struct FoldedRootData {
  int m = 1;
  NodeOrbits nodes;
  IntMat folded_cartan;
  std::string g0_type;
  RootSystem rs0;
  bool type_a_even = false;
  std::vector<int> kappa;      // 2 / alpha_i(h_i(0)): 2 at the A_2n end node, else 1
  std::vector<Weight> p0_basis;  // lattice generators in standard g_0 fundamental weights
  std::vector<bool> r0_short;   // per positive root of rs0

  int rank0() const { return static_cast<int>(nodes.reps.size()); }
  const std::vector<IntVec>& orbits() const { return nodes.orbits; }
  const IntVec& reps() const { return nodes.reps; }
  const IntVec& stab_sizes() const { return nodes.stab; }
};

/// Everything attached to (g, sigma): algebra, lift, grading, generators, folded data.
struct TwistedSetup {
  RootSystem rs;
  DiagramAut aut;
  ChevalleyAlgebra g;
  LiftedAut lift;
  GradedPieces pieces;
  TwistedGenerators gens;
  FoldedRootData fd;
};

inline std::vector<bool> classify_r0_lengths(const RootSystem& rs0, bool type_a_even) {
  std::vector<bool> out;
  Rational mx = 0;
  for (const auto& r : rs0.positive_roots) mx = std::max(mx, rs0.inner(r, r));
  for (const auto& r : rs0.positive_roots) {
    bool s = rs0.inner(r, r) < mx;
    // A_2 folds to a single-length A_1 whose root is still the short one
    if (type_a_even && rs0.rank == 1) s = true;
    out.push_back(s);
  }
  return out;
}

inline TwistedSetup make_setup(const RootSystem& rs, const DiagramAut& aut) {
  TwistedSetup ts;
  ts.rs = rs;
  ts.aut = aut;
  ts.g = build_chevalley(rs);
  ts.lift = lift_automorphism(ts.g, aut);
  ts.pieces = graded_decomposition(ts.g, ts.lift);
  FoldedRootData& fd = ts.fd;
  fd.m = aut.m;
  fd.nodes = node_orbits(rs, aut);
  fd.type_a_even = rs.type == 'A' && rs.rank % 2 == 0 && aut.m == 2;
  // positive roots of g_0 from the combinatorial folding; the bracket-derived
  // Cartan matrix must agree
  IntMat comb = folded_cartan_combinatorial(rs, fd.nodes);
  fd.rs0 = root_system_from_cartan(comb);
  ts.gens = twisted_generators(ts.g, ts.lift, fd.rs0, fd.type_a_even);
  fd.folded_cartan = ts.gens.folded_cartan;
  if (fd.folded_cartan != comb) throw std::logic_error("folded Cartan matrices disagree");
  fd.g0_type = identify_type(fd.folded_cartan);
  fd.rs0.type = fd.g0_type.empty() ? '?' : fd.g0_type[0];
  int n0 = fd.rank0();
  for (int i = 0; i < n0; ++i) {
    const Scalar& k = ts.gens.roots[ts.gens.simple[i]].kappa;
    fd.kappa.push_back(static_cast<int>(k.re().get_num().get_si()));
    Weight w(static_cast<std::size_t>(n0), 0);
    w[i] = fd.kappa.back();
    fd.p0_basis.push_back(w);
  }
  fd.r0_short = classify_r0_lengths(fd.rs0, fd.type_a_even);
  return ts;
}

inline TwistedSetup make_setup(char type, int rank, const IntVec& perm) {
  RootSystem rs = build_root_system(type, rank);
  return make_setup(rs, make_diagram_aut(rs, perm));
}

inline FoldedRootData fold(const RootSystem& rs, const DiagramAut& aut) { return make_setup(rs, aut).fd; }

/// lambda-bar in the restricted basis (omega-bar_i = restriction of omega_rep): orbit sums.
inline Weight restrict_weight(const FoldedRootData& fd, const Weight& lambda) {
  return restrict_weight_orbits(fd.nodes, lambda);
}

/// Restricted coordinates -> standard fundamental-weight coordinates of g_0.
inline Weight to_standard_g0(const FoldedRootData& fd, const Weight& c) {
  Weight w(c);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] *= fd.kappa[i];
  return w;
}

/// Membership in P_0^+ given standard g_0 coordinates.
inline bool in_p0_plus(const FoldedRootData& fd, const Weight& standard) {
  for (std::size_t i = 0; i < standard.size(); ++i) {
    if (standard[i] < 0) return false;
    if (standard[i] % fd.kappa[i] != 0) return false;
  }
  return true;
}

inline nlohmann::json folded_to_json(const FoldedRootData& fd) {
  nlohmann::json j;
  j["m"] = fd.m;
  nlohmann::json orbs = nlohmann::json::array();
  for (const auto& o : fd.nodes.orbits) {
    nlohmann::json a = nlohmann::json::array();
    for (int k : o) a.push_back(k + 1);
    orbs.push_back(a);
  }
  j["orbits"] = orbs;
  nlohmann::json reps = nlohmann::json::array();
  for (int r : fd.nodes.reps) reps.push_back(r + 1);
  j["reps"] = reps;
  j["stab_sizes"] = fd.nodes.stab;
  j["folded_cartan"] = fd.folded_cartan;
  j["g0_type"] = fd.g0_type;
  j["p0_basis"] = fd.p0_basis;
  nlohmann::json roots = nlohmann::json::array();
  for (std::size_t i = 0; i < fd.rs0.positive_roots.size(); ++i)
    roots.push_back({{"root", fd.rs0.positive_roots[i]}, {"short", static_cast<bool>(fd.r0_short[i])}});
  j["r0_positive"] = roots;
  return j;
}

}  // namespace twloop

#endif
