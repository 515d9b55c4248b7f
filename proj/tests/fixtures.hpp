#pragma once
// Worked examples and instance generators shared by the unit tests and the
// acceptance run.

#include <algorithm>
#include <set>
#include <string>
#include <tuple>

#include "gw/classify.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace gwtest {

inline std::multiset<std::string> label_set(const WhiteheadGraph& Wh) {
  std::multiset<std::string> r;
  for (auto& e : Wh.edges) r.insert(e.label.trivial() ? "1" : format_factor_element(*Wh.pres, e.label));
  return r;
}

inline std::set<std::pair<std::string, std::string>> edge_names(const WhiteheadGraph& Wh) {
  std::set<std::pair<std::string, std::string>> r;
  for (auto& e : Wh.edges) {
    std::string x = Wh.vertices[e.from].name, y = Wh.vertices[e.to].name;
    if (y < x) std::swap(x, y);
    r.insert({x, y});
  }
  return r;
}

inline std::set<std::string> vertex_names(const WhiteheadGraph& Wh) {
  std::set<std::string> r;
  for (auto& v : Wh.vertices) r.insert(v.name);
  return r;
}

inline bool is_cycle(const WhiteheadGraph& Wh) {
  for (int d : Wh.degrees())
    if (d != 2) return false;
  return Wh.connected() && Wh.edges.size() == static_cast<size_t>(Wh.nv());
}

// hand-built voltage graph at the vertex of factor 0
inline WhiteheadGraph voltage_graph(const PresPtr& p, int n, const std::vector<std::tuple<int, int, FactorElement>>& es) {
  WhiteheadGraph Wh;
  Wh.pres = p;
  Wh.factor = 0;
  for (int i = 0; i < n; ++i) {
    WVertex v;
    v.name = "V" + std::to_string(i);
    v.half = i;
    Wh.vertices.push_back(v);
    Wh.representative.push_back(p->identity_in(0));
  }
  int k = 0;
  for (auto& [a, b, t] : es) {
    WEdge e;
    e.from = a;
    e.to = b;
    e.label = t;
    e.line = k++;
    Wh.edges.push_back(e);
  }
  return Wh;
}

// Example 7.2: X = a^-1 b^-1 e1^- u e1 u b c^-1 e2^- u b a^-4 b^-1 e1^-
inline SubtreeSpec example72() {
  auto p = ex41();
  SubtreeSpec X;
  X.rootVertex = 0;
  X.nodes[0].tag = "Y";
  X.nodes[0].name = "v";
  X.add_node(0, p->identity_in(0), 0, "Z", "w");
  X.add_stub(0, A(p, -1), 1);
  X.add_stub(1, p->identity_in(0), 3);
  X.add_stub(1, A(p, -4), 1);
  return X;
}

struct Instance {
  GrushkoTree tree;
  LineCollection L;
};

// reduced (tree, lines) pairs from random starting points
inline std::vector<Instance> reduced_instances(int want, uint64_t seed) {
  std::vector<Instance> out;
  Rng rng(seed);
  auto ps = sample_presentations();
  for (int tries = 0; static_cast<int>(out.size()) < want && tries < 50 * want; ++tries) {
    auto p = ps[draw(rng, static_cast<int64_t>(ps.size()))];
    GrushkoTree t = random_tree(p, rng(), static_cast<int>(draw(rng, 4)));
    std::vector<NormalWord> gens;
    int k = 1 + static_cast<int>(draw(rng, 2));
    for (int i = 0; i < k; ++i) gens.push_back(random_nonperipheral(p, rng, 3 + static_cast<int>(draw(rng, 3))));
    LineCollection L = make_lines(gens);
    if (lines_length(t, L) > 14) continue;
    ReductionResult r = whitehead_reduce(t, L);
    if (r.outcome != ReductionResult::Outcome::Reduced) continue;
    out.push_back({r.tree, L});
  }
  return out;
}


// split X at the midpoint of the edge into node c
inline std::pair<SubtreeSpec, SubtreeSpec> split_at(const GrushkoTree& t, const SubtreeSpec& X, int c) {
  const int n = static_cast<int>(X.nodes.size());
  std::vector<char> below(n, 0);
  below[c] = 1;
  for (int x = c + 1; x < n; ++x) below[x] = below[X.nodes[x].parent];
  SubtreeSpec A, B;
  A.rootVertex = X.rootVertex;
  A.nodes.clear();
  B.nodes.clear();
  std::vector<int> ia(n, -1), ib(n, -1);
  for (int x = 0; x < n; ++x) {
    auto nd = X.nodes[x];
    if (!below[x]) {
      if (x > 0) nd.parent = ia[nd.parent];
      ia[x] = static_cast<int>(A.nodes.size());
      A.nodes.push_back(nd);
    } else {
      if (x == c) {
        nd.parent = -1;
        nd.half = -1;
        B.rootVertex = X.vertex_of(t, c);
      } else {
        nd.parent = ib[nd.parent];
      }
      ib[x] = static_cast<int>(B.nodes.size());
      B.nodes.push_back(nd);
    }
  }
  for (auto s : X.stubs) {
    if (below[s.node]) {
      s.node = ib[s.node];
      B.stubs.push_back(s);
    } else {
      s.node = ia[s.node];
      A.stubs.push_back(s);
    }
  }
  A.add_stub(ia[X.nodes[c].parent], X.nodes[c].s, X.nodes[c].half, "CUT");
  B.add_stub(0, trivial_at(t.g, B.rootVertex), rev(X.nodes[c].half), "CUT");
  return {A, B};
}


// the two stars of the Figure 7 decomposition of example72()
inline std::pair<SubtreeSpec, SubtreeSpec> figure7_stars(const PresPtr& p) {
  SubtreeSpec Z;
  Z.nodes[0].tag = "Y";
  Z.nodes[0].name = "v";
  Z.add_stub(0, A(p, -1), 1);
  Z.add_stub(0, A(p, 0), 0, "Yb+");
  SubtreeSpec Zp;
  Zp.nodes[0].tag = "Z";
  Zp.nodes[0].name = "w";
  Zp.add_stub(0, A(p, 0), 1, "Zb-");
  Zp.add_stub(0, A(p, 0), 3);
  Zp.add_stub(0, A(p, -4), 1);
  return {Z, Zp};
}

// empty when one whitehead_reduce run is valid
inline std::string validate_reduction(const GrushkoTree& t, const LineCollection& L) {
  auto r = whitehead_reduce(t, L);
  std::string why;
  if (r.startLength != lines_length(t, L)) why += " start length";
  if (static_cast<int>(r.steps.size()) > r.startLength) why += " too many moves";
  int prev = r.startLength;
  ZSplitting before = free_splitting(t);
  for (auto& s : r.steps) {
    if (s.lengthAfter > prev || s.lengthAfter != lines_length(s.after, L)) why += " length grew";
    prev = s.lengthAfter;
    std::string w;
    if (!check_adjacency(before, free_splitting(s.after), s.witness, &w)) why += " step: " + w;
    before = free_splitting(s.after);
  }
  LineLoops loops = line_loops(r.tree, L);
  if (r.outcome == ReductionResult::Outcome::UncrossedEdge) {
    for (auto& l : loops.fwd)
      for (int h : l.he)
        if (h >> 1 == r.edge) why += " edge is crossed";
    for (auto& g : L.generators)
      if (!r.freeSplitting || !is_elliptic(*r.freeSplitting, g).elliptic) why += " not elliptic";
  } else {
    for (int v = 0; v < r.tree.g.nv(); ++v) {
      WhiteheadGraph Wh = vertex_whitehead(r.tree, loops, v);
      if (find_admissible_cut(Wh)) why += " cut at v" + std::to_string(v);
      if (Wh.factor >= 0)
        for (auto& C : Wh.components())
          if (monodromy(Wh, C).isTrivial) why += " trivial monodromy";
    }
  }
  return why;
}

// seeded (tree, lines) instances with |L|_T <= maxLength
inline std::vector<Instance> reduction_instances(int want, uint64_t seed, int maxLength) {
  std::vector<Instance> out;
  Rng rng(seed);
  auto ps = sample_presentations();
  for (int tries = 0; static_cast<int>(out.size()) < want && tries < 50 * want; ++tries) {
    auto p = ps[tries % ps.size()];
    GrushkoTree t = random_tree(p, rng(), static_cast<int>(draw(rng, 5)));
    std::vector<NormalWord> gens;
    int k = 1 + static_cast<int>(draw(rng, 2));
    for (int i = 0; i < k; ++i) gens.push_back(random_nonperipheral(p, rng, 2 + static_cast<int>(draw(rng, 4))));
    LineCollection L = make_lines(gens);
    if (lines_length(t, L) > maxLength) continue;
    out.push_back({t, L});
  }
  return out;
}

// ---------------------------------------------------------------- oracle comparisons

// is_simple against classical descent on every cyclically reduced word; returns the disagreements
inline std::vector<std::string> simplicity_disagreements(int n, int maxLen, int* count = nullptr) {
  auto p = make_pres({}, n);
  std::vector<std::string> bad;
  auto words = oracle::cyclically_reduced_words(n, maxLen);
  if (count) *count = static_cast<int>(words.size());
  for (auto& w : words) {
    std::vector<RawLetter> raw;
    for (int x : w) raw.push_back(RawLetter{p->free_gen_name(std::abs(x) - 1), x > 0 ? 1 : -1});
    NormalWord g = normalize(raw, p);
    if (is_simple(p, g).isSimple != oracle::simple_by_descent(w, n)) bad.push_back(format_word(g));
  }
  return bad;
}

struct VoltageInstance {
  PresPtr p;
  WhiteheadGraph Wh;
  std::vector<DVertex> removed;
};

// cycles through rank-1 free, rank-1 and rank-2 abelian and rank-2 free vertex groups
inline VoltageInstance voltage_instance(Rng& rng, int it) {
  static const std::vector<PresPtr> ps = {
      make_pres({{FactorKind::Free, 1}}, 2), make_pres({{FactorKind::Abelian, 1}}, 2),
      make_pres({{FactorKind::Abelian, 2}}, 2), make_pres({{FactorKind::Free, 2}}, 2)};
  int kind = it % 4;
  auto p = ps[kind];
  int n = kind == 3 ? 1 + static_cast<int>(draw(rng, 2)) : 2 + static_cast<int>(draw(rng, 3));
  int m = kind == 3 ? 1 + static_cast<int>(draw(rng, 3)) : n + static_cast<int>(draw(rng, 3));
  VoltageInstance I{p, random_voltage_graph(p, rng, n, m), {}};
  int d = kind == 3 ? 1 : 1 + static_cast<int>(draw(rng, 2));
  const FactorSpec& f = p->factors[0];
  for (int i = 0; i < d; ++i) {
    int64_t s = draw(rng, 3) - 1;
    FactorElement x = s ? fe_generator(0, f.kind, static_cast<int>(draw(rng, f.rank)), s) : p->identity_in(0);
    I.removed.push_back(DVertex{static_cast<int>(draw(rng, n)), x});
  }
  std::sort(I.removed.begin(), I.removed.end());
  I.removed.erase(std::unique(I.removed.begin(), I.removed.end()), I.removed.end());
  return I;
}

// empty when the voltage computations match the unrolled window
inline std::string compare_with_unrolling(const VoltageInstance& I) {
  const int64_t radius = 3 * (I.Wh.nv() + static_cast<int64_t>(I.removed.size()));
  std::string why;
  auto dc = derived_components(I.Wh);
  auto o0 = oracle::unroll(I.Wh, {}, radius);
  for (size_t K = 0; K < dc.quotient.size(); ++K) {
    auto c = dc.quotient[K].derivedCount;
    if (c && (o0.classesOuter[K] != *c || o0.classesInner[K] != *c))
      why += " count of K" + std::to_string(K) + " is " + std::to_string(*c) + ", window sees " +
             std::to_string(o0.classesInner[K]) + "/" + std::to_string(o0.classesOuter[K]);
    if (!c && o0.classesOuter[K] <= o0.classesInner[K]) why += " K" + std::to_string(K) + " should be infinite";
  }
  ComponentReport cm;
  try {
    cm = classify_components_minus(I.Wh, I.removed);
  } catch (const Error& e) {
    return std::string(" error ") + e.what();
  }
  auto o = oracle::unroll(I.Wh, I.removed, radius);
  std::set<std::set<DVertex>> fp;
  for (auto& pc : cm.pieces)
    if (pc.finite) fp.insert(std::set<DVertex>(pc.vertices.begin(), pc.vertices.end()));
  if (fp != o.finitePieces) why += " finite pieces differ";
  if (std::set<DVertex>(cm.vx.begin(), cm.vx.end()) != o.vx) why += " V_X differs";
  if (cm.hat != o.hat) why += " hat differs";
  return why;
}

// simple g with |g|_rose <= 3 and two trees of O_4(g); empty when certified within 2L+3
struct D0Instance {
  PresPtr p;
  NormalWord g;
  GrushkoTree T0, T1;
};
inline std::vector<D0Instance> d0_instances(int want) {
  std::vector<D0Instance> out;
  auto ps = sample_presentations();
  for (uint64_t seed = 1; static_cast<int>(out.size()) < want; ++seed) {
    auto p = ps[seed % ps.size()];
    Rng rng(seed);
    NormalWord g = random_nonperipheral(p, rng, 2);
    if (comb_length(standard_rose(p), g) > 3 || !is_simple(p, g).isSimple) continue;
    out.push_back({p, g, random_tree_in_OL(p, g, 4, seed * 7 + 1, 4), random_tree_in_OL(p, g, 4, seed * 7 + 2, 4)});
  }
  return out;
}
inline std::string check_d0(const D0Instance& I, int* length = nullptr) {
  try {
    auto c = certify_projection(I.p, I.g, I.T0, I.T1);
    int64_t L = std::max(comb_length(I.T0, I.g), comb_length(I.T1, I.g));
    if (length) *length = c.length();
    std::string why;
    if (L > 4) why += " L=" + std::to_string(L);
    if (!check_certificate(c, I.T0, I.T1, &why)) return " rejected:" + why;
    if (c.length() > 2 * L + 3) why += " length " + std::to_string(c.length());
    return why;
  } catch (const Error& e) {
    return std::string(" error ") + e.what();
  }
}

}  // namespace gwtest
