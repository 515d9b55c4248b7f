#pragma once
// Shared fixtures for the test binaries.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "gw/random.hpp"
#include "gw/whitehead.hpp"

namespace gwtest {

using namespace gw;

inline PresPtr make_pres(std::vector<FactorSpec> f, int n, std::map<std::string, std::string> aliases = {}) {
  auto p = std::make_shared<Presentation>();
  p->factors = std::move(f);
  p->free_rank = n;
  p->aliases = std::move(aliases);
  return p;
}

// <a> * F(b, c)
inline PresPtr ex41() { return make_pres({{FactorKind::Free, 1}}, 2, {{"a", "a1.1"}, {"b", "x1"}, {"c", "x2"}}); }

// the rose of ex41 with its loops named after b and c
inline GrushkoTree rose41() {
  GrushkoTree t = standard_rose(ex41());
  t.g.e[0].name = "b";
  t.g.e[1].name = "c";
  return t;
}

inline NormalWord W(const PresPtr& p, const std::string& s) { return parse_word(s, p); }
inline LineCollection lines(const PresPtr& p, const std::string& s) { return parse_lines(s, p); }

inline const char* kG = "b a c b^-1 a^3 c^-1";

inline FactorElement A(const PresPtr& p, int64_t k) { return fe_generator(0, FactorKind::Free, 0, k); }

// a few non-sporadic presentations with every kind of factor
inline std::vector<PresPtr> sample_presentations() {
  return {ex41(),
          make_pres({{FactorKind::Abelian, 1}, {FactorKind::Free, 1}}, 1),
          make_pres({{FactorKind::Abelian, 2}}, 2),
          make_pres({}, 2),
          make_pres({{FactorKind::Free, 1}, {FactorKind::Free, 1}, {FactorKind::Abelian, 1}}, 0)};
}

// random finite subtree of t: nodes joined along random directions, plus stubs
inline SubtreeSpec random_subtree(const GrushkoTree& t, Rng& rng, int nodes, int stubs) {
  const Graph& g = t.g;
  SubtreeSpec X;
  X.rootVertex = static_cast<int>(draw(rng, g.nv()));
  X.nodes[0].tag = "N0.";
  X.nodes[0].name = "n0";
  std::vector<std::set<std::pair<int, std::vector<int64_t>>>> used(1);
  auto pick_dir = [&](int x, FactorElement& s, int& h) {
    int q = X.vertex_of(t, x);
    auto o = g.out(q);
    for (int tries = 0; tries < 50; ++tries) {
      h = o[draw(rng, static_cast<int64_t>(o.size()))];
      s = g.v[q].label >= 0 ? random_factor_element(*t.pres, g.v[q].label, rng, 1) : trivial_at(g, q);
      if (used[x].insert({h, s.payload}).second) return true;
    }
    return false;
  };
  for (int i = 1; i < nodes; ++i) {
    int x = static_cast<int>(draw(rng, static_cast<int64_t>(X.nodes.size())));
    FactorElement s;
    int h;
    if (!pick_dir(x, s, h)) continue;
    int c = X.add_node(x, s, h, "N" + std::to_string(X.nodes.size()) + ".", "n" + std::to_string(X.nodes.size()));
    used.emplace_back();
    used[c].insert({rev(h), {}});
  }
  for (int i = 0; i < stubs; ++i) {
    int x = static_cast<int>(draw(rng, static_cast<int64_t>(X.nodes.size())));
    FactorElement s;
    int h;
    if (!pick_dir(x, s, h)) continue;
    X.add_stub(x, s, h, "S" + std::to_string(X.stubs.size()));
  }
  return X;
}

// n vertices, labels of word length <= 1 in factor 0, edges drawn at random
inline WhiteheadGraph random_voltage_graph(const PresPtr& p, Rng& rng, int n, int edges) {
  const FactorSpec& f = p->factors.at(0);
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
  for (int k = 0; k < edges; ++k) {
    WEdge e;
    e.from = static_cast<int>(draw(rng, n));
    e.to = static_cast<int>(draw(rng, n));
    int64_t s = draw(rng, 3) - 1;
    e.label = s ? fe_generator(0, f.kind, static_cast<int>(draw(rng, f.rank)), s) : p->identity_in(0);
    if (e.from == e.to && e.label.trivial()) e.label = fe_generator(0, f.kind, 0, 1);
    e.line = k;
    Wh.edges.push_back(e);
  }
  return Wh;
}

}  // namespace gwtest
