// Z-splittings, ellipticity, ZF adjacency witnesses and the projection bounds.

#include <algorithm>
#include <limits>
#include <numeric>

#include "gw/tree.hpp"

namespace gw {

int ZSplitting::kept_count() const {
  if (tree) return static_cast<int>(std::count(kept.begin(), kept.end(), 1));
  return static_cast<int>(se.size());
}

ZSplitting free_splitting(const GrushkoTree& t) {
  ZSplitting s;
  s.pres = t.pres;
  s.tree = t;
  s.kept.assign(t.g.ne(), 1);
  s.unverified = t.unverified;
  return s;
}

ZSplitting keep_only(const GrushkoTree& t, const std::vector<int>& edges) {
  ZSplitting s = free_splitting(t);
  std::fill(s.kept.begin(), s.kept.end(), 0);
  for (int e : edges) s.kept.at(e) = 1;
  return s;
}

bool same_splitting(const ZSplitting& a, const ZSplitting& b) {
  if (a.is_tree_form() != b.is_tree_form()) return false;
  if (a.is_tree_form()) return a.tree->same_tree(*b.tree) && a.kept == b.kept;
  if (a.sv.size() != b.sv.size() || a.se.size() != b.se.size()) return false;
  for (size_t i = 0; i < a.sv.size(); ++i)
    if (a.sv[i].gens != b.sv[i].gens) return false;
  for (size_t i = 0; i < a.se.size(); ++i) {
    auto &x = a.se[i], &y = b.se[i];
    if (x.from != y.from || x.to != y.to || x.group.has_value() != y.group.has_value()) return false;
    if (x.group && !(*x.group == *y.group)) return false;
  }
  return true;
}

EllipticResult is_elliptic(const ZSplitting& s, const NormalWord& g) {
  EllipticResult r;
  if (!s.is_tree_form()) {
    // supplied splitting: only the generators of vertex groups are known
    for (size_t v = 0; v < s.sv.size(); ++v)
      for (size_t i = 0; i < s.sv[v].gens.size(); ++i)
        for (int64_t e : {1, -1}) {
          if (power(s.sv[v].gens[i], e) == g) {
            r.elliptic = true;
            r.witness = EllipticEvidence{identity_word(s.pres), g, static_cast<int>(v), {{static_cast<int>(i), e}}};
            return r;
          }
        }
    return r;
  }
  const GrushkoTree& t = *s.tree;
  CyclicLoop c = cyclic_loop(t, g);
  for (int h : c.he)
    if (s.kept[h >> 1]) return r;
  r.elliptic = true;
  if (t.has_inverse) {
    EllipticEvidence ev;
    ev.conjugator = t.word(c.conj);
    ev.core = t.word(cyc_as_path(t.g, c));
    ev.vertex = path_end(t.g, c.conj);
    r.witness = ev;
  }
  return r;
}

bool check_elliptic_evidence(const ZSplitting& s, const NormalWord& g, const EllipticEvidence& ev) {
  if (!(conjugate(ev.conjugator, ev.core) == g)) return false;
  if (s.is_tree_form()) {
    // the core itself must avoid every kept edge
    return is_elliptic(s, ev.core).elliptic;
  }
  if (ev.vertex < 0 || ev.vertex >= static_cast<int>(s.sv.size())) return false;
  NormalWord prod = identity_word(s.pres);
  for (auto& [i, e] : ev.expr) {
    if (i < 0 || i >= static_cast<int>(s.sv[ev.vertex].gens.size())) return false;
    prod = multiply(prod, power(s.sv[ev.vertex].gens[i], e));
  }
  return prod == ev.core;
}

ZSplitting apply_collapse_desc(const ZSplitting& r, const CollapseDesc& d) {
  if (r.is_tree_form()) {
    MoveResult m = twisted_collapse(*r.tree, d.edges, d.twists);
    ZSplitting s = free_splitting(m.tree);
    std::vector<char> col(r.tree->g.ne(), 0);
    for (int e : d.edges) col[e] = 1;
    int k = 0;
    for (int e = 0; e < r.tree->g.ne(); ++e) {
      if (col[e]) continue;
      s.kept[k++] = r.kept[e];
    }
    if (d.keep) {
      std::vector<char> mask(s.kept.size(), 0);
      for (int e : *d.keep) mask.at(e) = 1;
      for (size_t e = 0; e < s.kept.size(); ++e) s.kept[e] = s.kept[e] && mask[e];
    }
    if (s.kept_count() == 0) throw Error("NothingLeft", "collapse leaves no kept edge");
    s.unverified = r.unverified;
    return s;
  }
  // supplied form: merge vertex generating sets along a forest
  int nv = static_cast<int>(r.sv.size());
  std::vector<int> dsu(nv);
  std::iota(dsu.begin(), dsu.end(), 0);
  auto find = [&](int x) {
    while (dsu[x] != x) x = dsu[x];
    return x;
  };
  std::vector<char> col(r.se.size(), 0);
  for (int e : d.edges) {
    int a = find(r.se.at(e).from), b = find(r.se.at(e).to);
    if (a == b) throw Error("NonForestCollapse", "collapsing a loop edge");
    dsu[std::max(a, b)] = std::min(a, b);
    col[e] = 1;
  }
  ZSplitting s;
  s.pres = r.pres;
  s.unverified = true;
  std::vector<int> id(nv, -1);
  for (int u = 0; u < nv; ++u) {
    int root = find(u);
    if (id[root] < 0) {
      id[root] = static_cast<int>(s.sv.size());
      s.sv.push_back(SVertex{r.sv[u].name, {}});
    }
    id[u] = id[root];
    auto& gens = s.sv[id[u]].gens;
    gens.insert(gens.end(), r.sv[u].gens.begin(), r.sv[u].gens.end());
  }
  for (size_t e = 0; e < r.se.size(); ++e) {
    if (col[e]) continue;
    SEdge ne = r.se[e];
    ne.from = id[ne.from];
    ne.to = id[ne.to];
    s.se.push_back(ne);
  }
  if (s.se.empty()) throw Error("NothingLeft", "collapse leaves no edge");
  return s;
}

bool check_adjacency(const ZSplitting& a, const ZSplitting& b, const AdjacencyWitness& w, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  try {
    if (auto* c = std::get_if<CompatibleWitness>(&w)) {
      if (!same_splitting(apply_collapse_desc(c->refinement, c->toA), a))
        return fail("first collapse does not reproduce the splitting");
      if (!same_splitting(apply_collapse_desc(c->refinement, c->toB), b))
        return fail("second collapse does not reproduce the splitting");
      return true;
    }
    auto& ce = std::get<CommonEllipticWitness>(w);
    if (is_peripheral(ce.g)) return fail("common elliptic element is peripheral");
    if (!check_elliptic_evidence(a, ce.g, ce.inA)) return fail("ellipticity evidence fails in the first splitting");
    if (!check_elliptic_evidence(b, ce.g, ce.inB)) return fail("ellipticity evidence fails in the second splitting");
    return true;
  } catch (const Error& e) {
    return fail(e.what());
  }
}

std::optional<AdjacencyWitness> zf_adjacent(const ZSplitting& a, const ZSplitting& b,
                                            const std::optional<NormalWord>& hint) {
  auto kept_list = [](const ZSplitting& s) {
    std::vector<int> r;
    for (size_t e = 0; e < s.kept.size(); ++e)
      if (s.kept[e]) r.push_back(static_cast<int>(e));
    return r;
  };
  if (a.is_tree_form() && b.is_tree_form() && a.tree->same_tree(*b.tree)) {
    // both are collapses of the union of their kept sets
    ZSplitting ref = a;
    for (size_t e = 0; e < ref.kept.size(); ++e) ref.kept[e] = a.kept[e] || b.kept[e];
    CompatibleWitness w{ref, CollapseDesc{{}, {}, kept_list(a)}, CollapseDesc{{}, {}, kept_list(b)}};
    if (check_adjacency(a, b, w)) return w;
  }
  if (!a.is_tree_form() && !b.is_tree_form() && same_splitting(a, b)) {
    CompatibleWitness w{a, CollapseDesc{}, CollapseDesc{}};
    if (check_adjacency(a, b, w)) return w;
  }
  if (hint && !is_peripheral(*hint)) {
    auto ea = is_elliptic(a, *hint), eb = is_elliptic(b, *hint);
    if (ea.elliptic && eb.elliptic && ea.witness && eb.witness) {
      CommonEllipticWitness w{*hint, *ea.witness, *eb.witness};
      if (check_adjacency(a, b, w)) return w;
    }
  }
  return std::nullopt;
}

ProjectionBounds compute_bounds(int64_t L, int64_t xi, std::optional<int64_t> c) {
  if (L < 1) throw Error("InvalidArgument", "L must be at least 1");
  if (xi < 3) throw Error("SporadicComplexity", "complexity below 3");
  ProjectionBounds b;
  b.L = L;
  b.xi = xi;
  b.c = c ? *c : L;
  if (b.c < 1) throw Error("InvalidArgument", "c must be at least 1");
  b.D0 = 2 * L + 3;
  b.D1 = 2 * L + 5;
  const int64_t lim = std::numeric_limits<int64_t>::max() / 4;
  int64_t pw = 1;
  for (int64_t i = 0; i < L; ++i) {
    if (pw > lim / b.c) throw Error("Overflow", "c^L too large");
    pw *= b.c;
  }
  if (pw > lim / (2 * xi)) throw Error("Overflow", "R0 too large");
  b.R0 = 2 * xi * pw + 1;
  b.R = b.R0;
  b.D2 = 2 * L + 2 * b.R + 5;
  return b;
}

}  // namespace gw
