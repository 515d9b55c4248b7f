// Elementary moves on Grushko trees. Every move is a pair of path maps
// (forward and back); markings are pushed forward and the inverse marking is
// pulled back, so both stay exact.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "gw/tree.hpp"

namespace gw {

namespace {

std::string fresh_vertex_name(const Graph& g) {
  std::set<std::string> used;
  for (auto& v : g.v) used.insert(v.name);
  for (int i = g.nv();; ++i) {
    std::string s = "v" + std::to_string(i);
    if (!used.count(s)) return s;
  }
}

std::string fresh_edge_name(const Graph& g) {
  std::set<std::string> used;
  for (auto& e : g.e) used.insert(e.name);
  for (int i = g.ne() + 1;; ++i) {
    std::string s = "e" + std::to_string(i);
    if (!used.count(s)) return s;
  }
}

// marking forward, inverse marking backward
void finish(const GrushkoTree& old, MoveResult& r) {
  GrushkoTree& t = r.tree;
  t.pres = old.pres;
  t.unverified = old.unverified;
  t.base = r.fwd.vmap[old.base];
  t.marking.clear();
  for (auto& m : old.marking) t.marking.push_back(apply(t.g, r.fwd, m));
  t.has_inverse = old.has_inverse;
  t.hword.clear();
  t.vconj.clear();
  if (!old.has_inverse) return;
  NormalWord d = old.word(r.backBase);
  NormalWord di = invert(d);
  for (int h = 0; h < 2 * t.g.ne(); ++h) t.hword.push_back(multiply(multiply(di, old.word(r.back.himg[h])), d));
  for (int u = 0; u < t.g.nv(); ++u) {
    int ou = r.back.vmap[u];
    if (t.g.v[u].label >= 0)
      t.vconj.push_back(multiply(di, old.vconj[ou]));
    else
      t.vconj.push_back(identity_word(old.pres));
  }
}

}  // namespace

MoveResult identity_move(const GrushkoTree& t) {
  MoveResult r;
  r.tree = t;
  r.fwd.vmap.resize(t.g.nv());
  std::iota(r.fwd.vmap.begin(), r.fwd.vmap.end(), 0);
  for (int h = 0; h < 2 * t.g.ne(); ++h) r.fwd.himg.push_back(edge_path(t.g, h));
  r.back = r.fwd;
  r.backBase = trivial_path(t.g, t.base);
  return r;
}

MoveResult raw_blow_up(const GrushkoTree& t, const BlowUpData& b) {
  const Graph& g = t.g;
  if (b.v < 0 || b.v >= g.nv()) throw Error("InvalidCut", "vertex out of range");
  if (b.S.empty()) throw Error("InvalidCut", "empty half-edge set");
  if (b.twist.size() != b.S.size()) throw Error("InvalidCut", "twist count");
  std::map<int, FactorElement> c;
  for (size_t i = 0; i < b.S.size(); ++i) {
    int h = b.S[i];
    if (h < 0 || h >= 2 * g.ne() || g.origin(h) != b.v) throw Error("InvalidCut", "half-edge not at vertex");
    if (c.count(h)) throw Error("InvalidCut", "repeated half-edge");
    const FactorElement& x = b.twist[i];
    if (!x.trivial() && x.factor != g.v[b.v].label) throw Error("InvalidCut", "twist outside vertex group");
    c[h] = x;
  }
  MoveResult r;
  Graph& ng = r.tree.g;
  ng = g;
  int vn = ng.nv();
  ng.v.push_back(GVertex{-1, fresh_vertex_name(g)});
  for (int h : b.S) {
    if (h & 1)
      ng.e[h >> 1].to = vn;
    else
      ng.e[h >> 1].from = vn;
  }
  int eps = ng.ne();
  ng.e.push_back(GEdge{b.v, vn, fresh_edge_name(g), 1.0});

  // forward: rho(d) = P(o,d) d P(t,rev d)^-1 with P(v,h) = [c_h^-1] eps for h in S
  r.fwd.vmap.resize(g.nv());
  std::iota(r.fwd.vmap.begin(), r.fwd.vmap.end(), 0);
  auto pre = [&](int h) {
    auto it = c.find(h);
    if (it == c.end()) return trivial_path(ng, g.origin(h));
    Path p = elem_path(ng, b.v, fe_inv(it->second));
    return concat(ng, p, edge_path(ng, 2 * eps));
  };
  for (int h = 0; h < 2 * g.ne(); ++h) {
    Path p = concat(ng, pre(h), edge_path(ng, h));
    p = concat(ng, p, inverse(ng, pre(rev(h))));
    r.fwd.himg.push_back(p);
  }
  // back: collapse eps with twists c on S
  r.back.vmap.resize(ng.nv());
  std::iota(r.back.vmap.begin(), r.back.vmap.end(), 0);
  r.back.vmap[vn] = b.v;
  auto tw = [&](int h) {
    auto it = c.find(h);
    return it == c.end() ? trivial_at(g, g.origin(h)) : it->second;
  };
  for (int h = 0; h < 2 * ng.ne(); ++h) {
    if ((h >> 1) == eps) {
      r.back.himg.push_back(trivial_path(g, b.v));
      continue;
    }
    Path p = elem_path(g, g.origin(h), tw(h));
    p = concat(g, p, edge_path(g, h));
    p = concat(g, p, elem_path(g, g.terminus(h), fe_inv(tw(rev(h)))));
    r.back.himg.push_back(p);
  }
  r.backBase = trivial_path(g, t.base);
  finish(t, r);
  return r;
}

MoveResult twisted_collapse(const GrushkoTree& t, const std::vector<int>& edges,
                            const std::vector<std::pair<int, FactorElement>>& twists) {
  const Graph& g = t.g;
  std::vector<char> col(g.ne(), 0);
  std::vector<int> dsu(g.nv());
  std::iota(dsu.begin(), dsu.end(), 0);
  std::function<int(int)> find = [&](int x) { return dsu[x] == x ? x : dsu[x] = find(dsu[x]); };
  for (int e : edges) {
    if (e < 0 || e >= g.ne()) throw Error("InvalidCollapse", "edge out of range");
    if (col[e]) throw Error("InvalidCollapse", "repeated edge");
    col[e] = 1;
    int a = find(g.e[e].from), b = find(g.e[e].to);
    if (a == b) throw Error("NonForestCollapse", "collapsing " + g.e[e].name + " would kill a loop");
    dsu[std::max(a, b)] = std::min(a, b);
  }
  if (g.ne() > 0 && static_cast<int>(edges.size()) == g.ne()) throw Error("NothingLeft", "every edge collapsed");
  // component ids ordered by smallest member
  std::map<int, int> cid;
  std::vector<int> vmap(g.nv());
  for (int u = 0; u < g.nv(); ++u) {
    int root = find(u);
    auto it = cid.find(root);
    if (it == cid.end()) it = cid.emplace(root, static_cast<int>(cid.size())).first;
    vmap[u] = it->second;
  }
  int nc = static_cast<int>(cid.size());
  MoveResult r;
  Graph& ng = r.tree.g;
  ng.v.assign(nc, GVertex{});
  std::vector<int> rep(nc, -1);
  for (int u = 0; u < g.nv(); ++u) {
    int c = vmap[u];
    if (rep[c] < 0) {
      rep[c] = u;
      ng.v[c].name = g.v[u].name;
    }
    if (g.v[u].label >= 0) {
      if (ng.v[c].label >= 0) throw Error("NotGrushko", "collapse merges two peripheral vertices");
      ng.v[c].label = g.v[u].label;
      rep[c] = u;
    }
  }
  std::vector<int> enew(g.ne(), -1);
  for (int e = 0; e < g.ne(); ++e) {
    if (col[e]) continue;
    enew[e] = ng.ne();
    GEdge ne = g.e[e];
    ne.from = vmap[ne.from];
    ne.to = vmap[ne.to];
    ng.e.push_back(ne);
  }
  std::map<int, FactorElement> tw;
  for (auto& [h, x] : twists) {
    if (h < 0 || h >= 2 * g.ne()) throw Error("InvalidCollapse", "twist half-edge out of range");
    if (col[h >> 1]) continue;
    int c = vmap[g.origin(h)];
    if (!x.trivial() && x.factor != ng.v[c].label) throw Error("InvalidCollapse", "twist outside vertex group");
    tw[h] = x;
  }
  auto twist = [&](int h) {
    auto it = tw.find(h);
    return it == tw.end() ? trivial_at(ng, vmap[g.origin(h)]) : it->second;
  };
  r.fwd.vmap = vmap;
  for (int h = 0; h < 2 * g.ne(); ++h) {
    int e = h >> 1;
    if (col[e]) {
      r.fwd.himg.push_back(trivial_path(ng, vmap[g.origin(h)]));
      continue;
    }
    int nh = 2 * enew[e] + (h & 1);
    Path p = elem_path(ng, vmap[g.origin(h)], twist(h));
    p = concat(ng, p, edge_path(ng, nh));
    p = concat(ng, p, elem_path(ng, vmap[g.terminus(h)], fe_inv(twist(rev(h)))));
    r.fwd.himg.push_back(p);
  }
  // back: forest paths inside each component
  std::vector<std::vector<int>> adj(g.nv());
  for (int e = 0; e < g.ne(); ++e)
    if (col[e]) {
      adj[g.e[e].from].push_back(2 * e);
      adj[g.e[e].to].push_back(2 * e + 1);
    }
  auto forest_path = [&](int from, int to) {
    // BFS in the forest from `from`
    std::map<int, int> via;
    std::vector<int> q = {from};
    via[from] = -1;
    for (size_t i = 0; i < q.size(); ++i)
      for (int h : adj[q[i]]) {
        int w = g.terminus(h);
        if (!via.count(w)) {
          via[w] = h;
          q.push_back(w);
        }
      }
    std::vector<int> hs;
    for (int w = to; w != from; w = g.origin(via.at(w))) hs.push_back(via.at(w));
    std::reverse(hs.begin(), hs.end());
    Path p = trivial_path(g, from);
    for (int h : hs) p = concat(g, p, edge_path(g, h));
    return p;
  };
  r.back.vmap = rep;
  for (int nh = 0; nh < 2 * ng.ne(); ++nh) {
    int e = -1;
    for (int k = 0; k < g.ne(); ++k)
      if (enew[k] == (nh >> 1)) e = k;
    int h = 2 * e + (nh & 1);
    Path p = forest_path(rep[vmap[g.origin(h)]], g.origin(h));
    // the twist lives at the labeled vertex; conjugate it over to the origin
    Path tp = elem_path(g, rep[vmap[g.origin(h)]], fe_inv(twist(h)));
    p = concat(g, tp, p);
    p = concat(g, p, edge_path(g, h));
    p = concat(g, p, forest_path(g.terminus(h), rep[vmap[g.terminus(h)]]));
    p = concat(g, p, elem_path(g, rep[vmap[g.terminus(h)]], twist(rev(h))));
    r.back.himg.push_back(p);
  }
  r.backBase = forest_path(rep[vmap[t.base]], t.base);
  finish(t, r);
  return r;
}

MoveResult compose(const GrushkoTree& start, const MoveResult& a, const MoveResult& b) {
  MoveResult r;
  r.tree = b.tree;
  const Graph& mid = a.tree.g;
  const Graph& fin = b.tree.g;
  for (int u = 0; u < start.g.nv(); ++u) r.fwd.vmap.push_back(b.fwd.vmap[a.fwd.vmap[u]]);
  for (auto& p : a.fwd.himg) r.fwd.himg.push_back(apply(fin, b.fwd, p));
  for (int u = 0; u < fin.nv(); ++u) r.back.vmap.push_back(a.back.vmap[b.back.vmap[u]]);
  for (auto& p : b.back.himg) r.back.himg.push_back(apply(start.g, a.back, p));
  r.backBase = concat(start.g, apply(start.g, a.back, b.backBase), a.backBase);
  (void)mid;
  return r;
}

GrushkoTree subdivide(const GrushkoTree& t, int e) {
  BlowUpData b;
  b.v = t.g.e.at(e).to;
  b.S = {2 * e + 1};
  b.twist = {trivial_at(t.g, b.v)};
  return raw_blow_up(t, b).tree;
}

BlowUpResult blow_up(const GrushkoTree& t, const TypeICutData& cut) {
  const Graph& g = t.g;
  int deg = g.degree(cut.v);
  if (cut.U.empty()) throw Error("InvalidCut", "U is empty");
  if (g.v[cut.v].label < 0 && static_cast<int>(cut.U.size()) >= deg)
    throw Error("InvalidCut", "V must be nonempty at a trivial-stabilizer vertex");
  BlowUpResult r;
  r.move = raw_blow_up(t, BlowUpData{cut.v, cut.U, cut.twist});
  int eps = r.move.tree.g.ne() - 1;
  r.collapseBack.edges = {eps};
  for (size_t i = 0; i < cut.U.size(); ++i) r.collapseBack.twists.push_back({cut.U[i], cut.twist[i]});
  return r;
}

UnfoldResult unfold(const GrushkoTree& t, const TypeIICutData& cut) {
  const Graph& g = t.g;
  if (cut.A.empty()) throw Error("InvalidCut", "U has no vertex besides the cut vertex");
  if (cut.hY < 0 || cut.hY >= 2 * g.ne() || g.origin(cut.hY) != cut.v) throw Error("InvalidCut", "bad cut vertex");
  for (int h : cut.A)
    if (h == cut.hY) throw Error("InvalidCut", "cut vertex listed in A");
  // an unlabeled v must keep a direction besides Y; a labeled v may end up a leaf
  if (g.v[cut.v].label < 0 && static_cast<int>(cut.A.size()) + 1 >= g.degree(cut.v))
    throw Error("InvalidCut", "V must contain a vertex besides the cut vertex");
  // 1. blow up A with its twists
  MoveResult m1 = raw_blow_up(t, BlowUpData{cut.v, cut.A, cut.twist});
  int eps = m1.tree.g.ne() - 1;
  // 2. blow up {hY, eps} at v, untwisted
  const Graph& g1 = m1.tree.g;
  MoveResult m2 = raw_blow_up(m1.tree, BlowUpData{cut.v, {cut.hY, 2 * eps}, {trivial_at(g1, cut.v), trivial_at(g1, cut.v)}});
  int eps2 = m2.tree.g.ne() - 1;
  // 3. collapse the edge of hY, which now leaves the new vertex
  int eY = cut.hY >> 1;
  MoveResult m3 = twisted_collapse(m2.tree, {eY});
  UnfoldResult r;
  MoveResult m12 = compose(t, m1, m2);
  r.move = compose(t, m12, m3);
  r.refinement = m2.tree;
  r.toOld.edges = {eps, eps2};
  for (size_t i = 0; i < cut.A.size(); ++i) r.toOld.twists.push_back({cut.A[i], cut.twist[i]});
  r.toNew.edges = {eY};
  return r;
}

MoveResult normalize_tree(const GrushkoTree& t) {
  MoveResult acc = identity_move(t);
  while (true) {
    const Graph& g = acc.tree.g;
    int target = -1;
    for (int u = 0; u < g.nv() && target < 0; ++u) {
      if (g.v[u].label >= 0) continue;
      auto o = g.out(u);
      if (o.size() == 2 && (o[0] >> 1) != (o[1] >> 1)) target = o[0] >> 1;
    }
    if (target < 0) break;
    MoveResult step = twisted_collapse(acc.tree, {target});
    acc = compose(t, acc, step);
  }
  return acc;
}

}  // namespace gw
