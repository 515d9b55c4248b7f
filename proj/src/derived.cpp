// Derived graphs T_v(L), Whitehead graphs of subtrees, splicing, axes and
// edge cut sets.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "gw/whitehead.hpp"

namespace gw {

bool DVertex::operator<(const DVertex& o) const {
  if (v != o.v) return v < o.v;
  if (s.payload.size() != o.s.payload.size()) return s.payload.size() < o.s.payload.size();
  return s.payload < o.s.payload;
}

bool DVertex::operator==(const DVertex& o) const { return v == o.v && s.payload == o.s.payload; }

namespace {

struct Adj {
  int edge;
  bool forward;  // the vertex is the tail of the edge
};

std::vector<std::vector<Adj>> adjacency(const WhiteheadGraph& W) {
  std::vector<std::vector<Adj>> adj(W.nv());
  for (size_t i = 0; i < W.edges.size(); ++i) {
    adj[W.edges[i].from].push_back({static_cast<int>(i), true});
    adj[W.edges[i].to].push_back({static_cast<int>(i), false});
  }
  return adj;
}

// neighbours of s.Y_v in T_v(L): along an edge a -> b labeled t, (s, a) meets (s t, b)
template <class F>
void for_neighbors(const WhiteheadGraph& W, const std::vector<std::vector<Adj>>& adj, const DVertex& x, F f) {
  for (auto& a : adj[x.v]) {
    const WEdge& e = W.edges[a.edge];
    if (a.forward)
      f(DVertex{e.to, fe_mul(x.s, e.label)}, a.edge);
    else
      f(DVertex{e.from, fe_mul(x.s, fe_inv(e.label))}, a.edge);
  }
}

int64_t floordiv(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int64_t posmod(int64_t a, int64_t b) { return a - floordiv(a, b) * b; }

FactorElement cyclic_generator(const Presentation& P, int factor, const FactorSubgroupReport& mon,
                               const std::vector<FactorElement>& gens) {
  if (P.factors[factor].kind == FactorKind::Abelian) {
    FactorElement m = P.identity_in(factor);
    m.payload = mon.lattice.at(0);
    while (!m.payload.empty() && m.payload.back() == 0) m.payload.pop_back();
    return m;
  }
  FactorElement r = factor_root(gens.at(0));
  int64_t d = 0;
  for (auto& g : gens) {
    auto e = integer_power_of(g, r);
    if (!e) throw Error("InternalInconsistency", "rank one monodromy is not cyclic");
    d = std::gcd(d, *e < 0 ? -*e : *e);
  }
  return fe_pow(r, d);
}

int64_t coord(const FactorElement& x, const FactorElement& m) {
  if (x.trivial()) return 0;
  auto n = integer_power_of(x, m);
  if (!n) throw Error("InternalInconsistency", "element outside the cyclic monodromy");
  return *n;
}

struct Dsu {
  std::vector<int> p;
  explicit Dsu(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int f(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = f(a);
    b = f(b);
    if (a == b) return false;
    p[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

ComponentReport derived_components(const WhiteheadGraph& W) { return classify_components_minus(W, {}); }

ComponentReport classify_components_minus(const WhiteheadGraph& W, const std::vector<DVertex>& removedIn,
                                          int64_t budget) {
  if (W.factor < 0) throw Error("TrivialStabilizer", "derived graphs need an infinite vertex group");
  const Presentation& P = *W.pres;
  const int f = W.factor;
  ComponentReport R;
  std::set<DVertex> removed(removedIn.begin(), removedIn.end());
  for (auto& r : removed)
    if (r.v < 0 || r.v >= W.nv()) throw Error("InvalidArgument", "removed vertex out of range");
  R.removed.assign(removed.begin(), removed.end());
  auto adj = adjacency(W);
  auto comps = W.components();
  std::vector<int> compOf(W.nv()), posIn(W.nv());
  int64_t work = 0;
  auto spend = [&](int64_t k) {
    work += k;
    if (work > budget) throw Error("BudgetExceeded", "component search exceeded the budget");
  };
  bool anyUnresolved = false;
  bool totalInfinite = false;
  int64_t total = 0;

  for (size_t K = 0; K < comps.size(); ++K)
    for (size_t i = 0; i < comps[K].size(); ++i) {
      compOf[comps[K][i]] = static_cast<int>(K);
      posIn[comps[K][i]] = static_cast<int>(i);
    }

  for (size_t K = 0; K < comps.size(); ++K) {
    const auto& verts = comps[K];
    // potentials on a BFS tree
    std::vector<FactorElement> pot(W.nv(), P.identity_in(f));
    std::vector<char> seen(W.nv(), 0), treeEdge(W.edges.size(), 0);
    std::queue<int> q;
    q.push(verts[0]);
    seen[verts[0]] = 1;
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      for (auto& ad : adj[a]) {
        const WEdge& e = W.edges[ad.edge];
        int b = ad.forward ? e.to : e.from;
        if (seen[b]) continue;
        pot[b] = ad.forward ? fe_mul(pot[a], e.label) : fe_mul(pot[a], fe_inv(e.label));
        seen[b] = 1;
        treeEdge[ad.edge] = 1;
        q.push(b);
      }
    }
    std::vector<int> kEdges;
    std::vector<FactorElement> gens;
    for (size_t i = 0; i < W.edges.size(); ++i) {
      const WEdge& e = W.edges[i];
      if (compOf[e.from] != static_cast<int>(K) || !seen[e.from]) continue;
      kEdges.push_back(static_cast<int>(i));
      if (treeEdge[i]) continue;
      FactorElement x = fe_mul(fe_mul(pot[e.from], e.label), fe_inv(pot[e.to]));
      if (!x.trivial()) gens.push_back(x);
    }
    QuotientComponent qc;
    qc.vertices = verts;
    for (int v : verts) qc.potential.push_back(pot[v]);
    qc.mon = factor_subgroup(P, gens, f);
    if (!qc.mon.isTrivial) qc.derivedCount = qc.mon.index;
    qc.shape = qc.mon.isTrivial ? "finite" : (qc.mon.rank == 1 ? "line" : "infinite");
    FactorSubgroup M(P, f, gens);

    // cosets of M met by the removed vertices
    std::vector<FactorElement> cosetRep;
    std::vector<std::vector<DVertex>> cosetMembers;
    for (auto& r : removed) {
      if (compOf[r.v] != static_cast<int>(K)) continue;
      FactorElement c = fe_mul(r.s, fe_inv(pot[r.v]));
      size_t j = 0;
      for (; j < cosetRep.size(); ++j)
        if (M.contains(fe_mul(fe_inv(cosetRep[j]), c))) break;
      if (j == cosetRep.size()) {
        cosetRep.push_back(c);
        cosetMembers.emplace_back();
      }
      cosetMembers[j].push_back(r);
    }
    std::optional<int64_t> untouched;
    if (qc.derivedCount) untouched = *qc.derivedCount - static_cast<int64_t>(cosetRep.size());
    R.untouched.push_back(untouched);
    if (!untouched) {
      totalInfinite = true;
      if (qc.mon.isTrivial) R.infinitelyManyFinite = true;
      else R.hat = true;
    } else {
      total += *untouched;
      if (*untouched > 0 && !qc.mon.isTrivial) R.hat = true;
    }

    const int nk = static_cast<int>(verts.size());
    for (size_t cj = 0; cj < cosetRep.size(); ++cj) {
      const FactorElement& c = cosetRep[cj];
      std::set<DVertex> rem(cosetMembers[cj].begin(), cosetMembers[cj].end());
      std::vector<DerivedPiece> pieces;
      if (qc.mon.isTrivial) {
        // one copy of K, vertex v at c.pot(v)
        spend(nk);
        Dsu d(nk);
        std::vector<char> gone(nk, 0);
        for (auto& r : rem) gone[posIn[r.v]] = 1;
        for (int ei : kEdges) {
          const WEdge& e = W.edges[ei];
          int a = posIn[e.from], b = posIn[e.to];
          if (!gone[a] && !gone[b]) d.unite(a, b);
        }
        std::map<int, DerivedPiece> byRoot;
        for (int i = 0; i < nk; ++i) {
          if (gone[i]) continue;
          auto& pc = byRoot[d.f(i)];
          pc.component = static_cast<int>(K);
          pc.finite = true;
          pc.shape = "finite";
          pc.vertices.push_back(DVertex{verts[i], fe_mul(c, pot[verts[i]])});
        }
        for (auto& [_, pc] : byRoot) pieces.push_back(pc);
      } else if (qc.mon.rank == 1) {
        // exact band computation in the coordinates c m^n pot(v)
        FactorElement m = cyclic_generator(P, f, qc.mon, gens);
        std::vector<int64_t> jump(W.edges.size(), 0);
        int64_t J = 1;
        for (int ei : kEdges) {
          const WEdge& e = W.edges[ei];
          jump[ei] = coord(fe_mul(fe_mul(pot[e.from], e.label), fe_inv(pot[e.to])), m);
          J = std::max(J, std::abs(jump[ei]) + 1);
        }
        std::set<std::pair<int64_t, int>> remC;  // (layer, position)
        int64_t nmin = 0, nmax = 0;
        bool first = true;
        for (auto& r : rem) {
          int64_t n = coord(fe_mul(fe_mul(fe_inv(c), r.s), fe_inv(pot[r.v])), m);
          remC.insert({n, posIn[r.v]});
          nmin = first ? n : std::min(nmin, n);
          nmax = first ? n : std::max(nmax, n);
          first = false;
        }
        const int64_t Q = (nk + 2) * J;
        const int64_t lo = nmin - Q, hi = nmax + Q;
        const int64_t layers = hi - lo + 1;
        spend(layers * nk);
        auto id = [&](int64_t n, int pos) { return static_cast<int>((n - lo) * nk + pos); };
        Dsu d(static_cast<size_t>(layers * nk));
        for (int64_t n = lo; n <= hi; ++n)
          for (int ei : kEdges) {
            const WEdge& e = W.edges[ei];
            int64_t n2 = n + jump[ei];
            if (n2 < lo || n2 > hi) continue;
            int a = posIn[e.from], b = posIn[e.to];
            if (remC.count({n, a}) || remC.count({n2, b})) continue;
            d.unite(id(n, a), id(n2, b));
          }
        std::map<int, std::vector<std::pair<int64_t, int>>> members;
        for (int64_t n = lo; n <= hi; ++n)
          for (int pos = 0; pos < nk; ++pos)
            if (!remC.count({n, pos})) members[d.f(id(n, pos))].push_back({n, pos});
        bool anyBoth = false;
        for (auto& [root, mem] : members) {
          bool top = false, bottom = false;
          for (auto& [n, pos] : mem) {
            if (n > hi - J) top = true;
            if (n < lo + J) bottom = true;
          }
          if (top && bottom) anyBoth = true;
          if (top || bottom) continue;
          DerivedPiece pc;
          pc.component = static_cast<int>(K);
          pc.finite = true;
          pc.shape = "finite";
          for (auto& [n, pos] : mem)
            pc.vertices.push_back(DVertex{verts[pos], fe_mul(fe_mul(c, fe_pow(m, n)), pot[verts[pos]])});
          pieces.push_back(pc);
        }
        if (anyBoth) {
          pieces.push_back(DerivedPiece{static_cast<int>(K), false, "line", {}});
        } else {
          pieces.push_back(DerivedPiece{static_cast<int>(K), false, "ray", {}});
          pieces.push_back(DerivedPiece{static_cast<int>(K), false, "ray", {}});
        }
      } else {
        // breadth-first search with infiniteness certificates
        std::map<DVertex, int> cls;
        std::vector<int> parentCls;
        std::vector<char> infinite;
        std::vector<std::vector<DVertex>> found;
        auto root = [&](int x) {
          while (parentCls[x] != x) x = parentCls[x];
          return x;
        };
        std::set<DVertex> starts;
        for (auto& r : rem)
          for_neighbors(W, adj, r, [&](const DVertex& y, int) {
            if (!rem.count(y)) starts.insert(y);
          });
        for (auto& s0 : starts) {
          if (cls.count(s0)) continue;
          int C = static_cast<int>(parentCls.size());
          parentCls.push_back(C);
          infinite.push_back(0);
          found.emplace_back();
          std::vector<DVertex> nodes{s0};
          std::vector<int> par{-1};
          cls[s0] = C;
          spend(1);
          bool stop = false;
          for (size_t qi = 0; qi < nodes.size() && !stop; ++qi) {
            DVertex x = nodes[qi];
            for_neighbors(W, adj, x, [&](const DVertex& z, int) {
              if (stop || rem.count(z)) return;
              auto it = cls.find(z);
              if (it != cls.end()) {
                int o = root(it->second);
                if (o != root(C)) {
                  // an earlier search reached here and did not close: infinite
                  parentCls[root(C)] = o;
                  infinite[o] = 1;
                  stop = true;
                }
                return;
              }
              spend(1);
              cls[z] = C;
              nodes.push_back(z);
              par.push_back(static_cast<int>(qi));
              // certificate: an ancestor with the same direction class
              for (int a = static_cast<int>(qi); a >= 0 && !stop; a = par[a]) {
                if (nodes[a].v != z.v) continue;
                FactorElement g = fe_mul(z.s, fe_inv(nodes[a].s));
                bool ok = true;
                for (int b = static_cast<int>(nodes.size()) - 1; ok; b = par[b]) {
                  for (auto& r : rem)
                    if (r.v == nodes[b].v && nonneg_power_of(fe_mul(r.s, fe_inv(nodes[b].s)), g)) ok = false;
                  if (b == a) break;
                }
                if (ok) {
                  infinite[root(C)] = 1;
                  stop = true;
                }
              }
            });
          }
          if (!stop) {
            found[C] = nodes;  // closed: a finite component
          }
        }
        std::map<int, int> rootPiece;
        int infiniteClasses = 0;
        for (size_t C = 0; C < parentCls.size(); ++C) {
          if (root(static_cast<int>(C)) != static_cast<int>(C)) continue;
          if (infinite[C]) {
            ++infiniteClasses;
            continue;
          }
          DerivedPiece pc{static_cast<int>(K), true, "finite", found[C]};
          std::sort(pc.vertices.begin(), pc.vertices.end());
          pieces.push_back(pc);
        }
        if (P.factors[f].kind == FactorKind::Abelian) {
          // a free abelian group of rank >= 2 is one-ended
          pieces.push_back(DerivedPiece{static_cast<int>(K), false, "infinite", {}});
        } else {
          if (infiniteClasses > 1) anyUnresolved = true;
          for (int i = 0; i < std::max(infiniteClasses, 1); ++i)
            pieces.push_back(DerivedPiece{static_cast<int>(K), false, "infinite", {}});
        }
      }
      for (auto& pc : pieces) {
        std::sort(pc.vertices.begin(), pc.vertices.end());
        if (pc.finite)
          R.vx.insert(R.vx.end(), pc.vertices.begin(), pc.vertices.end());
        else
          R.hat = true;
        ++total;
        R.pieces.push_back(pc);
      }
    }
    R.quotient.push_back(qc);
  }
  std::sort(R.vx.begin(), R.vx.end());
  R.resolved = !anyUnresolved;
  if (!totalInfinite && !anyUnresolved) R.total = total;
  return R;
}

// ---------------------------------------------------------------- tracing

namespace {

struct Hop {
  bool stub = false;
  int64_t node = 0;
  FactorElement arrival;
  int stubId = -1;
  int64_t xedge = 0;
};

struct Exit {
  bool stub = false;
  bool infinite = false;
  int64_t node = 0;
  FactorElement s;
  int h = -1;
  int stubId = -1;
  int key = -1;
};

using StepFn = std::function<std::optional<Hop>(int64_t, const FactorElement&, int)>;

// The line arrives at `node` along l.he[i] from the direction (sigma, rev l.he[i]);
// follow it until it leaves X.
Exit trace(const CyclicLoop& l, bool isFwd, int64_t node, FactorElement sigma, int i, const StepFn& step,
           std::vector<int64_t>& crossed, int limit) {
  const int n = l.length();
  for (int steps = 0;; ++steps) {
    int i1 = (i + 1) % n;
    FactorElement s = fe_mul(sigma, l.t[i]);
    int h = l.he[i1];
    auto hop = step(node, s, h);
    Exit x;
    if (!hop) {
      x.node = node;
      x.s = s;
      x.h = h;
      return x;
    }
    crossed.push_back(hop->xedge);
    if (hop->stub) {
      x.stub = true;
      x.stubId = hop->stubId;
      x.key = isFwd ? i1 : n - 1 - i1;
      return x;
    }
    if (steps > limit) {
      x.infinite = true;
      return x;
    }
    node = hop->node;
    sigma = hop->arrival;
    i = i1;
  }
}

struct Crossed {
  Exit back, front;
  int key = -1;
  std::vector<int64_t> crossed;
};

// every line crossing the X-edge that leaves `x` along (s, h)
std::vector<std::pair<int, Crossed>> crossings(const LineLoops& loops, int64_t x, const FactorElement& s, int h,
                                               const Hop& hop, const StepFn& step, int extraLimit) {
  std::vector<std::pair<int, Crossed>> out;
  for (size_t j = 0; j < loops.fwd.size(); ++j) {
    for (int o = 0; o < 2; ++o) {
      const CyclicLoop& l = o == 0 ? loops.fwd[j] : loops.bwd[j];
      const CyclicLoop& other = o == 0 ? loops.bwd[j] : loops.fwd[j];
      const int n = l.length();
      const int limit = n + extraLimit;
      for (int p = 0; p < n; ++p) {
        if (l.he[p] != h) continue;
        Crossed c;
        c.key = o == 0 ? p : n - 1 - p;
        c.crossed.push_back(hop.xedge);
        if (hop.stub) {
          c.front.stub = true;
          c.front.stubId = hop.stubId;
          c.front.key = c.key;
        } else {
          c.front = trace(l, o == 0, hop.node, hop.arrival, p, step, c.crossed, limit);
        }
        c.back = trace(other, o == 1, x, s, n - 1 - p, step, c.crossed, limit);
        out.push_back({static_cast<int>(j), c});
      }
    }
  }
  return out;
}

using DirKey = std::pair<int, std::vector<int64_t>>;

std::string half_label(const Graph& g, int h) { return g.e[h >> 1].name + ((h & 1) ? "-" : "+"); }

std::string elem_prefix(const Presentation& P, const FactorElement& s) {
  return s.trivial() ? "" : format_factor_element(P, s) + ".";
}

// per-node classes of the subtree graph
struct NodeView {
  int q = 0;
  bool labeled = false;
  std::map<DirKey, Hop> xdirs;
  WhiteheadGraph W;
  std::map<DVertex, int> explicitIdx;
  std::vector<int> dirIdx;  // unlabeled: per half-edge
  int hat = -1;
};

int class_of(const std::vector<NodeView>& views, const std::vector<int>& stubVertex, const Exit& x) {
  if (x.stub) return stubVertex.at(x.stubId);
  const NodeView& nv = views.at(static_cast<size_t>(x.node));
  if (!nv.labeled) return nv.dirIdx.at(x.h);
  auto it = nv.explicitIdx.find(DVertex{nv.W.vertex_of_half(x.h), x.s});
  if (it != nv.explicitIdx.end()) return it->second;
  return nv.hat;
}

}  // namespace

// ---------------------------------------------------------------- subtrees

int SubtreeSpec::add_node(int parent, const FactorElement& s, int half, const std::string& tag,
                          const std::string& name) {
  nodes.push_back(Node{parent, s, half, tag, name});
  return static_cast<int>(nodes.size()) - 1;
}

int SubtreeSpec::add_stub(int node, const FactorElement& s, int half, const std::string& name) {
  stubs.push_back(Stub{node, s, half, name});
  return static_cast<int>(stubs.size()) - 1;
}

int SubtreeSpec::vertex_of(const GrushkoTree& t, int node) const {
  if (node == 0) return rootVertex;
  return t.g.terminus(nodes.at(node).half);
}

namespace {

std::vector<DVertex> removed_at(const GrushkoTree& t, const SubtreeSpec& X, int x, const WhiteheadGraph& W) {
  std::vector<DVertex> r;
  for (size_t c = 1; c < X.nodes.size(); ++c) {
    if (X.nodes[c].parent == x) r.push_back(DVertex{W.vertex_of_half(X.nodes[c].half), X.nodes[c].s});
  }
  if (x > 0) r.push_back(DVertex{W.vertex_of_half(rev(X.nodes[x].half)), trivial_at(t.g, X.vertex_of(t, x))});
  for (auto& s : X.stubs)
    if (s.node == x) r.push_back(DVertex{W.vertex_of_half(s.half), s.s});
  return r;
}

void check_spec(const GrushkoTree& t, const SubtreeSpec& X) {
  const Graph& g = t.g;
  if (X.rootVertex < 0 || X.rootVertex >= g.nv()) throw Error("InvalidSubtree", "root vertex out of range");
  for (size_t c = 1; c < X.nodes.size(); ++c) {
    auto& n = X.nodes[c];
    if (n.parent < 0 || n.parent >= static_cast<int>(c)) throw Error("InvalidSubtree", "parents must come first");
    if (n.half < 0 || n.half >= 2 * g.ne() || g.origin(n.half) != X.vertex_of(t, n.parent))
      throw Error("InvalidSubtree", "edge does not leave its parent");
  }
  for (auto& s : X.stubs) {
    if (s.node < 0 || s.node >= static_cast<int>(X.nodes.size())) throw Error("InvalidSubtree", "stub node");
    if (s.half < 0 || s.half >= 2 * g.ne() || g.origin(s.half) != X.vertex_of(t, s.node))
      throw Error("InvalidSubtree", "stub does not leave its node");
  }
}

WhiteheadGraph midpoint_whitehead(const GrushkoTree& t, const LineLoops& loops, int e) {
  const Graph& g = t.g;
  if (e < 0 || e >= g.ne()) throw Error("InvalidSubtree", "edge out of range");
  WhiteheadGraph W;
  W.pres = t.pres;
  const std::string nm = g.e[e].name;
  for (int side = 0; side < 2; ++side) {
    WVertex v;
    v.kind = WVertex::Kind::Stub;
    v.name = "W" + nm + (side == 0 ? "-" : "+");
    v.half = side == 0 ? 2 * e + 1 : 2 * e;
    v.stub = side;
    W.vertices.push_back(v);
    W.representative.push_back(FactorElement{});
  }
  for (size_t j = 0; j < loops.fwd.size(); ++j) {
    auto& l = loops.fwd[j];
    for (int i = 0; i < l.length(); ++i) {
      if ((l.he[i] >> 1) != e) continue;
      WEdge we;
      bool forward = l.he[i] == 2 * e;
      we.from = forward ? 0 : 1;
      we.to = forward ? 1 : 0;
      we.line = static_cast<int>(j);
      we.turn = i;
      we.fromKey = we.toKey = i;
      W.edges.push_back(we);
    }
  }
  return W;
}

}  // namespace

ComponentReport subtree_node_classes(const GrushkoTree& t, const LineLoops& loops, const SubtreeSpec& X, int node,
                                     int64_t budget) {
  check_spec(t, X);
  WhiteheadGraph W = vertex_whitehead(t, loops, X.vertex_of(t, node));
  return classify_components_minus(W, removed_at(t, X, node, W), budget);
}

WhiteheadGraph subtree_whitehead(const GrushkoTree& t, const LineCollection& L, const SubtreeSpec& X,
                                 int64_t budget) {
  if (!is_whitehead_reduced(t, L)) throw Error("NotReduced", "tree is not Whitehead reduced for the lines");
  const Graph& g = t.g;
  const Presentation& P = *t.pres;
  LineLoops loops = line_loops(t, L);
  if (X.midpoint) return midpoint_whitehead(t, loops, *X.midpoint);
  check_spec(t, X);
  const int nn = static_cast<int>(X.nodes.size());
  std::vector<NodeView> views(nn);
  for (int x = 0; x < nn; ++x) {
    views[x].q = X.vertex_of(t, x);
    views[x].labeled = g.v[views[x].q].label >= 0;
  }
  auto norm = [&](int x, const FactorElement& s) {
    return views[x].labeled ? s.payload : std::vector<int64_t>{};
  };
  auto add_dir = [&](int x, const FactorElement& s, int h, const Hop& hop) {
    if (!views[x].xdirs.emplace(DirKey{h, norm(x, s)}, hop).second)
      throw Error("InvalidSubtree", "two pieces of X leave a node in the same direction");
  };
  for (int c = 1; c < nn; ++c) {
    auto& n = X.nodes[c];
    add_dir(n.parent, n.s, n.half, Hop{false, c, trivial_at(g, views[c].q), -1, c});
    add_dir(c, trivial_at(g, views[c].q), rev(n.half), Hop{false, n.parent, n.s, -1, c});
  }
  for (size_t k = 0; k < X.stubs.size(); ++k) {
    auto& s = X.stubs[k];
    add_dir(s.node, s.s, s.half, Hop{true, 0, FactorElement{}, static_cast<int>(k), nn + static_cast<int64_t>(k)});
  }

  WhiteheadGraph G;
  G.pres = t.pres;
  auto push = [&](WVertex v) {
    G.vertices.push_back(v);
    G.representative.push_back(v.s);
    return G.nv() - 1;
  };
  for (int x = 0; x < nn; ++x) {
    NodeView& nv = views[x];
    const auto& nd = X.nodes[x];
    nv.W = vertex_whitehead(t, loops, nv.q);
    if (!nv.labeled) {
      nv.dirIdx.assign(2 * g.ne(), -1);
      for (int h : g.out(nv.q)) {
        if (nv.xdirs.count(DirKey{h, {}})) continue;
        WVertex v;
        v.kind = WVertex::Kind::Direction;
        v.name = nd.tag + half_label(g, h);
        v.node = x;
        v.half = h;
        nv.dirIdx[h] = push(v);
      }
      continue;
    }
    ComponentReport cr = classify_components_minus(nv.W, removed_at(t, X, x, nv.W), budget);
    if (cr.infinitelyManyFinite) throw Error("NotReduced", "a derived component is finite");
    for (auto& d : cr.vx) {
      WVertex v;
      v.kind = WVertex::Kind::Explicit;
      int h = nv.W.vertices[d.v].half;
      v.name = elem_prefix(P, d.s) + nd.tag + half_label(g, h);
      v.node = x;
      v.half = h;
      v.s = d.s;
      nv.explicitIdx[d] = push(v);
    }
    if (cr.hat) {
      WVertex v;
      v.kind = WVertex::Kind::Hat;
      v.name = nd.name + "hat";
      v.node = x;
      nv.hat = push(v);
    }
  }
  std::vector<int> stubVertex;
  for (size_t k = 0; k < X.stubs.size(); ++k) {
    auto& s = X.stubs[k];
    WVertex v;
    v.kind = WVertex::Kind::Stub;
    v.name = s.name.empty() ? elem_prefix(P, s.s) + "W" + half_label(g, s.half) : s.name;
    v.node = s.node;
    v.half = s.half;
    v.s = s.s;
    v.stub = static_cast<int>(k);
    stubVertex.push_back(push(v));
  }

  StepFn step = [&](int64_t node, const FactorElement& s, int h) -> std::optional<Hop> {
    const NodeView& nv = views[static_cast<size_t>(node)];
    auto it = nv.xdirs.find(DirKey{h, nv.labeled ? s.payload : std::vector<int64_t>{}});
    if (it == nv.xdirs.end()) return std::nullopt;
    return it->second;
  };
  const int limit = 2 * nn + static_cast<int>(X.stubs.size()) + 4;

  // lines crossing edges of X
  auto add_crossing_edges = [&](int x, const FactorElement& s, int h, const Hop& hop) {
    for (auto& [j, c] : crossings(loops, x, s, h, hop, step, limit)) {
      if (c.front.infinite || c.back.infinite) throw Error("InternalInconsistency", "line stays in a finite subtree");
      if (*std::min_element(c.crossed.begin(), c.crossed.end()) != hop.xedge) continue;
      int a = class_of(views, stubVertex, c.back), b = class_of(views, stubVertex, c.front);
      if (a == b) continue;
      WEdge e;
      e.from = a;
      e.to = b;
      e.line = j;
      e.turn = c.key;
      e.fromKey = c.back.stub ? c.back.key : -1;
      e.toKey = c.front.stub ? c.front.key : -1;
      for (int64_t xe : c.crossed) e.crossed.push_back(static_cast<int>(xe));
      std::sort(e.crossed.begin(), e.crossed.end());
      G.edges.push_back(e);
    }
  };
  for (int c = 1; c < nn; ++c) {
    auto& n = X.nodes[c];
    add_crossing_edges(n.parent, n.s, n.half, views[n.parent].xdirs.at(DirKey{n.half, norm(n.parent, n.s)}));
  }
  for (size_t k = 0; k < X.stubs.size(); ++k) {
    auto& s = X.stubs[k];
    add_crossing_edges(s.node, s.s, s.half, views[s.node].xdirs.at(DirKey{s.half, norm(s.node, s.s)}));
  }
  // lines that meet X in a single vertex
  for (int x = 0; x < nn; ++x) {
    const NodeView& nv = views[x];
    if (!nv.labeled) {
      for (size_t j = 0; j < loops.fwd.size(); ++j) {
        auto turns = cyc_turns(g, loops.fwd[j]);
        for (size_t i = 0; i < turns.size(); ++i) {
          auto& tu = turns[i];
          if (tu.vertex != nv.q) continue;
          if (nv.xdirs.count(DirKey{tu.inHalfEdge, {}}) || nv.xdirs.count(DirKey{tu.outHalfEdge, {}})) continue;
          WEdge e;
          e.from = nv.dirIdx[tu.inHalfEdge];
          e.to = nv.dirIdx[tu.outHalfEdge];
          e.line = static_cast<int>(j);
          e.turn = static_cast<int>(i);
          G.edges.push_back(e);
        }
      }
      continue;
    }
    std::set<std::pair<int, std::vector<int64_t>>> done;
    for (auto& [d, idx] : nv.explicitIdx) {
      for (size_t ei = 0; ei < nv.W.edges.size(); ++ei) {
        const WEdge& we = nv.W.edges[ei];
        for (int side = 0; side < 2; ++side) {
          DVertex tail, head;
          if (side == 0) {
            if (we.from != d.v) continue;
            tail = d;
            head = DVertex{we.to, fe_mul(d.s, we.label)};
          } else {
            if (we.to != d.v) continue;
            tail = DVertex{we.from, fe_mul(d.s, fe_inv(we.label))};
            head = d;
          }
          if (!done.insert({static_cast<int>(ei), tail.s.payload}).second) continue;
          auto ta = nv.explicitIdx.find(tail), he = nv.explicitIdx.find(head);
          if (ta == nv.explicitIdx.end() || he == nv.explicitIdx.end()) continue;
          WEdge e;
          e.from = ta->second;
          e.to = he->second;
          e.label = we.label;
          e.line = we.line;
          e.turn = we.turn;
          G.edges.push_back(e);
        }
      }
    }
  }
  return G;
}

// ---------------------------------------------------------------- splicing

WhiteheadGraph splice(const WhiteheadGraph& A, int yA, const WhiteheadGraph& B, int yB) {
  if (yA < 0 || yA >= A.nv() || yB < 0 || yB >= B.nv()) throw Error("InvalidArgument", "splice vertex out of range");
  auto loose = [](const WhiteheadGraph& G, int y) {
    std::map<std::pair<int, int>, std::pair<int, int>> m;  // (line, key) -> (edge, other end)
    for (size_t i = 0; i < G.edges.size(); ++i) {
      auto& e = G.edges[i];
      if (e.from != y && e.to != y) continue;
      int key = e.from == y ? e.fromKey : e.toKey;
      int other = e.from == y ? e.to : e.from;
      if (key < 0) throw Error("PairingMismatch", "loose end without a crossing key");
      if (!m.emplace(std::make_pair(e.line, key), std::make_pair(static_cast<int>(i), other)).second)
        throw Error("PairingMismatch", "two loose ends share a crossing");
    }
    return m;
  };
  auto la = loose(A, yA), lb = loose(B, yB);
  if (la.size() != lb.size()) throw Error("PairingMismatch", "different numbers of loose ends");
  for (auto& [k, _] : la)
    if (!lb.count(k)) throw Error("PairingMismatch", "a loose end has no partner");
  WhiteheadGraph R;
  R.pres = A.pres;
  std::vector<int> ia(A.nv(), -1), ib(B.nv(), -1);
  for (int i = 0; i < A.nv(); ++i) {
    if (i == yA) continue;
    ia[i] = R.nv();
    R.vertices.push_back(A.vertices[i]);
    R.representative.push_back(A.representative[i]);
  }
  for (int i = 0; i < B.nv(); ++i) {
    if (i == yB) continue;
    ib[i] = R.nv();
    R.vertices.push_back(B.vertices[i]);
    R.representative.push_back(B.representative[i]);
  }
  for (auto& e : A.edges)
    if (e.from != yA && e.to != yA) {
      WEdge f = e;
      f.from = ia[e.from];
      f.to = ia[e.to];
      R.edges.push_back(f);
    }
  for (auto& e : B.edges)
    if (e.from != yB && e.to != yB) {
      WEdge f = e;
      f.from = ib[e.from];
      f.to = ib[e.to];
      R.edges.push_back(f);
    }
  for (auto& [k, ea] : la) {
    auto eb = lb.at(k);
    const WEdge& a = A.edges[ea.first];
    const WEdge& b = B.edges[eb.first];
    WEdge f;
    f.from = ia[ea.second];
    f.to = ib[eb.second];
    f.line = k.first;
    f.turn = k.second;
    f.fromKey = a.from == yA ? a.toKey : a.fromKey;
    f.toKey = b.from == yB ? b.toKey : b.fromKey;
    R.edges.push_back(f);
  }
  return R;
}

bool same_graph(const WhiteheadGraph& a, const WhiteheadGraph& b) {
  auto names = [](const WhiteheadGraph& g) {
    std::vector<std::string> r;
    for (auto& v : g.vertices) r.push_back(v.name);
    std::sort(r.begin(), r.end());
    return r;
  };
  auto edges = [](const WhiteheadGraph& g) {
    std::vector<std::tuple<std::string, std::string, int>> r;
    for (auto& e : g.edges) {
      std::string x = g.vertices[e.from].name, y = g.vertices[e.to].name;
      if (y < x) std::swap(x, y);
      r.emplace_back(x, y, e.line);
    }
    std::sort(r.begin(), r.end());
    return r;
  };
  return names(a) == names(b) && edges(a) == edges(b);
}

// ---------------------------------------------------------------- axes

std::pair<int, int64_t> AnnularResult::crossing_component(int64_t k, int line, int key) const {
  int64_t k0 = posmod(k, period), m = floordiv(k, period);
  for (auto& c : crossings.at(static_cast<size_t>(k0))) {
    if (c.line != line || c.key != key) continue;
    int K = component[c.vertex];
    int64_t val = c.shift + m - potential[c.vertex];
    int64_t d = modulus[K];
    return {K, d ? posmod(val, d) : val};
  }
  throw Error("InvalidArgument", "no such crossing of the axis");
}

AnnularResult annular_whitehead(const GrushkoTree& t, const LineCollection& L, const NormalWord& a,
                                int64_t budget) {
  if (is_peripheral(a)) throw Error("EllipticElement", format_word(a) + " is elliptic");
  if (!is_whitehead_reduced(t, L)) throw Error("NotReduced", "tree is not Whitehead reduced for the lines");
  const Graph& g = t.g;
  const Presentation& P = *t.pres;
  LineLoops loops = line_loops(t, L);
  AnnularResult R;
  R.axis = cyc_power_root(cyclic_loop(t, a));
  const CyclicLoop& ax = R.axis;
  const int n = ax.length();
  R.period = n;
  auto A = [&](int64_t k) { return ax.he[static_cast<size_t>(posmod(k, n))]; };
  auto T = [&](int64_t k) { return ax.t[static_cast<size_t>(posmod(k, n))]; };
  auto Q = [&](int64_t k) { return g.origin(A(k)); };

  WhiteheadGraph& G = R.quotient;
  G.pres = t.pres;
  std::vector<NodeView> views(n);
  for (int k = 0; k < n; ++k) {
    NodeView& nv = views[k];
    nv.q = Q(k);
    nv.labeled = g.v[nv.q].label >= 0;
    nv.W = vertex_whitehead(t, loops, nv.q);
    const std::string tag = "A" + std::to_string(k) + ".";
    FactorElement back = fe_inv(T(k - 1));
    if (!nv.labeled) {
      nv.dirIdx.assign(2 * g.ne(), -1);
      for (int h : g.out(nv.q)) {
        if (h == A(k) || h == rev(A(k - 1))) continue;
        WVertex v;
        v.kind = WVertex::Kind::Direction;
        v.name = tag + half_label(g, h);
        v.node = k;
        v.half = h;
        nv.dirIdx[h] = G.nv();
        G.vertices.push_back(v);
        G.representative.push_back(v.s);
      }
      continue;
    }
    std::vector<DVertex> rem{DVertex{nv.W.vertex_of_half(A(k)), trivial_at(g, nv.q)},
                             DVertex{nv.W.vertex_of_half(rev(A(k - 1))), back}};
    ComponentReport cr = classify_components_minus(nv.W, rem, budget);
    if (cr.infinitelyManyFinite) throw Error("NotReduced", "a derived component is finite");
    for (auto& d : cr.vx) {
      WVertex v;
      v.kind = WVertex::Kind::Explicit;
      int h = nv.W.vertices[d.v].half;
      v.name = elem_prefix(P, d.s) + tag + half_label(g, h);
      v.node = k;
      v.half = h;
      v.s = d.s;
      nv.explicitIdx[d] = G.nv();
      G.vertices.push_back(v);
      G.representative.push_back(v.s);
    }
    if (cr.hat) {
      WVertex v;
      v.kind = WVertex::Kind::Hat;
      v.name = "A" + std::to_string(k) + "hat";
      v.node = k;
      nv.hat = G.nv();
      G.vertices.push_back(v);
      G.representative.push_back(v.s);
    }
  }

  StepFn step = [&](int64_t k, const FactorElement& s, int h) -> std::optional<Hop> {
    if (h == A(k) && s.trivial()) return Hop{false, k + 1, fe_inv(T(k)), -1, k};
    if (h == rev(A(k - 1)) && s.payload == fe_inv(T(k - 1)).payload)
      return Hop{false, k - 1, trivial_at(g, Q(k - 1)), -1, k - 1};
    return std::nullopt;
  };
  auto exit_class = [&](const Exit& x) -> std::pair<int, int64_t> {
    int64_t k0 = posmod(x.node, n), m = floordiv(x.node, n);
    const NodeView& nv = views[static_cast<size_t>(k0)];
    int v;
    if (!nv.labeled) {
      v = nv.dirIdx.at(x.h);
    } else {
      auto it = nv.explicitIdx.find(DVertex{nv.W.vertex_of_half(x.h), x.s});
      v = it != nv.explicitIdx.end() ? it->second : nv.hat;
    }
    if (v < 0) throw Error("InternalInconsistency", "exit direction has no class");
    return {v, m};
  };

  R.crossings.assign(n, {});
  for (int k = 0; k < n; ++k) {
    auto hop = step(k, trivial_at(g, Q(k)), A(k));
    for (auto& [j, c] : crossings(loops, k, trivial_at(g, Q(k)), A(k), *hop, step, n + 2)) {
      if (c.front.infinite || c.back.infinite) continue;  // the axis itself
      auto [va, ma] = exit_class(c.back);
      auto [vb, mb] = exit_class(c.front);
      R.crossings[k].push_back(AnnularResult::Crossing{j, c.key, va, ma});
      if (*std::min_element(c.crossed.begin(), c.crossed.end()) != k) continue;
      WEdge e;
      e.from = va;
      e.to = vb;
      e.voltage = mb - ma;
      e.line = j;
      e.turn = c.key;
      for (int64_t xe : c.crossed) e.crossed.push_back(static_cast<int>(xe));
      std::sort(e.crossed.begin(), e.crossed.end());
      G.edges.push_back(e);
    }
  }
  // lines meeting the axis in a single vertex
  for (int k = 0; k < n; ++k) {
    const NodeView& nv = views[k];
    if (!nv.labeled) {
      for (size_t j = 0; j < loops.fwd.size(); ++j) {
        auto turns = cyc_turns(g, loops.fwd[j]);
        for (size_t i = 0; i < turns.size(); ++i) {
          auto& tu = turns[i];
          if (tu.vertex != nv.q || nv.dirIdx[tu.inHalfEdge] < 0 || nv.dirIdx[tu.outHalfEdge] < 0) continue;
          WEdge e;
          e.from = nv.dirIdx[tu.inHalfEdge];
          e.to = nv.dirIdx[tu.outHalfEdge];
          e.line = static_cast<int>(j);
          e.turn = static_cast<int>(i);
          G.edges.push_back(e);
        }
      }
      continue;
    }
    std::set<std::pair<int, std::vector<int64_t>>> done;
    for (auto& [d, idx] : nv.explicitIdx) {
      for (size_t ei = 0; ei < nv.W.edges.size(); ++ei) {
        const WEdge& we = nv.W.edges[ei];
        for (int side = 0; side < 2; ++side) {
          DVertex tail, head;
          if (side == 0) {
            if (we.from != d.v) continue;
            tail = d;
            head = DVertex{we.to, fe_mul(d.s, we.label)};
          } else {
            if (we.to != d.v) continue;
            tail = DVertex{we.from, fe_mul(d.s, fe_inv(we.label))};
            head = d;
          }
          if (!done.insert({static_cast<int>(ei), tail.s.payload}).second) continue;
          auto ta = nv.explicitIdx.find(tail), he = nv.explicitIdx.find(head);
          if (ta == nv.explicitIdx.end() || he == nv.explicitIdx.end()) continue;
          WEdge e;
          e.from = ta->second;
          e.to = he->second;
          e.label = we.label;
          e.line = we.line;
          e.turn = we.turn;
          G.edges.push_back(e);
        }
      }
    }
  }

  // components of the Z-cover
  const int nv = G.nv();
  R.component.assign(nv, -1);
  R.potential.assign(nv, 0);
  std::vector<std::vector<std::pair<int, int64_t>>> adj(nv);
  for (auto& e : G.edges) {
    adj[e.from].push_back({e.to, e.voltage});
    adj[e.to].push_back({e.from, -e.voltage});
  }
  for (int s = 0; s < nv; ++s) {
    if (R.component[s] >= 0) continue;
    int K = static_cast<int>(R.modulus.size());
    R.modulus.push_back(0);
    std::queue<int> q;
    q.push(s);
    R.component[s] = K;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (auto [y, w] : adj[x]) {
        if (R.component[y] < 0) {
          R.component[y] = K;
          R.potential[y] = R.potential[x] + w;
          q.push(y);
        }
      }
    }
  }
  for (auto& e : G.edges) {
    int64_t c = R.potential[e.from] + e.voltage - R.potential[e.to];
    int K = R.component[e.from];
    R.modulus[K] = std::gcd(R.modulus[K], c < 0 ? -c : c);
  }
  int64_t count = 0;
  bool inf = false;
  for (int64_t d : R.modulus) {
    if (d == 0) inf = true;
    count += d;
  }
  if (!inf) R.componentCount = count;
  return R;
}

// ---------------------------------------------------------------- edge cut sets

EdgeCutResult edge_cut_components(const GrushkoTree& t, const LineCollection& L, int e, int64_t budget) {
  const Graph& g = t.g;
  if (e < 0 || e >= g.ne()) throw Error("InvalidArgument", "edge out of range");
  LineLoops loops = line_loops(t, L);
  SubtreeSpec X;
  X.rootVertex = g.origin(2 * e);
  X.nodes[0].tag = "Y";
  X.nodes[0].name = "x";
  X.add_node(0, trivial_at(g, X.rootVertex), 2 * e, "Z", "y");
  std::set<std::tuple<int, int, std::vector<int64_t>>> seen;
  bool any = false;
  for (size_t j = 0; j < loops.fwd.size(); ++j)
    for (const CyclicLoop* l : {&loops.fwd[j], &loops.bwd[j]}) {
      int n = l->length();
      for (int p = 0; p < n; ++p) {
        if (l->he[p] != 2 * e) continue;
        any = true;
        int nx = (p + 1) % n, pv = (p - 1 + n) % n;
        std::tuple<int, int, std::vector<int64_t>> front{1, l->he[nx], l->t[p].payload};
        FactorElement bs = fe_inv(l->t[pv]);
        std::tuple<int, int, std::vector<int64_t>> back{0, rev(l->he[pv]), bs.payload};
        if (seen.insert(front).second) {
          std::string nm = "y:" + elem_prefix(*t.pres, l->t[p]) + "W" + half_label(g, l->he[nx]);
          X.add_stub(1, l->t[p], l->he[nx], nm);
        }
        if (seen.insert(back).second) {
          std::string nm = "x:" + elem_prefix(*t.pres, bs) + "W" + half_label(g, rev(l->he[pv]));
          X.add_stub(0, bs, rev(l->he[pv]), nm);
        }
      }
    }
  if (!any) throw Error("NoLinesCrossE", "no line crosses the edge");
  EdgeCutResult r;
  r.graph = subtree_whitehead(t, L, X, budget);
  for (size_t i = 0; i < r.graph.edges.size(); ++i) {
    auto& c = r.graph.edges[i].crossed;
    if (std::find(c.begin(), c.end(), 1) != c.end()) r.lineEdges.push_back(static_cast<int>(i));
  }
  r.components = r.graph.component_count(r.lineEdges);
  return r;
}

}  // namespace gw
