// Vertex Whitehead graphs, monodromy, admissible cuts and the reduction loop.

#include "gw/whitehead.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace gw {

// ---------------------------------------------------------------- lines

LineCollection make_lines(const std::vector<NormalWord>& gens) {
  if (gens.empty()) throw Error("EmptyLines", "line collection needs a generator");
  LineCollection L;
  L.pres = gens[0].pres;
  for (auto& g : gens) {
    if (is_peripheral(g)) throw Error("PeripheralElement", "line generator " + format_word(g) + " is peripheral");
    L.generators.push_back(g);
  }
  return L;
}

LineCollection parse_lines(const std::string& text, const PresPtr& p) {
  std::vector<NormalWord> gens;
  std::string cur;
  auto flush = [&] {
    size_t a = cur.find_first_not_of(" \t\r");
    if (a != std::string::npos && cur[a] != '#') gens.push_back(parse_word(cur.substr(a), p));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ';' || ch == '\n')
      flush();
    else
      cur += ch;
  }
  flush();
  return make_lines(gens);
}

CyclicLoop reverse_loop(const CyclicLoop& c) {
  int n = c.length();
  CyclicLoop r;
  r.he.resize(n);
  r.t.resize(n);
  for (int k = 0; k < n; ++k) {
    r.he[k] = rev(c.he[n - 1 - k]);
    int j = ((n - 2 - k) % n + n) % n;
    r.t[k] = fe_inv(c.t[j]);
  }
  r.conj = c.conj;
  if (n > 0) r.conj.el.back() = fe_mul(r.conj.el.back(), fe_inv(c.t[n - 1]));
  return r;
}

int LineLoops::total_length() const {
  int s = 0;
  for (auto& c : fwd) s += c.length();
  return s;
}

LineLoops line_loops(const GrushkoTree& t, const LineCollection& L) {
  LineLoops r;
  std::set<std::vector<int64_t>> seen;
  for (size_t j = 0; j < L.generators.size(); ++j) {
    CyclicLoop c = cyclic_loop(t, L.generators[j]);
    if (c.he.empty()) throw Error("EllipticElement", format_word(L.generators[j]) + " is elliptic");
    CyclicLoop root = cyc_power_root(c);
    if (!seen.insert(axis_key(root)).second) continue;
    r.fwd.push_back(root);
    r.bwd.push_back(reverse_loop(root));
    r.source.push_back(static_cast<int>(j));
  }
  return r;
}

int lines_length(const GrushkoTree& t, const LineCollection& L) { return line_loops(t, L).total_length(); }

// ---------------------------------------------------------------- graphs

int WhiteheadGraph::vertex_of_half(int h) const {
  for (int i = 0; i < nv(); ++i)
    if (vertices[i].kind == WVertex::Kind::Direction && vertices[i].half == h) return i;
  return -1;
}

int WhiteheadGraph::find(const std::string& name) const {
  for (int i = 0; i < nv(); ++i)
    if (vertices[i].name == name) return i;
  return -1;
}

std::vector<int> WhiteheadGraph::degrees() const {
  std::vector<int> d(nv(), 0);
  for (auto& e : edges) {
    ++d[e.from];
    ++d[e.to];
  }
  return d;
}

std::vector<std::vector<int>> WhiteheadGraph::components() const {
  std::vector<int> dsu(nv());
  std::iota(dsu.begin(), dsu.end(), 0);
  auto f = [&](int x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  for (auto& e : edges) {
    int a = f(e.from), b = f(e.to);
    if (a != b) dsu[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<int>> out;
  std::vector<int> id(nv(), -1);
  for (int i = 0; i < nv(); ++i) {
    int r = f(i);
    if (id[r] < 0) {
      id[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[id[r]].push_back(i);
  }
  return out;
}

bool WhiteheadGraph::connected() const { return components().size() <= 1; }

int WhiteheadGraph::component_count(const std::vector<int>& skipEdges) const {
  std::vector<char> skip(edges.size(), 0);
  for (int e : skipEdges) skip.at(e) = 1;
  std::vector<int> dsu(nv());
  std::iota(dsu.begin(), dsu.end(), 0);
  auto f = [&](int x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  int c = nv();
  for (size_t i = 0; i < edges.size(); ++i) {
    if (skip[i]) continue;
    int a = f(edges[i].from), b = f(edges[i].to);
    if (a != b) {
      dsu[std::max(a, b)] = std::min(a, b);
      --c;
    }
  }
  return c;
}

static std::string half_label(const Graph& g, int h) { return g.e[h >> 1].name + ((h & 1) ? "-" : "+"); }

WhiteheadGraph vertex_whitehead(const GrushkoTree& t, const LineCollection& L, int v) {
  return vertex_whitehead(t, line_loops(t, L), v);
}

WhiteheadGraph vertex_whitehead(const GrushkoTree& t, const LineLoops& loops, int v) {
  const Graph& g = t.g;
  if (v < 0 || v >= g.nv()) throw Error("UnknownVertex", "vertex index out of range");
  WhiteheadGraph W;
  W.pres = t.pres;
  W.atVertex = v;
  W.factor = g.v[v].label;
  std::vector<int> idx(2 * g.ne(), -1);
  for (int h : g.out(v)) {
    idx[h] = W.nv();
    WVertex x;
    x.kind = WVertex::Kind::Direction;
    x.name = "Y" + half_label(g, h);
    x.half = h;
    x.s = trivial_at(g, v);
    W.vertices.push_back(x);
    W.representative.push_back(trivial_at(g, v));
  }
  for (size_t j = 0; j < loops.fwd.size(); ++j) {
    auto turns = cyc_turns(g, loops.fwd[j]);
    for (size_t i = 0; i < turns.size(); ++i) {
      if (turns[i].vertex != v) continue;
      WEdge e;
      e.from = idx[turns[i].inHalfEdge];
      e.to = idx[turns[i].outHalfEdge];
      e.label = turns[i].label;
      e.line = static_cast<int>(j);
      e.turn = static_cast<int>(i);
      W.edges.push_back(e);
    }
  }
  return W;
}

// ---------------------------------------------------------------- monodromy

namespace {

FactorElement ident(const WhiteheadGraph& W) {
  if (W.factor >= 0) return W.pres->identity_in(W.factor);
  return FactorElement{};
}

FactorSubgroupReport trivial_report() {
  FactorSubgroupReport r;
  r.isTrivial = true;
  r.equalsWholeFactor = true;
  r.index = 1;
  return r;
}

// Potentials on a spanning tree of the subgraph (vertex mask, edge mask),
// rooted at `root`; returns false if some masked vertex is unreached.
bool potentials(const WhiteheadGraph& W, const std::vector<char>& vmask, const std::vector<char>& emask, int root,
                std::vector<FactorElement>& p, std::vector<char>& treeEdge) {
  int n = W.nv();
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (size_t i = 0; i < W.edges.size(); ++i) {
    if (!emask[i]) continue;
    auto& e = W.edges[i];
    adj[e.from].push_back({static_cast<int>(i), e.to});
    adj[e.to].push_back({static_cast<int>(i), e.from});
  }
  p.assign(n, ident(W));
  treeEdge.assign(W.edges.size(), 0);
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(root);
  seen[root] = 1;
  while (!q.empty()) {
    int a = q.front();
    q.pop();
    for (auto [ei, b] : adj[a]) {
      if (seen[b]) continue;
      auto& e = W.edges[ei];
      p[b] = (e.from == a) ? fe_mul(p[a], e.label) : fe_mul(p[a], fe_inv(e.label));
      seen[b] = 1;
      treeEdge[ei] = 1;
      q.push(b);
    }
  }
  for (int i = 0; i < n; ++i)
    if (vmask[i] && !seen[i]) return false;
  return true;
}

std::vector<FactorElement> cycle_elements(const WhiteheadGraph& W, const std::vector<char>& emask,
                                          const std::vector<FactorElement>& p, const std::vector<char>& treeEdge) {
  std::vector<FactorElement> gens;
  for (size_t i = 0; i < W.edges.size(); ++i) {
    if (!emask[i] || treeEdge[i]) continue;
    auto& e = W.edges[i];
    FactorElement x = fe_mul(fe_mul(p[e.from], e.label), fe_inv(p[e.to]));
    if (!x.trivial()) gens.push_back(x);
  }
  return gens;
}

}  // namespace

FactorSubgroupReport monodromy(const WhiteheadGraph& W, const std::vector<int>& vertices,
                               const std::optional<std::vector<int>>& edges) {
  if (vertices.empty()) throw Error("DisconnectedSubgraph", "empty subgraph");
  std::vector<char> vmask(W.nv(), 0), emask(W.edges.size(), 0);
  for (int v : vertices) vmask.at(v) = 1;
  if (edges) {
    for (int e : *edges) {
      emask.at(e) = 1;
      if (!vmask[W.edges[e].from] || !vmask[W.edges[e].to])
        throw Error("DisconnectedSubgraph", "edge leaves the subgraph");
    }
  } else {
    for (size_t i = 0; i < W.edges.size(); ++i) emask[i] = vmask[W.edges[i].from] && vmask[W.edges[i].to];
  }
  std::vector<FactorElement> p;
  std::vector<char> tree;
  if (!potentials(W, vmask, emask, vertices[0], p, tree)) throw Error("DisconnectedSubgraph", "subgraph is not connected");
  if (W.factor < 0) return trivial_report();
  return factor_subgroup(*W.pres, cycle_elements(W, emask, p, tree), W.factor);
}

FactorSubgroupReport monodromy(const WhiteheadGraph& W) {
  std::vector<int> all(W.nv());
  std::iota(all.begin(), all.end(), 0);
  return monodromy(W, all);
}

// ---------------------------------------------------------------- cuts

namespace {

bool trivial_mon(const WhiteheadGraph& W, const std::vector<char>& vmask, const std::vector<char>& emask, int root) {
  std::vector<FactorElement> p;
  std::vector<char> tree;
  potentials(W, vmask, emask, root, p, tree);
  return cycle_elements(W, emask, p, tree).empty();
}

std::vector<FactorElement> twist_for(const WhiteheadGraph& W, const std::vector<int>& U, int root) {
  std::vector<char> vmask(W.nv(), 0), emask(W.edges.size(), 0);
  for (int u : U) vmask[u] = 1;
  for (size_t i = 0; i < W.edges.size(); ++i) emask[i] = vmask[W.edges[i].from] && vmask[W.edges[i].to];
  std::vector<FactorElement> p;
  std::vector<char> tree;
  potentials(W, vmask, emask, root, p, tree);
  std::vector<FactorElement> r;
  for (int u : U) r.push_back(p[u]);
  return r;
}

}  // namespace

TypeICutData AdmissibleCut::type_i(const WhiteheadGraph& W) const {
  TypeICutData d;
  d.v = vertex;
  for (size_t i = 0; i < U.size(); ++i) {
    d.U.push_back(W.vertices[U[i]].half);
    d.twist.push_back(twist[i]);
  }
  return d;
}

TypeIICutData AdmissibleCut::type_ii(const WhiteheadGraph& W) const {
  TypeIICutData d;
  d.v = vertex;
  d.hY = W.vertices[cutVertex].half;
  for (size_t i = 0; i < U.size(); ++i) {
    if (U[i] == cutVertex) continue;
    d.A.push_back(W.vertices[U[i]].half);
    d.twist.push_back(twist[i]);
  }
  return d;
}

std::optional<AdmissibleCut> find_admissible_cut(const WhiteheadGraph& W) {
  int n = W.nv();
  if (n == 0) return std::nullopt;
  const bool trivialStab = W.factor < 0;
  auto comps = W.components();
  std::vector<int> compOf(n);
  for (size_t c = 0; c < comps.size(); ++c)
    for (int v : comps[c]) compOf[v] = static_cast<int>(c);
  auto edge_mask_of = [&](const std::vector<char>& vmask) {
    std::vector<char> em(W.edges.size(), 0);
    for (size_t i = 0; i < W.edges.size(); ++i) em[i] = vmask[W.edges[i].from] && vmask[W.edges[i].to];
    return em;
  };
  auto complement = [&](const std::vector<int>& U) {
    std::vector<char> in(n, 0);
    for (int u : U) in[u] = 1;
    std::vector<int> V;
    for (int i = 0; i < n; ++i)
      if (!in[i]) V.push_back(i);
    return V;
  };
  // type i
  for (auto& C : comps) {
    if (trivialStab && static_cast<int>(C.size()) == n) continue;
    std::vector<char> vm(n, 0);
    for (int v : C) vm[v] = 1;
    if (!trivial_mon(W, vm, edge_mask_of(vm), C[0])) continue;
    AdmissibleCut cut;
    cut.kind = AdmissibleCut::Kind::TypeI;
    cut.vertex = W.atVertex;
    cut.U = C;
    cut.V = complement(C);
    cut.twist = twist_for(W, C, C[0]);
    return cut;
  }
  // type ii
  for (int Y = 0; Y < n; ++Y) {
    // pieces of the component of Y at Y
    std::vector<int> dsu(n);
    std::iota(dsu.begin(), dsu.end(), 0);
    auto f = [&](int x) {
      while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
      return x;
    };
    for (auto& e : W.edges) {
      if (e.from == Y || e.to == Y) continue;
      int a = f(e.from), b = f(e.to);
      if (a != b) dsu[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::vector<int>> pieces;
    std::vector<int> pid(n, -1);
    for (int v = 0; v < n; ++v) {
      if (v == Y || compOf[v] != compOf[Y]) continue;
      int r = f(v);
      if (pid[r] < 0) {
        pid[r] = static_cast<int>(pieces.size());
        pieces.emplace_back();
      }
      pieces[pid[r]].push_back(v);
    }
    std::vector<std::vector<int>> trivialPieces;
    int otherEdges = 0;
    for (auto& P : pieces) {
      std::vector<char> vm(n, 0);
      for (int v : P) vm[v] = 1;
      vm[Y] = 1;
      std::vector<char> em(W.edges.size(), 0);
      for (size_t i = 0; i < W.edges.size(); ++i) {
        auto& e = W.edges[i];
        if (e.from == Y && e.to == Y) continue;  // loops at Y are separate pieces
        em[i] = vm[e.from] && vm[e.to];
      }
      if (trivial_mon(W, vm, em, Y)) {
        trivialPieces.push_back(P);
      } else {
        ++otherEdges;
      }
    }
    for (auto& e : W.edges) {
      if (e.from == Y && e.to == Y) ++otherEdges;
      else if (compOf[e.from] != compOf[Y]) ++otherEdges;
    }
    if (trivialPieces.empty()) continue;
    if (otherEdges == 0) trivialPieces.pop_back();
    if (trivialPieces.empty()) continue;
    std::vector<int> U{Y};
    for (auto& P : trivialPieces) U.insert(U.end(), P.begin(), P.end());
    std::sort(U.begin(), U.end());
    AdmissibleCut cut;
    cut.kind = AdmissibleCut::Kind::TypeII;
    cut.vertex = W.atVertex;
    cut.cutVertex = Y;
    cut.U = U;
    std::vector<int> V{Y};
    std::vector<char> inU(n, 0);
    for (int u : U) inU[u] = 1;
    for (int i = 0; i < n; ++i)
      if (!inU[i]) V.push_back(i);
    std::sort(V.begin(), V.end());
    cut.V = V;
    cut.twist = twist_for(W, U, Y);
    return cut;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- reduction

namespace {

std::vector<int> crossing_counts(const GrushkoTree& t, const LineLoops& loops) {
  std::vector<int> c(t.g.ne(), 0);
  for (auto& l : loops.fwd)
    for (int h : l.he) ++c[h >> 1];
  return c;
}

}  // namespace

bool is_whitehead_reduced(const GrushkoTree& t, const LineCollection& L) {
  LineLoops loops = line_loops(t, L);
  for (int c : crossing_counts(t, loops))
    if (c == 0) return false;
  for (int v = 0; v < t.g.nv(); ++v)
    if (find_admissible_cut(vertex_whitehead(t, loops, v))) return false;
  return true;
}

ReductionResult whitehead_reduce(const GrushkoTree& t, const LineCollection& L) {
  if (t.pres->sporadic()) throw Error("SporadicPresentation", "presentation is sporadic");
  ReductionResult R;
  R.start = t;
  GrushkoTree cur = t;
  R.startLength = lines_length(cur, L);
  int curLength = R.startLength;
  for (int iter = 0;; ++iter) {
    if (iter > R.startLength) throw Error("InternalInconsistency", "reduction exceeded |L|_T moves");
    LineLoops loops = line_loops(cur, L);
    auto cc = crossing_counts(cur, loops);
    auto it = std::find(cc.begin(), cc.end(), 0);
    if (it != cc.end()) {
      int e = static_cast<int>(it - cc.begin());
      R.outcome = ReductionResult::Outcome::UncrossedEdge;
      R.edge = e;
      R.freeSplitting = keep_only(cur, {e});
      R.splittingWitness = CompatibleWitness{free_splitting(cur), CollapseDesc{}, CollapseDesc{{}, {}, std::vector<int>{e}}};
      break;
    }
    std::optional<AdmissibleCut> cut;
    WhiteheadGraph W;
    for (int v = 0; v < cur.g.nv() && !cut; ++v) {
      W = vertex_whitehead(cur, loops, v);
      cut = find_admissible_cut(W);
    }
    if (!cut) {
      R.outcome = ReductionResult::Outcome::Reduced;
      break;
    }
    ReductionStep st;
    st.cut = *cut;
    st.lengthBefore = curLength;
    if (cut->kind == AdmissibleCut::Kind::TypeI) {
      BlowUpResult b = blow_up(cur, cut->type_i(W));
      st.kind = "blow-up";
      st.after = b.move.tree;
      st.witness = CompatibleWitness{free_splitting(st.after), b.collapseBack, CollapseDesc{}};
    } else {
      UnfoldResult u = unfold(cur, cut->type_ii(W));
      st.kind = "unfold";
      st.after = u.move.tree;
      st.witness = CompatibleWitness{free_splitting(u.refinement), u.toOld, u.toNew};
    }
    st.lengthAfter = lines_length(st.after, L);
    if (st.lengthAfter > st.lengthBefore) throw Error("InternalInconsistency", "a cut move increased |L|_T");
    cur = st.after;
    curLength = st.lengthAfter;
    R.steps.push_back(std::move(st));
  }
  R.tree = cur;
  R.finalLength = curLength;
  return R;
}

std::vector<int> peripheral_cut_points(const GrushkoTree& t, const LineCollection& L) {
  if (!is_whitehead_reduced(t, L)) throw Error("NotReduced", "tree is not Whitehead reduced for the lines");
  LineLoops loops = line_loops(t, L);
  std::vector<int> r;
  for (int v = 0; v < t.g.nv(); ++v) {
    if (t.g.v[v].label < 0) continue;
    WhiteheadGraph W = vertex_whitehead(t, loops, v);
    if (!W.connected() || !monodromy(W).equalsWholeFactor) r.push_back(v);
  }
  return r;
}

// ---------------------------------------------------------------- DOT

std::string to_dot(const WhiteheadGraph& W) {
  auto q = [](const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') r += '\\';
      r += c;
    }
    return r + "\"";
  };
  std::ostringstream os;
  os << "graph Wh {\n";
  for (auto& v : W.vertices) os << "  " << q(v.name) << ";\n";
  for (auto& e : W.edges) {
    std::string lab = e.label.trivial() ? "1" : format_factor_element(*W.pres, e.label);
    os << "  " << q(W.vertices[e.from].name) << " -- " << q(W.vertices[e.to].name) << " [label=" << q(lab)
       << ", line=" << e.line;
    if (e.voltage != 0) os << ", voltage=" << e.voltage;
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace gw
