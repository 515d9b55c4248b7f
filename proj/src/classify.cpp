// Simplicity, quadraticity, cut pairs along short axes and ZF path certificates.

#include "gw/classify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace gw {

namespace {

void require_loxodromic(const NormalWord& g) {
  if (g.is_identity() || is_peripheral(g)) throw Error("EllipticElement", format_word(g) + " is elliptic");
}

std::vector<int> edge_crossings(const GrushkoTree& t, const LineLoops& loops) {
  std::vector<int> c(t.g.ne(), 0);
  for (auto& l : loops.fwd)
    for (int h : l.he) ++c[h >> 1];
  return c;
}

bool is_circle(const WhiteheadGraph& W) {
  if (W.nv() == 0 || !W.connected()) return false;
  for (int d : W.degrees())
    if (d != 2) return false;
  return true;
}

int64_t xi_of(const Presentation& p) { return complexity(p).first; }

}  // namespace

// ---------------------------------------------------------------- simplicity

SimplicityVerdict is_simple(const PresPtr& p, const NormalWord& g) {
  require_loxodromic(g);
  SimplicityVerdict v;
  v.reduction = whitehead_reduce(standard_rose(p), make_lines({g}));
  if (v.reduction.outcome == ReductionResult::Outcome::UncrossedEdge) {
    auto e = is_elliptic(*v.reduction.freeSplitting, g);
    if (!e.elliptic || !e.witness) throw Error("InternalInconsistency", "g crosses the uncrossed edge");
    v.isSimple = true;
    v.elliptic = e.witness;
  }
  return v;
}

bool check_simplicity(const SimplicityVerdict& v, const NormalWord& g, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  const ReductionResult& r = v.reduction;
  ZSplitting cur = free_splitting(r.start);
  for (size_t i = 0; i < r.steps.size(); ++i) {
    ZSplitting next = free_splitting(r.steps[i].after);
    if (!check_adjacency(cur, next, r.steps[i].witness)) return fail("reduction step " + std::to_string(i));
    cur = next;
  }
  if (!r.tree.same_tree(r.steps.empty() ? r.start : r.steps.back().after)) return fail("final tree");
  LineCollection L = make_lines({g});
  if (v.isSimple) {
    if (!r.freeSplitting || !r.splittingWitness || !v.elliptic) return fail("missing witness");
    if (!check_adjacency(cur, *r.freeSplitting, *r.splittingWitness)) return fail("free splitting step");
    if (!check_elliptic_evidence(*r.freeSplitting, g, *v.elliptic)) return fail("ellipticity evidence");
    return true;
  }
  for (int c : edge_crossings(r.tree, line_loops(r.tree, L)))
    if (c == 0) return fail("an edge of the final tree is uncrossed");
  if (!is_whitehead_reduced(r.tree, L)) return fail("final tree admits a cut");
  return true;
}

ConnectivityVerdict decomposition_connected(const PresPtr& p, const LineCollection& L) {
  for (auto& g : L.generators) require_loxodromic(g);
  ConnectivityVerdict v;
  v.reduction = whitehead_reduce(standard_rose(p), L);
  v.connected = v.reduction.outcome == ReductionResult::Outcome::Reduced;
  return v;
}

// ---------------------------------------------------------------- quadraticity

QuadraticityVerdict quadratic_in_tree(const GrushkoTree& t, const NormalWord& g) {
  QuadraticityVerdict q;
  q.reducedTree = t;
  LineLoops loops = line_loops(t, make_lines({g}));
  q.perEdgeCrossingCounts = edge_crossings(t, loops);
  q.edgesTwice = std::all_of(q.perEdgeCrossingCounts.begin(), q.perEdgeCrossingCounts.end(),
                             [](int c) { return c == 2; });
  q.allCircles = true;
  for (int v = 0; v < t.g.nv(); ++v) {
    bool c = is_circle(vertex_whitehead(t, loops, v));
    q.perVertexCircleFlags.push_back(c);
    q.allCircles = q.allCircles && c;
  }
  q.isQuadratic = q.edgesTwice && q.allCircles;
  return q;
}

QuadraticityVerdict is_quadratic(const PresPtr& p, const NormalWord& g) {
  SimplicityVerdict s = is_simple(p, g);
  if (s.isSimple) throw Error("SimpleElement", format_word(g) + " is simple");
  QuadraticityVerdict q = quadratic_in_tree(s.reduction.tree, g);
  if (q.edgesTwice != q.allCircles)
    throw Error("InternalInconsistency", "edge crossing and circle criteria disagree for " + format_word(g));
  return q;
}

// ---------------------------------------------------------------- cut pairs

CutPairSearch find_short_cut_pair(const PresPtr& p, const NormalWord& g, int R, int64_t budget) {
  if (R < 1) throw Error("InvalidArgument", "radius must be at least 1");
  SimplicityVerdict s = is_simple(p, g);
  if (s.isSimple) throw Error("SimpleElement", format_word(g) + " is simple");
  return find_short_cut_pair_in(s.reduction.tree, g, R, budget);
}

CutPairSearch find_short_cut_pair_in(const GrushkoTree& t, const NormalWord& g, int R, int64_t budget) {
  if (R < 1) throw Error("InvalidArgument", "radius must be at least 1");
  require_loxodromic(g);
  LineCollection L = make_lines({g});
  if (!is_whitehead_reduced(t, L)) throw Error("NotReduced", "tree is not Whitehead reduced for g");
  const Graph& gr = t.g;
  LineLoops loops = line_loops(t, L);

  // turn decorations per vertex
  std::vector<std::vector<FactorElement>> deco(gr.nv());
  for (int v = 0; v < gr.nv(); ++v) {
    std::set<FactorElement> s{trivial_at(gr, v)};
    if (gr.v[v].label >= 0)
      for (auto& e : vertex_whitehead(t, loops, v).edges) {
        s.insert(e.label);
        s.insert(fe_inv(e.label));
      }
    deco[v].assign(s.begin(), s.end());
  }

  CutPairSearch out;
  out.tree = t;
  std::map<std::pair<int, std::vector<int64_t>>, CyclicLoop> roots;  // (length, key) -> root loop
  CyclicLoop cur;
  std::function<void(int)> grow = [&](int n) {
    const int last = cur.he.back();
    const int u = gr.terminus(last);
    const int first = cur.he.front();
    if (static_cast<int>(cur.he.size()) == n) {
      if (u != gr.origin(first)) return;
      for (auto& x : deco[u]) {
        if (first == rev(last) && x.trivial()) continue;
        if (++out.loopsTried > budget) throw Error("BudgetExceeded", "cut pair enumeration budget exhausted");
        cur.t.push_back(x);
        CyclicLoop root = cyc_power_root(cur);
        auto key = axis_key(root);
        auto k = std::make_pair(root.length(), key);
        if (!roots.count(k)) {
          root.conj = trivial_path(gr, gr.origin(root.he.front()));
          roots.emplace(k, root);
        }
        cur.t.pop_back();
      }
      return;
    }
    for (auto& x : deco[u])
      for (int h : gr.out(u)) {
        // some rotation starts at the smallest half-edge of the loop
        if (h < first || (h == rev(last) && x.trivial())) continue;
        cur.he.push_back(h);
        cur.t.push_back(x);
        grow(n);
        cur.he.pop_back();
        cur.t.pop_back();
      }
  };
  for (int n = 1; n <= R; ++n)
    for (int h = 0; h < 2 * gr.ne(); ++h) {
      cur = CyclicLoop{};
      cur.he.push_back(h);
      grow(n);
    }

  for (auto& [k, root] : roots) {
    ++out.axesTested;
    NormalWord a = t.word(cyc_as_path(gr, root));
    if (is_peripheral(a)) throw Error("InternalInconsistency", "a reduced loop gave a peripheral element");
    AnnularResult ar = annular_whitehead(t, L, a, budget);
    int64_t count = ar.componentCount ? *ar.componentCount : -1;
    if (ar.componentCount && count < 2) continue;
    CutPairCandidate c;
    c.a = a;
    c.combLength = k.first;
    c.componentCount = count;
    c.axisKey = k.second;
    c.loop = root;
    out.candidates.push_back(std::move(c));
  }
  return out;
}

ExtractResult extract_short_element(const PresPtr& p, const NormalWord& g, const NormalWord& h, int64_t budget) {
  SimplicityVerdict s = is_simple(p, g);
  if (s.isSimple) throw Error("SimpleElement", format_word(g) + " is simple");
  return extract_short_element_in(s.reduction.tree, g, h, budget);
}

ExtractResult extract_short_element_in(const GrushkoTree& t, const NormalWord& g, const NormalWord& h,
                                       int64_t budget) {
  require_loxodromic(g);
  require_loxodromic(h);
  LineCollection L = make_lines({g});
  AnnularResult ar = annular_whitehead(t, L, h, budget);
  if (!ar.componentCount) throw Error("Unbounded", "infinitely many components along the axis");
  ExtractResult r;
  r.c = *ar.componentCount;
  if (r.c < 2) throw Error("NotACutPair", "the axis of " + format_word(h) + " does not disconnect");
  r.L = lines_length(t, L);
  r.xi = xi_of(*t.pres);
  r.R0 = compute_bounds(r.L, r.xi, r.c).R0;
  r.tree = t;
  const CyclicLoop& ax = ar.axis;
  const int64_t n = ax.length();
  const auto hkey = axis_key(ax);

  using Colouring = std::vector<std::pair<int, int64_t>>;
  std::map<std::pair<int, Colouring>, std::vector<int64_t>> seen;
  for (int64_t k = 0; k < r.R0; ++k) {
    const int64_t k0 = k % n;
    std::vector<std::pair<std::pair<int, int>, std::pair<int, int64_t>>> col;
    for (auto& x : ar.crossings[static_cast<size_t>(k0)])
      col.push_back({{x.line, x.key}, ar.crossing_component(k, x.line, x.key)});
    std::sort(col.begin(), col.end());
    Colouring f;
    for (auto& [_, v] : col) f.push_back(v);
    auto& earlier = seen[{ax.he[static_cast<size_t>(k0)], f}];
    for (int64_t j : earlier) {
      CyclicLoop a;
      for (int64_t i = j; i < k; ++i) {
        a.he.push_back(ax.he[static_cast<size_t>(i % n)]);
        a.t.push_back(ax.t[static_cast<size_t>(i % n)]);
      }
      a.conj = trivial_path(t.g, t.g.origin(a.he.front()));
      NormalWord w = t.word(cyc_as_path(t.g, a));
      int len = comb_length(t, w);
      if (len > r.R0) continue;
      AnnularResult aa = annular_whitehead(t, L, w, budget);
      if (aa.componentCount && *aa.componentCount < r.c) continue;
      r.a = w;
      r.loop = a;
      r.combLength = len;
      r.componentCount = aa.componentCount ? *aa.componentCount : -1;
      r.k0 = j;
      r.k1 = k;
      r.sameAxis = axis_key(aa.axis) == hkey;
      return r;
    }
    earlier.push_back(k);
  }
  throw Error("ValidationFailure", "no pair of equal colourings gave a short cut pair");
}

// ---------------------------------------------------------------- certificates

AdjacencyWitness reverse_witness(const AdjacencyWitness& w) {
  if (auto* c = std::get_if<CompatibleWitness>(&w)) return CompatibleWitness{c->refinement, c->toB, c->toA};
  auto& e = std::get<CommonEllipticWitness>(w);
  return CommonEllipticWitness{e.g, e.inB, e.inA};
}

namespace {

struct Chain {
  std::vector<ZSplitting> nodes;
  std::vector<AdjacencyWitness> steps;

  void push(ZSplitting s, AdjacencyWitness w) {
    nodes.push_back(std::move(s));
    steps.push_back(std::move(w));
  }
};

Chain reduction_chain(const ReductionResult& r) {
  Chain c;
  c.nodes.push_back(free_splitting(r.start));
  for (auto& st : r.steps) c.push(free_splitting(st.after), st.witness);
  return c;
}

// a vertex group contains the groups of its edges
ZSplitting with_edge_generators(ZSplitting s) {
  if (s.is_tree_form()) return s;
  for (auto& e : s.se) {
    if (!e.group) continue;
    for (int v : {e.from, e.to}) {
      auto& gens = s.sv[v].gens;
      if (std::find(gens.begin(), gens.end(), *e.group) == gens.end()) gens.push_back(*e.group);
    }
  }
  return s;
}

std::vector<NormalWord> splitting_elements(const ZSplitting& s) {
  std::vector<NormalWord> r;
  if (s.is_tree_form()) return r;
  for (auto& v : s.sv)
    for (auto& x : v.gens)
      if (!x.is_identity() && !is_peripheral(x)) r.push_back(x);
  for (auto& e : s.se)
    if (e.group) r.push_back(*e.group);
  return r;
}

std::optional<AdjacencyWitness> link(const ZSplitting& a, const ZSplitting& b, const std::vector<NormalWord>& hints) {
  if (auto w = zf_adjacent(a, b)) return w;
  for (auto& h : hints)
    if (auto w = zf_adjacent(a, b, h)) return w;
  return std::nullopt;
}

// extend c (ending at a tree-form splitting) through the supplied path
void follow_supplied(Chain& c, const std::vector<ZSplitting>& path, const NormalWord& g,
                     const std::optional<NormalWord>& first, std::vector<std::string>& notes) {
  for (size_t i = 0; i < path.size(); ++i) {
    const ZSplitting& from = c.nodes.back();
    ZSplitting to = with_edge_generators(path[i]);
    std::vector<NormalWord> hints;
    if (i == 0 && first) hints.push_back(*first);
    hints.push_back(g);
    for (auto& x : splitting_elements(to)) hints.push_back(x);
    for (auto& x : splitting_elements(from)) hints.push_back(x);
    if (auto w = link(from, to, hints)) {
      c.push(to, *w);
      notes.push_back("step " + std::to_string(c.steps.size() - 1) + ": supplied splitting");
      continue;
    }
    // a collapse of the tree in which some element of the supplied splitting is elliptic
    bool done = false;
    if (from.is_tree_form() && !to.is_tree_form()) {
      const GrushkoTree& t = *from.tree;
      for (auto& h : splitting_elements(to)) {
        CyclicLoop l = cyclic_loop(t, h);
        std::vector<char> crossed(t.g.ne(), 0);
        for (int x : l.he) crossed[x >> 1] = 1;
        std::vector<int> keep;
        for (int e = 0; e < t.g.ne(); ++e)
          if (from.kept[e] && !crossed[e]) keep.push_back(e);
        if (keep.empty()) continue;
        ZSplitting mid = from;
        std::fill(mid.kept.begin(), mid.kept.end(), 0);
        for (int e : keep) mid.kept[e] = 1;
        std::vector<int> fromKept;
        for (int e = 0; e < t.g.ne(); ++e)
          if (from.kept[e]) fromKept.push_back(e);
        CompatibleWitness cw{from, CollapseDesc{{}, {}, fromKept}, CollapseDesc{{}, {}, keep}};
        auto w = zf_adjacent(mid, to, h);
        if (!w || !check_adjacency(from, mid, cw)) continue;
        c.push(mid, cw);
        c.push(to, *w);
        notes.push_back("step " + std::to_string(c.steps.size() - 1) + ": supplied splitting via " + format_word(h));
        done = true;
        break;
      }
    }
    if (!done) throw Error("ValidationFailure", "supplied splitting " + std::to_string(i) + " cannot be linked");
  }
  if (path.empty()) return;
  if (!is_elliptic(c.nodes.back(), g).elliptic)
    throw Error("ValidationFailure", "g is not elliptic in the last supplied splitting");
}

// drop closed detours: nodes[i] == nodes[j] for i < j
void shortcut(Chain& c) {
  for (size_t i = 0; i < c.nodes.size(); ++i)
    for (size_t j = c.nodes.size() - 1; j > i; --j)
      if (same_splitting(c.nodes[i], c.nodes[j])) {
        c.nodes.erase(c.nodes.begin() + static_cast<long>(i) + 1, c.nodes.begin() + static_cast<long>(j) + 1);
        c.steps.erase(c.steps.begin() + static_cast<long>(i), c.steps.begin() + static_cast<long>(j));
        break;
      }
}

// the simple chain from a tree to a free splitting in which x is elliptic
Chain simple_chain(const GrushkoTree& t, const NormalWord& x) {
  ReductionResult r = whitehead_reduce(t, make_lines({x}));
  if (r.outcome != ReductionResult::Outcome::UncrossedEdge)
    throw Error("ValidationFailure", format_word(x) + " is not simple");
  Chain c = reduction_chain(r);
  c.push(*r.freeSplitting, *r.splittingWitness);
  return c;
}

void append(Chain& c, const Chain& d) {
  for (size_t i = 0; i < d.steps.size(); ++i) c.push(d.nodes[i + 1], d.steps[i]);
}

// c followed by the reverse of d; both must end at splittings in which g is elliptic
Chain join(const Chain& c, const Chain& d, const NormalWord& g) {
  Chain r = c;
  auto ea = is_elliptic(c.nodes.back(), g), eb = is_elliptic(d.nodes.back(), g);
  if (!ea.witness || !eb.witness) throw Error("ValidationFailure", "g is not elliptic at the middle of the path");
  r.push(d.nodes.back(), CommonEllipticWitness{g, *ea.witness, *eb.witness});
  for (size_t i = d.steps.size(); i-- > 0;) r.push(d.nodes[i], reverse_witness(d.steps[i]));
  return r;
}

int64_t bound_for(const std::string& kind, const ProjectionBounds& b) {
  if (kind == "simple") return b.D0;
  if (kind == "quadratic") return b.D1;
  return b.D2;
}

}  // namespace

PathCertificate certify_projection(const PresPtr& p, const NormalWord& g, const GrushkoTree& T0,
                                   const GrushkoTree& T1, const std::optional<SuppliedSplittings>& supplied, int R,
                                   int64_t budget) {
  require_loxodromic(g);
  LineCollection Lg = make_lines({g});
  const int64_t L = std::max(comb_length(T0, g), comb_length(T1, g));
  PathCertificate cert;
  cert.g = g;
  cert.bounds = compute_bounds(L, xi_of(*p));
  ReductionResult r0 = whitehead_reduce(T0, Lg), r1 = whitehead_reduce(T1, Lg);
  if ((r0.outcome == ReductionResult::Outcome::UncrossedEdge) != (r1.outcome == ReductionResult::Outcome::UncrossedEdge))
    throw Error("InternalInconsistency", "the two reductions disagree on simplicity");
  Chain c0 = reduction_chain(r0), c1 = reduction_chain(r1);
  std::vector<std::string> notes;

  if (r0.outcome == ReductionResult::Outcome::UncrossedEdge) {
    cert.kind = "simple";
    c0.push(*r0.freeSplitting, *r0.splittingWitness);
    c1.push(*r1.freeSplitting, *r1.splittingWitness);
  } else {
    if (!supplied || supplied->side0.path.empty() || supplied->side1.path.empty())
      throw Error("MissingSuppliedSplitting", "g is not simple; a Z-splitting for each side must be supplied");
    QuadraticityVerdict q = quadratic_in_tree(r0.tree, g);
    if (q.edgesTwice != q.allCircles) throw Error("InternalInconsistency", "quadratic criteria disagree");
    if (q.isQuadratic) {
      cert.kind = "quadratic";
      follow_supplied(c0, supplied->side0.path, g, std::nullopt, notes);
      std::vector<std::string> n1;
      follow_supplied(c1, supplied->side1.path, g, std::nullopt, n1);
    } else {
      cert.kind = "cut-pair";
      int64_t Rused = 0;
      for (int side = 0; side < 2; ++side) {
        Chain& c = side ? c1 : c0;
        const ReductionResult& r = side ? r1 : r0;
        const auto& path = side ? supplied->side1.path : supplied->side0.path;
        ZSplitting S = with_edge_generators(path.back());
        // edge group elements of the supplied splitting, the short cut pairs first
        std::vector<NormalWord> edgeEls;
        for (auto& e : S.se)
          if (e.group) edgeEls.push_back(*e.group);
        if (edgeEls.empty()) throw Error("MissingSuppliedSplitting", "the supplied splitting has no cyclic edge group");
        CutPairSearch cs = find_short_cut_pair_in(r.tree, g, R, budget);
        std::stable_sort(edgeEls.begin(), edgeEls.end(), [&](const NormalWord& x, const NormalWord& y) {
          auto found = [&](const NormalWord& w) {
            auto k = axis_key(cyclic_loop(r.tree, w));
            for (auto& cand : cs.candidates)
              if (cand.axisKey == k) return true;
            return false;
          };
          return found(x) && !found(y);
        });
        std::optional<Chain> best;
        for (auto& a : edgeEls) {
          Chain s;
          try {
            s = simple_chain(r.tree, a);
          } catch (const Error&) {
            continue;
          }
          Chain full = c;
          append(full, s);
          follow_supplied(full, path, g, a, notes);
          Rused = std::max<int64_t>(Rused, comb_length(r.tree, a));
          if (!cert.a) cert.a = a;
          best = full;
          break;
        }
        if (!best) throw Error("ValidationFailure", "no edge group element of the supplied splitting is simple");
        c = *best;
      }
      cert.bounds.R = std::max<int64_t>(Rused, 1);
      cert.bounds.D2 = 2 * L + 2 * cert.bounds.R + 5;
    }
  }
  Chain all = join(c0, c1, g);
  shortcut(all);
  cert.nodes = std::move(all.nodes);
  cert.steps = std::move(all.steps);
  cert.supplied = std::move(notes);
  cert.claimedBound = bound_for(cert.kind, cert.bounds);
  std::string why;
  if (!check_certificate(cert, T0, T1, &why)) throw Error("ValidationFailure", why);
  return cert;
}

bool check_certificate(const PathCertificate& c, const GrushkoTree& T0, const GrushkoTree& T1, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (c.nodes.empty() || c.nodes.size() != c.steps.size() + 1) return fail("node and step counts do not match");
  if (!same_splitting(c.nodes.front(), free_splitting(T0))) return fail("path does not start at pi(T0)");
  if (!same_splitting(c.nodes.back(), free_splitting(T1))) return fail("path does not end at pi(T1)");
  for (size_t i = 0; i < c.steps.size(); ++i) {
    std::string m;
    if (!check_adjacency(c.nodes[i], c.nodes[i + 1], c.steps[i], &m))
      return fail("step " + std::to_string(i) + ": " + m);
  }
  if (c.length() > c.claimedBound) return fail("path is longer than the claimed bound");
  const int64_t L = std::max(comb_length(T0, c.g), comb_length(T1, c.g));
  ProjectionBounds b;
  try {
    b = compute_bounds(L, xi_of(*T0.pres));
  } catch (const Error& e) {
    return fail(e.what());
  }
  if (c.kind == "simple" && c.claimedBound > b.D0) return fail("claimed bound exceeds 2L+3");
  if (c.kind == "quadratic" && c.claimedBound > b.D1) return fail("claimed bound exceeds 2L+5");
  if (c.kind == "cut-pair") {
    if (!c.a) return fail("cut-pair certificate without its element");
    if (c.claimedBound > 2 * L + 2 * c.bounds.R + 5 || c.claimedBound > b.D2)
      return fail("claimed bound exceeds 2L+2R+5");
  }
  if (c.kind != "simple" && c.kind != "quadratic" && c.kind != "cut-pair") return fail("unknown certificate kind");
  return true;
}

}  // namespace gw
