#pragma once
// Grushko trees as marked graphs of groups with trivial edge groups.
// Half-edge h of quotient edge e: h = 2e (forward) or 2e+1 (reverse), rev(h) = h^1.
// A half-edge is outgoing at its origin.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gw/words.hpp"

namespace gw {

inline int rev(int h) { return h ^ 1; }

struct GVertex {
  int label = -1;  // factor index, -1 when the vertex group is trivial
  std::string name;
};

struct GEdge {
  int from = 0, to = 0;
  std::string name;
  double length = 1.0;
};

struct Graph {
  std::vector<GVertex> v;
  std::vector<GEdge> e;

  int nv() const { return static_cast<int>(v.size()); }
  int ne() const { return static_cast<int>(e.size()); }
  int origin(int h) const { return (h & 1) ? e[h >> 1].to : e[h >> 1].from; }
  int terminus(int h) const { return origin(h ^ 1); }
  // outgoing half-edges at u in increasing order
  std::vector<int> out(int u) const;
  int degree(int u) const { return static_cast<int>(out(u).size()); }
  std::string half_name(int h) const;
};

// Path s0 h1 s1 ... hn sn in the graph of groups. s_i lies in the vertex
// group at the i-th vertex (trivial at unlabeled vertices).
struct Path {
  int start = 0;
  std::vector<FactorElement> el;
  std::vector<int> he;

  int length() const { return static_cast<int>(he.size()); }
  bool operator==(const Path& o) const { return start == o.start && el == o.el && he == o.he; }
};

FactorElement trivial_at(const Graph& g, int u);
Path trivial_path(const Graph& g, int u);
Path edge_path(const Graph& g, int h);
Path elem_path(const Graph& g, int u, const FactorElement& x);
int path_end(const Graph& g, const Path& p);
Path concat(const Graph& g, const Path& a, const Path& b);
Path inverse(const Graph& g, const Path& p);
void reduce(const Graph& g, Path& p);

// Cyclically reduced loop: edges h_1..h_n and turn labels t_1..t_n, where t_i
// sits at terminus(h_i) between rev(h_i) and h_{i+1}. conj is a path from the
// base to origin(h_1) with loop = conj * cyc * conj^-1.
struct CyclicLoop {
  std::vector<int> he;
  std::vector<FactorElement> t;
  Path conj;
  // elliptic case (he empty): the element at the end vertex of conj
  int length() const { return static_cast<int>(he.size()); }
};

CyclicLoop cyclic_reduce(const Graph& g, const Path& loop);
// the cyclic loop as an ordinary loop based at origin(h_1)
Path cyc_as_path(const Graph& g, const CyclicLoop& c);
// primitive period d of the (h_i, t_i) sequence
int primitive_period(const CyclicLoop& c);
CyclicLoop cyc_power_root(const CyclicLoop& c);
// min over rotations and inversion of the root encoding
std::vector<int64_t> axis_key(const CyclicLoop& c);

struct Turn {
  int inHalfEdge;  // outgoing at vertex, the direction the line arrives from
  int vertex;
  FactorElement label;
  int outHalfEdge;
};

// Maps paths of one graph of groups to another: vertex map plus the image of
// every half-edge (a path between image vertices). Vertex elements are carried
// over unchanged.
struct PathMap {
  std::vector<int> vmap;
  std::vector<Path> himg;
};
Path apply(const Graph& target, const PathMap& m, const Path& p);

class GrushkoTree {
 public:
  PresPtr pres;
  Graph g;
  int base = 0;
  // one loop at the base per generator: free generators x1..xN first, then
  // factor generators a1.1, a1.2, ..., in canonical order
  std::vector<Path> marking;
  // inverse marking: word per half-edge and conjugator per labeled vertex,
  // with word(P) = prod conj_u(s_i) W(h_i), conj_u(x) = C(u) x C(u)^-1
  bool has_inverse = false;
  std::vector<NormalWord> hword;
  std::vector<NormalWord> vconj;
  bool unverified = false;

  int num_generators() const;
  int free_gen_slot(int m) const { return m; }
  int factor_gen_slot(int factor, int gen) const;
  int labeled_vertex(int factor) const;

  // path word under the inverse marking
  NormalWord word(const Path& p) const;
  bool same_tree(const GrushkoTree& o) const;
};

// ---- construction and elementary queries ----

GrushkoTree standard_rose(const PresPtr& p);
// subdivide quotient edge e by a new trivial vertex
GrushkoTree subdivide(const GrushkoTree& t, int e);
Path word_to_loop(const GrushkoTree& t, const NormalWord& w);
NormalWord loop_to_word(const GrushkoTree& t, const Path& loop);
CyclicLoop cyclic_loop(const GrushkoTree& t, const NormalWord& w);
int comb_length(const GrushkoTree& t, const NormalWord& w);
std::vector<Turn> axis_turns(const GrushkoTree& t, const NormalWord& w);
std::vector<Turn> cyc_turns(const Graph& g, const CyclicLoop& c);
// checks marking/inverse consistency: word(marking(x)) == x for all generators
bool check_inverse(const GrushkoTree& t);
// additionally marking(word(gamma)) = gamma on generators of pi_1 (marking is an isomorphism)
bool verify_marking(const GrushkoTree& t);
void validate_tree(const GrushkoTree& t);

// ---- moves ----

struct MoveResult {
  GrushkoTree tree;
  PathMap fwd;   // paths of the old tree -> new tree
  PathMap back;  // paths of the new tree -> old tree
  // path in the old graph from back.vmap[new base] to the old base
  Path backBase;
};

// Forest collapse with twists: twist[h] for half-edges at the merged vertex,
// rho(d) = [tw_d] d [tw_{rev d}]^-1. Requires every component to contain at
// most one labeled vertex (otherwise the result is not a Grushko tree).
struct CollapseDesc {
  std::vector<int> edges;                          // quotient edges collapsed
  std::vector<std::pair<int, FactorElement>> twists;  // (half-edge, element)
  std::optional<std::vector<int>> keep;            // restrict kept edges (new ids)
};

MoveResult twisted_collapse(const GrushkoTree& t, const std::vector<int>& edges,
                            const std::vector<std::pair<int, FactorElement>>& twists = {});

// Raw blow-up at v: half-edges in S move to a new trivial vertex joined to v by a
// new edge eps: v -> v_new (appended last); twist c_h for h in S.
struct BlowUpData {
  int v = 0;
  std::vector<int> S;
  std::vector<FactorElement> twist;  // parallel to S
};
MoveResult raw_blow_up(const GrushkoTree& t, const BlowUpData& b);

struct TypeICutData {
  int v = 0;
  std::vector<int> U;                // half-edges on the U side (move to the new vertex)
  std::vector<FactorElement> twist;  // normalized representatives c_h, parallel to U
};

struct TypeIICutData {
  int v = 0;
  int hY = -1;                       // the cut vertex class
  std::vector<int> A;                // U minus [Y]
  std::vector<FactorElement> twist;  // c_h for h in A, rooted at Y
};

struct BlowUpResult {
  MoveResult move;
  CollapseDesc collapseBack;  // on move.tree, recovers the original tree
};
BlowUpResult blow_up(const GrushkoTree& t, const TypeICutData& cut);

struct UnfoldResult {
  MoveResult move;
  GrushkoTree refinement;  // common refinement of the old and new trees
  CollapseDesc toOld, toNew;
};
UnfoldResult unfold(const GrushkoTree& t, const TypeIICutData& cut);

// Collapse degree-2 unlabeled vertices (and degree-1 unlabeled leaves are
// rejected). Returns the composite move.
MoveResult normalize_tree(const GrushkoTree& t);
MoveResult compose(const GrushkoTree& start, const MoveResult& a, const MoveResult& b);
MoveResult identity_move(const GrushkoTree& t);

// ---- splittings ----

struct EllipticEvidence {
  // g = conjugator * core * conjugator^-1 with core in the vertex group
  NormalWord conjugator;
  NormalWord core;
  int vertex = -1;
  // supplied splittings: core = prod gens[vertex][i]^e
  std::vector<std::pair<int, int64_t>> expr;
};

struct SVertex {
  std::string name;
  std::vector<NormalWord> gens;
};
struct SEdge {
  std::string name;
  int from = 0, to = 0;
  std::optional<NormalWord> group;  // cyclic edge group generator
};

// A Z-splitting. Tree form: a Grushko tree with some edges kept (a free
// splitting, exact ellipticity). Supplied form: graph of groups with
// generating sets, ellipticity only by evidence.
struct ZSplitting {
  PresPtr pres;
  std::optional<GrushkoTree> tree;
  std::vector<char> kept;
  std::vector<SVertex> sv;
  std::vector<SEdge> se;
  bool unverified = false;
  std::string name;

  bool is_tree_form() const { return tree.has_value(); }
  int kept_count() const;
};

ZSplitting free_splitting(const GrushkoTree& t);  // pi(T): keep everything
ZSplitting keep_only(const GrushkoTree& t, const std::vector<int>& edges);
bool same_splitting(const ZSplitting& a, const ZSplitting& b);

struct EllipticResult {
  bool elliptic = false;
  std::optional<EllipticEvidence> witness;
};
EllipticResult is_elliptic(const ZSplitting& s, const NormalWord& g);
bool check_elliptic_evidence(const ZSplitting& s, const NormalWord& g, const EllipticEvidence& ev);

struct CompatibleWitness {
  ZSplitting refinement;
  CollapseDesc toA, toB;
};
struct CommonEllipticWitness {
  NormalWord g;
  EllipticEvidence inA, inB;
};
using AdjacencyWitness = std::variant<CompatibleWitness, CommonEllipticWitness>;

ZSplitting apply_collapse_desc(const ZSplitting& r, const CollapseDesc& d);
// complete checker for any supplied witness
bool check_adjacency(const ZSplitting& a, const ZSplitting& b, const AdjacencyWitness& w,
                     std::string* why = nullptr);
std::optional<AdjacencyWitness> zf_adjacent(const ZSplitting& a, const ZSplitting& b,
                                            const std::optional<NormalWord>& hint = std::nullopt);

// ---- bounds ----

struct ProjectionBounds {
  int64_t L = 0, xi = 0, c = 0, D0 = 0, D1 = 0, R0 = 0, R = 0, D2 = 0;
};
ProjectionBounds compute_bounds(int64_t L, int64_t xi, std::optional<int64_t> c = std::nullopt);

// ---- text format ----

GrushkoTree parse_tree(const std::string& text, bool* had_inverse = nullptr);
std::string format_tree(const GrushkoTree& t);
ZSplitting parse_splitting(const std::string& text);
std::string format_splitting(const ZSplitting& s);
std::string format_path(const GrushkoTree& t, const Path& p);

}  // namespace gw
