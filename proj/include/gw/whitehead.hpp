#pragma once
// Labeled Whitehead graphs of periodic line collections: at single vertices,
// at finite subtrees (with the aggregated hat vertex) and along axes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gw/tree.hpp"

namespace gw {

// ---- line collections ----

struct LineCollection {
  PresPtr pres;
  std::vector<NormalWord> generators;  // non-peripheral conjugacy representatives
};
LineCollection make_lines(const std::vector<NormalWord>& gens);
// words separated by ';' or newlines
LineCollection parse_lines(const std::string& text, const PresPtr& p);

// Root loops of the lines in one tree, one per G-orbit of lines.
struct LineLoops {
  std::vector<CyclicLoop> fwd;
  std::vector<CyclicLoop> bwd;   // the same loop traversed backwards
  std::vector<int> source;       // generator index
  int total_length() const;
};
LineLoops line_loops(const GrushkoTree& t, const LineCollection& L);
// |L|_T
int lines_length(const GrushkoTree& t, const LineCollection& L);
// reversed cyclic loop: position p of the reverse is position n-1-p of the original
CyclicLoop reverse_loop(const CyclicLoop& c);

// ---- graphs ----

struct WVertex {
  enum class Kind { Direction, Explicit, Hat, Stub };
  Kind kind = Kind::Direction;
  std::string name;
  int node = 0;     // subtree node, axis position, or 0 for vertex graphs
  int half = -1;    // half-edge at the quotient vertex (Direction, Explicit, Stub)
  FactorElement s;  // translate of an explicit entry or a stub
  int stub = -1;
};

struct WEdge {
  int from = 0, to = 0;
  FactorElement label;  // vertex graphs: the line meets Y_from and label.Y_to
  int64_t voltage = 0;  // annular graphs: power of the axis element
  int line = -1;        // index into LineLoops
  int turn = -1;        // loop position of the turn, or of the first crossing
  // loop position of the line's crossing at an endpoint that is a stub, else -1
  int fromKey = -1, toKey = -1;
  std::vector<int> crossed;  // subtree edges crossed by the line
};

struct WhiteheadGraph {
  PresPtr pres;
  int atVertex = -1;
  int factor = -1;  // vertex group of atVertex, -1 when trivial
  std::vector<WVertex> vertices;
  std::vector<WEdge> edges;
  std::vector<FactorElement> representative;  // preferred direction twist per vertex

  int nv() const { return static_cast<int>(vertices.size()); }
  int vertex_of_half(int h) const;
  int find(const std::string& name) const;
  std::vector<int> degrees() const;
  std::vector<std::vector<int>> components() const;
  bool connected() const;
  // number of components when the listed edges are ignored
  int component_count(const std::vector<int>& skipEdges = {}) const;
};

WhiteheadGraph vertex_whitehead(const GrushkoTree& t, const LineCollection& L, int v);
WhiteheadGraph vertex_whitehead(const GrushkoTree& t, const LineLoops& loops, int v);

// Monodromy of the connected subgraph spanned by `vertices`; with `edges`
// given only those edges are used, otherwise every edge between the vertices.
FactorSubgroupReport monodromy(const WhiteheadGraph& W, const std::vector<int>& vertices,
                               const std::optional<std::vector<int>>& edges = std::nullopt);
FactorSubgroupReport monodromy(const WhiteheadGraph& W);

// ---- admissible cuts and reduction ----

struct AdmissibleCut {
  enum class Kind { TypeI, TypeII };
  Kind kind = Kind::TypeI;
  int vertex = 0;
  std::vector<int> U, V;  // Whitehead graph vertices
  int cutVertex = -1;     // type ii
  std::vector<FactorElement> twist;  // parallel to U, labels trivial on a maximal tree of U

  TypeICutData type_i(const WhiteheadGraph& W) const;
  TypeIICutData type_ii(const WhiteheadGraph& W) const;
};
std::optional<AdmissibleCut> find_admissible_cut(const WhiteheadGraph& W);
bool is_whitehead_reduced(const GrushkoTree& t, const LineCollection& L);

struct ReductionStep {
  std::string kind;  // "blow-up" or "unfold"
  AdmissibleCut cut;
  int lengthBefore = 0, lengthAfter = 0;
  GrushkoTree after;
  CompatibleWitness witness;  // pi(before) ~ pi(after)
};

struct ReductionResult {
  enum class Outcome { UncrossedEdge, Reduced };
  Outcome outcome = Outcome::Reduced;
  GrushkoTree start, tree;
  int edge = -1;  // uncrossed edge of `tree`
  std::optional<ZSplitting> freeSplitting;
  std::optional<CompatibleWitness> splittingWitness;  // pi(tree) ~ freeSplitting
  std::vector<ReductionStep> steps;
  int startLength = 0, finalLength = 0;
};
ReductionResult whitehead_reduce(const GrushkoTree& t, const LineCollection& L);

// ---- derived graphs T_v(L) ----

struct DVertex {
  int v = 0;        // Whitehead graph vertex
  FactorElement s;  // the direction s.Y_v
  bool operator<(const DVertex& o) const;
  bool operator==(const DVertex& o) const;
};

struct QuotientComponent {
  std::vector<int> vertices;
  std::vector<FactorElement> potential;  // parallel to vertices
  FactorSubgroupReport mon;
  std::optional<int64_t> derivedCount;  // nullopt when infinitely many
  std::string shape;                    // of each derived component: finite, line, infinite
};

struct DerivedPiece {
  int component = 0;  // quotient component
  bool finite = false;
  std::string shape;  // finite, line, ray, infinite
  std::vector<DVertex> vertices;  // all vertices when finite
};

struct ComponentReport {
  std::vector<QuotientComponent> quotient;
  std::vector<DVertex> removed;
  std::vector<DerivedPiece> pieces;               // pieces of components meeting the removed set
  std::vector<std::optional<int64_t>> untouched;  // per quotient component
  std::optional<int64_t> total;                   // nullopt when infinite or unresolved
  bool resolved = true;
  bool infinitelyManyFinite = false;  // some untouched component is finite
  std::vector<DVertex> vx;            // vertices of finite pieces
  bool hat = false;                   // some component is infinite
};

constexpr int64_t kDefaultBudget = 100000;
ComponentReport derived_components(const WhiteheadGraph& W);
ComponentReport classify_components_minus(const WhiteheadGraph& W, const std::vector<DVertex>& removed,
                                          int64_t budget = kDefaultBudget);

// ---- subtrees ----

// Node 0 sits at quotient vertex `rootVertex`; node c > 0 is reached from its
// parent along the direction s.Y_half. A stub is the half of an edge from a
// node up to its midpoint. With `midpoint` set, X is the midpoint of that edge.
struct SubtreeSpec {
  struct Node {
    int parent = -1;
    FactorElement s;
    int half = -1;
    std::string tag = "Y";   // direction names
    std::string name = "v";  // hat name
  };
  struct Stub {
    int node = 0;
    FactorElement s;
    int half = -1;
    std::string name;  // default: [s.]W<edge><sign>
  };
  int rootVertex = 0;
  std::vector<Node> nodes{Node{}};
  std::vector<Stub> stubs;
  std::optional<int> midpoint;

  int add_node(int parent, const FactorElement& s, int half, const std::string& tag, const std::string& name);
  int add_stub(int node, const FactorElement& s, int half, const std::string& name = "");
  int vertex_of(const GrushkoTree& t, int node) const;
};

WhiteheadGraph subtree_whitehead(const GrushkoTree& t, const LineCollection& L, const SubtreeSpec& X,
                                 int64_t budget = kDefaultBudget);
// vertex classes of V_X at one node
ComponentReport subtree_node_classes(const GrushkoTree& t, const LineLoops& loops, const SubtreeSpec& X,
                                     int node, int64_t budget = kDefaultBudget);

// Splice A - [yA] and B - [yB] along the lines crossing the shared midpoint.
WhiteheadGraph splice(const WhiteheadGraph& A, int yA, const WhiteheadGraph& B, int yB);
// same vertex names and the same multiset of (name pair, line) edges
bool same_graph(const WhiteheadGraph& a, const WhiteheadGraph& b);

// ---- axes ----

struct AnnularResult {
  WhiteheadGraph quotient;  // voltages in <a>
  std::optional<int64_t> componentCount;
  CyclicLoop axis;
  int period = 0;
  std::vector<int> component;          // quotient component per vertex
  std::vector<int64_t> potential;      // per vertex
  std::vector<int64_t> modulus;        // per component: gcd of cycle voltages
  struct Crossing {
    int line = -1, key = -1;
    int vertex = -1;   // quotient vertex of the backward exit
    int64_t shift = 0; // its power of a
  };
  std::vector<std::vector<Crossing>> crossings;  // per axis edge 0..period-1
  // derived component of the edge of a line crossing axis edge k
  std::pair<int, int64_t> crossing_component(int64_t k, int line, int key) const;
};
AnnularResult annular_whitehead(const GrushkoTree& t, const LineCollection& L, const NormalWord& a,
                                int64_t budget = kDefaultBudget);

// components of Wh(L, e-hat) minus the lines crossing e
struct EdgeCutResult {
  WhiteheadGraph graph;  // Wh(L, e-hat)
  std::vector<int> lineEdges;  // edges of lines crossing e
  int components = 0;
};
EdgeCutResult edge_cut_components(const GrushkoTree& t, const LineCollection& L, int e,
                                  int64_t budget = kDefaultBudget);

std::vector<int> peripheral_cut_points(const GrushkoTree& t, const LineCollection& L);

std::string to_dot(const WhiteheadGraph& W);

}  // namespace gw
