#pragma once
// Decision procedures built on Whitehead reduction: simplicity, connectivity of
// the decomposition space, quadraticity, short cut pairs, and ZF path
// certificates with an independent checker.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gw/whitehead.hpp"

namespace gw {

// ---- simplicity ----

struct SimplicityVerdict {
  bool isSimple = false;
  ReductionResult reduction;  // from the standard rose
  // simple: g is elliptic in reduction.freeSplitting
  std::optional<EllipticEvidence> elliptic;
};
SimplicityVerdict is_simple(const PresPtr& p, const NormalWord& g);
// re-validates the witness from scratch
bool check_simplicity(const SimplicityVerdict& v, const NormalWord& g, std::string* why = nullptr);

struct ConnectivityVerdict {
  bool connected = false;
  ReductionResult reduction;  // Reduced tree, or the uncrossed edge
};
ConnectivityVerdict decomposition_connected(const PresPtr& p, const LineCollection& L);

// ---- quadraticity ----

struct QuadraticityVerdict {
  bool isQuadratic = false;
  GrushkoTree reducedTree;
  std::vector<int> perEdgeCrossingCounts;  // per quotient edge
  std::vector<char> perVertexCircleFlags;  // per quotient vertex
  bool edgesTwice = false;                 // every edge orbit crossed exactly twice
  bool allCircles = false;                 // every vertex Whitehead graph is a circle
};
// both criteria on a given tree, without the agreement check
QuadraticityVerdict quadratic_in_tree(const GrushkoTree& t, const NormalWord& g);
// throws SimpleElement for simple g, InternalInconsistency if the criteria disagree
QuadraticityVerdict is_quadratic(const PresPtr& p, const NormalWord& g);

// ---- short cut pairs ----

struct CutPairCandidate {
  NormalWord a;
  int combLength = 0;
  int64_t componentCount = 0;  // -1 when infinitely many
  std::vector<int64_t> axisKey;
  CyclicLoop loop;
};

struct CutPairSearch {
  GrushkoTree tree;  // Reduced for L_g
  std::vector<CutPairCandidate> candidates;
  int64_t loopsTried = 0;
  int64_t axesTested = 0;
};
// loops of length <= R with turn decorations drawn from 1, the Whitehead graph
// labels at the vertex and their inverses
CutPairSearch find_short_cut_pair(const PresPtr& p, const NormalWord& g, int R,
                                  int64_t budget = kDefaultBudget);
// same search in a tree already Reduced for g
CutPairSearch find_short_cut_pair_in(const GrushkoTree& t, const NormalWord& g, int R,
                                     int64_t budget = kDefaultBudget);

struct ExtractResult {
  NormalWord a;
  CyclicLoop loop;
  int combLength = 0;
  int64_t c = 0;               // components along h
  int64_t componentCount = 0;  // components along a
  int64_t L = 0, xi = 0, R0 = 0;
  int64_t k0 = 0, k1 = 0;      // the two axis positions with equal colourings
  bool sameAxis = false;       // axis_key(a) == axis_key(h)
  GrushkoTree tree;
};
ExtractResult extract_short_element(const PresPtr& p, const NormalWord& g, const NormalWord& h,
                                    int64_t budget = kDefaultBudget);
ExtractResult extract_short_element_in(const GrushkoTree& t, const NormalWord& g, const NormalWord& h,
                                       int64_t budget = kDefaultBudget);

// ---- path certificates in ZF ----

struct PathCertificate {
  NormalWord g;
  std::string kind;  // simple, quadratic, cut-pair
  std::vector<ZSplitting> nodes;
  std::vector<AdjacencyWitness> steps;  // steps[i] joins nodes[i] and nodes[i+1]
  int64_t claimedBound = 0;
  ProjectionBounds bounds;
  std::optional<NormalWord> a;      // cut-pair case
  std::vector<std::string> supplied;  // which steps rest on supplied splittings
  int length() const { return static_cast<int>(steps.size()); }
};

// Supplied Z-splittings for one side: a path of splittings ending at one in
// which g is elliptic. The producer links pi(reduced tree) to the first and
// consecutive entries to each other.
struct SuppliedSide {
  std::vector<ZSplitting> path;
};
struct SuppliedSplittings {
  SuppliedSide side0, side1;
};

PathCertificate certify_projection(const PresPtr& p, const NormalWord& g, const GrushkoTree& T0,
                                   const GrushkoTree& T1,
                                   const std::optional<SuppliedSplittings>& supplied = std::nullopt,
                                   int R = 4, int64_t budget = kDefaultBudget);

// Independent checker: endpoints are pi(T0) and pi(T1), every step checks and
// the length is within claimedBound.
bool check_certificate(const PathCertificate& c, const GrushkoTree& T0, const GrushkoTree& T1,
                       std::string* why = nullptr);

AdjacencyWitness reverse_witness(const AdjacencyWitness& w);

}  // namespace gw
