#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"

using namespace gw;
using namespace gwtest;


std::string describe_instance(const Instance& I, const SubtreeSpec& X) {
  std::string r = format_tree(I.tree) + "\nlines:";
  for (auto& g : I.L.generators) r += " " + format_word(g) + ";";
  r += "\nroot " + std::to_string(X.rootVertex) + "\n";
  for (auto& n : X.nodes) r += "node parent=" + std::to_string(n.parent) + " s=" + (n.parent >= 0 ? format_factor_element(*I.tree.pres, n.s) : "") + " h=" + std::to_string(n.half) + "\n";
  for (auto& n : X.stubs) r += "stub node=" + std::to_string(n.node) + " s=" + format_factor_element(*I.tree.pres, n.s) + " h=" + std::to_string(n.half) + "\n";
  return r;
}

// ---------------------------------------------------------------- vertex graphs

TEST(VertexWhitehead, Example41IsTheFourCycle) {
  GrushkoTree t = rose41();
  ASSERT_EQ(cyclic_loop(t, W(t.pres, "b")).he, std::vector<int>{0});
  WhiteheadGraph Wh = vertex_whitehead(t, lines(t.pres, kG), 0);
  EXPECT_EQ(vertex_names(Wh), (std::set<std::string>{"Yb+", "Yb-", "Yc+", "Yc-"}));
  EXPECT_TRUE(is_cycle(Wh));
  EXPECT_EQ(label_set(Wh), (std::multiset<std::string>{"1", "1", "a", "a^3"}));
  EXPECT_EQ(edge_names(Wh), (std::set<std::pair<std::string, std::string>>{
                                {"Yb-", "Yc+"}, {"Yb+", "Yc+"}, {"Yb+", "Yc-"}, {"Yb-", "Yc-"}}));
}

TEST(VertexWhitehead, SingleLineGivesOneEdge) {
  GrushkoTree t = rose41();
  WhiteheadGraph Wh = vertex_whitehead(t, lines(t.pres, "b"), 0);
  ASSERT_EQ(Wh.edges.size(), 1u);
  EXPECT_TRUE(Wh.edges[0].label.trivial());
  EXPECT_EQ(edge_names(Wh), (std::set<std::pair<std::string, std::string>>{{"Yb+", "Yb-"}}));
  auto d = Wh.degrees();
  EXPECT_EQ(d[Wh.find("Yc+")], 0);
  EXPECT_EQ(d[Wh.find("Yc-")], 0);
}

TEST(VertexWhitehead, TwoIndependentLines) {
  GrushkoTree t = rose41();
  WhiteheadGraph Wh = vertex_whitehead(t, lines(t.pres, "b; c"), 0);
  EXPECT_EQ(edge_names(Wh), (std::set<std::pair<std::string, std::string>>{{"Yb+", "Yb-"}, {"Yc+", "Yc-"}}));
  EXPECT_EQ(label_set(Wh), (std::multiset<std::string>{"1", "1"}));
  EXPECT_EQ(Wh.components().size(), 2u);
}

TEST(VertexWhitehead, EdgeCountEqualsLength) {
  Rng rng(11);
  auto ps = sample_presentations();
  for (int it = 0; it < 60; ++it) {
    auto p = ps[it % ps.size()];
    GrushkoTree t = random_tree(p, rng(), 3);
    LineCollection L = make_lines({random_nonperipheral(p, rng, 4), random_nonperipheral(p, rng, 3)});
    LineLoops loops = line_loops(t, L);
    size_t total = 0;
    for (int v = 0; v < t.g.nv(); ++v) total += vertex_whitehead(t, loops, v).edges.size();
    EXPECT_EQ(static_cast<int>(total), lines_length(t, L));
  }
}

TEST(VertexWhitehead, PowersGiveTheSameLines) {
  GrushkoTree t = rose41();
  auto p = t.pres;
  EXPECT_EQ(lines_length(t, lines(p, kG)), lines_length(t, make_lines({power(W(p, kG), 3)})));
  EXPECT_EQ(lines_length(t, make_lines({W(p, kG), invert(W(p, kG))})), 4);
}

TEST(VertexWhitehead, ReversedLoopIsTheInverse) {
  GrushkoTree t = rose41();
  auto p = t.pres;
  NormalWord g = W(p, "b a c^2 a^-2 b");
  CyclicLoop c = cyclic_loop(t, g);
  CyclicLoop r = reverse_loop(c);
  EXPECT_EQ(axis_key(r), axis_key(cyclic_loop(t, invert(g))));
  EXPECT_EQ(loop_to_word(t, concat(t.g, concat(t.g, r.conj, cyc_as_path(t.g, r)), inverse(t.g, r.conj))), invert(g));
}

// ---------------------------------------------------------------- monodromy

TEST(Monodromy, Example41IsGeneratedByA4) {
  GrushkoTree t = rose41();
  auto p = t.pres;
  WhiteheadGraph Wh = vertex_whitehead(t, lines(p, kG), 0);
  auto m = monodromy(Wh);
  EXPECT_FALSE(m.isTrivial);
  EXPECT_FALSE(m.equalsWholeFactor);
  EXPECT_EQ(m.rank, 1);
  EXPECT_EQ(m.index, std::optional<int64_t>(4));
  FactorSubgroup M(*p, 0, m.generators);
  EXPECT_TRUE(M.contains(A(p, 4)));
  EXPECT_TRUE(M.contains(A(p, -8)));
  EXPECT_FALSE(M.contains(A(p, 2)));
  // re-rooted at every vertex
  for (int r = 0; r < 4; ++r) {
    std::vector<int> order{r};
    for (int i = 0; i < 4; ++i)
      if (i != r) order.push_back(i);
    auto mr = monodromy(Wh, order);
    EXPECT_EQ(mr.index, m.index);
  }
}

TEST(Monodromy, TreeSubgraphIsTrivial) {
  GrushkoTree t = rose41();
  WhiteheadGraph Wh = vertex_whitehead(t, lines(t.pres, kG), 0);
  // drop one edge of the cycle
  std::vector<int> all{0, 1, 2, 3};
  EXPECT_TRUE(monodromy(Wh, all, std::vector<int>{0, 1, 2}).isTrivial);
  EXPECT_TRUE(monodromy(Wh, {Wh.edges[0].from, Wh.edges[0].to}).isTrivial);
}

TEST(Monodromy, CancellingCycleIsTrivial) {
  auto p = ex41();
  auto Wh = voltage_graph(p, 4, {{0, 1, A(p, 0)}, {1, 2, A(p, 1)}, {2, 3, A(p, 0)}, {3, 0, A(p, -1)}});
  EXPECT_TRUE(monodromy(Wh).isTrivial);
}

TEST(Monodromy, DisconnectedSubgraphIsRejected) {
  GrushkoTree t = rose41();
  WhiteheadGraph Wh = vertex_whitehead(t, lines(t.pres, "b; c"), 0);
  try {
    monodromy(Wh);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "DisconnectedSubgraph");
  }
}

TEST(Monodromy, InvariantUnderRootAndOrder) {
  Rng rng(5);
  auto p = make_pres({{FactorKind::Free, 2}}, 2);
  for (int it = 0; it < 80; ++it) {
    int n = 2 + static_cast<int>(draw(rng, 4));
    std::vector<std::tuple<int, int, FactorElement>> es;
    for (int i = 1; i < n; ++i) es.push_back({static_cast<int>(draw(rng, i)), i, random_factor_element(*p, 0, rng)});
    for (int i = 0; i < 2; ++i)
      es.push_back({static_cast<int>(draw(rng, n)), static_cast<int>(draw(rng, n)), random_factor_element(*p, 0, rng)});
    auto Wh = voltage_graph(p, n, es);
    auto m0 = monodromy(Wh);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::shuffle(es.begin(), es.end(), rng);
    auto m1 = monodromy(voltage_graph(p, n, es), order);
    EXPECT_EQ(m0.isTrivial, m1.isTrivial);
    EXPECT_EQ(m0.equalsWholeFactor, m1.equalsWholeFactor);
    EXPECT_EQ(m0.rank, m1.rank);
    EXPECT_EQ(m0.index, m1.index);
  }
}

// ---------------------------------------------------------------- cuts

TEST(AdmissibleCut, Example41HasNone) {
  GrushkoTree t = rose41();
  EXPECT_FALSE(find_admissible_cut(vertex_whitehead(t, lines(t.pres, kG), 0)));
}

TEST(AdmissibleCut, SingleEdgeComponentIsTypeI) {
  GrushkoTree t = rose41();
  WhiteheadGraph Wh = vertex_whitehead(t, lines(t.pres, "b"), 0);
  auto cut = find_admissible_cut(Wh);
  ASSERT_TRUE(cut);
  EXPECT_EQ(cut->kind, AdmissibleCut::Kind::TypeI);
  EXPECT_EQ(cut->U, (std::vector<int>{Wh.find("Yb+"), Wh.find("Yb-")}));
  EXPECT_EQ(cut->V.size(), 2u);
}

TEST(AdmissibleCut, TrivialCircleAtLabeledVertexTakesEverything) {
  auto p = ex41();
  auto Wh = voltage_graph(p, 3, {{0, 1, A(p, 0)}, {1, 2, A(p, 0)}, {2, 0, A(p, 0)}});
  auto cut = find_admissible_cut(Wh);
  ASSERT_TRUE(cut);
  EXPECT_EQ(cut->kind, AdmissibleCut::Kind::TypeI);
  EXPECT_EQ(cut->U.size(), 3u);
  EXPECT_TRUE(cut->V.empty());
  // the same circle at an unlabeled vertex has no cut
  Wh.factor = -1;
  EXPECT_FALSE(find_admissible_cut(Wh));
}

TEST(AdmissibleCut, CutVertexWithTrivialPiece) {
  auto p = ex41();
  // a loop with label a at 0 and a pendant triangle with trivial labels
  auto Wh = voltage_graph(p, 3, {{0, 0, A(p, 1)}, {0, 1, A(p, 1)}, {1, 2, A(p, 0)}, {2, 0, A(p, -1)}});
  auto cut = find_admissible_cut(Wh);
  ASSERT_TRUE(cut);
  EXPECT_EQ(cut->kind, AdmissibleCut::Kind::TypeII);
  EXPECT_EQ(cut->cutVertex, 0);
  EXPECT_EQ(cut->U, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(cut->V, (std::vector<int>{0}));
  // normalized: labels trivial on a maximal tree of U
  EXPECT_TRUE(cut->twist[0].trivial());
  EXPECT_EQ(cut->twist[1], A(p, 1));
}

TEST(AdmissibleCut, ReturnedCutsSatisfyTheDefinition) {
  Rng rng(17);
  auto p = make_pres({{FactorKind::Free, 1}}, 2);
  int seen = 0;
  for (int it = 0; it < 300; ++it) {
    int n = 2 + static_cast<int>(draw(rng, 4));
    std::vector<std::tuple<int, int, FactorElement>> es;
    int m = 1 + static_cast<int>(draw(rng, 6));
    for (int i = 0; i < m; ++i)
      es.push_back({static_cast<int>(draw(rng, n)), static_cast<int>(draw(rng, n)),
                    draw(rng, 2) ? A(p, 0) : A(p, draw(rng, 5) - 2)});
    auto Wh = voltage_graph(p, n, es);
    if (draw(rng, 3) == 0) Wh.factor = -1;
    auto cut = find_admissible_cut(Wh);
    if (!cut) continue;
    ++seen;
    std::vector<int> U = cut->U;
    std::set<int> inU(U.begin(), U.end());
    std::vector<int> uEdges;
    for (size_t i = 0; i < Wh.edges.size(); ++i) {
      auto& e = Wh.edges[i];
      if (!inU.count(e.from) || !inU.count(e.to)) continue;
      // loops at the cut vertex belong to the other side
      if (cut->kind == AdmissibleCut::Kind::TypeII && e.from == cut->cutVertex && e.to == cut->cutVertex) continue;
      uEdges.push_back(static_cast<int>(i));
    }
    EXPECT_TRUE(monodromy(Wh, U, uEdges).isTrivial);
    if (cut->kind == AdmissibleCut::Kind::TypeI) {
      for (auto& e : Wh.edges) EXPECT_EQ(inU.count(e.from), inU.count(e.to));
      if (Wh.factor < 0) EXPECT_FALSE(cut->V.empty());
    } else {
      std::set<int> inV(cut->V.begin(), cut->V.end());
      int vEdges = 0;
      for (auto& e : Wh.edges) {
        bool u = inU.count(e.from) && inU.count(e.to) && !(e.from == cut->cutVertex && e.to == cut->cutVertex);
        bool v = inV.count(e.from) && inV.count(e.to);
        EXPECT_TRUE(u || v);
        if (v && !u) ++vEdges;
      }
      EXPECT_GT(vEdges, 0);
      std::vector<int> inter;
      std::set_intersection(cut->U.begin(), cut->U.end(), cut->V.begin(), cut->V.end(), std::back_inserter(inter));
      EXPECT_EQ(inter, std::vector<int>{cut->cutVertex});
    }
    // twists trivialize the labels on a spanning tree of U
    std::map<int, FactorElement> tw;
    for (size_t i = 0; i < U.size(); ++i) tw[U[i]] = cut->twist[i];
    for (auto& e : Wh.edges) {
      if (!inU.count(e.from) || !inU.count(e.to)) continue;
      if (cut->kind == AdmissibleCut::Kind::TypeII && e.from == cut->cutVertex && e.to == cut->cutVertex) continue;
      EXPECT_TRUE(fe_mul(fe_mul(tw[e.from], e.label), fe_inv(tw[e.to])).trivial());
    }
  }
  EXPECT_GT(seen, 50);
}

// ---------------------------------------------------------------- reduction

TEST(Reduce, Example41IsAlreadyReduced) {
  GrushkoTree t = rose41();
  auto r = whitehead_reduce(t, lines(t.pres, kG));
  EXPECT_EQ(r.outcome, ReductionResult::Outcome::Reduced);
  EXPECT_TRUE(r.steps.empty());
  EXPECT_EQ(r.finalLength, 4);
}

TEST(Reduce, SingleGeneratorLeavesAnEdgeUncrossed) {
  GrushkoTree t = rose41();
  auto L = lines(t.pres, "b");
  auto r = whitehead_reduce(t, L);
  ASSERT_EQ(r.outcome, ReductionResult::Outcome::UncrossedEdge);
  EXPECT_EQ(r.edge, 1);
  EXPECT_TRUE(r.steps.empty());
  ASSERT_TRUE(r.freeSplitting);
  EXPECT_TRUE(is_elliptic(*r.freeSplitting, W(t.pres, "b")).elliptic);
  EXPECT_TRUE(check_adjacency(free_splitting(r.tree), *r.freeSplitting, *r.splittingWitness));
}

TEST(Reduce, ClassicalCommutatorIsReduced) {
  auto p = make_pres({}, 2);
  GrushkoTree t = standard_rose(p);
  auto r = whitehead_reduce(t, make_lines({W(p, "x1 x2 x1^-1 x2^-1")}));
  EXPECT_EQ(r.outcome, ReductionResult::Outcome::Reduced);
  EXPECT_TRUE(r.steps.empty());
}

TEST(Reduce, SporadicPresentationIsRejected) {
  auto p = make_pres({{FactorKind::Free, 1}}, 1);
  try {
    whitehead_reduce(standard_rose(p), make_lines({W(p, "x1 a1.1 x1")}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "SporadicPresentation");
  }
}

TEST(Reduce, PrimitiveInF2BecomesUncrossed) {
  auto p = make_pres({}, 2);
  GrushkoTree t = standard_rose(p);
  auto r = whitehead_reduce(t, make_lines({W(p, "x1^2 x2")}));
  EXPECT_EQ(r.outcome, ReductionResult::Outcome::UncrossedEdge);
  EXPECT_FALSE(r.steps.empty());
}

TEST(Reduce, RandomInstancesValidate) {
  Rng rng(2024);
  auto ps = sample_presentations();
  int moves = 0;
  for (int it = 0; it < 120; ++it) {
    auto p = ps[it % ps.size()];
    GrushkoTree t = random_tree(p, rng(), static_cast<int>(draw(rng, 4)));
    LineCollection L = make_lines({random_nonperipheral(p, rng, 2 + static_cast<int>(draw(rng, 4)))});
    auto r = whitehead_reduce(t, L);
    EXPECT_LE(static_cast<int>(r.steps.size()), r.startLength);
    int prev = r.startLength;
    ZSplitting before = free_splitting(t);
    for (auto& s : r.steps) {
      EXPECT_LE(s.lengthAfter, prev);
      EXPECT_EQ(s.lengthAfter, lines_length(s.after, L));
      prev = s.lengthAfter;
      std::string why;
      EXPECT_TRUE(check_adjacency(before, free_splitting(s.after), s.witness, &why)) << why;
      EXPECT_TRUE(check_inverse(s.after));
      before = free_splitting(s.after);
      ++moves;
    }
    LineLoops loops = line_loops(r.tree, L);
    if (r.outcome == ReductionResult::Outcome::UncrossedEdge) {
      for (auto& l : loops.fwd)
        for (int h : l.he) EXPECT_NE(h >> 1, r.edge);
      for (auto& g : L.generators) EXPECT_TRUE(is_elliptic(*r.freeSplitting, g).elliptic);
    } else {
      for (int v = 0; v < r.tree.g.nv(); ++v) {
        WhiteheadGraph Wh = vertex_whitehead(r.tree, loops, v);
        EXPECT_FALSE(find_admissible_cut(Wh));
        if (Wh.factor >= 0)
          for (auto& C : Wh.components()) EXPECT_FALSE(monodromy(Wh, C).isTrivial);
      }
    }
  }
  EXPECT_GT(moves, 10);
}

// ---------------------------------------------------------------- derived graphs

TEST(Derived, Example41IsFourLines) {
  GrushkoTree t = rose41();
  auto R = derived_components(vertex_whitehead(t, lines(t.pres, kG), 0));
  ASSERT_EQ(R.quotient.size(), 1u);
  EXPECT_EQ(R.quotient[0].derivedCount, std::optional<int64_t>(4));
  EXPECT_EQ(R.quotient[0].shape, "line");
  EXPECT_EQ(R.total, std::optional<int64_t>(4));
  EXPECT_TRUE(R.vx.empty());
  EXPECT_TRUE(R.hat);
}

TEST(Derived, SingleEdgeGivesInfinitelyManyFiniteComponents) {
  GrushkoTree t = rose41();
  auto R = derived_components(vertex_whitehead(t, lines(t.pres, "b"), 0));
  ASSERT_EQ(R.quotient.size(), 3u);
  for (auto& q : R.quotient) {
    EXPECT_TRUE(q.mon.isTrivial);
    EXPECT_FALSE(q.derivedCount);
    EXPECT_EQ(q.shape, "finite");
  }
  EXPECT_EQ(R.quotient[0].vertices.size(), 2u);
  EXPECT_TRUE(R.infinitelyManyFinite);
  EXPECT_FALSE(R.total);
}

TEST(Derived, LoopLabeledAIsOneLine) {
  auto p = ex41();
  auto R = derived_components(voltage_graph(p, 1, {{0, 0, A(p, 1)}}));
  EXPECT_EQ(R.quotient[0].derivedCount, std::optional<int64_t>(1));
  EXPECT_EQ(R.quotient[0].shape, "line");
  EXPECT_EQ(R.total, std::optional<int64_t>(1));
}

TEST(Derived, TrivialStabilizerIsRejected) {
  auto Wh = vertex_whitehead(standard_rose(make_pres({}, 2)), make_lines({W(make_pres({}, 2), "x1 x2")}), 0);
  try {
    derived_components(Wh);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "TrivialStabilizer");
  }
}

TEST(Derived, Example72AtV) {
  GrushkoTree t = rose41();
  auto p = t.pres;
  WhiteheadGraph Wh = vertex_whitehead(t, lines(p, kG), 0);
  int yb_plus = Wh.find("Yb+"), yb_minus = Wh.find("Yb-"), yc_plus = Wh.find("Yc+");
  auto R = classify_components_minus(Wh, {DVertex{yb_minus, A(p, -1)}, DVertex{yb_plus, A(p, 0)}});
  EXPECT_EQ(R.total, std::optional<int64_t>(6));
  ASSERT_EQ(R.untouched.size(), 1u);
  EXPECT_EQ(R.untouched[0], std::optional<int64_t>(3));
  std::multiset<std::string> shapes;
  for (auto& pc : R.pieces) shapes.insert(pc.shape);
  EXPECT_EQ(shapes, (std::multiset<std::string>{"finite", "ray", "ray"}));
  ASSERT_EQ(R.vx.size(), 1u);
  EXPECT_EQ(R.vx[0], (DVertex{yc_plus, A(p, 0)}));
  EXPECT_TRUE(R.hat);
}

TEST(Derived, Example72AtW) {
  GrushkoTree t = rose41();
  auto p = t.pres;
  WhiteheadGraph Wh = vertex_whitehead(t, lines(p, kG), 0);
  int zb_plus = Wh.find("Yb+"), zb_minus = Wh.find("Yb-"), zc_plus = Wh.find("Yc+"), zc_minus = Wh.find("Yc-");
  auto R = classify_components_minus(
      Wh, {DVertex{zb_minus, A(p, 0)}, DVertex{zc_minus, A(p, 0)}, DVertex{zb_minus, A(p, -4)}});
  EXPECT_EQ(R.vx, (std::vector<DVertex>{DVertex{zb_plus, A(p, -3)}, DVertex{zc_plus, A(p, -3)}}));
  EXPECT_TRUE(R.hat);
}

TEST(Derived, EmptyRemovalMatchesDerivedComponents) {
  GrushkoTree t = rose41();
  WhiteheadGraph Wh = vertex_whitehead(t, lines(t.pres, kG), 0);
  auto a = derived_components(Wh), b = classify_components_minus(Wh, {});
  EXPECT_EQ(a.total, b.total);
  EXPECT_EQ(a.pieces.size(), b.pieces.size());
}

TEST(Derived, RankTwoAbelianIsOneEnded) {
  auto p = make_pres({{FactorKind::Abelian, 2}}, 2);
  auto x = fe_generator(0, FactorKind::Abelian, 0), y = fe_generator(0, FactorKind::Abelian, 1);
  auto Wh = voltage_graph(p, 2, {{0, 1, p->identity_in(0)}, {1, 0, x}, {0, 0, y}});
  auto R = classify_components_minus(Wh, {DVertex{0, p->identity_in(0)}, DVertex{1, x}});
  EXPECT_TRUE(R.resolved);
  int inf = 0;
  for (auto& pc : R.pieces) inf += !pc.finite;
  EXPECT_EQ(inf, 1);
}

TEST(Derived, BudgetIsReported) {
  auto p = make_pres({{FactorKind::Free, 2}}, 2);
  auto x = fe_generator(0, FactorKind::Free, 0), y = fe_generator(0, FactorKind::Free, 1);
  auto Wh = voltage_graph(p, 1, {{0, 0, x}, {0, 0, y}});
  try {
    classify_components_minus(Wh, {DVertex{0, p->identity_in(0)}}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "BudgetExceeded");
  }
  auto R = classify_components_minus(Wh, {DVertex{0, p->identity_in(0)}});
  EXPECT_TRUE(R.vx.empty());
  EXPECT_TRUE(R.hat);
}

// ---------------------------------------------------------------- subtrees

TEST(Subtree, Example72IsTheEightCycle) {
  GrushkoTree t = rose41();
  auto L = lines(t.pres, kG);
  SubtreeSpec X = example72();
  auto cv = subtree_node_classes(t, line_loops(t, L), X, 0);
  auto cw = subtree_node_classes(t, line_loops(t, L), X, 1);
  EXPECT_EQ(cv.vx.size(), 1u);
  EXPECT_EQ(cw.vx.size(), 2u);
  WhiteheadGraph G = subtree_whitehead(t, L, X);
  EXPECT_EQ(vertex_names(G), (std::set<std::string>{"Yc+", "a^-1.Wb-", "vhat", "what", "a^-4.Wb-", "a^-3.Zc+",
                                                     "a^-3.Zb+", "Wc-"}));
  EXPECT_TRUE(is_cycle(G));
  EXPECT_EQ(edge_names(G), (std::set<std::pair<std::string, std::string>>{{"Yc+", "a^-1.Wb-"},
                                                                          {"a^-1.Wb-", "vhat"},
                                                                          {"Wc-", "vhat"},
                                                                          {"a^-4.Wb-", "what"},
                                                                          {"a^-3.Zc+", "a^-4.Wb-"},
                                                                          {"a^-3.Zb+", "a^-3.Zc+"},
                                                                          {"Wc-", "a^-3.Zb+"},
                                                                          {"Yc+", "what"}}));
}

// The axis of g runs cv, v, bv, bacv: the line through Yc+ and Yb+ leaves w
// through b(aY_c^+), which lies in the hat class at w.  The other line across
// e1 runs a^3c^-1 v, v, bv, bc^-1 v and so joins vhat to Wc-.
TEST(Subtree, Example72CrossingLinesFollowTheAxes) {
  GrushkoTree t = rose41();
  auto p = t.pres;
  WhiteheadGraph Wh = vertex_whitehead(t, lines(p, kG), 0);
  // in T_v the neighbours of Yb- are Yc- and aYc+
  std::set<std::string> around;
  for (auto& e : Wh.edges) {
    if (e.to == Wh.find("Yb-")) around.insert(Wh.vertices[e.from].name + "/" + format_factor_element(*p, fe_inv(e.label)));
    if (e.from == Wh.find("Yb-")) around.insert(Wh.vertices[e.to].name + "/" + format_factor_element(*p, e.label));
  }
  EXPECT_EQ(around, (std::set<std::string>{"Yc-/1", "Yc+/a"}));
}

TEST(Subtree, SingleUnlabeledVertexIsTheVertexGraph) {
  auto p = make_pres({}, 2);
  GrushkoTree t = standard_rose(p);
  auto L = make_lines({W(p, "x1 x2 x1^-1 x2^-1"), W(p, "x1^2 x2^3")});
  SubtreeSpec X;
  EXPECT_TRUE(same_graph(subtree_whitehead(t, L, X), vertex_whitehead(t, L, 0)));
}

TEST(Subtree, MidpointHasOneEdgePerCrossing) {
  GrushkoTree t = rose41();
  auto L = lines(t.pres, kG);
  SubtreeSpec X;
  X.midpoint = 0;
  WhiteheadGraph G = subtree_whitehead(t, L, X);
  EXPECT_EQ(G.nv(), 2);
  EXPECT_EQ(G.edges.size(), 2u);
  for (auto& e : G.edges) EXPECT_NE(e.from, e.to);
}

TEST(Subtree, RequiresReducedTree) {
  GrushkoTree t = rose41();
  try {
    subtree_whitehead(t, lines(t.pres, "b"), SubtreeSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NotReduced");
  }
}

// ---------------------------------------------------------------- splicing

TEST(Splice, Figure7StarsGiveTheEightCycle) {
  GrushkoTree t = rose41();
  auto p = t.pres;
  auto L = lines(p, kG);
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
  WhiteheadGraph GZ = subtree_whitehead(t, L, Z), GZp = subtree_whitehead(t, L, Zp);
  EXPECT_TRUE(is_cycle(GZ));
  EXPECT_EQ(GZ.nv(), 4);
  EXPECT_TRUE(is_cycle(GZp));
  EXPECT_EQ(GZp.nv(), 6);
  EXPECT_EQ(edge_names(GZ), (std::set<std::pair<std::string, std::string>>{
                                {"Yb+", "Yc+"}, {"Yc+", "a^-1.Wb-"}, {"a^-1.Wb-", "vhat"}, {"Yb+", "vhat"}}));
  EXPECT_EQ(edge_names(GZp), (std::set<std::pair<std::string, std::string>>{{"Wc-", "a^-3.Zb+"},
                                                                            {"Wc-", "Zb-"},
                                                                            {"Zb-", "what"},
                                                                            {"a^-4.Wb-", "what"},
                                                                            {"a^-3.Zc+", "a^-4.Wb-"},
                                                                            {"a^-3.Zb+", "a^-3.Zc+"}}));
  WhiteheadGraph S = splice(GZ, GZ.find("Yb+"), GZp, GZp.find("Zb-"));
  EXPECT_TRUE(same_graph(S, subtree_whitehead(t, L, example72())));
}

TEST(Splice, TwoSingleEdges) {
  auto p = ex41();
  WhiteheadGraph a, b;
  a.pres = b.pres = p;
  for (auto nm : {"P", "Ya"}) a.vertices.push_back(WVertex{WVertex::Kind::Stub, nm});
  for (auto nm : {"Yb", "Q"}) b.vertices.push_back(WVertex{WVertex::Kind::Stub, nm});
  a.representative.assign(2, FactorElement{});
  b.representative.assign(2, FactorElement{});
  WEdge ea;
  ea.from = 0;
  ea.to = 1;
  ea.line = 0;
  ea.toKey = 3;
  a.edges.push_back(ea);
  WEdge eb;
  eb.from = 0;
  eb.to = 1;
  eb.line = 0;
  eb.fromKey = 3;
  b.edges.push_back(eb);
  WhiteheadGraph s = splice(a, 1, b, 0);
  ASSERT_EQ(s.nv(), 2);
  ASSERT_EQ(s.edges.size(), 1u);
  EXPECT_EQ(edge_names(s), (std::set<std::pair<std::string, std::string>>{{"P", "Q"}}));
  b.edges[0].fromKey = 4;
  try {
    splice(a, 1, b, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "PairingMismatch");
  }
}

TEST(Splice, RandomDecompositionsAgree) {
  auto inst = reduced_instances(25, 99);
  ASSERT_GE(inst.size(), 10u);
  Rng rng(7);
  int checked = 0;
  for (int it = 0; checked < 100 && it < 1000; ++it) {
    auto& I = inst[it % inst.size()];
    SubtreeSpec X = random_subtree(I.tree, rng, 2 + static_cast<int>(draw(rng, 3)), static_cast<int>(draw(rng, 3)));
    if (X.nodes.size() < 2) continue;
    int c = 1 + static_cast<int>(draw(rng, static_cast<int64_t>(X.nodes.size()) - 1));
    auto [A, B] = split_at(I.tree, X, c);
    WhiteheadGraph G = subtree_whitehead(I.tree, I.L, X);
    WhiteheadGraph GA = subtree_whitehead(I.tree, I.L, A), GB = subtree_whitehead(I.tree, I.L, B);
    WhiteheadGraph S = splice(GA, GA.find("CUT"), GB, GB.find("CUT"));
    EXPECT_TRUE(same_graph(S, G)) << to_dot(S) << "\nvs\n" << to_dot(G);
    ++checked;
  }
  EXPECT_EQ(checked, 100);
}

// ---------------------------------------------------------------- lemma checks

TEST(Subtree, StarsAboutLabeledVerticesAreConnected) {
  auto inst = reduced_instances(25, 31);
  Rng rng(3);
  int checked = 0;
  for (int it = 0; it < 300 && checked < 60; ++it) {
    auto& I = inst[it % inst.size()];
    const Graph& g = I.tree.g;
    std::vector<int> labeled;
    for (int v = 0; v < g.nv(); ++v)
      if (g.v[v].label >= 0) labeled.push_back(v);
    if (labeled.empty()) continue;
    SubtreeSpec Z = random_subtree(I.tree, rng, 1, 1 + static_cast<int>(draw(rng, 4)));
    Z.rootVertex = labeled[draw(rng, static_cast<int64_t>(labeled.size()))];
    Z.stubs.clear();
    std::set<std::pair<int, std::vector<int64_t>>> used;
    for (int i = 0; i < 3; ++i) {
      auto o = g.out(Z.rootVertex);
      int h = o[draw(rng, static_cast<int64_t>(o.size()))];
      FactorElement s = random_factor_element(*I.tree.pres, g.v[Z.rootVertex].label, rng, 1);
      if (used.insert({h, s.payload}).second) Z.add_stub(0, s, h, "S" + std::to_string(i));
    }
    WhiteheadGraph G = subtree_whitehead(I.tree, I.L, Z);
    EXPECT_TRUE(G.connected()) << to_dot(G);
    // only the hat may be a cut vertex
    for (int x = 0; x < G.nv(); ++x) {
      if (G.vertices[x].kind == WVertex::Kind::Hat) continue;
      WhiteheadGraph H;
      H.pres = G.pres;
      std::vector<int> id(G.nv(), -1);
      for (int y = 0; y < G.nv(); ++y)
        if (y != x) {
          id[y] = H.nv();
          H.vertices.push_back(G.vertices[y]);
        }
      for (auto e : G.edges)
        if (e.from != x && e.to != x) {
          e.from = id[e.from];
          e.to = id[e.to];
          H.edges.push_back(e);
        }
      EXPECT_TRUE(H.connected()) << G.vertices[x].name << "\n" << to_dot(G);
    }
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

TEST(Subtree, LooseEndsAtBothEndsOfArcs) {
  auto inst = reduced_instances(25, 47);
  Rng rng(8);
  int checked = 0;
  for (int it = 0; it < 400 && checked < 60; ++it) {
    auto& I = inst[it % inst.size()];
    const Graph& g = I.tree.g;
    // an arc: a path of nodes, with stubs continuing it at both ends
    SubtreeSpec X;
    X.rootVertex = static_cast<int>(draw(rng, g.nv()));
    X.nodes[0].tag = "N0.";
    X.nodes[0].name = "n0";
    int len = static_cast<int>(draw(rng, 3));
    int back = -1;  // half-edge back toward the previous node
    auto pick = [&](int x, int avoid, FactorElement& s, int& h) {
      int q = X.vertex_of(I.tree, x);
      auto o = g.out(q);
      for (int k = 0; k < 30; ++k) {
        h = o[draw(rng, static_cast<int64_t>(o.size()))];
        s = g.v[q].label >= 0 ? random_factor_element(*I.tree.pres, g.v[q].label, rng, 1) : trivial_at(g, q);
        if (!(h == avoid && s.trivial())) return true;
      }
      return false;
    };
    FactorElement s;
    int h;
    if (!pick(0, -1, s, h)) continue;
    X.add_stub(0, s, h, "Yminus");
    int first = h;
    FactorElement firstS = s;
    for (int i = 0; i < len; ++i) {
      int x = static_cast<int>(X.nodes.size()) - 1;
      do {
        if (!pick(x, back, s, h)) break;
      } while (x == 0 && h == first && s == firstS);
      if (x == 0 && h == first && s == firstS) break;
      X.add_node(x, s, h, "N" + std::to_string(x + 1) + ".", "n" + std::to_string(x + 1));
      back = rev(h);
    }
    int last = static_cast<int>(X.nodes.size()) - 1;
    bool ok = false;
    for (int k = 0; k < 30 && !ok; ++k) {
      if (!pick(last, last == 0 ? -1 : back, s, h)) break;
      ok = !(last == 0 && h == first && s == firstS);
    }
    if (!ok) continue;
    X.add_stub(last, s, h, "Yplus");
    WhiteheadGraph G = subtree_whitehead(I.tree, I.L, X);
    int ym = G.find("Yminus"), yp = G.find("Yplus");
    std::vector<int> skip;
    for (size_t i = 0; i < G.edges.size(); ++i)
      if (G.edges[i].from == ym || G.edges[i].to == ym || G.edges[i].from == yp || G.edges[i].to == yp)
        skip.push_back(static_cast<int>(i));
    // components of G minus the two ends
    WhiteheadGraph H = G;
    H.edges.clear();
    for (size_t i = 0; i < G.edges.size(); ++i)
      if (std::find(skip.begin(), skip.end(), static_cast<int>(i)) == skip.end()) H.edges.push_back(G.edges[i]);
    auto comps = H.components();
    int real = 0;
    for (auto& C : comps) {
      if (C.size() == 1 && (C[0] == ym || C[0] == yp)) continue;
      ++real;
      std::set<int> in(C.begin(), C.end());
      bool toM = false, toP = false;
      for (int i : skip) {
        auto& e = G.edges[i];
        int other = (e.from == ym || e.from == yp) ? e.to : e.from;
        int end = other == e.to ? e.from : e.to;
        if (!in.count(other)) continue;
        if (end == ym) toM = true;
        if (end == yp) toP = true;
      }
      EXPECT_TRUE(toM && toP) << to_dot(G) << describe_instance(I, X);
    }
    EXPECT_LE(real, lines_length(I.tree, I.L));
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

// ---------------------------------------------------------------- axes and cut sets

// the two ends of a line of L are one point after the identification
TEST(Annular, AxisOfALineIsNotACutPair) {
  auto p = make_pres({}, 2);
  GrushkoTree t = standard_rose(p);
  NormalWord g = W(p, "x1^2 x2^2");
  auto R = annular_whitehead(t, make_lines({g}), g);
  EXPECT_EQ(R.componentCount, std::optional<int64_t>(1));
  EXPECT_EQ(R.period, 4);
}

TEST(Annular, SurfaceWordsCutAlongEveryAxis) {
  auto p = make_pres({}, 2);
  GrushkoTree t = standard_rose(p);
  for (auto [g, a] : std::vector<std::pair<const char*, const char*>>{
           {"x1^2 x2^2", "x1"}, {"x1^2 x2^2", "x1 x2"}, {"x1 x2 x1^-1 x2^-1", "x1"}}) {
    auto R = annular_whitehead(t, make_lines({W(p, g)}), W(p, a));
    EXPECT_EQ(R.componentCount, std::optional<int64_t>(2)) << g << " along " << a;
  }
}

TEST(Annular, ConstructedCutPair) {
  auto p = make_pres({}, 3);
  GrushkoTree t = standard_rose(p);
  auto L = make_lines({W(p, "x1^2 x2^2 x1^2 x2^2 x3^2")});
  ASSERT_TRUE(is_whitehead_reduced(t, L));
  auto R = annular_whitehead(t, L, W(p, "x1^2 x2^2"));
  ASSERT_TRUE(R.componentCount);
  EXPECT_GE(*R.componentCount, 2);
}

TEST(Annular, RequiresReducedTree) {
  GrushkoTree t = rose41();
  try {
    annular_whitehead(t, lines(t.pres, "b"), W(t.pres, "b"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NotReduced");
  }
  try {
    annular_whitehead(t, lines(t.pres, kG), W(t.pres, "a"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "EllipticElement");
  }
}

TEST(EdgeCut, Example41EdgeSplitsIntoTwo) {
  GrushkoTree t = rose41();
  auto L = lines(t.pres, kG);
  auto r = edge_cut_components(t, L, 0);
  EXPECT_EQ(r.lineEdges.size(), 2u);
  EXPECT_EQ(r.components, 2);
  for (size_t i = 0; i < r.lineEdges.size(); ++i) {
    std::vector<int> skip = r.lineEdges;
    skip.erase(skip.begin() + i);
    EXPECT_EQ(r.graph.component_count(skip), 1);
  }
}

TEST(EdgeCut, UncrossedEdgeIsRejected) {
  GrushkoTree t = rose41();
  try {
    edge_cut_components(t, lines(t.pres, "b"), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NoLinesCrossE");
  }
}

TEST(EdgeCut, QuadraticReducedTreesSplitInTwo) {
  auto inst = reduced_instances(30, 5);
  int checked = 0;
  for (auto& I : inst) {
    LineLoops loops = line_loops(I.tree, I.L);
    for (int e = 0; e < I.tree.g.ne(); ++e) {
      auto r = edge_cut_components(I.tree, I.L, e);
      EXPECT_GE(r.components, 1);
      EXPECT_LE(r.components, static_cast<int>(r.lineEdges.size()));
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(PeripheralCutPoints, Example41VertexIsOne) {
  GrushkoTree t = rose41();
  EXPECT_EQ(peripheral_cut_points(t, lines(t.pres, kG)), std::vector<int>{0});
}

TEST(PeripheralCutPoints, NoFactorsNoPoints) {
  auto p = make_pres({}, 2);
  EXPECT_TRUE(peripheral_cut_points(standard_rose(p), make_lines({W(p, "x1 x2 x1^-1 x2^-1")})).empty());
}

TEST(PeripheralCutPoints, SurjectiveMonodromyIsExcluded) {
  GrushkoTree t = rose41();
  auto p = t.pres;
  // labels 1 and a around a connected graph: Mon = <a>
  auto L = lines(p, "b a c b^-1 c^-1");
  ASSERT_TRUE(is_whitehead_reduced(t, L));
  WhiteheadGraph Wh = vertex_whitehead(t, L, 0);
  EXPECT_TRUE(Wh.connected());
  EXPECT_TRUE(monodromy(Wh).equalsWholeFactor);
  EXPECT_TRUE(peripheral_cut_points(t, L).empty());
}

TEST(Dot, StableOutput) {
  GrushkoTree t = rose41();
  auto Wh = vertex_whitehead(t, lines(t.pres, kG), 0);
  std::string d = to_dot(Wh);
  EXPECT_EQ(d, to_dot(vertex_whitehead(t, lines(t.pres, kG), 0)));
  EXPECT_NE(d.find("\"Yb-\" -- \"Yc+\" [label=\"a\""), std::string::npos) << d;
}
