#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace gwtest;

// ---------------------------------------------------------------- the oracles themselves

TEST(DescentOracle, KnownWords) {
  using oracle::simple_by_descent;
  EXPECT_TRUE(simple_by_descent({1}, 2));
  EXPECT_TRUE(simple_by_descent({1, 2}, 2));
  EXPECT_TRUE(simple_by_descent({1, 1, 2}, 2));
  EXPECT_FALSE(simple_by_descent({1, 2, -1, -2}, 2));
  EXPECT_FALSE(simple_by_descent({1, 1, 2, 2}, 2));
  // in F3 the commutator misses a letter
  EXPECT_TRUE(simple_by_descent({1, 2, -1, -2}, 3));
  EXPECT_FALSE(simple_by_descent({1, 1, 2, 2, 3, 3}, 3));
}

TEST(DescentOracle, CanonicalFormIsInvariant) {
  oracle::Word w{1, 2, 2, -1, 3};
  oracle::Word rot{2, -1, 3, 1, 2}, inv{-3, 1, -2, -2, -1}, swap{2, 1, 1, -2, 3};
  EXPECT_EQ(oracle::canonical(w, 3), oracle::canonical(rot, 3));
  EXPECT_EQ(oracle::canonical(w, 3), oracle::canonical(inv, 3));
  EXPECT_EQ(oracle::canonical(w, 3), oracle::canonical(swap, 3));
}

TEST(DescentOracle, WordCounts) {
  // cyclically reduced words of length m in F_n: (2n-1)^m + 1 + (n-1)(1 + (-1)^m)
  auto count = [](int n, int m) {
    int64_t r = 1;
    for (int i = 0; i < m; ++i) r *= 2 * n - 1;
    return r + 1 + (n - 1) * (1 + (m % 2 ? -1 : 1));
  };
  for (int n : {2, 3}) {
    auto ws = oracle::cyclically_reduced_words(n, 4);
    std::map<size_t, int64_t> byLen;
    for (auto& w : ws) ++byLen[w.size()];
    for (int m = 1; m <= 4; ++m) EXPECT_EQ(byLen[m], count(n, m)) << n << " " << m;
  }
}

TEST(UnrollOracle, Example41HasFourLines) {
  GrushkoTree t = rose41();
  auto Wh = vertex_whitehead(t, lines(t.pres, kG), 0);
  auto o = oracle::unroll(Wh, {}, 12);
  EXPECT_EQ(o.classesInner, (std::vector<int64_t>{4}));
  EXPECT_EQ(o.classesOuter, (std::vector<int64_t>{4}));
  EXPECT_TRUE(o.hat);
  EXPECT_TRUE(o.finitePieces.empty());
}

TEST(UnrollOracle, Example72AtV) {
  GrushkoTree t = rose41();
  auto p = t.pres;
  auto Wh = vertex_whitehead(t, lines(p, kG), 0);
  auto o = oracle::unroll(Wh, {DVertex{Wh.find("Yb-"), A(p, -1)}, DVertex{Wh.find("Yb+"), A(p, 0)}}, 12);
  EXPECT_EQ(o.vx, (std::set<DVertex>{DVertex{Wh.find("Yc+"), A(p, 0)}}));
}

// ---------------------------------------------------------------- simplicity against descent

TEST(SimplicityOracle, AllShortWordsInF2) {
  int n = 0;
  auto bad = simplicity_disagreements(2, 6, &n);
  EXPECT_EQ(n, 1104);
  EXPECT_TRUE(bad.empty()) << bad.front();
}

TEST(SimplicityOracle, AllShortWordsInF3) {
  int n = 0;
  auto bad = simplicity_disagreements(3, 5, &n);
  EXPECT_EQ(n, 3918);
  EXPECT_TRUE(bad.empty()) << bad.front();
}

// ---------------------------------------------------------------- voltage graphs against unrolling

TEST(VoltageOracle, RandomGraphsAgreeWithUnrolling) {
  Rng rng(2024);
  int finiteCounts = 0, infiniteCounts = 0, withVx = 0;
  for (int it = 0; it < 100; ++it) {
    auto I = voltage_instance(rng, it);
    EXPECT_EQ(compare_with_unrolling(I), "") << "instance " << it << "\n" << to_dot(I.Wh);
    auto dc = derived_components(I.Wh);
    for (auto& q : dc.quotient) (q.derivedCount ? finiteCounts : infiniteCounts)++;
    withVx += !classify_components_minus(I.Wh, I.removed).vx.empty();
  }
  // the sample exercises every kind of answer
  EXPECT_GT(finiteCounts, 10);
  EXPECT_GT(infiniteCounts, 10);
  EXPECT_GT(withVx, 10);
}

// ---------------------------------------------------------------- random trees in O_L(g)

TEST(RandomTree, StaysInsideOL) {
  auto ps = sample_presentations();
  int stuck = 0, made = 0;
  for (uint64_t seed = 0; made < 200 && stuck < 50; ++seed) {
    auto p = ps[seed % ps.size()];
    Rng rng(seed);
    NormalWord g = random_nonperipheral(p, rng, 3);
    int L = comb_length(standard_rose(p), g) + 1 + static_cast<int>(seed % 3);
    GrushkoTree t;
    try {
      t = random_tree_in_OL(p, g, L, seed, 6);
    } catch (const Error& e) {
      // every move off the current tree may lengthen g too much
      EXPECT_EQ(e.code(), "NoValidMove");
      ++stuck;
      continue;
    }
    EXPECT_LE(comb_length(t, g), L) << seed;
    EXPECT_TRUE(verify_marking(t)) << seed;
    ++made;
  }
  EXPECT_EQ(made, 200);
}

TEST(RandomTree, ZeroStepsIsTheRose) {
  Rng rng(1);
  for (auto& p : sample_presentations()) {
    NormalWord g = random_nonperipheral(p, rng, 3);
    EXPECT_EQ(format_tree(random_tree_in_OL(p, g, 100, 5, 0)), format_tree(standard_rose(p)));
  }
}

TEST(RandomTree, SameSeedSameFile) {
  auto p = ex41();
  NormalWord g = W(p, kG);
  EXPECT_EQ(format_tree(random_tree_in_OL(p, g, 10, 42, 8)), format_tree(random_tree_in_OL(p, g, 10, 42, 8)));
}

TEST(RandomTree, LengthBelowTheRoseIsRejected) {
  auto p = ex41();
  try {
    random_tree_in_OL(p, W(p, kG), 2, 1, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "InvalidArgument");
  }
}

// ---------------------------------------------------------------- seeded suites

TEST(ReductionSuite, TwoHundredInstances) {
  auto inst = reduction_instances(200, 5, 12);
  ASSERT_EQ(inst.size(), 200u);
  for (size_t i = 0; i < inst.size(); ++i) EXPECT_EQ(validate_reduction(inst[i].tree, inst[i].L), "") << i;
}

TEST(ProjectionSuite, SimpleElementsWithinD0) {
  int maxLength = 0;
  for (auto& I : d0_instances(50)) {
    int len = 0;
    EXPECT_EQ(check_d0(I, &len), "") << format_word(I.g);
    maxLength = std::max(maxLength, len);
  }
  EXPECT_GT(maxLength, 0);
}
