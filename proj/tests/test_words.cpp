#include <gtest/gtest.h>

#include <random>

#include "gw/words.hpp"

using namespace gw;

namespace {

PresPtr ex41() {
  auto p = std::make_shared<Presentation>();
  p->factors = {{FactorKind::Free, 1}};
  p->free_rank = 2;
  p->aliases = {{"a", "a1.1"}, {"b", "x1"}, {"c", "x2"}};
  return p;
}

PresPtr mixed() {
  auto p = std::make_shared<Presentation>();
  p->factors = {{FactorKind::Free, 2}, {FactorKind::Abelian, 2}};
  p->free_rank = 2;
  return p;
}

NormalWord W(const PresPtr& p, const std::string& s) { return parse_word(s, p); }

// flat letter reduction used as a second route for free cancellation
std::vector<std::pair<std::string, int>> flat_reduce(const std::vector<RawLetter>& raw) {
  std::vector<std::pair<std::string, int>> st;
  for (auto& r : raw) {
    int s = r.power > 0 ? 1 : -1;
    for (int64_t i = 0; i < (r.power > 0 ? r.power : -r.power); ++i) {
      if (!st.empty() && st.back().first == r.name && st.back().second == -s)
        st.pop_back();
      else
        st.push_back({r.name, s});
    }
  }
  return st;
}

std::vector<RawLetter> random_raw(std::mt19937& rng, const std::vector<std::string>& names, int len) {
  std::vector<RawLetter> r;
  std::uniform_int_distribution<int> g(0, static_cast<int>(names.size()) - 1), e(-2, 2);
  for (int i = 0; i < len; ++i) {
    int x = e(rng);
    if (x == 0) x = 1;
    r.push_back({names[g(rng)], x});
  }
  return r;
}

}  // namespace

TEST(Words, NormalizeExamples) {
  auto p = ex41();
  EXPECT_EQ(format_word(W(p, "b a a^-1 c")), "b c");
  EXPECT_EQ(format_word(W(p, "a^3 a")), "a^4");
  auto q = std::make_shared<Presentation>(*p);
  q->aliases.clear();
  EXPECT_TRUE(W(q, "x1 a1.1 x1^-1 x1 a1.1^-1 x1^-1").is_identity());
  EXPECT_THROW(W(p, "d"), Error);
  try {
    W(p, "b q");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "UnknownGenerator");
  }
}

TEST(Words, MultiplyInvert) {
  auto p = ex41();
  EXPECT_EQ(format_word(multiply(W(p, "b a"), W(p, "a^-1 c"))), "b c");
  EXPECT_EQ(format_word(invert(W(p, "b a c"))), "c^-1 a^-1 b^-1");
  EXPECT_EQ(multiply(identity_word(p), W(p, "b a")), W(p, "b a"));
  auto other = mixed();
  EXPECT_THROW(multiply(W(p, "b"), W(other, "x1")), Error);
}

TEST(Words, CyclicReduceExamples) {
  auto p = ex41();
  auto r = cyclically_reduce(W(p, "b a b^-1"));
  EXPECT_EQ(format_word(r.conjugator), "b");
  EXPECT_EQ(format_word(r.core), "a");
  auto g = W(p, "b a c b^-1 a^3 c^-1");
  r = cyclically_reduce(g);
  EXPECT_TRUE(r.conjugator.is_identity());
  EXPECT_EQ(r.core, g);
  auto h = W(p, "c b c^-1 b^-1");
  r = cyclically_reduce(h);
  EXPECT_TRUE(r.conjugator.is_identity());
  EXPECT_EQ(r.core, h);
  EXPECT_THROW(cyclically_reduce(identity_word(p)), Error);
}

TEST(Words, Peripheral) {
  auto p = ex41();
  auto a5 = is_peripheral(W(p, "a^5"));
  ASSERT_TRUE(a5 && a5->factor);
  EXPECT_EQ(*a5->factor, 0);
  auto bab = is_peripheral(W(p, "b a b^-1"));
  ASSERT_TRUE(bab && bab->factor);
  EXPECT_EQ(*bab->factor, 0);
  EXPECT_FALSE(is_peripheral(W(p, "b a c b^-1 a^3 c^-1")));
  auto id = is_peripheral(identity_word(p));
  ASSERT_TRUE(id);
  EXPECT_TRUE(id->trivial);
}

TEST(Words, Complexity) {
  Presentation p;
  p.factors = {{FactorKind::Free, 1}};
  p.free_rank = 2;
  EXPECT_EQ(complexity(p), std::make_pair(5, 0));
  Presentation z;
  z.free_rank = 1;
  EXPECT_EQ(complexity(z), std::make_pair(0, 1));
  Presentation two;
  two.factors = {{FactorKind::Free, 1}, {FactorKind::Abelian, 2}};
  EXPECT_EQ(complexity(two), std::make_pair(1, 1));
  Presentation q;
  q.factors = {{FactorKind::Free, 1}};
  q.free_rank = 1;
  EXPECT_TRUE(q.sporadic());
  Presentation f2;
  f2.free_rank = 2;
  EXPECT_FALSE(f2.sporadic());
  EXPECT_EQ(f2.xi(), 3);
}

TEST(Words, FactorSubgroupExamples) {
  auto p = ex41();
  auto a4 = fe_generator(0, FactorKind::Free, 0, 4);
  auto r = factor_subgroup(*p, {a4});
  EXPECT_FALSE(r.isTrivial);
  EXPECT_FALSE(r.equalsWholeFactor);
  EXPECT_EQ(r.rank, 1);
  ASSERT_TRUE(r.index);
  EXPECT_EQ(*r.index, 4);
  EXPECT_TRUE(factor_subgroup(*p, {}).isTrivial);

  auto m = mixed();
  auto a = fe_generator(0, FactorKind::Free, 0), b = fe_generator(0, FactorKind::Free, 1);
  auto rr = factor_subgroup(*m, {a, b});
  EXPECT_TRUE(rr.equalsWholeFactor);
  EXPECT_EQ(rr.rank, 2);
  auto aba = fe_mul(fe_mul(a, b), fe_inv(a));
  auto sub = FactorSubgroup(*m, 0, {aba, fe_pow(a, 2)});
  EXPECT_FALSE(sub.report().equalsWholeFactor);
  EXPECT_TRUE(sub.contains(fe_mul(aba, fe_pow(a, -2))));
  EXPECT_FALSE(sub.contains(a));
  EXPECT_FALSE(sub.contains(b));
  // index 2 subgroup <a^2, b, a b a^-1>
  auto idx2 = factor_subgroup(*m, {fe_pow(a, 2), b, aba});
  ASSERT_TRUE(idx2.index);
  EXPECT_EQ(*idx2.index, 2);
  EXPECT_EQ(idx2.rank, 3);

  auto x = fe_generator(1, FactorKind::Abelian, 0), y = fe_generator(1, FactorKind::Abelian, 1);
  auto lat = factor_subgroup(*m, {fe_mul(fe_pow(x, 2), y), fe_mul(x, fe_pow(y, -1))});
  ASSERT_TRUE(lat.index);
  EXPECT_EQ(*lat.index, 3);
  EXPECT_TRUE(factor_subgroup(*m, {fe_mul(x, y), x}).equalsWholeFactor);
  EXPECT_THROW(factor_subgroup(*m, {a, x}), Error);
}

TEST(Words, Powers) {
  auto a = fe_generator(0, FactorKind::Free, 0), b = fe_generator(0, FactorKind::Free, 1);
  auto ab = fe_mul(a, b);
  EXPECT_EQ(integer_power_of(fe_pow(ab, 6), fe_pow(ab, 2)).value_or(99), 3);
  EXPECT_EQ(integer_power_of(fe_pow(ab, -6), fe_pow(ab, 3)).value_or(99), -2);
  EXPECT_FALSE(integer_power_of(fe_pow(ab, 5), fe_pow(ab, 2)));
  EXPECT_FALSE(nonneg_power_of(fe_pow(ab, -2), ab));
  EXPECT_FALSE(integer_power_of(a, b));
  auto conj = [&](const FactorElement& g) { return fe_mul(fe_mul(b, g), fe_inv(b)); };
  EXPECT_EQ(integer_power_of(conj(fe_pow(ab, 4)), conj(ab)).value_or(99), 4);
  EXPECT_EQ(factor_root(conj(fe_pow(ab, 4))), conj(ab));
  auto x = fe_generator(1, FactorKind::Abelian, 0), y = fe_generator(1, FactorKind::Abelian, 1);
  EXPECT_EQ(integer_power_of(fe_mul(fe_pow(x, 4), fe_pow(y, 6)), fe_mul(fe_pow(x, 2), fe_pow(y, 3))).value_or(99), 2);
  EXPECT_FALSE(integer_power_of(fe_mul(fe_pow(x, 4), fe_pow(y, 5)), fe_mul(fe_pow(x, 2), fe_pow(y, 3))));
}

TEST(WordsProperty, NormalizeAgreesWithFlatReductionOnFreeLetters) {
  auto p = std::make_shared<Presentation>();
  p->factors = {{FactorKind::Free, 2}};
  p->free_rank = 2;
  std::mt19937 rng(11);
  std::vector<std::string> names = {"a1.1", "a1.2", "x1", "x2"};
  for (int t = 0; t < 10000; ++t) {
    auto raw = random_raw(rng, names, 1 + static_cast<int>(rng() % 12));
    auto w = normalize(raw, p);
    // idempotence
    EXPECT_EQ(normalize_syllables(w.syl, p), w);
    // the factor and free letters are all free, so flat reduction decides equality
    auto flat = flat_reduce(raw);
    std::vector<RawLetter> back;
    for (auto& [n, s] : flat) back.push_back({n, s});
    EXPECT_EQ(normalize(back, p), w);
    EXPECT_EQ(flat.empty(), w.is_identity());
    EXPECT_LE(word_size(w), static_cast<int64_t>(flat.size()));
  }
}

TEST(WordsProperty, GroupLaws) {
  auto p = mixed();
  std::mt19937 rng(5);
  std::vector<std::string> names = {"a1.1", "a1.2", "a2.1", "a2.2", "x1", "x2"};
  for (int t = 0; t < 2000; ++t) {
    auto u = normalize(random_raw(rng, names, 6), p);
    auto v = normalize(random_raw(rng, names, 6), p);
    auto w = normalize(random_raw(rng, names, 6), p);
    EXPECT_EQ(multiply(multiply(u, v), w), multiply(u, multiply(v, w)));
    EXPECT_EQ(invert(invert(u)), u);
    EXPECT_TRUE(multiply(u, invert(u)).is_identity());
    EXPECT_EQ(parse_word(format_word(u), p), u);
    if (!u.is_identity()) {
      auto cr = cyclically_reduce(u);
      EXPECT_EQ(conjugate(cr.conjugator, cr.core), u);
      auto c2 = cyclically_reduce(cr.core);
      EXPECT_TRUE(c2.conjugator.is_identity());
      // conjugation invariance of peripherality
      auto a = is_peripheral(u), b = is_peripheral(conjugate(v, u));
      EXPECT_EQ(a.has_value(), b.has_value());
      if (a && b) EXPECT_EQ(a->factor, b->factor);
    }
  }
}

TEST(WordsProperty, SubgroupMembershipAndTriviality) {
  auto p = mixed();
  std::mt19937 rng(7);
  for (int t = 0; t < 500; ++t) {
    for (int f = 0; f < 2; ++f) {
      std::vector<FactorElement> gens;
      int n = static_cast<int>(rng() % 3);
      for (int i = 0; i < n; ++i) {
        FactorElement g = p->identity_in(f);
        int len = static_cast<int>(rng() % 4);
        for (int j = 0; j < len; ++j)
          g = fe_mul(g, fe_generator(f, p->factors[f].kind, static_cast<int>(rng() % 2), (rng() % 2) ? 1 : -1));
        gens.push_back(g);
      }
      FactorSubgroup s(*p, f, gens);
      bool all_triv = std::all_of(gens.begin(), gens.end(), [](auto& g) { return g.trivial(); });
      EXPECT_EQ(s.report().isTrivial, all_triv);
      for (auto& g : gens) EXPECT_TRUE(s.contains(g));
      if (gens.size() == 2) {
        EXPECT_TRUE(s.contains(fe_mul(gens[0], fe_inv(gens[1]))));
        EXPECT_TRUE(s.contains(fe_mul(fe_mul(gens[1], gens[0]), gens[1])));
      }
    }
  }
}

TEST(Words, PresentationGrammar) {
  auto p = parse_presentation("presentation { factors = [free:1]; free_rank = 2 }\naliases { a = a1.1; b = x1; c = x2 }");
  EXPECT_EQ(p.k(), 1);
  EXPECT_EQ(p.free_rank, 2);
  EXPECT_EQ(p.aliases.at("b"), "x1");
  auto q = parse_presentation(format_presentation(p));
  EXPECT_EQ(q, p);
  EXPECT_EQ(q.aliases, p.aliases);
  EXPECT_THROW(parse_presentation("presentation { factors = [torsion:2]; free_rank = 1 }"), Error);
  EXPECT_THROW(parse_presentation("presentation { factors = []; free_rank = 0 }"), Error);
}
