// Seeded random instances.

#include "gw/random.hpp"

#include <algorithm>

namespace gw {

FactorElement random_factor_element(const Presentation& p, int factor, Rng& rng, int letters) {
  const FactorSpec& f = p.factors.at(factor);
  FactorElement x = fe_identity(factor, f.kind);
  for (int i = 0; i < letters; ++i)
    x = fe_mul(x, fe_generator(factor, f.kind, static_cast<int>(draw(rng, f.rank)), draw(rng, 5) - 2));
  return x;
}

NormalWord random_word(const PresPtr& p, Rng& rng, int len) {
  std::vector<RawLetter> raw;
  std::vector<std::string> names;
  for (int m = 0; m < p->free_rank; ++m) names.push_back(p->free_gen_name(m));
  for (int i = 0; i < p->k(); ++i)
    for (int j = 0; j < p->factors[i].rank; ++j) names.push_back(p->factor_gen_name(i, j));
  for (int i = 0; i < len; ++i) {
    int64_t e = draw(rng, 6) - 3;
    if (e >= 0) ++e;
    raw.push_back(RawLetter{names[draw(rng, static_cast<int64_t>(names.size()))], e});
  }
  return normalize(raw, p);
}

NormalWord random_nonperipheral(const PresPtr& p, Rng& rng, int len) {
  for (int tries = 0;; ++tries) {
    NormalWord w = random_word(p, rng, len + tries / 8);
    if (!is_peripheral(w)) return w;
  }
}

NormalWord random_free_word(const PresPtr& p, Rng& rng, int len) {
  if (p->free_rank < 1 || len < 1) throw Error("InvalidArgument", "need free letters");
  for (;;) {
    std::vector<RawLetter> raw;
    int prev = 0;  // signed letter
    for (int i = 0; i < len; ++i) {
      int l;
      do {
        l = static_cast<int>(draw(rng, p->free_rank)) + 1;
        if (draw(rng, 2)) l = -l;
      } while (l == -prev);
      raw.push_back(RawLetter{p->free_gen_name(std::abs(l) - 1), l > 0 ? 1 : -1});
      prev = l;
    }
    NormalWord w = normalize(raw, p);
    if (w.is_identity() || is_peripheral(w)) continue;
    if (!(cyclically_reduce(w).core == w)) continue;
    return w;
  }
}

bool random_move(const GrushkoTree& t, Rng& rng, GrushkoTree& out) {
  const Graph& g = t.g;
  MoveResult m;
  if (draw(rng, 2) == 0 && g.ne() > 1) {
    int e = static_cast<int>(draw(rng, g.ne()));
    if (g.e[e].from == g.e[e].to) return false;
    std::vector<std::pair<int, FactorElement>> tw;
    int lab = std::max(g.v[g.e[e].from].label, g.v[g.e[e].to].label);
    if (lab >= 0)
      for (int h = 0; h < 2 * g.ne(); ++h)
        if ((h >> 1) != e && (g.origin(h) == g.e[e].from || g.origin(h) == g.e[e].to) && draw(rng, 2))
          tw.push_back({h, random_factor_element(*t.pres, lab, rng)});
    try {
      m = twisted_collapse(t, {e}, tw);
    } catch (const Error&) {
      return false;
    }
  } else {
    int v = static_cast<int>(draw(rng, g.nv()));
    auto o = g.out(v);
    // a labeled vertex may hand all of its half-edges to the new vertex
    const int64_t top = static_cast<int64_t>(o.size()) - (g.v[v].label >= 0 ? 1 : 2);
    if (o.size() < 2 || top < 1) return false;
    std::shuffle(o.begin(), o.end(), rng);
    int s = 2 + static_cast<int>(draw(rng, top));
    BlowUpData b;
    b.v = v;
    b.S.assign(o.begin(), o.begin() + s);
    for (int i = 0; i < s; ++i)
      b.twist.push_back(g.v[v].label >= 0 ? random_factor_element(*t.pres, g.v[v].label, rng) : trivial_at(g, v));
    m = raw_blow_up(t, b);
  }
  out = normalize_tree(m.tree).tree;
  return true;
}

GrushkoTree random_tree(const PresPtr& p, uint64_t seed, int steps) {
  Rng rng(seed);
  GrushkoTree t = standard_rose(p);
  int done = 0;
  for (int tries = 0; done < steps; ++tries) {
    if (tries > 1000 * (steps + 1)) throw Error("NoValidMove", "no legal random move found");
    GrushkoTree n;
    if (random_move(t, rng, n)) {
      t = n;
      ++done;
    }
  }
  return t;
}

GrushkoTree random_tree_in_OL(const PresPtr& p, const NormalWord& g, int L, uint64_t seed, int steps) {
  if (is_peripheral(g)) throw Error("EllipticElement", format_word(g) + " is elliptic");
  GrushkoTree t = standard_rose(p);
  if (comb_length(t, g) > L) throw Error("InvalidArgument", "L is below |g| in the standard rose");
  Rng rng(seed);
  int done = 0;
  for (int tries = 0; done < steps; ++tries) {
    if (tries > 1000 * (steps + 1)) throw Error("NoValidMove", "no move keeps |g|_T within L");
    GrushkoTree n;
    if (!random_move(t, rng, n)) continue;
    if (comb_length(n, g) > L) continue;
    t = n;
    ++done;
  }
  return t;
}

}  // namespace gw
