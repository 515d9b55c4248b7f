#include "gw/tree.hpp"

#include <algorithm>

namespace gw {

std::vector<int> Graph::out(int u) const {
  std::vector<int> r;
  for (int i = 0; i < ne(); ++i) {
    if (e[i].from == u) r.push_back(2 * i);
    if (e[i].to == u) r.push_back(2 * i + 1);
  }
  return r;
}

std::string Graph::half_name(int h) const { return e[h >> 1].name + ((h & 1) ? "^-1" : ""); }

// ---------------------------------------------------------------- paths

FactorElement trivial_at(const Graph& g, int u) { return FactorElement{g.v[u].label, FactorKind::Free, {}}; }

Path trivial_path(const Graph& g, int u) { return Path{u, {trivial_at(g, u)}, {}}; }

Path edge_path(const Graph& g, int h) {
  return Path{g.origin(h), {trivial_at(g, g.origin(h)), trivial_at(g, g.terminus(h))}, {h}};
}

Path elem_path(const Graph& g, int u, const FactorElement& x) {
  if (!x.trivial() && x.factor != g.v[u].label)
    throw Error("InvalidPath", "vertex element not in the vertex group");
  return Path{u, {x.trivial() ? trivial_at(g, u) : x}, {}};
}

int path_end(const Graph& g, const Path& p) { return p.he.empty() ? p.start : g.terminus(p.he.back()); }

void reduce(const Graph& g, Path& p) {
  (void)g;
  Path out{p.start, {p.el[0]}, {}};
  for (size_t i = 0; i < p.he.size(); ++i) {
    int h = p.he[i];
    if (!out.he.empty() && out.he.back() == rev(h) && out.el.back().trivial()) {
      out.he.pop_back();
      out.el.pop_back();
      out.el.back() = fe_mul(out.el.back(), p.el[i + 1]);
    } else {
      out.he.push_back(h);
      out.el.push_back(p.el[i + 1]);
    }
  }
  p = std::move(out);
}

Path concat(const Graph& g, const Path& a, const Path& b) {
  if (path_end(g, a) != b.start) throw Error("InvalidPath", "concatenating non-adjacent paths");
  Path r = a;
  r.el.back() = fe_mul(r.el.back(), b.el[0]);
  r.he.insert(r.he.end(), b.he.begin(), b.he.end());
  r.el.insert(r.el.end(), b.el.begin() + 1, b.el.end());
  reduce(g, r);
  return r;
}

Path inverse(const Graph& g, const Path& p) {
  Path r{path_end(g, p), {}, {}};
  for (auto it = p.el.rbegin(); it != p.el.rend(); ++it) r.el.push_back(fe_inv(*it));
  for (auto it = p.he.rbegin(); it != p.he.rend(); ++it) r.he.push_back(rev(*it));
  return r;
}

Path apply(const Graph& target, const PathMap& m, const Path& p) {
  Path r = elem_path(target, m.vmap[p.start], p.el[0]);
  for (size_t i = 0; i < p.he.size(); ++i) {
    r = concat(target, r, m.himg[p.he[i]]);
    int u = path_end(target, r);
    r = concat(target, r, elem_path(target, u, p.el[i + 1]));
  }
  return r;
}

// ---------------------------------------------------------------- cyclic loops

CyclicLoop cyclic_reduce(const Graph& g, const Path& loop0) {
  Path q = loop0;
  reduce(g, q);
  if (path_end(g, q) != q.start) throw Error("InvalidPath", "not a loop");
  Path c = trivial_path(g, q.start);
  while (true) {
    size_t n = q.he.size();
    if (n == 0) {
      CyclicLoop r;
      r.t = {q.el[0]};
      r.conj = c;
      return r;
    }
    c = concat(g, c, elem_path(g, q.start, q.el[0]));
    FactorElement tl = fe_mul(q.el[n], q.el[0]);
    if (n >= 2 && q.he[n - 1] == rev(q.he[0]) && tl.trivial()) {
      c = concat(g, c, edge_path(g, q.he[0]));
      Path nq{g.terminus(q.he[0]), {}, {}};
      nq.el.assign(q.el.begin() + 1, q.el.begin() + n);
      nq.he.assign(q.he.begin() + 1, q.he.begin() + (n - 1));
      q = nq;
      continue;
    }
    CyclicLoop r;
    r.he = q.he;
    r.t.assign(q.el.begin() + 1, q.el.begin() + n);
    r.t.push_back(tl);
    r.conj = c;
    return r;
  }
}

Path cyc_as_path(const Graph& g, const CyclicLoop& c) {
  if (c.he.empty()) return elem_path(g, path_end(g, c.conj), c.t.empty() ? trivial_at(g, path_end(g, c.conj)) : c.t[0]);
  Path p{g.origin(c.he[0]), {trivial_at(g, g.origin(c.he[0]))}, c.he};
  for (auto& x : c.t) p.el.push_back(x);
  return p;
}

int primitive_period(const CyclicLoop& c) {
  int n = c.length();
  for (int d = 1; d < n; ++d) {
    if (n % d) continue;
    bool ok = true;
    for (int i = d; i < n && ok; ++i) ok = c.he[i] == c.he[i - d] && c.t[i] == c.t[i - d];
    if (ok) return d;
  }
  return n;
}

CyclicLoop cyc_power_root(const CyclicLoop& c) {
  int d = primitive_period(c);
  CyclicLoop r = c;
  r.he.resize(d);
  r.t.resize(d);
  return r;
}

static void encode_item(std::vector<int64_t>& out, int h, const FactorElement& t) {
  out.push_back(h);
  out.push_back(t.trivial() ? -1 : t.factor);
  out.push_back(static_cast<int64_t>(t.payload.size()));
  out.insert(out.end(), t.payload.begin(), t.payload.end());
}

std::vector<int64_t> axis_key(const CyclicLoop& c0) {
  CyclicLoop c = cyc_power_root(c0);
  int n = c.length();
  std::vector<int64_t> best;
  bool have = false;
  auto consider = [&](const std::vector<int>& he, const std::vector<FactorElement>& t) {
    for (int r = 0; r < n; ++r) {
      std::vector<int64_t> enc;
      for (int i = 0; i < n; ++i) encode_item(enc, he[(r + i) % n], t[(r + i) % n]);
      if (!have || enc < best) {
        best = enc;
        have = true;
      }
    }
  };
  consider(c.he, c.t);
  std::vector<int> ih(n);
  std::vector<FactorElement> it(n);
  for (int k = 1; k <= n; ++k) {
    ih[k - 1] = rev(c.he[n - k]);
    int j = n - k - 1;
    it[k - 1] = fe_inv(c.t[j < 0 ? n - 1 : j]);
  }
  consider(ih, it);
  return best;
}

std::vector<Turn> cyc_turns(const Graph& g, const CyclicLoop& c) {
  std::vector<Turn> r;
  int n = c.length();
  for (int i = 0; i < n; ++i)
    r.push_back(Turn{rev(c.he[i]), g.terminus(c.he[i]), c.t[i], c.he[(i + 1) % n]});
  return r;
}

// ---------------------------------------------------------------- trees

int GrushkoTree::num_generators() const {
  int n = pres->free_rank;
  for (auto& f : pres->factors) n += f.rank;
  return n;
}

int GrushkoTree::factor_gen_slot(int factor, int gen) const {
  int s = pres->free_rank;
  for (int i = 0; i < factor; ++i) s += pres->factors[i].rank;
  return s + gen;
}

int GrushkoTree::labeled_vertex(int factor) const {
  for (int u = 0; u < g.nv(); ++u)
    if (g.v[u].label == factor) return u;
  return -1;
}

NormalWord GrushkoTree::word(const Path& p) const {
  if (!has_inverse) throw Error("NoInverseMarking", "tree has no inverse marking data");
  NormalWord w = identity_word(pres);
  auto conj_el = [&](int u, const FactorElement& x) {
    if (x.trivial()) return;
    w = multiply(w, conjugate(vconj[u], from_factor(pres, x)));
  };
  int u = p.start;
  conj_el(u, p.el[0]);
  for (size_t i = 0; i < p.he.size(); ++i) {
    w = multiply(w, hword[p.he[i]]);
    u = g.terminus(p.he[i]);
    conj_el(u, p.el[i + 1]);
  }
  return w;
}

bool GrushkoTree::same_tree(const GrushkoTree& o) const {
  if (!(*pres == *o.pres) || base != o.base || g.nv() != o.g.nv() || g.ne() != o.g.ne()) return false;
  for (int u = 0; u < g.nv(); ++u)
    if (g.v[u].label != o.g.v[u].label) return false;
  for (int i = 0; i < g.ne(); ++i)
    if (g.e[i].from != o.g.e[i].from || g.e[i].to != o.g.e[i].to) return false;
  return marking == o.marking;
}

GrushkoTree standard_rose(const PresPtr& p) {
  if (p->sporadic()) throw Error("SporadicPresentation", "no standard rose for a sporadic presentation");
  GrushkoTree t;
  t.pres = p;
  int k = p->k(), n = p->free_rank;
  // k >= 2: unlabeled base joined to one vertex per factor
  t.g.v.push_back(GVertex{k == 1 ? 0 : -1, "v0"});
  if (k >= 2)
    for (int i = 0; i < k; ++i) t.g.v.push_back(GVertex{i, "v" + std::to_string(i + 1)});
  for (int m = 0; m < n; ++m) t.g.e.push_back(GEdge{0, 0, "e" + std::to_string(m + 1)});
  if (k >= 2)
    for (int i = 0; i < k; ++i) t.g.e.push_back(GEdge{0, i + 1, "f" + std::to_string(i + 1)});
  t.base = 0;
  for (int m = 0; m < n; ++m) {
    Path lp = edge_path(t.g, 2 * m);
    t.marking.push_back(lp);
  }
  for (int i = 0; i < k; ++i) {
    int vi = k == 1 ? 0 : i + 1;
    for (int j = 0; j < p->factors[i].rank; ++j) {
      FactorElement a = fe_generator(i, p->factors[i].kind, j);
      Path lp = trivial_path(t.g, 0);
      if (k >= 2) lp = concat(t.g, lp, edge_path(t.g, 2 * (n + i)));
      lp = concat(t.g, lp, elem_path(t.g, vi, a));
      if (k >= 2) lp = concat(t.g, lp, edge_path(t.g, 2 * (n + i) + 1));
      t.marking.push_back(lp);
    }
  }
  t.has_inverse = true;
  t.hword.assign(2 * t.g.ne(), identity_word(p));
  for (int m = 0; m < n; ++m) {
    t.hword[2 * m] = free_gen_word(p, m, 1);
    t.hword[2 * m + 1] = free_gen_word(p, m, -1);
  }
  t.vconj.assign(t.g.nv(), identity_word(p));
  return t;
}

Path word_to_loop(const GrushkoTree& t, const NormalWord& w) {
  if (w.pres && !(*w.pres == *t.pres)) throw Error("PresentationMismatch", "word and tree differ");
  Path r = trivial_path(t.g, t.base);
  auto gen_pow = [&](int slot, int64_t e) {
    const Path& m = t.marking[slot];
    Path mi = inverse(t.g, m);
    for (int64_t i = 0; i < (e > 0 ? e : -e); ++i) r = concat(t.g, r, e > 0 ? m : mi);
  };
  for (auto& s : w.syl) {
    if (!s.is_factor()) {
      gen_pow(t.free_gen_slot(s.gen), s.power);
    } else if (s.elem.kind == FactorKind::Free) {
      for (int64_t l : s.elem.payload)
        gen_pow(t.factor_gen_slot(s.factor, static_cast<int>((l > 0 ? l : -l) - 1)), l > 0 ? 1 : -1);
    } else {
      for (size_t j = 0; j < s.elem.payload.size(); ++j)
        gen_pow(t.factor_gen_slot(s.factor, static_cast<int>(j)), s.elem.payload[j]);
    }
  }
  return r;
}

NormalWord loop_to_word(const GrushkoTree& t, const Path& loop) { return t.word(loop); }

CyclicLoop cyclic_loop(const GrushkoTree& t, const NormalWord& w) { return cyclic_reduce(t.g, word_to_loop(t, w)); }

int comb_length(const GrushkoTree& t, const NormalWord& w) {
  CyclicLoop c = cyclic_loop(t, w);
  if (c.length() == 0) throw Error("EllipticElement", "element fixes a point of the tree");
  return c.length();
}

std::vector<Turn> axis_turns(const GrushkoTree& t, const NormalWord& w) {
  CyclicLoop c = cyclic_loop(t, w);
  if (c.length() == 0) throw Error("EllipticElement", "element fixes a point of the tree");
  return cyc_turns(t.g, c);
}

bool check_inverse(const GrushkoTree& t) {
  if (!t.has_inverse) return false;
  const Presentation& p = *t.pres;
  for (int m = 0; m < p.free_rank; ++m)
    if (!(t.word(t.marking[t.free_gen_slot(m)]) == free_gen_word(t.pres, m))) return false;
  for (int i = 0; i < p.k(); ++i)
    for (int j = 0; j < p.factors[i].rank; ++j) {
      auto x = from_factor(t.pres, fe_generator(i, p.factors[i].kind, j));
      if (!(t.word(t.marking[t.factor_gen_slot(i, j)]) == x)) return false;
    }
  return true;
}

void validate_tree(const GrushkoTree& t) {
  const Graph& g = t.g;
  const Presentation& p = *t.pres;
  if (g.nv() == 0) throw Error("InvalidTree", "empty graph");
  std::vector<int> seen(p.k(), 0);
  for (auto& v : g.v) {
    if (v.label >= p.k()) throw Error("InvalidTree", "label out of range");
    if (v.label >= 0 && seen[v.label]++) throw Error("InvalidTree", "factor labels two vertices");
  }
  for (int i = 0; i < p.k(); ++i)
    if (!seen[i]) throw Error("InvalidTree", "factor labels no vertex");
  for (auto& e : g.e)
    if (e.from < 0 || e.to < 0 || e.from >= g.nv() || e.to >= g.nv()) throw Error("InvalidTree", "bad edge");
  // connected
  std::vector<int> comp(g.nv(), 0), st = {t.base};
  comp[t.base] = 1;
  while (!st.empty()) {
    int u = st.back();
    st.pop_back();
    for (int h : g.out(u))
      if (!comp[g.terminus(h)]) {
        comp[g.terminus(h)] = 1;
        st.push_back(g.terminus(h));
      }
  }
  if (std::count(comp.begin(), comp.end(), 0)) throw Error("InvalidTree", "graph not connected");
  // rank of pi_1 of the underlying graph must equal N
  if (g.ne() - g.nv() + 1 != p.free_rank) throw Error("InvalidTree", "graph rank differs from free rank");
  if (static_cast<int>(t.marking.size()) != t.num_generators()) throw Error("InvalidTree", "marking size");
  for (auto& m : t.marking) {
    if (m.start != t.base || path_end(g, m) != t.base) throw Error("InvalidTree", "marking loop not at base");
    int u = m.start;
    for (size_t i = 0; i < m.el.size(); ++i) {
      if (!m.el[i].trivial() && m.el[i].factor != g.v[u].label) throw Error("InvalidTree", "element at wrong vertex");
      if (i < m.he.size()) {
        if (g.origin(m.he[i]) != u) throw Error("InvalidTree", "marking path broken");
        u = g.terminus(m.he[i]);
      }
    }
  }
}

}  // namespace gw
