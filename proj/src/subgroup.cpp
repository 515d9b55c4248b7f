// Subgroups of one peripheral factor: Stallings folding for free factors,
// Hermite normal form for free abelian factors.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

#include "gw/words.hpp"

namespace gw {

namespace {

struct Folded {
  int base = 0;
  // adj[v][2*j] = target along generator j, adj[v][2*j+1] = target along j^-1
  std::vector<std::vector<int>> adj;
  int vertices = 0;
  int edges = 0;
};

struct Dsu {
  std::vector<int> p;
  int add() {
    p.push_back(static_cast<int>(p.size()));
    return p.back();
  }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
};

int slot(int64_t letter) { return letter > 0 ? 2 * static_cast<int>(letter - 1) : 2 * static_cast<int>(-letter - 1) + 1; }

Folded fold(int rank, const std::vector<FactorElement>& gens) {
  Dsu d;
  std::vector<std::array<int, 3>> edges;  // (u, j, v): u --j--> v
  int base = d.add();
  for (auto& g : gens) {
    if (g.trivial()) continue;
    int cur = base;
    for (size_t i = 0; i < g.payload.size(); ++i) {
      int nxt = (i + 1 == g.payload.size()) ? base : d.add();
      int64_t l = g.payload[i];
      if (l > 0)
        edges.push_back({cur, static_cast<int>(l - 1), nxt});
      else
        edges.push_back({nxt, static_cast<int>(-l - 1), cur});
      cur = nxt;
    }
  }
  // fold until deterministic
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, int>, int> out, in;
    for (auto& e : edges) {
      int u = d.find(e[0]), v = d.find(e[2]);
      auto [it, fresh] = out.emplace(std::make_pair(u, e[1]), v);
      if (!fresh && d.find(it->second) != v) {
        d.p[d.find(it->second)] = v;
        changed = true;
      }
      v = d.find(e[2]);
      u = d.find(e[0]);
      auto [jt, fresh2] = in.emplace(std::make_pair(v, e[1]), u);
      if (!fresh2 && d.find(jt->second) != u) {
        d.p[d.find(jt->second)] = u;
        changed = true;
      }
    }
  }
  // dedupe edges
  std::set<std::array<int, 3>> uniq;
  for (auto& e : edges) uniq.insert({d.find(e[0]), e[1], d.find(e[2])});
  // prune degree-1 vertices other than the base
  int rb = d.find(base);
  bool pruned = true;
  while (pruned) {
    pruned = false;
    std::map<int, int> deg;
    for (auto& e : uniq) {
      deg[e[0]]++;
      deg[e[2]]++;
    }
    for (auto it = uniq.begin(); it != uniq.end();) {
      auto& e = *it;
      bool leaf = (e[0] != rb && deg[e[0]] == 1) || (e[2] != rb && deg[e[2]] == 1);
      if (leaf) {
        it = uniq.erase(it);
        pruned = true;
      } else {
        ++it;
      }
    }
  }
  std::map<int, int> id;
  id[rb] = 0;
  for (auto& e : uniq) {
    id.emplace(e[0], static_cast<int>(id.size()));
    id.emplace(e[2], static_cast<int>(id.size()));
  }
  Folded f;
  f.vertices = static_cast<int>(id.size());
  f.edges = static_cast<int>(uniq.size());
  f.adj.assign(f.vertices, std::vector<int>(2 * rank, -1));
  for (auto& e : uniq) {
    f.adj[id[e[0]]][2 * e[1]] = id[e[2]];
    f.adj[id[e[2]]][2 * e[1] + 1] = id[e[0]];
  }
  return f;
}

// Row-style Hermite normal form; returns nonzero rows.
std::vector<std::vector<int64_t>> hnf(std::vector<std::vector<int64_t>> rows, int n) {
  for (auto& r : rows) r.resize(n, 0);
  std::vector<std::vector<int64_t>> out;
  int row = 0;
  for (int col = 0; col < n && row < static_cast<int>(rows.size()); ++col) {
    // gcd-combine all rows below into rows[row]
    for (size_t i = row + 1; i < rows.size(); ++i) {
      while (rows[i][col] != 0) {
        int64_t q = rows[row][col] / rows[i][col];
        for (int c = 0; c < n; ++c) rows[row][c] -= q * rows[i][c];
        std::swap(rows[row], rows[i]);
      }
    }
    if (rows[row][col] == 0) continue;
    if (rows[row][col] < 0)
      for (auto& x : rows[row]) x = -x;
    for (int i = 0; i < row; ++i) {
      int64_t q = rows[i][col] / rows[row][col];
      if (rows[i][col] - q * rows[row][col] < 0) --q;
      for (int c = 0; c < n; ++c) rows[i][c] -= q * rows[row][c];
    }
    ++row;
  }
  rows.resize(row);
  return rows;
}

int pivot(const std::vector<int64_t>& r) {
  for (size_t i = 0; i < r.size(); ++i)
    if (r[i] != 0) return static_cast<int>(i);
  return -1;
}

}  // namespace

FactorSubgroup::FactorSubgroup(const Presentation& p, int factor, const std::vector<FactorElement>& gens) {
  if (factor < 0 || factor >= p.k()) throw Error("MixedFactors", "no factor for subgroup");
  for (auto& g : gens)
    if (!g.trivial() && g.factor != factor) throw Error("MixedFactors", "generators from different factors");
  const FactorSpec& spec = p.factors[factor];
  rank_ = spec.rank;
  rep_.factor = factor;
  rep_.kind = spec.kind;
  rep_.generators = gens;
  rep_.isTrivial = std::all_of(gens.begin(), gens.end(), [](auto& g) { return g.trivial(); });
  if (spec.kind == FactorKind::Free) {
    Folded f = fold(rank_, gens);
    adj_ = f.adj;
    rep_.rank = f.edges - f.vertices + 1;
    bool covering = true;
    for (auto& row : adj_)
      for (int t : row)
        if (t < 0) covering = false;
    if (covering) rep_.index = f.vertices;
    rep_.equalsWholeFactor = covering && f.vertices == 1;
  } else {
    std::vector<std::vector<int64_t>> rows;
    for (auto& g : gens) rows.push_back(g.payload);
    rep_.lattice = hnf(rows, rank_);
    rep_.rank = static_cast<int>(rep_.lattice.size());
    if (rep_.rank == rank_) {
      int64_t det = 1;
      for (int i = 0; i < rank_; ++i) det *= rep_.lattice[i][i];
      rep_.index = det;
    }
    rep_.equalsWholeFactor = rep_.index && *rep_.index == 1;
  }
}

bool FactorSubgroup::contains(const FactorElement& x) const {
  if (x.trivial()) return true;
  if (x.factor != rep_.factor) return false;
  if (rep_.kind == FactorKind::Free) {
    int cur = 0;
    for (int64_t l : x.payload) {
      cur = adj_[cur][slot(l)];
      if (cur < 0) return false;
    }
    return cur == 0;
  }
  std::vector<int64_t> v = x.payload;
  v.resize(rank_, 0);
  for (auto& r : rep_.lattice) {
    int c = pivot(r);
    if (v[c] % r[c] != 0) return false;
    int64_t q = v[c] / r[c];
    for (int j = 0; j < rank_; ++j) v[j] -= q * r[j];
  }
  return std::all_of(v.begin(), v.end(), [](int64_t t) { return t == 0; });
}

FactorSubgroupReport factor_subgroup(const Presentation& p, const std::vector<FactorElement>& gens, int factor) {
  for (auto& g : gens) {
    if (g.trivial()) continue;
    if (factor < 0) factor = g.factor;
    if (g.factor != factor) throw Error("MixedFactors", "generators from different factors");
  }
  if (factor < 0) {
    FactorSubgroupReport r;
    r.generators = gens;
    r.isTrivial = true;
    return r;
  }
  return FactorSubgroup(p, factor, gens).report();
}

// ---------------------------------------------------------------- roots

static int64_t gcd_all(const std::vector<int64_t>& v) {
  int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

FactorElement factor_root(const FactorElement& x) {
  if (x.trivial()) return x;
  FactorElement r = x;
  if (x.kind == FactorKind::Abelian) {
    int64_t g = gcd_all(x.payload);
    for (auto& t : r.payload) t /= g;
    return r;
  }
  // x = u c u^-1 with c cyclically reduced; root = u p u^-1 with p the primitive period of c
  const auto& w = x.payload;
  size_t a = 0, b = w.size();
  while (b - a >= 2 && w[a] == -w[b - 1]) {
    ++a;
    --b;
  }
  std::vector<int64_t> c(w.begin() + a, w.begin() + b);
  size_t n = c.size(), per = n;
  for (size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool ok = true;
    for (size_t i = d; i < n && ok; ++i) ok = c[i] == c[i - d];
    if (ok) {
      per = d;
      break;
    }
  }
  r.payload.assign(w.begin(), w.begin() + a);
  r.payload.insert(r.payload.end(), c.begin(), c.begin() + per);
  r.payload.insert(r.payload.end(), w.begin() + b, w.end());
  return r;
}

std::optional<int64_t> integer_power_of(const FactorElement& x, const FactorElement& d) {
  if (x.trivial()) return 0;
  if (d.trivial() || x.factor != d.factor) return std::nullopt;
  if (x.kind == FactorKind::Abelian) {
    size_t n = std::max(x.payload.size(), d.payload.size());
    std::optional<int64_t> q;
    for (size_t i = 0; i < n; ++i) {
      int64_t xi = i < x.payload.size() ? x.payload[i] : 0;
      int64_t di = i < d.payload.size() ? d.payload[i] : 0;
      if (di == 0) {
        if (xi != 0) return std::nullopt;
        continue;
      }
      if (xi % di != 0) return std::nullopt;
      if (q && *q != xi / di) return std::nullopt;
      q = xi / di;
    }
    return q;
  }
  FactorElement rx = factor_root(x), rd = factor_root(d);
  int sign = 0;
  if (rx == rd)
    sign = 1;
  else if (rx == fe_inv(rd))
    sign = -1;
  else
    return std::nullopt;
  // exponents: |x| = mx * |root| measured on cyclic cores
  auto exponent = [](const FactorElement& e, const FactorElement& root) {
    int64_t n = 1;
    FactorElement acc = root;
    while (!(acc == e)) {
      acc = fe_mul(acc, root);
      ++n;
      if (fe_size(acc) > fe_size(e) + 2 * fe_size(root) + 2) return int64_t(-1);
    }
    return n;
  };
  int64_t mx = exponent(x, rx), md = exponent(d, rd);
  if (mx < 0 || md < 0 || mx % md != 0) return std::nullopt;
  return sign * (mx / md);
}

std::optional<int64_t> nonneg_power_of(const FactorElement& x, const FactorElement& d) {
  auto n = integer_power_of(x, d);
  if (n && *n >= 0) return n;
  return std::nullopt;
}

}  // namespace gw
