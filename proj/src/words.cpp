#include "gw/words.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace gw {

// ---------------------------------------------------------------- factors

bool FactorElement::operator<(const FactorElement& o) const {
  if (factor != o.factor) return factor < o.factor;
  // shortlex so that small elements come first
  if (payload.size() != o.payload.size()) return payload.size() < o.payload.size();
  return payload < o.payload;
}

FactorElement fe_identity(int factor, FactorKind kind) { return FactorElement{factor, kind, {}}; }

static void trim_abelian(std::vector<int64_t>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

FactorElement fe_generator(int factor, FactorKind kind, int gen, int64_t power) {
  FactorElement f{factor, kind, {}};
  if (kind == FactorKind::Free) {
    int64_t letter = power > 0 ? gen + 1 : -(gen + 1);
    for (int64_t i = 0; i < (power > 0 ? power : -power); ++i) f.payload.push_back(letter);
  } else {
    f.payload.assign(gen + 1, 0);
    f.payload[gen] = power;
    trim_abelian(f.payload);
  }
  return f;
}

FactorElement fe_mul(const FactorElement& a, const FactorElement& b) {
  if (a.trivial()) return b;
  if (b.trivial()) return a;
  if (a.factor != b.factor) throw Error("MixedFactors", "product across factors");
  FactorElement r{a.factor, a.kind, {}};
  if (a.kind == FactorKind::Free) {
    r.payload = a.payload;
    for (int64_t l : b.payload) {
      if (!r.payload.empty() && r.payload.back() == -l)
        r.payload.pop_back();
      else
        r.payload.push_back(l);
    }
  } else {
    r.payload.assign(std::max(a.payload.size(), b.payload.size()), 0);
    for (size_t i = 0; i < a.payload.size(); ++i) r.payload[i] += a.payload[i];
    for (size_t i = 0; i < b.payload.size(); ++i) r.payload[i] += b.payload[i];
    trim_abelian(r.payload);
  }
  return r;
}

FactorElement fe_inv(const FactorElement& a) {
  FactorElement r = a;
  if (a.kind == FactorKind::Free) {
    std::reverse(r.payload.begin(), r.payload.end());
    for (auto& l : r.payload) l = -l;
  } else {
    for (auto& x : r.payload) x = -x;
  }
  return r;
}

FactorElement fe_pow(const FactorElement& a, int64_t n) {
  FactorElement base = n < 0 ? fe_inv(a) : a;
  if (n < 0) n = -n;
  FactorElement r{a.factor, a.kind, {}};
  if (a.kind == FactorKind::Abelian) {
    r.payload = base.payload;
    for (auto& x : r.payload) x *= n;
    trim_abelian(r.payload);
    return r;
  }
  for (int64_t i = 0; i < n; ++i) r = fe_mul(r, base);
  return r;
}

int64_t fe_size(const FactorElement& a) {
  if (a.kind == FactorKind::Free) return static_cast<int64_t>(a.payload.size());
  int64_t s = 0;
  for (auto x : a.payload) s += x < 0 ? -x : x;
  return s;
}

// ---------------------------------------------------------------- presentation

bool Presentation::sporadic() const {
  int n = free_rank, kk = k();
  return (kk == 0 && n == 0) || (kk == 1 && n == 0) || (kk == 0 && n == 1) ||
         (kk == 2 && n == 0) || (kk == 1 && n == 1);
}

void Presentation::validate() const {
  if (free_rank < 0) throw Error("InvalidPresentation", "negative free rank");
  if (factors.empty() && free_rank == 0) throw Error("InvalidPresentation", "trivial group");
  for (auto& f : factors)
    if (f.rank < 1) throw Error("InvalidPresentation", "factor rank must be >= 1");
}

std::pair<int, int> complexity(const Presentation& p) { return {p.xi(), p.sporadic() ? 1 : 0}; }

std::string Presentation::factor_gen_name(int factor, int gen) const {
  std::string canon = "a" + std::to_string(factor + 1) + "." + std::to_string(gen + 1);
  for (auto& [al, c] : aliases)
    if (c == canon) return al;
  return canon;
}

std::string Presentation::free_gen_name(int m) const {
  std::string canon = "x" + std::to_string(m + 1);
  for (auto& [al, c] : aliases)
    if (c == canon) return al;
  return canon;
}

namespace {

struct GenRef {
  int factor = -1;
  int gen = -1;
};

GenRef resolve(const Presentation& p, const std::string& name0) {
  std::string name = name0;
  auto it = p.aliases.find(name);
  if (it != p.aliases.end()) name = it->second;
  auto bad = [&] { return Error("UnknownGenerator", "'" + name0 + "'"); };
  if (name.size() >= 2 && name[0] == 'x') {
    for (size_t i = 1; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) throw bad();
    int m = std::stoi(name.substr(1)) - 1;
    if (m < 0 || m >= p.free_rank) throw bad();
    return {-1, m};
  }
  if (name.size() >= 4 && name[0] == 'a') {
    auto dot = name.find('.');
    if (dot == std::string::npos || dot < 2 || dot + 1 >= name.size()) throw bad();
    for (size_t i = 1; i < name.size(); ++i)
      if (i != dot && !std::isdigit(static_cast<unsigned char>(name[i]))) throw bad();
    int f = std::stoi(name.substr(1, dot - 1)) - 1;
    int g = std::stoi(name.substr(dot + 1)) - 1;
    if (f < 0 || f >= p.k() || g < 0 || g >= p.factors[f].rank) throw bad();
    return {f, g};
  }
  throw bad();
}

}  // namespace

// ---------------------------------------------------------------- syllables

bool Syllable::operator<(const Syllable& o) const {
  // factor syllables first (by factor), then free generators
  auto key = [](const Syllable& s) { return s.factor >= 0 ? s.factor : 1000000 + s.gen; };
  if (key(*this) != key(o)) return key(*this) < key(o);
  if (factor >= 0) return elem < o.elem;
  return power < o.power;
}

static bool mergeable(const Syllable& a, const Syllable& b) {
  if (a.factor >= 0) return a.factor == b.factor;
  return b.factor < 0 && a.gen == b.gen;
}

// push s onto a normal form stack, merging with the top
static void push_syllable(std::vector<Syllable>& st, const Syllable& s) {
  if (s.factor >= 0 ? s.elem.trivial() : s.power == 0) return;
  if (!st.empty() && mergeable(st.back(), s)) {
    Syllable& t = st.back();
    if (t.factor >= 0) {
      t.elem = fe_mul(t.elem, s.elem);
      if (t.elem.trivial()) st.pop_back();
    } else {
      t.power += s.power;
      if (t.power == 0) st.pop_back();
    }
    return;
  }
  st.push_back(s);
}

static Syllable invert_syllable(const Syllable& s) {
  Syllable r = s;
  if (s.factor >= 0)
    r.elem = fe_inv(s.elem);
  else
    r.power = -s.power;
  return r;
}

static void check_same(const NormalWord& u, const NormalWord& v) {
  if (u.pres && v.pres && u.pres != v.pres && !(*u.pres == *v.pres))
    throw Error("PresentationMismatch", "words over different presentations");
}

NormalWord identity_word(const PresPtr& p) { return NormalWord{p, {}}; }

NormalWord normalize_syllables(const std::vector<Syllable>& s, const PresPtr& p) {
  NormalWord w{p, {}};
  for (auto& x : s) push_syllable(w.syl, x);
  return w;
}

NormalWord normalize(const std::vector<RawLetter>& raw, const PresPtr& p) {
  NormalWord w{p, {}};
  for (auto& r : raw) {
    GenRef g = resolve(*p, r.name);
    Syllable s;
    if (g.factor >= 0) {
      s.factor = g.factor;
      s.elem = fe_generator(g.factor, p->factors[g.factor].kind, g.gen, r.power);
    } else {
      s.gen = g.gen;
      s.power = r.power;
    }
    push_syllable(w.syl, s);
  }
  return w;
}

NormalWord multiply(const NormalWord& u, const NormalWord& v) {
  check_same(u, v);
  NormalWord w{u.pres ? u.pres : v.pres, u.syl};
  for (auto& s : v.syl) push_syllable(w.syl, s);
  return w;
}

NormalWord invert(const NormalWord& u) {
  NormalWord w{u.pres, {}};
  for (auto it = u.syl.rbegin(); it != u.syl.rend(); ++it) w.syl.push_back(invert_syllable(*it));
  return w;
}

NormalWord power(const NormalWord& u, int64_t n) {
  NormalWord base = n < 0 ? invert(u) : u;
  if (n < 0) n = -n;
  NormalWord r = identity_word(u.pres);
  for (int64_t i = 0; i < n; ++i) r = multiply(r, base);
  return r;
}

NormalWord from_factor(const PresPtr& p, const FactorElement& f) {
  NormalWord w{p, {}};
  if (!f.trivial()) {
    Syllable s;
    s.factor = f.factor;
    s.elem = f;
    w.syl.push_back(s);
  }
  return w;
}

NormalWord free_gen_word(const PresPtr& p, int m, int64_t t) {
  NormalWord w{p, {}};
  if (t != 0) {
    Syllable s;
    s.gen = m;
    s.power = t;
    w.syl.push_back(s);
  }
  return w;
}

NormalWord conjugate(const NormalWord& a, const NormalWord& b) {
  return multiply(multiply(a, b), invert(a));
}

CyclicReduction cyclically_reduce(const NormalWord& w) {
  if (w.is_identity()) throw Error("IdentityWord", "cannot cyclically reduce the identity");
  std::vector<Syllable> core = w.syl;
  NormalWord conj = identity_word(w.pres);
  // core <- (s_n s_1) s_2 ... s_{n-1}, conjugator picks up s_n^-1 on the right
  while (core.size() >= 2 && mergeable(core.front(), core.back())) {
    Syllable last = core.back();
    core.pop_back();
    std::vector<Syllable> next;
    push_syllable(next, last);
    for (auto& s : core) push_syllable(next, s);
    core.swap(next);
    std::vector<Syllable> c = conj.syl;
    c.push_back(invert_syllable(last));
    conj = normalize_syllables(c, w.pres);
  }
  return {conj, NormalWord{w.pres, core}};
}

std::optional<Peripheral> is_peripheral(const NormalWord& w) {
  if (w.is_identity()) return Peripheral{true, std::nullopt};
  auto cr = cyclically_reduce(w);
  if (cr.core.syl.size() == 1 && cr.core.syl[0].is_factor())
    return Peripheral{false, cr.core.syl[0].factor};
  return std::nullopt;
}

int64_t word_size(const NormalWord& w) {
  int64_t s = 0;
  for (auto& x : w.syl) s += x.is_factor() ? fe_size(x.elem) : (x.power < 0 ? -x.power : x.power);
  return s;
}

// ---------------------------------------------------------------- text

std::vector<RawLetter> tokenize_word(const std::string& text) {
  std::vector<RawLetter> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    RawLetter r;
    auto caret = tok.find('^');
    if (caret == std::string::npos) {
      r.name = tok;
    } else {
      r.name = tok.substr(0, caret);
      std::string e = tok.substr(caret + 1);
      size_t used = 0;
      try {
        r.power = std::stoll(e, &used);
      } catch (...) {
        used = 0;
      }
      if (used == 0 || used != e.size()) throw Error("ParseError", "bad exponent in '" + tok + "'");
    }
    if (r.name.empty()) throw Error("ParseError", "empty generator name");
    out.push_back(r);
  }
  return out;
}

NormalWord parse_word(const std::string& text, const PresPtr& p) {
  std::string t = text;
  if (t == "1" || t == "identity") return identity_word(p);
  return normalize(tokenize_word(t), p);
}

static void emit(std::vector<std::string>& out, const std::string& name, int64_t e) {
  out.push_back(e == 1 ? name : name + "^" + std::to_string(e));
}

std::string format_factor_element(const Presentation& p, const FactorElement& f) {
  std::vector<std::string> toks;
  if (f.kind == FactorKind::Free) {
    size_t i = 0;
    while (i < f.payload.size()) {
      size_t j = i;
      while (j < f.payload.size() && f.payload[j] == f.payload[i]) ++j;
      int64_t l = f.payload[i];
      int gen = static_cast<int>((l > 0 ? l : -l) - 1);
      emit(toks, p.factor_gen_name(f.factor, gen), (l > 0 ? 1 : -1) * static_cast<int64_t>(j - i));
      i = j;
    }
  } else {
    for (size_t g = 0; g < f.payload.size(); ++g)
      if (f.payload[g] != 0) emit(toks, p.factor_gen_name(f.factor, static_cast<int>(g)), f.payload[g]);
  }
  if (toks.empty()) return "1";
  std::string s;
  for (auto& t : toks) s += (s.empty() ? "" : " ") + t;
  return s;
}

FactorElement parse_factor_element(const std::string& text, const Presentation& p, int factor) {
  FactorElement r = p.identity_in(factor);
  if (text == "1" || text.empty()) return r;
  for (auto& tok : tokenize_word(text)) {
    GenRef g = resolve(p, tok.name);
    if (g.factor != factor) throw Error("MixedFactors", "'" + tok.name + "' not in factor");
    r = fe_mul(r, fe_generator(factor, p.factors[factor].kind, g.gen, tok.power));
  }
  return r;
}

std::string format_word(const NormalWord& w) {
  if (w.is_identity()) return "1";
  const Presentation& p = *w.pres;
  std::string s;
  for (auto& x : w.syl) {
    std::string t = x.is_factor() ? format_factor_element(p, x.elem) : "";
    if (!x.is_factor()) {
      std::vector<std::string> one;
      emit(one, p.free_gen_name(x.gen), x.power);
      t = one[0];
    }
    s += (s.empty() ? "" : " ") + t;
  }
  return s;
}

static std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// body of `name { ... }`, or empty optional
static std::optional<std::string> block(const std::string& text, const std::string& name) {
  size_t pos = 0;
  while ((pos = text.find(name, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
    size_t q = pos + name.size();
    while (q < text.size() && std::isspace(static_cast<unsigned char>(text[q]))) ++q;
    if (left_ok && q < text.size() && text[q] == '{') {
      int depth = 0;
      for (size_t r = q; r < text.size(); ++r) {
        if (text[r] == '{') ++depth;
        if (text[r] == '}' && --depth == 0) return text.substr(q + 1, r - q - 1);
      }
      throw Error("ParseError", "unterminated block '" + name + "'");
    }
    pos += name.size();
  }
  return std::nullopt;
}

static std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '[' || c == '(' || c == '{') ++depth;
    if (c == ']' || c == ')' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!strip(cur).empty()) out.push_back(strip(cur));
  return out;
}

Presentation parse_presentation(const std::string& text) {
  auto body = block(text, "presentation");
  if (!body) throw Error("ParseError", "missing presentation block");
  Presentation p;
  for (auto& stmt : split(*body, ';')) {
    if (stmt.empty()) continue;
    auto eq = stmt.find('=');
    if (eq == std::string::npos) throw Error("ParseError", "expected key = value: " + stmt);
    std::string key = strip(stmt.substr(0, eq)), val = strip(stmt.substr(eq + 1));
    if (key == "free_rank") {
      p.free_rank = std::stoi(val);
    } else if (key == "factors") {
      if (val.size() < 2 || val.front() != '[' || val.back() != ']')
        throw Error("ParseError", "factors must be a [list]");
      for (auto& item : split(val.substr(1, val.size() - 2), ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error("ParseError", "factor spec kind:rank");
        std::string kind = strip(item.substr(0, colon));
        FactorSpec f;
        if (kind == "free")
          f.kind = FactorKind::Free;
        else if (kind == "abelian" || kind == "free-abelian")
          f.kind = FactorKind::Abelian;
        else
          throw Error("ParseError", "unknown factor kind " + kind);
        f.rank = std::stoi(strip(item.substr(colon + 1)));
        p.factors.push_back(f);
      }
    } else {
      throw Error("ParseError", "unknown presentation key " + key);
    }
  }
  if (auto al = block(text, "aliases")) {
    for (auto& stmt : split(*al, ';')) {
      if (stmt.empty()) continue;
      auto eq = stmt.find('=');
      if (eq == std::string::npos) throw Error("ParseError", "alias needs '='");
      p.aliases[strip(stmt.substr(0, eq))] = strip(stmt.substr(eq + 1));
    }
  }
  p.validate();
  for (auto& [al, c] : p.aliases) resolve(p, c);
  return p;
}

std::string format_presentation(const Presentation& p) {
  std::string s = "presentation { factors = [";
  for (size_t i = 0; i < p.factors.size(); ++i) {
    if (i) s += ", ";
    s += (p.factors[i].kind == FactorKind::Free ? "free:" : "abelian:") + std::to_string(p.factors[i].rank);
  }
  s += "]; free_rank = " + std::to_string(p.free_rank) + " }\n";
  if (!p.aliases.empty()) {
    s += "aliases {";
    bool first = true;
    for (auto& [al, c] : p.aliases) {
      s += (first ? " " : "; ") + al + " = " + c;
      first = false;
    }
    s += " }\n";
  }
  return s;
}

}  // namespace gw
