// Text format for trees and splittings.

#include <cctype>
#include <map>
#include <regex>
#include <sstream>

#include "gw/tree.hpp"

namespace gw {

namespace {

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::optional<std::string> block(const std::string& text, const std::string& name) {
  std::regex re("(^|[^A-Za-z0-9_])" + name + "\\s*\\{");
  std::smatch m;
  if (!std::regex_search(text, m, re)) return std::nullopt;
  size_t q = m.position(0) + m.length(0) - 1;
  int depth = 0;
  for (size_t r = q; r < text.size(); ++r) {
    if (text[r] == '{') ++depth;
    if (text[r] == '}' && --depth == 0) return text.substr(q + 1, r - q - 1);
  }
  throw Error("ParseError", "unterminated block " + name);
}

std::vector<std::string> statements(const std::string& body) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : body) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if ((c == ';' || c == '\n') && depth == 0) {
      if (!strip(cur).empty()) out.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!strip(cur).empty()) out.push_back(strip(cur));
  return out;
}

std::string slot_name(const GrushkoTree& t, int slot) {
  const Presentation& p = *t.pres;
  if (slot < p.free_rank) return p.free_gen_name(slot);
  slot -= p.free_rank;
  for (int i = 0; i < p.k(); ++i) {
    if (slot < p.factors[i].rank) return p.factor_gen_name(i, slot);
    slot -= p.factors[i].rank;
  }
  throw Error("InvalidTree", "generator slot out of range");
}

int name_slot(const GrushkoTree& t, const std::string& name) {
  for (int s = 0; s < t.num_generators(); ++s) {
    if (slot_name(t, s) == name) return s;
    // canonical name also accepted
    std::string canon;
    const Presentation& p = *t.pres;
    if (s < p.free_rank) {
      canon = "x" + std::to_string(s + 1);
    } else {
      int r = s - p.free_rank;
      for (int i = 0; i < p.k(); ++i) {
        if (r < p.factors[i].rank) {
          canon = "a" + std::to_string(i + 1) + "." + std::to_string(r + 1);
          break;
        }
        r -= p.factors[i].rank;
      }
    }
    if (canon == name) return s;
  }
  throw Error("UnknownGenerator", "'" + name + "' in marking");
}

Path parse_path(const GrushkoTree& t, int start, const std::string& text, const std::map<std::string, int>& edges) {
  const Graph& g = t.g;
  Path p = trivial_path(g, start);
  size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] == '[') {
      size_t j = text.find(']', i);
      if (j == std::string::npos) throw Error("ParseError", "unbalanced [ in path");
      int u = path_end(g, p);
      std::string el = strip(text.substr(i + 1, j - i - 1));
      if (g.v[u].label < 0) {
        if (el != "1" && !el.empty()) throw Error("InvalidPath", "element at a trivial vertex");
      } else {
        p = concat(g, p, elem_path(g, u, parse_factor_element(el, *t.pres, g.v[u].label)));
      }
      i = j + 1;
      continue;
    }
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '[') ++j;
    std::string tok = text.substr(i, j - i);
    i = j;
    bool inv = false;
    if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
      inv = true;
      tok = tok.substr(0, tok.size() - 3);
    } else if (tok.size() > 2 && tok.substr(tok.size() - 2) == "^1") {
      tok = tok.substr(0, tok.size() - 2);
    }
    auto it = edges.find(tok);
    if (it == edges.end()) throw Error("ParseError", "unknown edge " + tok);
    int h = 2 * it->second + (inv ? 1 : 0);
    if (g.origin(h) != path_end(g, p)) throw Error("InvalidPath", "path is not connected at " + tok);
    p = concat(g, p, edge_path(g, h));
  }
  return p;
}

struct GraphPart {
  std::map<std::string, int> vid, eid;
};

// vertices { v0 label=factor0 base; v1 }, edges { e1: v0 -> v1 length=2 }
GraphPart parse_graph(const std::string& text, Graph& g, int* base, std::vector<SVertex>* sv, const PresPtr& pres) {
  GraphPart gp;
  auto vb = block(text, "vertices");
  auto eb = block(text, "edges");
  if (!vb || !eb) throw Error("ParseError", "missing vertices or edges block");
  if (base) *base = 0;
  for (auto& st : statements(*vb)) {
    std::istringstream in(st);
    std::string name;
    in >> name;
    GVertex v{-1, name};
    SVertex s{name, {}};
    std::string rest;
    std::getline(in, rest);
    std::smatch m;
    if (std::regex_search(rest, m, std::regex("label\\s*=\\s*factor(\\d+)"))) v.label = std::stoi(m[1]);
    if (std::regex_search(rest, m, std::regex("gens\\s*=\\s*\\[([^\\]]*)\\]"))) {
      std::string list = m[1];
      std::stringstream ls(list);
      std::string w;
      while (std::getline(ls, w, ','))
        if (!strip(w).empty()) s.gens.push_back(parse_word(strip(w), pres));
    }
    if (std::regex_search(rest, std::regex("(^|\\s)base(\\s|$)")) && base) *base = g.nv();
    if (gp.vid.count(name)) throw Error("ParseError", "duplicate vertex " + name);
    gp.vid[name] = g.nv();
    g.v.push_back(v);
    if (sv) sv->push_back(s);
  }
  for (auto& st : statements(*eb)) {
    std::smatch m;
    if (!std::regex_match(st, m, std::regex("\\s*(\\S+)\\s*:\\s*(\\S+)\\s*->\\s*(\\S+)\\s*(length\\s*=\\s*(\\S+))?\\s*")))
      throw Error("ParseError", "bad edge statement: " + st);
    if (!gp.vid.count(m[2]) || !gp.vid.count(m[3])) throw Error("ParseError", "edge to unknown vertex: " + st);
    GEdge e{gp.vid[m[2]], gp.vid[m[3]], m[1], 1.0};
    if (m[5].matched) e.length = std::stod(m[5]);
    gp.eid[e.name] = g.ne();
    g.e.push_back(e);
  }
  return gp;
}

}  // namespace

bool verify_marking(const GrushkoTree& t) {
  if (!check_inverse(t)) return false;
  const Graph& g = t.g;
  // spanning tree paths from the base
  std::vector<Path> tau(g.nv());
  std::vector<char> seen(g.nv(), 0), tree_edge(g.ne(), 0);
  std::vector<int> q = {t.base};
  seen[t.base] = 1;
  tau[t.base] = trivial_path(g, t.base);
  for (size_t i = 0; i < q.size(); ++i)
    for (int h : g.out(q[i])) {
      int w = g.terminus(h);
      if (seen[w]) continue;
      seen[w] = 1;
      tree_edge[h >> 1] = 1;
      tau[w] = concat(g, tau[q[i]], edge_path(g, h));
      q.push_back(w);
    }
  // marking(word(gamma)) must reduce to gamma on generators of pi_1
  auto roundtrip = [&](const Path& gamma) {
    Path back = word_to_loop(t, t.word(gamma));
    Path x = gamma;
    reduce(g, x);
    return back == x;
  };
  for (int e = 0; e < g.ne(); ++e) {
    if (tree_edge[e]) continue;
    Path gamma = concat(g, concat(g, tau[g.e[e].from], edge_path(g, 2 * e)), inverse(g, tau[g.e[e].to]));
    if (!roundtrip(gamma)) return false;
  }
  for (int u = 0; u < g.nv(); ++u) {
    int f = g.v[u].label;
    if (f < 0) continue;
    for (int j = 0; j < t.pres->factors[f].rank; ++j) {
      Path gamma = concat(g, tau[u], elem_path(g, u, fe_generator(f, t.pres->factors[f].kind, j)));
      gamma = concat(g, gamma, inverse(g, tau[u]));
      if (!roundtrip(gamma)) return false;
    }
  }
  return true;
}

GrushkoTree parse_tree(const std::string& text, bool* had_inverse) {
  auto pres = std::make_shared<Presentation>(parse_presentation(text));
  GrushkoTree t;
  t.pres = pres;
  GraphPart gp = parse_graph(text, t.g, &t.base, nullptr, pres);
  auto mb = block(text, "marking");
  if (!mb) throw Error("ParseError", "missing marking block");
  t.marking.assign(t.num_generators(), Path{});
  std::vector<char> have(t.num_generators(), 0);
  for (auto& st : statements(*mb)) {
    std::smatch m;
    if (!std::regex_match(st, m, std::regex("\\s*(\\S+)\\s*=\\s*loop\\((.*)\\)\\s*")))
      throw Error("ParseError", "bad marking statement: " + st);
    int s = name_slot(t, m[1]);
    t.marking[s] = parse_path(t, t.base, m[2], gp.eid);
    if (path_end(t.g, t.marking[s]) != t.base) throw Error("InvalidPath", "marking of " + std::string(m[1]) + " is not a loop");
    have[s] = 1;
  }
  for (int s = 0; s < t.num_generators(); ++s)
    if (!have[s]) throw Error("ParseError", "marking missing for " + slot_name(t, s));
  validate_tree(t);
  auto ib = block(text, "inverse");
  if (had_inverse) *had_inverse = ib.has_value();
  t.unverified = true;
  if (ib) {
    t.has_inverse = true;
    t.hword.assign(2 * t.g.ne(), identity_word(pres));
    t.vconj.assign(t.g.nv(), identity_word(pres));
    for (auto& st : statements(*ib)) {
      auto eq = st.find('=');
      if (eq == std::string::npos) throw Error("ParseError", "bad inverse statement: " + st);
      std::string key = strip(st.substr(0, eq));
      NormalWord w = parse_word(strip(st.substr(eq + 1)), pres);
      if (gp.eid.count(key)) {
        t.hword[2 * gp.eid[key]] = w;
        t.hword[2 * gp.eid[key] + 1] = invert(w);
      } else if (gp.vid.count(key)) {
        t.vconj[gp.vid[key]] = w;
      } else {
        throw Error("ParseError", "unknown name in inverse block: " + key);
      }
    }
    if (!check_inverse(t)) throw Error("InvalidInverse", "inverse marking does not invert the marking");
    t.unverified = !verify_marking(t);
  }
  return t;
}

std::string format_path(const GrushkoTree& t, const Path& p) {
  const Graph& g = t.g;
  std::string s;
  auto el = [&](const FactorElement& x) {
    if (x.trivial()) return;
    s += (s.empty() ? "" : " ") + std::string("[") + format_factor_element(*t.pres, x) + "]";
  };
  el(p.el[0]);
  for (size_t i = 0; i < p.he.size(); ++i) {
    s += (s.empty() ? "" : " ") + g.half_name(p.he[i]);
    el(p.el[i + 1]);
  }
  return s;
}

static std::string format_graph(const Graph& g, int base, const std::vector<SVertex>* sv) {
  std::string s = "vertices {";
  for (int u = 0; u < g.nv(); ++u) {
    s += (u ? "; " : " ") + g.v[u].name;
    if (g.v[u].label >= 0) s += " label=factor" + std::to_string(g.v[u].label);
    if (sv) {
      s += " gens=[";
      for (size_t i = 0; i < (*sv)[u].gens.size(); ++i) s += (i ? ", " : "") + format_word((*sv)[u].gens[i]);
      s += "]";
    }
    if (u == base && !sv) s += " base";
  }
  s += " }\nedges {";
  for (int e = 0; e < g.ne(); ++e) {
    s += (e ? "; " : " ") + g.e[e].name + ": " + g.v[g.e[e].from].name + " -> " + g.v[g.e[e].to].name;
    if (g.e[e].length != 1.0) {
      std::ostringstream os;
      os << g.e[e].length;
      s += " length=" + os.str();
    }
  }
  return s + " }\n";
}

std::string format_tree(const GrushkoTree& t) {
  std::string s = format_presentation(*t.pres);
  s += format_graph(t.g, t.base, nullptr);
  s += "marking {";
  for (int i = 0; i < t.num_generators(); ++i)
    s += (i ? "; " : " ") + slot_name(t, i) + " = loop(" + format_path(t, t.marking[i]) + ")";
  s += " }\n";
  if (t.has_inverse) {
    s += "inverse {";
    bool first = true;
    for (int e = 0; e < t.g.ne(); ++e) {
      s += (first ? " " : "; ") + t.g.e[e].name + " = " + format_word(t.hword[2 * e]);
      first = false;
    }
    for (int u = 0; u < t.g.nv(); ++u)
      if (t.g.v[u].label >= 0) {
        s += (first ? " " : "; ") + t.g.v[u].name + " = " + format_word(t.vconj[u]);
        first = false;
      }
    s += " }\n";
  }
  return s;
}

ZSplitting parse_splitting(const std::string& text) {
  if (block(text, "marking")) {
    GrushkoTree t = parse_tree(text);
    ZSplitting s = free_splitting(t);
    if (auto cb = block(text, "collapsed")) {
      for (auto& st : statements(*cb)) {
        bool found = false;
        for (int e = 0; e < t.g.ne(); ++e)
          if (t.g.e[e].name == st) {
            s.kept[e] = 0;
            found = true;
          }
        if (!found) throw Error("ParseError", "unknown edge in collapsed block: " + st);
      }
    }
    if (s.kept_count() == 0) throw Error("NothingLeft", "splitting keeps no edge");
    return s;
  }
  ZSplitting s;
  s.pres = std::make_shared<Presentation>(parse_presentation(text));
  s.unverified = true;
  Graph g;
  GraphPart gp = parse_graph(text, g, nullptr, &s.sv, s.pres);
  for (auto& e : g.e) s.se.push_back(SEdge{e.name, e.from, e.to, std::nullopt});
  std::regex eg("edge_group\\(\\s*(\\S+?)\\s*\\)\\s*=\\s*([^;\\n]*)");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), eg); it != std::sregex_iterator(); ++it) {
    std::string en = (*it)[1];
    if (!gp.eid.count(en)) throw Error("ParseError", "edge_group for unknown edge " + en);
    NormalWord w = parse_word(strip((*it)[2]), s.pres);
    if (!w.is_identity()) {
      if (is_peripheral(w)) throw Error("InvalidSplitting", "edge group of " + en + " is peripheral");
      s.se[gp.eid[en]].group = w;
    }
  }
  if (s.se.empty()) throw Error("NothingLeft", "splitting has no edge");
  return s;
}

std::string format_splitting(const ZSplitting& s) {
  if (s.is_tree_form()) {
    std::string r = format_tree(*s.tree);
    std::string c;
    for (size_t e = 0; e < s.kept.size(); ++e)
      if (!s.kept[e]) c += (c.empty() ? " " : "; ") + s.tree->g.e[e].name;
    if (!c.empty()) r += "collapsed {" + c + " }\n";
    return r;
  }
  Graph g;
  for (auto& v : s.sv) g.v.push_back(GVertex{-1, v.name});
  for (auto& e : s.se) g.e.push_back(GEdge{e.from, e.to, e.name, 1.0});
  std::string r = format_presentation(*s.pres) + format_graph(g, -1, &s.sv);
  for (auto& e : s.se)
    if (e.group) r += "edge_group(" + e.name + ") = " + format_word(*e.group) + "\n";
  return r;
}

}  // namespace gw
