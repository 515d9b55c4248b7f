#include "report.hpp"

namespace harness {

using namespace gw;

json factor_json(const Presentation& p, const FactorElement& x) {
  if (x.trivial()) return json{{"factor", x.factor}, {"value", "1"}};
  return json{{"factor", x.factor}, {"value", format_factor_element(p, x)}};
}

FactorElement factor_from_json(const json& j, const Presentation& p) {
  int f = j.at("factor").get<int>();
  if (f < 0) return FactorElement{};
  return parse_factor_element(j.at("value").get<std::string>(), p, f);
}

json collapse_json(const Presentation& p, const CollapseDesc& d) {
  json tw = json::array();
  for (auto& [h, x] : d.twists) tw.push_back(json{{"half", h}, {"element", factor_json(p, x)}});
  json r{{"edges", d.edges}, {"twists", tw}};
  r["keep"] = d.keep ? json(*d.keep) : json(nullptr);
  return r;
}

CollapseDesc collapse_from_json(const json& j, const Presentation& p) {
  CollapseDesc d;
  d.edges = j.at("edges").get<std::vector<int>>();
  for (auto& t : j.at("twists")) d.twists.push_back({t.at("half").get<int>(), factor_from_json(t.at("element"), p)});
  if (!j.at("keep").is_null()) d.keep = j.at("keep").get<std::vector<int>>();
  return d;
}

json evidence_json(const EllipticEvidence& e) {
  json expr = json::array();
  for (auto& [i, k] : e.expr) expr.push_back({i, k});
  return json{{"conjugator", format_word(e.conjugator)},
              {"core", format_word(e.core)},
              {"vertex", e.vertex},
              {"expr", expr}};
}

EllipticEvidence evidence_from_json(const json& j, const PresPtr& p) {
  EllipticEvidence e;
  e.conjugator = parse_word(j.at("conjugator").get<std::string>(), p);
  e.core = parse_word(j.at("core").get<std::string>(), p);
  e.vertex = j.at("vertex").get<int>();
  for (auto& x : j.at("expr")) e.expr.push_back({x.at(0).get<int>(), x.at(1).get<int64_t>()});
  return e;
}

json witness_json(const AdjacencyWitness& w) {
  if (auto* c = std::get_if<CompatibleWitness>(&w)) {
    const Presentation& p = *c->refinement.pres;
    return json{{"type", "compatible"},
                {"refinement", format_splitting(c->refinement)},
                {"toA", collapse_json(p, c->toA)},
                {"toB", collapse_json(p, c->toB)}};
  }
  auto& e = std::get<CommonEllipticWitness>(w);
  return json{{"type", "common-elliptic"},
              {"g", format_word(e.g)},
              {"inA", evidence_json(e.inA)},
              {"inB", evidence_json(e.inB)}};
}

AdjacencyWitness witness_from_json(const json& j, const PresPtr& p) {
  std::string type = j.at("type").get<std::string>();
  if (type == "compatible") {
    CompatibleWitness c;
    c.refinement = parse_splitting(j.at("refinement").get<std::string>());
    c.toA = collapse_from_json(j.at("toA"), *c.refinement.pres);
    c.toB = collapse_from_json(j.at("toB"), *c.refinement.pres);
    return c;
  }
  if (type != "common-elliptic") throw Error("ParseError", "unknown witness type " + type);
  CommonEllipticWitness e;
  e.g = parse_word(j.at("g").get<std::string>(), p);
  e.inA = evidence_from_json(j.at("inA"), p);
  e.inB = evidence_from_json(j.at("inB"), p);
  return e;
}

json bounds_json(const ProjectionBounds& b) {
  return json{{"L", b.L}, {"xi", b.xi}, {"c", b.c}, {"D0", b.D0}, {"D1", b.D1},
              {"R0", b.R0}, {"R", b.R}, {"D2", b.D2}};
}

json moves_json(const ReductionResult& r) {
  json out = json::array();
  for (auto& s : r.steps)
    out.push_back(json{{"kind", s.kind},
                       {"cut", s.cut.kind == AdmissibleCut::Kind::TypeI ? "i" : "ii"},
                       {"vertex", s.cut.vertex},
                       {"U", s.cut.U},
                       {"V", s.cut.V},
                       {"lengthBefore", s.lengthBefore},
                       {"lengthAfter", s.lengthAfter}});
  return out;
}

json reduction_json(const ReductionResult& r) {
  json w{{"start", format_tree(r.start)}, {"tree", format_tree(r.tree)}};
  if (r.outcome == ReductionResult::Outcome::UncrossedEdge) {
    w["uncrossedEdge"] = r.tree.g.e[r.edge].name;
    w["freeSplitting"] = format_splitting(*r.freeSplitting);
  }
  return json{{"verdict", r.outcome == ReductionResult::Outcome::Reduced ? "reduced" : "uncrossed-edge"},
              {"witness", w},
              {"moves", moves_json(r)},
              {"bound", {{"L", r.startLength}, {"final", r.finalLength}, {"moves", r.steps.size()}}}};
}

json simplicity_json(const SimplicityVerdict& v) {
  json j = reduction_json(v.reduction);
  j["verdict"] = v.isSimple ? "simple" : "not-simple";
  if (v.elliptic) j["witness"]["elliptic"] = evidence_json(*v.elliptic);
  return j;
}

json quadratic_json(const QuadraticityVerdict& q) {
  std::vector<int> circles(q.perVertexCircleFlags.begin(), q.perVertexCircleFlags.end());
  return json{{"verdict", q.isQuadratic ? "quadratic" : "not-quadratic"},
              {"witness",
               {{"tree", format_tree(q.reducedTree)},
                {"edgeCrossings", q.perEdgeCrossingCounts},
                {"vertexCircles", circles},
                {"edgesTwice", q.edgesTwice},
                {"allCircles", q.allCircles}}},
              {"moves", json::array()},
              {"bound", json::object()}};
}

json cutpair_json(const CutPairSearch& s) {
  json cs = json::array();
  for (auto& c : s.candidates)
    cs.push_back(json{{"a", format_word(c.a)},
                      {"combLength", c.combLength},
                      {"components", c.componentCount < 0 ? json(nullptr) : json(c.componentCount)},
                      {"axisKey", c.axisKey}});
  return json{{"verdict", s.candidates.empty() ? "none" : "cut-pair-found"},
              {"witness", {{"tree", format_tree(s.tree)}, {"candidates", cs}}},
              {"moves", json::array()},
              {"bound", {{"loopsTried", s.loopsTried}, {"axesTested", s.axesTested}}}};
}

json extract_json(const ExtractResult& r) {
  return json{{"verdict", "short-element"},
              {"witness",
               {{"a", format_word(r.a)},
                {"combLength", r.combLength},
                {"components", r.componentCount},
                {"positions", {r.k0, r.k1}},
                {"sameAxis", r.sameAxis},
                {"tree", format_tree(r.tree)}}},
              {"moves", json::array()},
              {"bound", {{"L", r.L}, {"xi", r.xi}, {"c", r.c}, {"R0", r.R0}}}};
}

json certificate_json(const PathCertificate& c, const GrushkoTree& T0, const GrushkoTree& T1) {
  json nodes = json::array(), steps = json::array(), moves = json::array();
  for (auto& n : c.nodes) nodes.push_back(format_splitting(n));
  for (auto& s : c.steps) {
    steps.push_back(witness_json(s));
    moves.push_back(std::holds_alternative<CompatibleWitness>(s) ? "compatible" : "common-elliptic");
  }
  json b = bounds_json(c.bounds);
  b["claimed"] = c.claimedBound;
  b["length"] = c.length();
  return json{{"verdict", c.kind},
              {"witness",
               {{"g", format_word(c.g)},
                {"tree0", format_tree(T0)},
                {"tree1", format_tree(T1)},
                {"a", c.a ? json(format_word(*c.a)) : json(nullptr)},
                {"supplied", c.supplied},
                {"nodes", nodes},
                {"steps", steps}}},
              {"moves", moves},
              {"bound", b}};
}

LoadedCertificate certificate_from_json(const json& j) {
  const json& w = j.at("witness");
  LoadedCertificate r;
  r.T0 = parse_tree(w.at("tree0").get<std::string>());
  r.T1 = parse_tree(w.at("tree1").get<std::string>());
  PresPtr p = r.T0.pres;
  PathCertificate& c = r.cert;
  c.kind = j.at("verdict").get<std::string>();
  c.g = parse_word(w.at("g").get<std::string>(), p);
  if (!w.at("a").is_null()) c.a = parse_word(w.at("a").get<std::string>(), p);
  c.supplied = w.at("supplied").get<std::vector<std::string>>();
  for (auto& n : w.at("nodes")) c.nodes.push_back(parse_splitting(n.get<std::string>()));
  for (auto& s : w.at("steps")) c.steps.push_back(witness_from_json(s, p));
  const json& b = j.at("bound");
  c.claimedBound = b.at("claimed").get<int64_t>();
  auto& B = c.bounds;
  B.L = b.at("L");
  B.xi = b.at("xi");
  B.c = b.at("c");
  B.D0 = b.at("D0");
  B.D1 = b.at("D1");
  B.R0 = b.at("R0");
  B.R = b.at("R");
  B.D2 = b.at("D2");
  return r;
}

}  // namespace harness
