#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "gw/random.hpp"

namespace harness {

using namespace gw;

namespace {

// usage problems outside CLI11's own checks (unreadable files, unknown names)
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

PresPtr load_presentation(const std::string& path) {
  return std::make_shared<Presentation>(parse_presentation(slurp(path)));
}

int64_t env_int(const char* name, int64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    return std::stoll(v);
  } catch (const std::exception&) {
    throw UsageError(std::string(name) + " is not an integer");
  }
}

int find_vertex(const GrushkoTree& t, const std::string& name) {
  for (int v = 0; v < t.g.nv(); ++v)
    if (t.g.v[v].name == name) return v;
  try {
    size_t used = 0;
    int v = std::stoi(name, &used);
    if (used == name.size() && v >= 0 && v < t.g.nv()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("no vertex named " + name);
}

LineCollection load_lines(const std::string& arg, const PresPtr& p) {
  std::ifstream probe(arg);
  return parse_lines(probe ? slurp(arg) : arg, p);
}

json error_json(const Error& e) { return json{{"error", e.code()}, {"message", e.what()}}; }

struct Output {
  std::string path;
  void emit(std::ostream& out, const json& j) const {
    std::string s = j.dump(2) + "\n";
    if (path.empty())
      out << s;
    else
      write_file(path, s);
  }
};

// ---------------------------------------------------------------- survey

struct Row {
  NormalWord g;
  json j;
};

json survey_row(const PresPtr& p, const NormalWord& g, const SurveyConfig& cfg, uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  json row{{"element", format_word(g)}};
  try {
    GrushkoTree rose = standard_rose(p);
    auto sv = is_simple(p, g);
    row["simplicity"] = simplicity_json(sv);
    if (sv.isSimple) {
      int L = std::max(cfg.L, comb_length(rose, g));
      GrushkoTree T1 = random_tree_in_OL(p, g, L, seed, cfg.steps);
      auto c = certify_projection(p, g, rose, T1, std::nullopt, cfg.radius, cfg.budget);
      std::string why;
      bool ok = check_certificate(c, rose, T1, &why) && c.length() <= c.bounds.D0;
      row["classification"] = "simple";
      row["certificateLength"] = c.length();
      row["bound"] = "D0";
      row["boundValue"] = c.bounds.D0;
      row["pass"] = ok;
      if (!ok) row["why"] = why;
      row["certificate"] = certificate_json(c, rose, T1);
    } else {
      auto q = is_quadratic(p, g);
      row["quadraticity"] = quadratic_json(q);
      if (q.isQuadratic) {
        row["classification"] = "quadratic";
      } else {
        auto s = find_short_cut_pair(p, g, cfg.radius, cfg.budget);
        row["cutPairs"] = cutpair_json(s);
        row["classification"] = s.candidates.empty() ? "unresolved" : "cut-pair-found";
        for (auto& cand : s.candidates) {
          if (cand.componentCount < 0) continue;
          auto r = extract_short_element_in(s.tree, g, cand.a, cfg.budget);
          bool ok = r.combLength <= r.R0 && r.componentCount >= r.c && r.c >= 2;
          row["extraction"] = extract_json(r);
          row["bound"] = "R0";
          row["boundValue"] = r.R0;
          row["pass"] = ok;
          break;
        }
      }
    }
  } catch (const Error& e) {
    row["classification"] = "unresolved";
    row["error"] = error_json(e);
  }
  if (cfg.timings)
    row["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

// ---------------------------------------------------------------- subcommands

struct Common {
  std::string presentation, word, tree, lines, out;
  int64_t budget = 0;
};

}  // namespace

json run_survey(const PresPtr& p, const SurveyConfig& cfg) {
  if (cfg.budget <= 0) throw UsageError("budget must be positive");
  std::vector<NormalWord> elems;
  std::vector<uint64_t> seeds;
  Rng rng(cfg.seed);
  if (!cfg.words.empty()) {
    for (auto& w : cfg.words) elems.push_back(parse_word(w, p));
  } else {
    for (int i = 0; i < cfg.count; ++i) elems.push_back(random_nonperipheral(p, rng, cfg.randomLength));
  }
  for (size_t i = 0; i < elems.size(); ++i) seeds.push_back(rng());
  std::vector<Row> rows(elems.size());
  auto work = [&](size_t i) { rows[i] = Row{elems[i], survey_row(p, elems[i], cfg, seeds[i])}; };
  int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    for (size_t i = 0; i < elems.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (size_t i = w; i < elems.size(); i += workers) work(i);
      });
    for (auto& t : pool) t.join();
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    auto ka = std::make_pair(word_size(a.g), format_word(a.g));
    auto kb = std::make_pair(word_size(b.g), format_word(b.g));
    return ka < kb;
  });
  json out = json::array();
  std::map<std::string, int> tally;
  int passed = 0, checked = 0;
  for (auto& r : rows) {
    ++tally[r.j["classification"].get<std::string>()];
    if (r.j.contains("pass")) {
      ++checked;
      passed += r.j["pass"].get<bool>();
    }
    out.push_back(r.j);
  }
  return json{{"config",
               {{"presentation", format_presentation(*p)},
                {"seed", cfg.seed},
                {"L", cfg.L},
                {"steps", cfg.steps},
                {"radius", cfg.radius},
                {"budget", cfg.budget},
                {"randomLength", cfg.randomLength}}},
              {"summary", {{"elements", rows.size()}, {"classes", tally}, {"checked", checked}, {"passed", passed}}},
              {"rows", out}};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Whitehead graphs, reduction and ZF certificates for free products"};
  app.require_subcommand(1);
  int64_t defaultBudget = kDefaultBudget;
  uint64_t defaultSeed = 1;
  try {
    defaultBudget = env_int("GW_BUDGET", kDefaultBudget);
    defaultSeed = static_cast<uint64_t>(env_int("GW_SEED", 1));
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return 2;
  }
  Common c;
  c.budget = defaultBudget;
  int exitCode = 0;

  auto* parse = app.add_subcommand("parse", "normalize a presentation, word, tree or splitting");
  std::string splittingFile;
  parse->add_option("--presentation", c.presentation, "presentation file");
  parse->add_option("--word", c.word, "word to normalize");
  parse->add_option("--tree", c.tree, "tree file");
  parse->add_option("--splitting", splittingFile, "splitting file");

  auto* length = app.add_subcommand("length", "|g|_T or |L|_T");
  length->add_option("--tree", c.tree, "tree file")->required();
  length->add_option("--word", c.word, "element");
  length->add_option("--lines", c.lines, "line collection (file or inline words)");

  auto* wh = app.add_subcommand("whitehead", "vertex Whitehead graph");
  std::string vertex, dot;
  wh->add_option("--tree", c.tree, "tree file")->required();
  wh->add_option("--lines", c.lines, "line collection (file or inline words)")->required();
  wh->add_option("--vertex", vertex, "vertex name or index")->required();
  wh->add_option("--dot", dot, "write DOT here");

  auto* red = app.add_subcommand("reduce", "Whitehead reduction");
  red->add_option("--tree", c.tree, "tree file (default: standard rose of --presentation)");
  red->add_option("--presentation", c.presentation, "presentation file");
  red->add_option("--lines", c.lines, "line collection (file or inline words)")->required();

  auto* simple = app.add_subcommand("simple", "decide simplicity");
  simple->add_option("--presentation", c.presentation, "presentation file")->required();
  simple->add_option("--word", c.word, "element")->required();

  auto* quad = app.add_subcommand("quadratic", "decide quadraticity");
  quad->add_option("--presentation", c.presentation, "presentation file")->required();
  quad->add_option("--word", c.word, "element")->required();

  auto* cut = app.add_subcommand("cutpair", "short cut pair search and extraction");
  int radius = 4;
  std::string along;
  cut->add_option("--presentation", c.presentation, "presentation file")->required();
  cut->add_option("--word", c.word, "element")->required();
  cut->add_option("--radius", radius, "candidate radius R");
  cut->add_option("--extract", along, "extract a short element along this cut-pair axis");

  auto* cert = app.add_subcommand("certify", "ZF path certificate between pi(T0) and pi(T1)");
  std::string tree0, tree1, checkFile;
  std::vector<std::string> sup0, sup1;
  cert->add_option("--word", c.word, "element");
  cert->add_option("--tree0", tree0, "first tree");
  cert->add_option("--tree1", tree1, "second tree");
  cert->add_option("--supplied0", sup0, "supplied splittings for the T0 side, in path order");
  cert->add_option("--supplied1", sup1, "supplied splittings for the T1 side, in path order");
  cert->add_option("--radius", radius, "cut-pair radius");
  cert->add_option("--check", checkFile, "re-check a certificate JSON file");

  auto* survey = app.add_subcommand("survey", "classify many elements and certify");
  SurveyConfig sc;
  sc.seed = defaultSeed;
  sc.budget = defaultBudget;
  std::string wordsFile;
  survey->add_option("--presentation", sc.presentationFile, "presentation file")->required();
  survey->add_option("--words", wordsFile, "file of elements, one per line");
  survey->add_option("--length", sc.randomLength, "length of random elements");
  survey->add_option("--count", sc.count, "number of random elements");
  survey->add_option("--L", sc.L, "length bound for random trees");
  survey->add_option("--steps", sc.steps, "random moves per tree");
  survey->add_option("--radius", sc.radius, "cut-pair radius");
  survey->add_option("--seed", sc.seed, "seed (default GW_SEED)");
  survey->add_option("--workers", sc.workers, "worker threads");
  survey->add_flag("--timings", sc.timings, "record per-row timings");

  for (auto* s : {parse, length, wh, red, simple, quad, cut, cert, survey}) {
    s->add_option("--out", c.out, "write JSON here instead of stdout");
    if (s != survey) s->add_option("--budget", c.budget, "search budget (default GW_BUDGET)");
  }
  survey->add_option("--budget", sc.budget, "search budget (default GW_BUDGET)");

  std::vector<std::string> argv_s{"gw"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_s) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Output o{c.out};
  try {
    if (c.budget <= 0 || sc.budget <= 0) throw UsageError("budget must be positive");
    if (*parse) {
      json j{{"verdict", "ok"}};
      PresPtr p;
      if (!c.presentation.empty()) {
        p = load_presentation(c.presentation);
        j["presentation"] = format_presentation(*p);
        j["xi"] = p->xi();
        j["sporadic"] = p->sporadic();
      }
      if (!c.tree.empty()) {
        bool hadInverse = false;
        GrushkoTree t = parse_tree(slurp(c.tree), &hadInverse);
        j["tree"] = format_tree(t);
        j["markingVerified"] = verify_marking(t);
        if (!p) p = t.pres;
      }
      if (!splittingFile.empty()) {
        ZSplitting s = parse_splitting(slurp(splittingFile));
        j["splitting"] = format_splitting(s);
        if (!p) p = s.pres;
      }
      if (!c.word.empty()) {
        if (!p) throw UsageError("--word needs --presentation, --tree or --splitting");
        NormalWord w = parse_word(c.word, p);
        j["word"] = format_word(w);
        auto per = is_peripheral(w);
        j["peripheral"] = per.has_value();
      }
      o.emit(out, j);
    } else if (*length) {
      GrushkoTree t = parse_tree(slurp(c.tree));
      json j{{"verdict", "ok"}};
      if (!c.word.empty()) j["length"] = comb_length(t, parse_word(c.word, t.pres));
      if (!c.lines.empty()) j["linesLength"] = lines_length(t, load_lines(c.lines, t.pres));
      if (c.word.empty() && c.lines.empty()) throw UsageError("length needs --word or --lines");
      o.emit(out, j);
    } else if (*wh) {
      GrushkoTree t = parse_tree(slurp(c.tree));
      LineCollection L = load_lines(c.lines, t.pres);
      int v = find_vertex(t, vertex);
      WhiteheadGraph W = vertex_whitehead(t, L, v);
      std::string d = to_dot(W);
      if (!dot.empty()) write_file(dot, d);
      json vs = json::array(), es = json::array();
      for (auto& x : W.vertices) vs.push_back(x.name);
      for (auto& e : W.edges)
        es.push_back(json{{"from", W.vertices[e.from].name},
                          {"to", W.vertices[e.to].name},
                          {"label", e.label.trivial() ? "1" : format_factor_element(*t.pres, e.label)},
                          {"line", e.line}});
      json j{{"verdict", W.connected() ? "connected" : "disconnected"},
             {"witness", {{"vertices", vs}, {"edges", es}}},
             {"moves", json::array()},
             {"bound", json::object()}};
      if (W.factor >= 0 && W.connected()) {
        auto m = monodromy(W);
        json gens = json::array();
        for (auto& x : m.generators) gens.push_back(format_factor_element(*t.pres, x));
        j["witness"]["monodromy"] = {{"generators", gens},
                                     {"trivial", m.isTrivial},
                                     {"whole", m.equalsWholeFactor},
                                     {"index", m.index ? json(*m.index) : json(nullptr)}};
      }
      if (auto cutv = find_admissible_cut(W)) {
        json U = json::array(), V = json::array();
        for (int x : cutv->U) U.push_back(W.vertices[x].name);
        for (int x : cutv->V) V.push_back(W.vertices[x].name);
        j["witness"]["admissibleCut"] = {
            {"type", cutv->kind == AdmissibleCut::Kind::TypeI ? "i" : "ii"}, {"U", U}, {"V", V}};
      }
      o.emit(out, j);
    } else if (*red) {
      GrushkoTree t;
      if (!c.tree.empty())
        t = parse_tree(slurp(c.tree));
      else if (!c.presentation.empty())
        t = standard_rose(load_presentation(c.presentation));
      else
        throw UsageError("reduce needs --tree or --presentation");
      o.emit(out, reduction_json(whitehead_reduce(t, load_lines(c.lines, t.pres))));
    } else if (*simple) {
      PresPtr p = load_presentation(c.presentation);
      NormalWord g = parse_word(c.word, p);
      auto v = is_simple(p, g);
      std::string why;
      if (!check_simplicity(v, g, &why)) throw Error("ValidationFailure", why);
      o.emit(out, simplicity_json(v));
    } else if (*quad) {
      PresPtr p = load_presentation(c.presentation);
      o.emit(out, quadratic_json(is_quadratic(p, parse_word(c.word, p))));
    } else if (*cut) {
      PresPtr p = load_presentation(c.presentation);
      NormalWord g = parse_word(c.word, p);
      if (!along.empty()) {
        o.emit(out, extract_json(extract_short_element(p, g, parse_word(along, p), c.budget)));
      } else {
        o.emit(out, cutpair_json(find_short_cut_pair(p, g, radius, c.budget)));
      }
    } else if (*cert) {
      if (!checkFile.empty()) {
        auto lc = certificate_from_json(json::parse(slurp(checkFile)));
        std::string why;
        bool ok = check_certificate(lc.cert, lc.T0, lc.T1, &why);
        json j{{"verdict", ok ? "valid" : "invalid"}, {"length", lc.cert.length()}};
        if (!ok) j["why"] = why;
        o.emit(out, j);
        exitCode = ok ? 0 : 1;
      } else {
        if (c.word.empty() || tree0.empty() || tree1.empty())
          throw UsageError("certify needs --word, --tree0 and --tree1 (or --check)");
        GrushkoTree T0 = parse_tree(slurp(tree0)), T1 = parse_tree(slurp(tree1));
        PresPtr p = T0.pres;
        NormalWord g = parse_word(c.word, p);
        std::optional<SuppliedSplittings> sup;
        if (!sup0.empty() || !sup1.empty()) {
          sup.emplace();
          for (auto& f : sup0) sup->side0.path.push_back(parse_splitting(slurp(f)));
          for (auto& f : sup1) sup->side1.path.push_back(parse_splitting(slurp(f)));
        }
        auto pc = certify_projection(p, g, T0, T1, sup, radius, c.budget);
        std::string why;
        if (!check_certificate(pc, T0, T1, &why)) throw Error("ValidationFailure", why);
        o.emit(out, certificate_json(pc, T0, T1));
      }
    } else if (*survey) {
      PresPtr p = load_presentation(sc.presentationFile);
      if (!wordsFile.empty())
        for (auto& w : load_lines(wordsFile, p).generators) sc.words.push_back(format_word(w));
      json r = run_survey(p, sc);
      o.emit(out, r);
      exitCode = r["summary"]["passed"] == r["summary"]["checked"] ? 0 : 1;
    }
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << error_json(e).dump() << "\n";
    return 1;
  } catch (const json::exception& e) {
    err << json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return exitCode;
}

}  // namespace harness
