#include "linamalg/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "linamalg/amalgam.hpp"
#include "linamalg/error.hpp"
#include "linamalg/fixtures.hpp"
#include "linamalg/fraisse.hpp"
#include "linamalg/io.hpp"

namespace linamalg::cli {

namespace {

using nlohmann::json;

struct Report {
  std::string verdict;
  int code = ok;
  std::optional<std::string> witness_file;
  json details = json::object();
  std::ostringstream text;
};

struct Settings {
  std::string report = "text";
  std::int64_t budget = 0;
  std::uint64_t seed = 1;
  bool canonicalize = false;
  std::string out;
  std::string policy = "fixed";
  std::string respect;
  int max_size = 4;
  int max_seed_size = 2;
  int steps = 5;
  std::int64_t count_budget = 64;
  std::string out_dir;
  std::string sub;
  std::string extract;
  bool list = false;
  std::vector<std::string> files;
  std::string n;
  std::string theory;
};

std::string load_text(const std::string& path) {
  if (path.rfind("fixture:", 0) == 0) return fixture_text(path.substr(8));
  return read_file(path);
}

Theory load_theory(const std::string& path) { return parse_theory(load_text(path)); }
FiniteAlgebra load_algebra(const std::string& path, const Signature& sig) { return parse_algebra(load_text(path), sig); }

SearchOptions search_options(const Settings& s) {
  SearchOptions o;
  if (s.budget > 0) {
    o.node_budget = s.budget;
  } else if (const char* env = std::getenv("LINAMALG_BUDGET")) {
    try {
      o.node_budget = std::stoll(env);
    } catch (const std::logic_error&) {
      fail(ErrorKind::precondition, std::string("LINAMALG_BUDGET is not a number: ") + env);
    }
  }
  return o;
}

DefaultPolicy parse_policy(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::optional<std::string> arg;
  if (colon != std::string::npos) arg = text.substr(colon + 1);
  if (kind == "fixed") return DefaultPolicy::fixed(arg);
  if (kind == "fresh") return DefaultPolicy::fresh(arg);
  if (kind == "max" && !arg) return DefaultPolicy::max_under_order();
  fail(ErrorKind::precondition, "unknown policy '" + text + "'; use fixed[:e], max or fresh[:name]");
}

void need_files(const Settings& s, size_t n, const char* usage) {
  if (s.files.size() != n) fail(ErrorKind::precondition, std::string("usage: ") + usage);
}

void emit_algebra(const Settings& s, Report& r, const FiniteAlgebra& alg) {
  const std::string text = format_algebra(alg, s.canonicalize);
  r.details["size"] = alg.size();
  if (!s.out.empty()) {
    write_file(s.out, text);
    r.witness_file = s.out;
    r.text << "wrote " << s.out << " (" << alg.size() << " elements)\n";
  } else {
    r.details["algebra"] = text;
    r.text << text;
  }
}

json stats_json(const AmalgamStats& st) {
  return {{"entries", st.entries},           {"from_sides", st.from_sides},
          {"by_collapse", st.by_collapse},   {"by_side", st.by_side},
          {"defaulted", st.defaulted},       {"agreement_checks", st.agreement_checks},
          {"padding_checks", st.padding_checks}};
}

void cmd_classify(const Settings& s, Report& r) {
  need_files(s, 1, "classify <theory>");
  const Theory th = load_theory(s.files[0]);
  Linearity overall = Linearity::equilinear;
  json axioms = json::array();
  for (const auto& eq : th.axioms) {
    const Linearity l = classify_equation(th.signature, eq);
    overall = std::min(overall, l);
    r.text << eq.str() << "  " << to_string(l) << '\n';
    axioms.push_back({{"equation", eq.str()}, {"class", to_string(l)}});
  }
  r.text << "theory: " << to_string(overall) << '\n';
  r.details["axioms"] = axioms;
  r.verdict = to_string(overall);
}

void cmd_saturate(const Settings& s, Report& r) {
  need_files(s, 1, "saturate <theory>");
  const auto sat = saturate(LinearTheory(load_theory(s.files[0])));
  r.details["trivial"] = sat.is_trivial();
  r.text << "trivial: " << (sat.is_trivial() ? "yes" : "no") << '\n';
  r.verdict = sat.is_trivial() ? "trivial" : "nontrivial";
  if (sat.is_trivial()) return;
  json classes = json::array();
  for (const auto& cls : sat.constant_classes()) {
    classes.push_back(cls);
    if (cls.size() < 2) continue;
    r.text << "constants:";
    for (const auto& c : cls) r.text << " '" << c;
    r.text << '\n';
  }
  r.details["constant_classes"] = classes;
  json collapses = json::array(), exceptional = json::array();
  const auto& sig = sat.base().signature();
  for (const auto& [op, arity] : sig.operations()) {
    for (const auto& p : all_patterns(op, arity, sig.constant_names())) {
      if (auto t = sat.collapse_target(p)) {
        const std::string v = t->is_constant ? "'" + t->constant : class_var_name(t->var_class);
        r.text << p.str() << " = " << v << '\n';
        collapses.push_back({{"pattern", p.str()}, {"target", v}});
      }
      const auto ex = sat.exceptional_variables(p);
      if (ex.empty()) continue;
      std::vector<std::string> names;
      for (int i : ex) names.push_back(class_var_name(i));
      r.text << p.str() << " exceptional:";
      for (const auto& n : names) r.text << ' ' << n;
      r.text << '\n';
      exceptional.push_back({{"pattern", p.str()}, {"classes", names}});
    }
  }
  r.details["collapses"] = collapses;
  r.details["exceptional"] = exceptional;
}

void cmd_verify(const Settings& s, Report& r) {
  need_files(s, 2, "verify <theory> <algebra> [--sub <algebra>]");
  const Theory th = load_theory(s.files[0]);
  const FiniteAlgebra alg = load_algebra(s.files[1], th.signature);
  const auto bad = first_failing_axiom(alg, th);
  r.details["model"] = !bad;
  r.text << (bad ? "not a model: fails " + bad->str() : std::string("model")) << '\n';
  bool good = !bad;
  if (!s.sub.empty()) {
    const FiniteAlgebra sub = load_algebra(s.sub, th.signature);
    const bool is_sub = is_subalgebra(sub, alg);
    r.details["subalgebra"] = is_sub;
    r.text << s.sub << (is_sub ? " is" : " is not") << " a subalgebra\n";
    good = good && is_sub;
  }
  r.verdict = good ? "pass" : "fail";
  r.code = good ? ok : refuted;
}

AmalgamationInput load_triple(const Settings& s, const Signature& sig) {
  return {load_algebra(s.files[1], sig), load_algebra(s.files[2], sig), load_algebra(s.files[3], sig)};
}

void cmd_amalgamate(const Settings& s, Report& r) {
  need_files(s, 4, "amalgamate <theory> <A> <B> <C>");
  const auto sat = saturate(LinearTheory(load_theory(s.files[0])));
  const Amalgam d = amalgamate(sat, load_triple(s, sat.base().signature()), parse_policy(s.policy));
  r.details["verified"] = d.verified;
  r.details["stats"] = stats_json(d.stats);
  r.verdict = "amalgam";
  emit_algebra(s, r, d.algebra);
}

void cmd_jep(const Settings& s, Report& r) {
  need_files(s, 3, "jep <theory> <A> <B>");
  const auto sat = saturate(LinearTheory(load_theory(s.files[0])));
  const auto& sig = sat.base().signature();
  const JointEmbedding j =
      joint_embed(sat, load_algebra(s.files[1], sig), load_algebra(s.files[2], sig), parse_policy(s.policy));
  r.details["verified"] = j.amalgam.verified;
  r.details["from_b"] = j.from_b;
  r.verdict = "joint-embedding";
  emit_algebra(s, r, j.amalgam.algebra);
}

void cmd_build_n(const Settings& s, Report& r) {
  need_files(s, 1, "build-n <theory> <n>");
  int n = 0;
  try {
    n = std::stoi(s.n);
  } catch (const std::logic_error&) {
    fail(ErrorKind::precondition, "n must be a number");
  }
  const auto sat = saturate(LinearTheory(load_theory(s.files[0])));
  r.verdict = "model";
  emit_algebra(s, r, build_n_element(sat, n));
}

std::set<std::string> split_ops(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

void cmd_amalgamate_hk(const Settings& s, Report& r) {
  need_files(s, 4, "amalgamate-hk <theory> <A> <B> <C> --respect f,g");
  const auto sat = saturate(LinearTheory(load_theory(s.files[0])));
  const Amalgam d = amalgamate_hk(sat, load_triple(s, with_hk(sat.base().signature())), split_ops(s.respect));
  r.details["verified"] = d.verified;
  r.details["stats"] = stats_json(d.stats);
  r.verdict = "amalgam";
  emit_algebra(s, r, d.algebra);
}

void cmd_fraisse(const Settings& s, Report& r) {
  need_files(s, 1, "fraisse <theory> [--max-seed-size N] [--steps K] [--out-dir dir]");
  const auto sat = saturate(LinearTheory(load_theory(s.files[0])));
  GenerateOptions gen;
  gen.count_budget = s.count_budget;
  gen.seed = s.seed;
  gen.node_budget = search_options(s).node_budget;
  const auto seeds = generate_small_algebras(sat, s.max_seed_size, gen);
  const FraisseChain chain = run_chain(sat, seeds, s.steps);
  const auto report = check_universality(chain.stages.back(), seeds);

  std::ostringstream log;
  for (size_t i = 0; i < chain.log.size(); ++i) {
    const auto& step = chain.log[i];
    log << "step " << i + 1 << ": ";
    if (step.seed < 0) {
      log << "nothing to do\n";
      continue;
    }
    log << "seed " << step.seed << " over {";
    bool first = true;
    for (const auto& [from, to] : step.over) {
      log << (first ? "" : ", ") << from << "->" << to;
      first = false;
    }
    log << "}, stage size " << chain.stages[i + 1].size() << '\n';
  }
  for (size_t i = 0; i < seeds.size(); ++i)
    log << "seed " << i << " (" << seeds[i].size() << " elements): "
        << (report.embeddings[i] ? "embeds" : "does not embed") << '\n';
  if (!s.out_dir.empty()) {
    std::filesystem::create_directories(s.out_dir);
    for (size_t i = 0; i < chain.stages.size(); ++i)
      write_file(s.out_dir + "/stage_" + std::to_string(i) + ".alg", format_algebra(chain.stages[i], s.canonicalize));
    write_file(s.out_dir + "/chain.log", log.str());
    r.witness_file = s.out_dir + "/stage_" + std::to_string(chain.stages.size() - 1) + ".alg";
  }
  r.text << log.str();
  std::vector<int> sizes;
  for (const auto& st : chain.stages) sizes.push_back(st.size());
  r.details["stage_sizes"] = sizes;
  r.details["seeds"] = seeds.size();
  r.details["log"] = log.str();
  r.verdict = report.all_embed() ? "universal" : "not-universal";
  r.code = report.all_embed() ? ok : refuted;
}

void cmd_search_amalgam(const Settings& s, Report& r) {
  need_files(s, 4, "search-amalgam <theory> <A> <B> <C>");
  const Theory th = load_theory(s.files[0]);
  const auto d = search_amalgam_on_union(th, load_triple(s, th.signature), search_options(s));
  if (!d) {
    r.verdict = "none";
    r.code = refuted;
    r.text << "no model on the union extends both sides\n";
    return;
  }
  r.verdict = "found";
  emit_algebra(s, r, *d);
}

void cmd_search_jep(const Settings& s, Report& r) {
  need_files(s, 3, "search-jep <theory> <A> <B> --max-size N");
  const Theory th = load_theory(s.files[0]);
  const auto w = search_joint_embedding(th, load_algebra(s.files[1], th.signature),
                                        load_algebra(s.files[2], th.signature), s.max_size, search_options(s));
  if (!w) {
    r.verdict = "none";
    r.code = refuted;
    r.text << "no common extension up to size " << s.max_size << '\n';
    return;
  }
  r.verdict = "found";
  r.details["from_a"] = w->from_a;
  r.details["from_b"] = w->from_b;
  emit_algebra(s, r, w->algebra);
}

void cmd_fixture(const Settings& s, Report& r) {
  if (!s.extract.empty()) {
    for (const auto& f : fixture_files()) {
      const std::filesystem::path path = std::filesystem::path(s.extract) / f.path;
      std::filesystem::create_directories(path.parent_path());
      write_file(path.string(), f.content);
    }
    r.verdict = "extracted";
    r.text << "wrote " << fixture_files().size() << " files under " << s.extract << '\n';
    return;
  }
  if (s.list || s.files.empty()) {
    json names = json::array();
    for (const auto& name : fixture_names()) {
      const Fixture fx = load_fixture(name);
      r.text << name << "  " << fx.title << '\n';
      names.push_back(name);
    }
    r.details["fixtures"] = names;
    r.verdict = "listed";
    return;
  }
  need_files(s, 1, "fixture [<name>] [--list] [--extract dir]");
  const Fixture fx = load_fixture(s.files[0]);
  const FixtureOutcome res = run_fixture(fx, search_options(s));
  r.text << fx.name << ": " << (res.pass ? "pass" : "fail") << " (" << res.detail << ")\n";
  r.details["detail"] = res.detail;
  r.verdict = res.pass ? "pass" : "fail";
  r.code = res.pass ? ok : refuted;
  if (res.witness && !s.out.empty()) {
    write_file(s.out, format_algebra(*res.witness, s.canonicalize));
    r.witness_file = s.out;
  }
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::budget_exceeded:
      return over_budget;
    case ErrorKind::invariant_violation:
      return internal;
    default:
      return bad_input;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear theories, amalgams and joint embeddings of finite algebras", "linamalg"};
  app.require_subcommand(1);
  Settings s;
  app.add_option("--report", s.report, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--budget", s.budget, "Search node budget (also LINAMALG_BUDGET)");
  app.add_option("--seed", s.seed, "Seed for randomized generation");
  app.add_flag("--canonicalize", s.canonicalize, "Emit algebras with a sorted carrier");

  struct Command {
    const char* name;
    const char* help;
    void (*fn)(const Settings&, Report&);
  };
  const std::vector<Command> commands = {
      {"classify", "Classify each axiom as nonlinear, linear or equilinear", cmd_classify},
      {"saturate", "Print the derived collapses and exceptional classes", cmd_saturate},
      {"verify", "Check that an algebra is a model", cmd_verify},
      {"amalgamate", "Strong amalgam of A and B over C", cmd_amalgamate},
      {"jep", "Common extension of A and B", cmd_jep},
      {"build-n", "A model with exactly n elements", cmd_build_n},
      {"amalgamate-hk", "Amalgam of algebras expanded by h and its inverse k", cmd_amalgamate_hk},
      {"fraisse", "Run a finite Fraisse chain over small generated algebras", cmd_fraisse},
      {"search-amalgam", "Search for any model on A union B extending both", cmd_search_amalgam},
      {"search-jep", "Search small models for a common extension", cmd_search_jep},
      {"fixture", "List, extract or run bundled fixtures", cmd_fixture},
  };
  const Command* chosen = nullptr;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->callback([&chosen, &c] { chosen = &c; });
    const std::string name = c.name;
    if (name == "build-n") {
      sub->add_option("theory", s.theory, "Theory file")->required();
      sub->add_option("n", s.n, "Carrier size")->required();
    } else {
      sub->add_option("files", s.files, "Input files");
    }
    if (name == "amalgamate" || name == "jep" || name == "build-n" || name == "amalgamate-hk" ||
        name == "search-amalgam" || name == "search-jep" || name == "fixture")
      sub->add_option("--out", s.out, "Write the resulting algebra here");
    if (name == "amalgamate" || name == "jep") sub->add_option("--policy", s.policy, "fixed[:e], max or fresh[:name]");
    if (name == "amalgamate-hk") sub->add_option("--respect", s.respect, "Operations h must commute with");
    if (name == "search-jep") sub->add_option("--max-size", s.max_size, "Largest model size scanned");
    if (name == "verify") sub->add_option("--sub", s.sub, "Also check this algebra is a subalgebra");
    if (name == "fraisse") {
      sub->add_option("--max-seed-size", s.max_seed_size, "Largest generated seed");
      sub->add_option("--steps", s.steps, "Chain length");
      sub->add_option("--count-budget", s.count_budget, "Algebras kept per size");
      sub->add_option("--out-dir", s.out_dir, "Directory for stages and the chain log");
    }
    if (name == "fixture") {
      sub->add_flag("--list", s.list, "List bundled fixtures");
      sub->add_option("--extract", s.extract, "Write bundled files under this directory");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : bad_input;
  }

  if (!s.theory.empty()) s.files = {s.theory};
  Report r;
  json inputs = s.files;
  if (!s.n.empty()) inputs.push_back(s.n);
  try {
    chosen->fn(s, r);
  } catch (const Error& e) {
    if (s.report == "json") {
      json line = {{"command", chosen->name}, {"inputs", inputs}, {"verdict", "error"}, {"witness_file", nullptr},
                   {"details", {{"error", to_string(e.kind())}, {"message", e.what()}}}};
      out << line.dump() << '\n';
    }
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return bad_input;
  }
  if (s.report == "json") {
    json line = {{"command", chosen->name}, {"inputs", inputs}, {"verdict", r.verdict},
                 {"witness_file", r.witness_file ? json(*r.witness_file) : json(nullptr)}, {"details", r.details}};
    out << line.dump() << '\n';
  } else {
    out << r.text.str();
  }
  return r.code;
}

}  // namespace linamalg::cli
