#include "linamalg/fixtures.hpp"

#include <algorithm>
#include <sstream>

#include "linamalg/amalgam.hpp"
#include "linamalg/error.hpp"
#include "linamalg/io.hpp"

namespace linamalg {

std::string fixture_text(const std::string& path) {
  for (const auto& f : fixture_files())
    if (path == f.path) return f.content;
  fail(ErrorKind::precondition, "no bundled file " + path);
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& f : fixture_files()) {
    const std::string path = f.path;
    const auto slash = path.find('/');
    if (path.substr(slash + 1) == "theory") out.push_back(path.substr(0, slash));
  }
  return out;
}

Signature with_hk(const Signature& sig) {
  Signature out = sig;
  out.add_operation("h", 1);
  out.add_operation("k", 1);
  return out;
}

Fixture load_fixture(const std::string& name) {
  const auto names = fixture_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    fail(ErrorKind::precondition, "unknown fixture " + name);
  Fixture fx;
  fx.name = name;
  const std::string theory_text = fixture_text(name + "/theory");
  if (theory_text.rfind("# ", 0) == 0) fx.title = theory_text.substr(2, theory_text.find('\n') - 2);
  fx.theory = parse_theory(theory_text);

  std::istringstream expect(fixture_text(name + "/expect"));
  std::string kind;
  expect >> kind;
  if (kind == "amalgamate") {
    fx.check = FixtureCheck::amalgamate;
  } else if (kind == "jep-refuted") {
    fx.check = FixtureCheck::jep_refuted;
    expect >> fx.max_size;
  } else if (kind == "union-refuted") {
    fx.check = FixtureCheck::union_refuted;
  } else if (kind == "amalgamate-hk") {
    fx.check = FixtureCheck::amalgamate_hk;
    std::string op;
    while (expect >> op) fx.respected.insert(op);
  } else {
    fail(ErrorKind::parse, "fixture " + name + " has an unknown expectation '" + kind + "'");
  }

  const Signature sig = fx.check == FixtureCheck::amalgamate_hk ? with_hk(fx.theory.signature) : fx.theory.signature;
  auto load = [&](const char* file) -> std::optional<FiniteAlgebra> {
    const std::string path = name + "/" + file;
    for (const auto& f : fixture_files())
      if (path == f.path) return parse_algebra(f.content, sig);
    return std::nullopt;
  };
  fx.a = load("a.alg");
  fx.b = load("b.alg");
  fx.c = load("c.alg");
  return fx;
}

FixtureOutcome run_fixture(const Fixture& fx, const SearchOptions& options) {
  auto need = [&](const std::optional<FiniteAlgebra>& alg, const char* what) -> const FiniteAlgebra& {
    if (!alg) fail(ErrorKind::precondition, "fixture " + fx.name + " has no " + what);
    return *alg;
  };
  FixtureOutcome out;
  switch (fx.check) {
    case FixtureCheck::amalgamate: {
      const auto sat = saturate(LinearTheory(fx.theory));
      Amalgam d = amalgamate(sat, {need(fx.a, "A"), need(fx.b, "B"), need(fx.c, "C")});
      const int expected = fx.a->size() + fx.b->size() - fx.c->size();
      out.pass = d.verified && d.algebra.size() == expected;
      out.detail = "amalgam on " + std::to_string(d.algebra.size()) + " elements, " +
                   (d.verified ? "verified" : "not verified");
      out.witness = std::move(d.algebra);
      break;
    }
    case FixtureCheck::jep_refuted: {
      auto w = search_joint_embedding(fx.theory, need(fx.a, "A"), need(fx.b, "B"), fx.max_size, options);
      out.pass = !w;
      out.detail = w ? "common extension found on " + std::to_string(w->algebra.size()) + " elements"
                     : "no common extension up to size " + std::to_string(fx.max_size);
      if (w) out.witness = std::move(w->algebra);
      break;
    }
    case FixtureCheck::union_refuted: {
      auto w = search_amalgam_on_union(fx.theory, {need(fx.a, "A"), need(fx.b, "B"), need(fx.c, "C")}, options);
      out.pass = !w;
      out.detail = w ? "found a model on the union" : "no model on the union extends both sides";
      out.witness = std::move(w);
      break;
    }
    case FixtureCheck::amalgamate_hk: {
      const auto sat = saturate(LinearTheory(fx.theory));
      Amalgam d = amalgamate_hk(sat, {need(fx.a, "A"), need(fx.b, "B"), need(fx.c, "C")}, fx.respected);
      out.pass = d.verified && !hk_violation(d.algebra, fx.respected);
      out.detail = "expanded amalgam on " + std::to_string(d.algebra.size()) + " elements, " +
                   (out.pass ? "verified" : "not verified");
      out.witness = std::move(d.algebra);
      break;
    }
  }
  return out;
}

}  // namespace linamalg
