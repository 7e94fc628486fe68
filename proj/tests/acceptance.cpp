// Acceptance suite: one PASS/FAIL line per criterion. Time limits and
// sample sizes are fixed below; the process exits nonzero on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "linamalg/amalgam.hpp"
#include "linamalg/error.hpp"
#include "linamalg/fixtures.hpp"
#include "linamalg/fraisse.hpp"
#include "linamalg/io.hpp"
#include "oracles.hpp"

using namespace linamalg;

namespace {

constexpr double kFastLimit = 1.0;         // seconds, criteria 1-3
constexpr double kRandomLimit = 300.0;     // criterion 4
constexpr double kRefuteLimit = 30.0;      // criterion 7, per fixture
constexpr double kChainLimit = 60.0;       // criterion 10
constexpr int kTriplesPerVariety = 200;
constexpr int kMaxTripleSize = 4;
constexpr std::uint64_t kRandomSeed = 20240611;
constexpr int kJepMaxSize = 3;
constexpr int kBuildMaxN = 6;
constexpr int kRefuteMaxSize = 4;
constexpr int kChainSteps = 5;

const std::vector<std::string> kVarieties = {"maltsev", "pixley", "near-unanimity-3",
                                             "day-2", "jonsson-3", "hagemann-mitschke-3"};

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Thrown by `require` to end a criterion early.
struct Failed {
  std::string why;
};

void require(bool cond, const std::string& why) {
  if (!cond) throw Failed{why};
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SaturatedTheory sat_of(const Theory& th) { return saturate(LinearTheory(th)); }
SaturatedTheory sat_of(const std::string& text) { return sat_of(parse_theory(text)); }

std::string entry(const FiniteAlgebra& d, const std::string& op, const std::vector<std::string>& args) {
  std::vector<int> idx;
  for (const auto& a : args) idx.push_back(*d.index_of(a));
  return d.name(d.apply(d.signature().op_index(op), idx));
}

// Counters shared by criteria 4 and 11.
AmalgamStats g_random_stats;
bool g_random_ran = false;
int g_random_violations = 0;

Outcome closure_example() {
  const auto sat = sat_of("signature: f/4, g/4\naxioms:\n  f(x,x,y,z) = g(x,x,y,z)\n  g(x,x,y,y) = y\n");
  require(sat.is_valid_flat(parse_equation("f(x,x,y,y) = y")), "f(x,x,y,y) = y not derived");
  require(!sat.is_trivial(), "theory reported trivial");
  return {true, "f(x,x,y,y) = y derived"};
}

Outcome equilinear_consequence() {
  const auto sat = sat_of("signature: f/3\naxioms:\n  x = f(x,y,y)\n");
  require(sat.is_valid_flat(parse_equation("f(x,y,y) = f(x,z,z)")), "f(x,y,y) = f(x,z,z) not valid");
  return {true, "f(x,y,y) = f(x,z,z) valid"};
}

Outcome maltsev_triple() {
  const Fixture fx = load_fixture("maltsev");
  const auto sat = sat_of(fx.theory);
  const AmalgamationInput inp{*fx.a, *fx.b, *fx.c};
  const Amalgam d = amalgamate(sat, inp);
  const auto& alg = d.algebra;
  require(alg.carrier() == std::vector<std::string>({"0", "a", "b"}), "carrier is not A ∪ B");
  require(d.verified, "post-verification skipped");
  require(oracle::agrees_on(alg, *fx.a) && oracle::agrees_on(alg, *fx.b), "does not extend A and B");
  require(alg.table(0).size() == 27, "expected 27 entries");
  require(oracle::models(alg, fx.theory.axioms), "not a Maltsev algebra");
  const std::string dflt = fx.c->name(0);
  require(entry(alg, "f", {"a", "b", "b"}) == "a", "f(a,b,b) != a");
  require(entry(alg, "f", {"a", "a", "b"}) == "b", "f(a,a,b) != b");
  require(entry(alg, "f", {"a", "b", "a"}) == dflt, "f(a,b,a) is not the default");
  return {true, "27 entries, f(a,b,b)=a f(a,a,b)=b f(a,b,a)=" + dflt};
}

Outcome random_triples() {
  std::mt19937_64 rng(kRandomSeed);
  std::ostringstream detail;
  int total = 0;
  for (const auto& name : kVarieties) {
    const Fixture fx = load_fixture(name);
    const auto sat = sat_of(fx.theory);
    for (int i = 0; i < kTriplesPerVariety; ++i) {
      const AmalgamationInput inp = oracle::random_triple(fx.theory, rng, kMaxTripleSize);
      Amalgam d{singleton(fx.theory.signature, "e0"), false, {}};
      try {
        d = amalgamate(sat, inp);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::invariant_violation) ++g_random_violations;
        throw Failed{name + " triple " + std::to_string(i) + ": " + e.what()};
      }
      require(d.verified, name + ": verification skipped");
      require(static_cast<int>(d.algebra.size()) == inp.a.size() + inp.b.size() - inp.c.size(),
              name + ": carrier is not the union");
      require(oracle::agrees_on(d.algebra, inp.a) && oracle::agrees_on(d.algebra, inp.b), name + ": not an extension");
      require(oracle::models(d.algebra, fx.theory.axioms), name + ": not a model");
      g_random_stats.agreement_checks += d.stats.agreement_checks;
      g_random_stats.padding_checks += d.stats.padding_checks;
      g_random_stats.entries += d.stats.entries;
      ++total;
    }
  }
  g_random_ran = true;
  detail << total << " triples over " << kVarieties.size() << " varieties, " << g_random_stats.entries
         << " entries";
  return {true, detail.str()};
}

Outcome joint_embedding() {
  long pairs = 0;
  for (const auto& name : kVarieties) {
    const Fixture fx = load_fixture(name);
    const auto sat = sat_of(fx.theory);
    require(sat.base().equilinear_without_constants(), name + " is not equilinear");
    const auto family = generate_small_algebras(sat, kJepMaxSize);
    for (const auto& a : family)
      for (const auto& b : family) {
        const JointEmbedding j = joint_embed(sat, a, b);
        require(j.amalgam.verified, name + ": unverified joint embedding");
        require(is_embedding(j.from_a, a, j.amalgam.algebra) && is_embedding(j.from_b, b, j.amalgam.algebra),
                name + ": maps are not embeddings");
        require(oracle::models(j.amalgam.algebra, fx.theory.axioms), name + ": not a model");
        ++pairs;
      }
  }
  return {true, std::to_string(pairs) + " pairs"};
}

Outcome build_n() {
  int built = 0;
  for (const auto& name : fixture_names()) {
    const Fixture fx = load_fixture(name);
    Theory th = fx.theory;
    bool linear = true;
    for (const auto& eq : th.axioms) linear = linear && classify_equation(th.signature, eq) != Linearity::nonlinear;
    if (!linear) continue;
    const auto sat = sat_of(th);
    if (sat.is_trivial()) continue;
    for (int n = 1; n <= kBuildMaxN; ++n) {
      const FiniteAlgebra d = build_n_element(sat, n);
      require(d.size() == n, name + ": wrong size");
      require(oracle::models(d, th.axioms), name + ": n=" + std::to_string(n) + " is not a model");
      ++built;
    }
  }
  return {true, std::to_string(built) + " algebras"};
}

Outcome refutations() {
  std::ostringstream detail;
  for (const char* name : {"remark-4-1a", "remark-4-1b"}) {
    const Fixture fx = load_fixture(name);
    const auto t0 = Clock::now();
    const bool none = !search_joint_embedding(fx.theory, *fx.a, *fx.b, kRefuteMaxSize);
    const double s = seconds_since(t0);
    require(none, std::string(name) + ": a common extension was found");
    require(s < kRefuteLimit, std::string(name) + ": too slow");
    detail << name << " " << s << "s; ";
  }
  const Fixture fx = load_fixture("example-5-3");
  const auto t0 = Clock::now();
  const bool none = !search_amalgam_on_union(fx.theory, {*fx.a, *fx.b, *fx.c});
  const double s = seconds_since(t0);
  require(none, "example-5-3: a model on the union was found");
  require(s < kRefuteLimit, "example-5-3: too slow");
  detail << "example-5-3 " << s << "s";
  return {true, detail.str()};
}

bool hk_holds_exhaustively(const FiniteAlgebra& d, const std::set<std::string>& respected) {
  const auto& sig = d.signature();
  auto H = [&](int x) { return d.table(sig.op_index("h"))[x]; };
  auto K = [&](int x) { return d.table(sig.op_index("k"))[x]; };
  for (int x = 0; x < d.size(); ++x)
    if (K(H(x)) != x || H(K(x)) != x) return false;
  for (const auto& [c, v] : d.constants())
    if (H(v) != v) return false;
  for (const auto& f : respected) {
    const int arity = sig.arity(f);
    std::vector<int> args(arity), moved(arity);
    for (std::int64_t t = 0; t < table_size(d.size(), arity); ++t) {
      tuple_at(t, d.size(), args);
      for (int i = 0; i < arity; ++i) moved[i] = H(args[i]);
      if (H(d.apply(sig.op_index(f), args)) != d.apply(sig.op_index(f), moved)) return false;
    }
  }
  return true;
}

Outcome hk_suite() {
  const Fixture fx = load_fixture("maltsev-hk");
  const auto sat = sat_of(fx.theory);
  const Amalgam d = amalgamate_hk(sat, {*fx.a, *fx.b, *fx.c}, fx.respected);
  require(hk_holds_exhaustively(d.algebra, fx.respected), "maltsev-hk: h/k laws fail");
  require(oracle::agrees_on(d.algebra, *fx.a) && oracle::agrees_on(d.algebra, *fx.b), "maltsev-hk: not an extension");
  require(oracle::models(d.algebra.reduct(fx.theory.signature), fx.theory.axioms), "maltsev-hk: reduct not a model");

  // h = k = identity on the plain Maltsev triple.
  const Fixture m = load_fixture("maltsev");
  const Signature full = with_hk(m.theory.signature);
  auto expand = [&](const FiniteAlgebra& alg) {
    std::vector<int> id(alg.size());
    for (int i = 0; i < alg.size(); ++i) id[i] = i;
    std::vector<std::vector<int>> tables;
    for (const auto& op : full.op_names())
      tables.push_back(op == "h" || op == "k" ? id : alg.table(m.theory.signature.op_index(op)));
    return FiniteAlgebra(full, alg.carrier(), tables, alg.constants());
  };
  const Amalgam e = amalgamate_hk(sat_of(m.theory), {expand(*m.a), expand(*m.b), expand(*m.c)}, {"f"});
  require(hk_holds_exhaustively(e.algebra, {"f"}), "identity case: h/k laws fail");
  for (int x = 0; x < e.algebra.size(); ++x)
    require(e.algebra.table(full.op_index("h"))[x] == x, "identity case: h is not the identity");
  return {true, std::to_string(d.algebra.size()) + " and " + std::to_string(e.algebra.size()) + " elements"};
}

Outcome soundness() {
  std::vector<std::pair<std::string, Theory>> theories = {
      {"closure example", parse_theory("signature: f/4, g/4\naxioms:\n  f(x,x,y,z) = g(x,x,y,z)\n  g(x,x,y,y) = y\n")},
      {"equilinear example", parse_theory("signature: f/3\naxioms:\n  x = f(x,y,y)\n")},
  };
  for (const auto& name : fixture_names()) {
    const Fixture fx = load_fixture(name);
    bool linear = true;
    for (const auto& eq : fx.theory.axioms)
      linear = linear && classify_equation(fx.theory.signature, eq) != Linearity::nonlinear;
    if (linear) theories.emplace_back(name, fx.theory);
  }
  long checked = 0, models = 0;
  for (const auto& [name, th] : theories) {
    const auto sat = sat_of(th);
    std::vector<FiniteAlgebra> ms = enumerate_models(th, 2);
    if (th.signature.max_arity() <= 2) {
      auto three = enumerate_models(th, 3);
      ms.insert(ms.end(), three.begin(), three.end());
    }
    models += static_cast<long>(ms.size());
    std::vector<Equation> claims = sat.derived_equations();
    // Collapse and exceptional verdicts, restated as equations.
    for (const auto& [op, arity] : th.signature.operations()) {
      for (const auto& p : all_patterns(op, arity, th.signature.constant_names())) {
        const Term t = p.as_term();
        if (auto c = sat.collapse_target(p))
          claims.push_back({t, c->is_constant ? Term::constant(c->constant) : Term::var(class_var_name(c->var_class))});
        for (int cls : sat.exceptional_variables(p))
          claims.push_back({t, substitute(t, {{class_var_name(cls), Term::var("fresh_var")}})});
      }
    }
    for (const auto& eq : claims) {
      const oracle::CompiledEquation compiled(th.signature, eq);
      for (const auto& m : ms) {
        require(oracle::holds(m, compiled), name + ": " + eq.str() + " fails in a model");
        ++checked;
      }
    }
  }
  return {true, std::to_string(theories.size()) + " theories, " + std::to_string(models) + " models, " +
                    std::to_string(checked) + " checks"};
}

Outcome fraisse_chain() {
  const Theory th = load_fixture("maltsev").theory;
  const auto sat = sat_of(th);
  const auto seeds = generate_small_algebras(sat, 2);
  const FraisseChain one = run_chain(sat, seeds, kChainSteps);
  const FraisseChain two = run_chain(sat, generate_small_algebras(sat, 2), kChainSteps);
  require(one.stages == two.stages, "chain is not deterministic");
  const FiniteAlgebra& last = one.stages.back();
  require(oracle::models(last, th.axioms), "final stage is not a model");
  const auto all2 = oracle::all_models(th, 2);
  for (const auto& m : all2) require(oracle::embeds(m, last), "a 2-element Maltsev algebra does not embed");
  return {true, "final stage " + std::to_string(last.size()) + " elements, " + std::to_string(all2.size()) +
                    " two-element tables embed"};
}

Outcome assertions_quiet() {
  require(g_random_ran, "randomized suite did not complete");
  require(g_random_violations == 0, "an agreement assertion fired");
  require(g_random_stats.agreement_checks > 0, "no agreement checks ran");
  require(g_random_stats.padding_checks > 0, "no padding checks ran");
  return {true, std::to_string(g_random_stats.agreement_checks) + " agreement and " +
                    std::to_string(g_random_stats.padding_checks) + " padding checks"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit;  // seconds; 0 means no time limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "closure example", kFastLimit, closure_example},
      {2, "equilinear consequence", kFastLimit, equilinear_consequence},
      {3, "maltsev amalgam", kFastLimit, maltsev_triple},
      {4, "randomized amalgams", kRandomLimit, random_triples},
      {5, "joint embedding of small algebras", 0, joint_embedding},
      {6, "n-element models", 0, build_n},
      {7, "counterexample refutations", 0, refutations},
      {8, "h/k expansion", 0, hk_suite},
      {9, "saturation soundness", 0, soundness},
      {10, "fraisse chain", kChainLimit, fraisse_chain},
      {11, "agreement and padding assertions", 0, assertions_quiet},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const Failed& f) {
      out = {false, f.why};
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double s = seconds_since(t0);
    if (out.pass && c.limit > 0 && s >= c.limit) out = {false, out.detail + "; over the time limit"};
    char timing[64];
    if (c.limit > 0) std::snprintf(timing, sizeof timing, "%.3fs < %.0fs", s, c.limit);
    else std::snprintf(timing, sizeof timing, "%.3fs", s);
    std::cout << (out.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " (" << timing << "): "
              << out.detail << std::endl;
    failures += !out.pass;
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << criteria.size() - failures << "/" << criteria.size()
            << std::endl;
  return failures ? 1 : 0;
}
