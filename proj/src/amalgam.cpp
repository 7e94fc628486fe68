#include "linamalg/amalgam.hpp"

#include <algorithm>
#include <limits>

#include "linamalg/error.hpp"

namespace linamalg {

std::set<std::string> AssociatedTerm::ordinary_elements() const {
  std::set<std::string> out;
  for (int i : ordinary) out.insert(class_elements[i]);
  return out;
}

ValidatedTriple validate_triple(const SaturatedTheory& sat, const AmalgamationInput& inp) {
  const auto& sig = sat.base().signature();
  for (const auto* alg : {&inp.a, &inp.b, &inp.c})
    if (!(alg->signature() == sig)) fail(ErrorKind::signature_mismatch, "algebra signature differs from the theory");
  if (!is_subalgebra(inp.c, inp.a)) fail(ErrorKind::subalgebra_failure, "C is not a subalgebra of A");
  if (!is_subalgebra(inp.c, inp.b)) fail(ErrorKind::subalgebra_failure, "C is not a subalgebra of B");
  for (const auto& e : inp.a.carrier())
    if (inp.b.contains(e) && !inp.c.contains(e))
      fail(ErrorKind::overlap_mismatch, "element " + e + " lies in A and B but not in C");

  ValidatedTriple out{inp, {}};
  const auto consts = sig.constant_names();
  for (size_t i = 0; i < consts.size(); ++i) {
    for (size_t j = i + 1; j < consts.size(); ++j) {
      const bool merged = sat.merged_constant_rep(consts[i]) == sat.merged_constant_rep(consts[j]);
      const bool equal = inp.c.constant(consts[i]) == inp.c.constant(consts[j]);
      if (merged && !equal && !sat.is_trivial())
        fail(ErrorKind::constant_clash, "'" + consts[i] + " and '" + consts[j] + " are equal in the theory but not in C");
      if (equal && !merged) out.constant_merges.emplace_back(consts[i], consts[j]);
    }
  }
  for (const auto* alg : {&inp.a, &inp.b}) {
    if (auto bad = first_failing_axiom(*alg, sat.base().theory()))
      fail(ErrorKind::not_a_model, std::string(alg == &inp.a ? "A" : "B") + " fails " + bad->str());
  }
  return out;
}

namespace {

AssociatedTerm shape_of(const std::string& op, const std::vector<std::string>& tuple,
                        const std::map<std::string, std::string>& const_elems) {
  std::vector<Slot> slots;
  std::vector<std::string> elems;
  for (const auto& e : tuple) {
    if (auto it = const_elems.find(e); it != const_elems.end()) {
      slots.push_back(Slot::constant_slot(it->second));
      continue;
    }
    auto pos = std::find(elems.begin(), elems.end(), e);
    if (pos == elems.end()) {
      elems.push_back(e);
      pos = elems.end() - 1;
    }
    slots.push_back(Slot::var(static_cast<int>(pos - elems.begin())));
  }
  return {Pattern(op, std::move(slots)), std::move(elems), {}, {}};
}

void split_classes(AssociatedTerm& at, std::set<int> exceptional) {
  at.exceptional = std::move(exceptional);
  at.ordinary.clear();
  for (int i = 0; i < at.pattern.num_classes(); ++i)
    if (!at.exceptional.count(i)) at.ordinary.push_back(i);
}

}  // namespace

AssociatedTerm associate_term(const SaturatedTheory& sat, const std::string& op,
                              const std::vector<std::string>& tuple,
                              const std::map<std::string, std::string>& const_elems) {
  if (static_cast<int>(tuple.size()) != sat.base().signature().arity(op))
    fail(ErrorKind::signature_mismatch, "wrong tuple length for " + op);
  AssociatedTerm at = shape_of(op, tuple, const_elems);
  split_classes(at, sat.is_trivial() ? std::set<int>{} : sat.exceptional_variables(at.pattern));
  return at;
}

namespace {

// Lookups shared by every entry of one construction.
class Forcing {
 public:
  Forcing(const SaturatedTheory& sat, const FiniteAlgebra& a, const FiniteAlgebra& b, const FiniteAlgebra* c)
      : sat_(sat), a_(a), b_(b), c_(c) {
    if (c_) {
      for (const auto& [name, v] : c_->constants()) {
        const_elem_[name] = c_->name(v);
        // Merged constants share an element; the least name stands for all.
        elem_const_.emplace(c_->name(v), name);
      }
    }
  }

  const std::map<std::string, std::string>& const_elems() const { return elem_const_; }

  AssociatedTerm associate(const std::string& op, const std::vector<std::string>& tuple) {
    AssociatedTerm at = shape_of(op, tuple, elem_const_);
    split_classes(at, lookup(at.pattern).exceptional);
    return at;
  }

  /// `d` empty disables evaluation inside a side, as when there is no C.
  ForcedValue force(const AssociatedTerm& at, const std::string& d, const std::string& d2, AmalgamStats* stats) {
    ForcedValue out;
    const Info& info = lookup(at.pattern);
    if (info.collapse) {
      out.by_collapse = true;
      out.value = info.collapse->is_constant ? const_elem_.at(info.collapse->constant)
                                             : at.class_elements[info.collapse->var_class];
    }
    if (d.empty()) return out;
    auto side = evaluate_in_side(at, d);
    if (!side) return out;
    out.by_side = true;
    if (!d2.empty() && !at.exceptional.empty()) {
      if (stats) ++stats->padding_checks;
      if (evaluate_in_side(at, d2) != side)
        fail(ErrorKind::invariant_violation, "value of " + at.pattern.str() + " depends on the padding element");
    }
    if (out.value) {
      if (stats) ++stats->agreement_checks;
      if (*out.value != *side)
        fail(ErrorKind::invariant_violation, "collapse and side evaluation disagree on " + at.pattern.str());
    }
    out.value = side;
    return out;
  }

 private:
  struct Info {
    std::optional<CollapseTarget> collapse;
    std::set<int> exceptional;
  };

  const Info& lookup(const Pattern& p) {
    auto it = cache_.find(p);
    if (it != cache_.end()) return it->second;
    Info info{sat_.collapse_target(p), sat_.exceptional_variables(p)};
    return cache_.emplace(p, std::move(info)).first->second;
  }

  std::optional<std::string> evaluate_in_side(const AssociatedTerm& at, const std::string& d) const {
    const auto ord = at.ordinary_elements();
    for (const FiniteAlgebra* side : {&a_, &b_}) {
      if (!std::all_of(ord.begin(), ord.end(), [&](const std::string& e) { return side->contains(e); })) continue;
      std::vector<int> args;
      for (const auto& s : at.pattern.slots()) {
        if (s.is_constant()) args.push_back(side->constant(s.constant));
        else args.push_back(*side->index_of(at.exceptional.count(s.var_class) ? d : at.class_elements[s.var_class]));
      }
      return side->name(side->apply(side->signature().op_index(at.pattern.op()), args));
    }
    return std::nullopt;
  }

  const SaturatedTheory& sat_;
  const FiniteAlgebra& a_;
  const FiniteAlgebra& b_;
  const FiniteAlgebra* c_;
  std::map<std::string, std::string> const_elem_;
  std::map<std::string, std::string> elem_const_;
  std::map<Pattern, Info> cache_;
};

std::string unused_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int k = 1;; ++k) {
    std::string name = base + std::to_string(k);
    if (!taken.count(name)) return name;
  }
}

// The construction proper. `sat` already identifies every constant pair
// that C identifies; `c` is null for the disjoint joint-embedding case.
Amalgam construct(const SaturatedTheory& sat, const FiniteAlgebra& a, const FiniteAlgebra& b, const FiniteAlgebra* c,
                  const DefaultPolicy& policy, const AmalgamOptions& options) {
  std::vector<std::string> carrier = a.carrier();
  for (const auto& e : b.carrier())
    if (!a.contains(e)) carrier.push_back(e);
  std::set<std::string> taken(carrier.begin(), carrier.end());
  for (const auto& e : options.extra_elements) {
    if (!taken.insert(e).second) fail(ErrorKind::precondition, "extra element " + e + " is already in A or B");
    carrier.push_back(e);
  }

  std::string default_value;
  switch (policy.kind) {
    case DefaultPolicy::Kind::fresh_element:
      if (policy.element && taken.count(*policy.element))
        fail(ErrorKind::precondition, "fresh element " + *policy.element + " is already in use");
      default_value = policy.element ? *policy.element : unused_name("_fresh", taken);
      carrier.push_back(default_value);
      break;
    case DefaultPolicy::Kind::fixed_element:
      default_value = policy.element ? *policy.element : (c ? c->name(0) : a.name(0));
      if (!taken.count(default_value))
        fail(ErrorKind::precondition, "default element " + default_value + " is not in the amalgam");
      break;
    default:
      default_value = c ? c->name(0) : a.name(0);
      break;
  }

  const int n = static_cast<int>(carrier.size());
  std::map<std::string, int> pos;
  for (int i = 0; i < n; ++i) pos[carrier[i]] = i;
  std::vector<int> in_a(n, -1), in_b(n, -1);
  for (int i = 0; i < n; ++i) {
    if (auto k = a.index_of(carrier[i])) in_a[i] = *k;
    if (auto k = b.index_of(carrier[i])) in_b[i] = *k;
  }

  const std::string d = c ? c->name(0) : std::string();
  const std::string d2 = c && c->size() >= 2 ? c->name(1) : std::string();
  Forcing forcing(sat, a, b, c);
  Amalgam result{singleton(a.signature(), carrier[0]), false, {}};
  auto& stats = result.stats;

  auto pick_default = [&](const std::set<std::string>& elems) -> std::string {
    switch (policy.kind) {
      case DefaultPolicy::Kind::max_under_order: {
        if (elems.empty()) return default_value;
        return *std::max_element(elems.begin(), elems.end(),
                                 [&](const std::string& x, const std::string& y) { return pos[x] < pos[y]; });
      }
      case DefaultPolicy::Kind::custom: {
        auto it = policy.eta.find(elems);
        if (it == policy.eta.end()) {
          std::string s;
          for (const auto& e : elems) s += (s.empty() ? "" : ",") + e;
          fail(ErrorKind::policy_partial, "custom default has no value for {" + s + "}");
        }
        if (!pos.count(it->second)) fail(ErrorKind::precondition, "custom default " + it->second + " is not in the amalgam");
        return it->second;
      }
      default:
        return default_value;
    }
  };

  const auto& sig = a.signature();
  const auto ops = sig.op_names();
  std::vector<std::vector<int>> tables;
  for (size_t o = 0; o < ops.size(); ++o) {
    const int arity = sig.arity(ops[o]);
    std::vector<int> table(table_size(n, arity));
    std::vector<int> args(arity), side_args(arity);
    std::vector<std::string> names(arity);
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(table.size()); ++t) {
      ++stats.entries;
      tuple_at(t, n, args);
      bool all_a = true, all_b = true;
      for (int k = 0; k < arity; ++k) {
        names[k] = carrier[args[k]];
        all_a = all_a && in_a[args[k]] >= 0;
        all_b = all_b && in_b[args[k]] >= 0;
      }
      const AssociatedTerm at = forcing.associate(ops[o], names);
      const ForcedValue forced = forcing.force(at, d, d2, &stats);
      if (all_a || all_b) {
        const FiniteAlgebra& side = all_a ? a : b;
        const auto& map = all_a ? in_a : in_b;
        for (int k = 0; k < arity; ++k) side_args[k] = map[args[k]];
        const std::string& v = side.name(side.apply(static_cast<int>(o), side_args));
        ++stats.from_sides;
        if (forced.value) {
          ++stats.agreement_checks;
          if (*forced.value != v)
            fail(ErrorKind::invariant_violation, "forced value of " + ops[o] + " disagrees with an input table");
        }
        table[t] = pos[v];
        continue;
      }
      if (forced.value) {
        if (forced.by_collapse) ++stats.by_collapse;
        if (forced.by_side) ++stats.by_side;
        table[t] = pos[*forced.value];
        continue;
      }
      ++stats.defaulted;
      table[t] = pos[pick_default(at.ordinary_elements())];
    }
    tables.push_back(std::move(table));
  }
  std::map<std::string, int> consts;
  if (c)
    for (const auto& [name, v] : c->constants()) consts[name] = pos[c->name(v)];
  result.algebra = FiniteAlgebra(sig, std::move(carrier), std::move(tables), std::move(consts));

  const double cost = static_cast<double>(table_size(n, sig.max_arity())) * static_cast<double>(ops.size());
  if (cost <= static_cast<double>(options.verify_limit)) {
    if (!extends(result.algebra, a) || !extends(result.algebra, b))
      fail(ErrorKind::invariant_violation, "amalgam does not extend its inputs");
    if (auto bad = first_failing_axiom(result.algebra, sat.base().theory()))
      fail(ErrorKind::invariant_violation, "amalgam fails " + bad->str());
    result.verified = true;
  }
  return result;
}

}  // namespace

ForcedValue forced_value(const SaturatedTheory& sat, const AssociatedTerm& at, const AmalgamationInput& inp,
                         const std::string& d) {
  if (!inp.c.contains(d)) fail(ErrorKind::precondition, "padding element " + d + " is not in C");
  Forcing forcing(sat, inp.a, inp.b, &inp.c);
  return forcing.force(at, d, {}, nullptr);
}

Amalgam amalgamate(const SaturatedTheory& sat, const AmalgamationInput& inp, const DefaultPolicy& policy,
                   const AmalgamOptions& options) {
  const ValidatedTriple v = validate_triple(sat, inp);
  if (sat.is_trivial()) return {inp.c, true, {}};
  if (!v.constant_merges.empty()) {
    const SaturatedTheory merged = sat.with_merged_constants(v.constant_merges);
    if (merged.is_trivial()) return {inp.c, true, {}};
    return construct(merged, inp.a, inp.b, &inp.c, policy, options);
  }
  return construct(sat, inp.a, inp.b, &inp.c, policy, options);
}

std::optional<std::string> jep_obstruction(const SaturatedTheory& sat) {
  if (sat.is_trivial() || sat.base().equilinear_without_constants()) return std::nullopt;
  const auto& sig = sat.base().signature();
  const auto consts = sig.constant_names();
  if (consts.empty()) {
    const auto bad = sat.base().first_non_equilinear();
    return "axiom " + (bad ? bad->str() : std::string("?")) + " is not equilinear";
  }
  if (consts.size() > 1) return std::string("the language has more than one constant");
  for (const auto& [op, arity] : sig.operations()) {
    const Term cc = Term::app(op, std::vector<Term>(arity, Term::constant(consts.front())));
    if (!sat.is_valid_flat({cc, Term::constant(consts.front())}))
      return cc.str() + " = '" + consts.front() + " is not valid";
  }
  return std::nullopt;
}

JointEmbedding joint_embed(const SaturatedTheory& sat, const FiniteAlgebra& a, const FiniteAlgebra& b,
                           const DefaultPolicy& policy) {
  const auto& sig = sat.base().signature();
  for (const auto* alg : {&a, &b}) {
    if (!(alg->signature() == sig)) fail(ErrorKind::signature_mismatch, "algebra signature differs from the theory");
    if (auto bad = first_failing_axiom(*alg, sat.base().theory()))
      fail(ErrorKind::not_a_model, std::string(alg == &a ? "A" : "B") + " fails " + bad->str());
  }
  ElementMap from_a;
  for (const auto& e : a.carrier()) from_a[e] = e;

  if (sat.is_trivial()) {
    ElementMap from_b{{b.name(0), a.name(0)}};
    return {{a, true, {}}, from_a, from_b};
  }

  std::set<std::string> taken(a.carrier().begin(), a.carrier().end());
  taken.insert(b.carrier().begin(), b.carrier().end());
  ElementMap from_b;
  auto rename_rest = [&] {
    for (const auto& e : b.carrier()) {
      if (from_b.count(e)) continue;
      if (!a.contains(e)) {
        from_b[e] = e;
        continue;
      }
      std::string fresh;
      for (int k = 1;; ++k) {
        fresh = e + "_" + std::to_string(k);
        if (!taken.count(fresh)) break;
      }
      taken.insert(fresh);
      from_b[e] = fresh;
    }
  };

  if (sat.base().equilinear_without_constants()) {
    rename_rest();
    const FiniteAlgebra b2 = b.renamed(from_b);
    return {construct(sat, a, b2, nullptr, policy, {}), from_a, from_b};
  }

  if (auto why = jep_obstruction(sat)) fail(ErrorKind::jep_unsupported, *why);
  const std::string c = sig.constant_names().front();
  const std::string& ca = a.name(a.constant(c));
  from_b[b.name(b.constant(c))] = ca;
  taken.insert(ca);
  rename_rest();
  const FiniteAlgebra b2 = b.renamed(from_b);
  const FiniteAlgebra base = subalgebra_on(a, {ca});
  return {amalgamate(sat, {a, b2, base}, policy), from_a, from_b};
}

FiniteAlgebra build_n_element(const SaturatedTheory& sat, int n) {
  const auto& sig = sat.base().signature();
  if (n < 1) fail(ErrorKind::precondition, "algebras need at least one element");
  if (n == 1) return singleton(sig, "e0");
  if (sat.is_trivial()) fail(ErrorKind::precondition, "a trivial theory has only one-element models");

  const auto consts = sig.constant_names();
  std::vector<std::pair<std::string, std::string>> all_merged;
  for (size_t i = 1; i < consts.size(); ++i) all_merged.emplace_back(consts[0], consts[i]);
  const bool singleton_seed = all_merged.empty() || !sat.with_merged_constants(all_merged).is_trivial();

  std::optional<FiniteAlgebra> seed;
  if (singleton_seed) {
    seed = singleton(sig, "e0");
  } else {
    // Some constants must stay apart, so start from the smallest model found.
    for (int k = 2; k <= n && !seed; ++k)
      seed = find_model(sat.base().theory(), PartialAlgebra::empty(sig, default_carrier(k)));
    if (!seed) fail(ErrorKind::precondition, "no model with at most " + std::to_string(n) + " elements");
  }
  if (seed->size() == n) return *seed;
  AmalgamOptions options;
  for (int k = seed->size(); k < n; ++k) options.extra_elements.push_back("e" + std::to_string(k));
  options.verify_limit = std::numeric_limits<std::int64_t>::max();
  Amalgam out = amalgamate(sat, {*seed, *seed, *seed}, DefaultPolicy::fixed(seed->name(0)), options);
  return out.algebra;
}

std::optional<std::string> hk_violation(const FiniteAlgebra& alg, const std::set<std::string>& respected) {
  const auto& sig = alg.signature();
  if (!sig.has_operation("h") || !sig.has_operation("k") || sig.arity("h") != 1 || sig.arity("k") != 1)
    fail(ErrorKind::signature_mismatch, "expanded algebras need unary h and k");
  const int h = sig.op_index("h"), k = sig.op_index("k");
  auto H = [&](int x) { return alg.table(h)[x]; };
  auto K = [&](int x) { return alg.table(k)[x]; };
  for (int x = 0; x < alg.size(); ++x) {
    if (K(H(x)) != x) return "k(h(" + alg.name(x) + ")) differs from " + alg.name(x);
    if (H(K(x)) != x) return "h(k(" + alg.name(x) + ")) differs from " + alg.name(x);
  }
  for (const auto& [c, v] : alg.constants())
    if (H(v) != v) return "h moves the constant '" + c;
  const int n = alg.size();
  for (const auto& f : respected) {
    if (!sig.has_operation(f) || f == "h" || f == "k")
      fail(ErrorKind::signature_mismatch, "cannot respect unknown operation " + f);
    const int op = sig.op_index(f);
    const int arity = sig.arity(f);
    std::vector<int> args(arity), moved(arity);
    for (std::int64_t t = 0; t < table_size(n, arity); ++t) {
      tuple_at(t, n, args);
      for (int i = 0; i < arity; ++i) moved[i] = H(args[i]);
      if (H(alg.apply(op, args)) != alg.apply(op, moved)) {
        std::string s;
        for (int i = 0; i < arity; ++i) s += (i ? "," : "") + alg.name(args[i]);
        return "h does not commute with " + f + " at (" + s + ")";
      }
    }
  }
  return std::nullopt;
}

Amalgam amalgamate_hk(const SaturatedTheory& sat, const AmalgamationInput& inp, const std::set<std::string>& respected) {
  const auto& base_sig = sat.base().signature();
  if (base_sig.has_operation("h") || base_sig.has_operation("k"))
    fail(ErrorKind::precondition, "the base theory already uses h or k");
  const Signature& full = inp.a.signature();
  if (!(full.without({"h", "k"}) == base_sig))
    fail(ErrorKind::signature_mismatch, "expanded signature must be the theory's plus h and k");
  for (const auto* alg : {&inp.a, &inp.b, &inp.c}) {
    if (!(alg->signature() == full)) fail(ErrorKind::signature_mismatch, "inputs use different signatures");
    if (auto why = hk_violation(*alg, respected)) fail(ErrorKind::precondition, *why);
  }
  if (!is_subalgebra(inp.c, inp.a) || !is_subalgebra(inp.c, inp.b))
    fail(ErrorKind::subalgebra_failure, "C is not a subalgebra of both sides with h and k");

  const AmalgamationInput reduct{inp.a.reduct(base_sig), inp.b.reduct(base_sig), inp.c.reduct(base_sig)};
  Amalgam plain = amalgamate(sat, reduct, DefaultPolicy::fresh());
  const FiniteAlgebra& d = plain.algebra;

  std::vector<std::vector<int>> tables;
  for (const auto& op : full.op_names()) {
    if (op != "h" && op != "k") {
      tables.push_back(d.table(base_sig.op_index(op)));
      continue;
    }
    std::vector<int> table(d.size());
    for (int x = 0; x < d.size(); ++x) {
      const std::string& e = d.name(x);
      const FiniteAlgebra* side = inp.a.contains(e) ? &inp.a : inp.b.contains(e) ? &inp.b : nullptr;
      table[x] = side ? *d.index_of(side->name(side->table(full.op_index(op))[*side->index_of(e)])) : x;
    }
    tables.push_back(std::move(table));
  }
  FiniteAlgebra expanded(full, d.carrier(), std::move(tables), d.constants());
  if (!extends(expanded, inp.a) || !extends(expanded, inp.b))
    fail(ErrorKind::invariant_violation, "expanded amalgam does not extend its inputs");
  if (auto why = hk_violation(expanded, respected)) fail(ErrorKind::invariant_violation, "expanded amalgam: " + *why);
  return {std::move(expanded), plain.verified, plain.stats};
}

std::optional<FiniteAlgebra> search_amalgam_on_union(const Theory& theory, const AmalgamationInput& inp,
                                                     const SearchOptions& options) {
  for (const auto* alg : {&inp.a, &inp.b, &inp.c})
    if (!(alg->signature() == theory.signature))
      fail(ErrorKind::signature_mismatch, "algebra signature differs from the theory");
  if (!is_subalgebra(inp.c, inp.a) || !is_subalgebra(inp.c, inp.b))
    fail(ErrorKind::subalgebra_failure, "C is not a subalgebra of both sides");
  std::vector<std::string> carrier = inp.a.carrier();
  for (const auto& e : inp.b.carrier()) {
    if (!inp.a.contains(e)) carrier.push_back(e);
    else if (!inp.c.contains(e)) fail(ErrorKind::overlap_mismatch, "element " + e + " lies in A and B but not in C");
  }
  PartialAlgebra start = PartialAlgebra::empty(theory.signature, carrier);
  start.fix_from(inp.a);
  start.fix_from(inp.b);
  SearchOptions first = options;
  first.limit = 1;
  auto found = complete_models(theory.axioms, start, first);
  if (found.empty()) return std::nullopt;
  return std::move(found.front());
}

std::optional<JointWitness> search_joint_embedding(const Theory& theory, const FiniteAlgebra& a,
                                                   const FiniteAlgebra& b, int max_size,
                                                   const SearchOptions& options) {
  for (const auto* alg : {&a, &b})
    if (!(alg->signature() == theory.signature))
      fail(ErrorKind::signature_mismatch, "algebra signature differs from the theory");
  for (int n = std::max(a.size(), b.size()); n <= max_size; ++n) {
    for (auto& m : enumerate_models(theory, n, options)) {
      auto ea = find_embedding(a, m);
      if (!ea) continue;
      auto eb = find_embedding(b, m);
      if (!eb) continue;
      return JointWitness{std::move(m), std::move(*ea), std::move(*eb)};
    }
  }
  return std::nullopt;
}

}  // namespace linamalg
