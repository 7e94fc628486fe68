#include "linamalg/theory_engine.hpp"

#include <algorithm>

#include "flat_world.hpp"
#include "linamalg/error.hpp"

namespace linamalg {

std::string class_var_name(int id) { return "x" + std::to_string(id); }

Pattern::Pattern(std::string op, std::vector<Slot> slots) : op_(std::move(op)), slots_(std::move(slots)) {
  std::map<int, int> renumber;
  for (auto& s : slots_) {
    if (s.is_constant()) continue;
    auto [it, inserted] = renumber.emplace(s.var_class, static_cast<int>(renumber.size()));
    s.var_class = it->second;
  }
  num_classes_ = static_cast<int>(renumber.size());
}

Term Pattern::as_term() const {
  std::vector<Term> args;
  for (const auto& s : slots_)
    args.push_back(s.is_constant() ? Term::constant(s.constant) : Term::var(class_var_name(s.var_class)));
  return Term::app(op_, std::move(args));
}

std::vector<Pattern> all_patterns(const std::string& op, int arity,
                                  const std::vector<std::string>& constants) {
  std::vector<Pattern> out;
  std::vector<Slot> slots;
  // Restricted-growth numbering keeps every generated pattern canonical.
  auto rec = [&](auto&& self, int pos, int classes) -> void {
    if (pos == arity) {
      out.emplace_back(op, slots);
      return;
    }
    for (int c = 0; c <= classes; ++c) {
      slots.push_back(Slot::var(c));
      self(self, pos + 1, std::max(classes, c + 1));
      slots.pop_back();
    }
    for (const auto& k : constants) {
      slots.push_back(Slot::constant_slot(k));
      self(self, pos + 1, classes);
      slots.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

namespace {

int world_size_for(const Signature& sig) { return std::max(2, sig.max_arity() + 1); }

std::map<std::string, int> index_vars(const Equation& eq) {
  std::map<std::string, int> idx;
  for (const auto& v : variables_of(eq)) idx.emplace(v, static_cast<int>(idx.size()));
  return idx;
}

void require_flat(const Equation& eq) {
  if (!eq.lhs.is_flat() || !eq.rhs.is_flat())
    fail(ErrorKind::linearity, "equation is not flat: " + eq.str());
}

}  // namespace

SaturatedTheory saturate(const LinearTheory& theory) {
  auto world = std::make_shared<const detail::FlatWorld>(theory, world_size_for(theory.signature()));
  return SaturatedTheory(theory, std::move(world));
}

bool SaturatedTheory::is_trivial() const { return world_->trivial(); }
int SaturatedTheory::world_vars() const { return world_->num_vars(); }

std::string SaturatedTheory::merged_constant_rep(const std::string& c) const {
  if (is_trivial()) {
    const auto& cs = world_->constants();
    if (std::find(cs.begin(), cs.end(), c) == cs.end())
      fail(ErrorKind::signature_mismatch, "unknown constant '" + c);
    return cs.front();
  }
  return world_->const_rep(c);
}

std::vector<std::vector<std::string>> SaturatedTheory::constant_classes() const {
  std::map<std::string, std::vector<std::string>> by_rep;
  for (const auto& c : world_->constants()) by_rep[merged_constant_rep(c)].push_back(c);
  std::vector<std::vector<std::string>> out;
  for (auto& [_, cls] : by_rep) out.push_back(std::move(cls));
  return out;
}

bool SaturatedTheory::is_valid_flat(const Equation& eq) const {
  require_flat(eq);
  check_term(base_.signature(), eq.lhs);
  check_term(base_.signature(), eq.rhs);
  if (is_trivial()) return true;
  auto idx = index_vars(eq);
  if (static_cast<int>(idx.size()) <= world_->num_vars())
    return world_->same(world_->node_of(eq.lhs, idx), world_->node_of(eq.rhs, idx));
  // Larger than the resident closure: decide it in a closure sized to fit.
  detail::FlatWorld wide(base_, static_cast<int>(idx.size()));
  return wide.same(wide.node_of(eq.lhs, idx), wide.node_of(eq.rhs, idx));
}

Pattern SaturatedTheory::canonical_constants(const Pattern& p) const {
  std::vector<Slot> slots = p.slots();
  for (auto& s : slots)
    if (s.is_constant()) s.constant = merged_constant_rep(s.constant);
  return Pattern(p.op(), std::move(slots));
}

std::optional<CollapseTarget> SaturatedTheory::collapse_target(const Pattern& raw) const {
  if (is_trivial()) fail(ErrorKind::precondition, "collapse_target on a trivial theory");
  const Pattern p = canonical_constants(raw);
  check_term(base_.signature(), p.as_term());
  std::map<std::string, int> idx;
  for (int i = 0; i < p.num_classes(); ++i) idx.emplace(class_var_name(i), i);
  const auto node = world_->node_of(p.as_term(), idx);

  std::optional<CollapseTarget> found;
  for (int j = 0; j < world_->num_vars(); ++j) {
    if (!world_->same(node, world_->var_atom(j))) continue;
    if (found || j >= p.num_classes())
      fail(ErrorKind::invariant_violation, "pattern " + p.str() + " collapses ambiguously");
    found = CollapseTarget{false, j, {}};
  }
  for (const auto& c : world_->constants()) {
    if (merged_constant_rep(c) != c || !world_->same(node, world_->const_atom(c))) continue;
    if (found) fail(ErrorKind::invariant_violation, "pattern " + p.str() + " collapses ambiguously");
    found = CollapseTarget{true, -1, c};
  }
  return found;
}

std::set<int> SaturatedTheory::exceptional_variables(const Pattern& raw) const {
  if (is_trivial()) fail(ErrorKind::precondition, "exceptional_variables on a trivial theory");
  const Pattern p = canonical_constants(raw);
  check_term(base_.signature(), p.as_term());
  const int fresh = p.num_classes();
  std::map<std::string, int> idx;
  for (int i = 0; i <= fresh; ++i) idx.emplace(class_var_name(i), i);
  const auto node = world_->node_of(p.as_term(), idx);

  std::set<int> out;
  for (int i = 0; i < p.num_classes(); ++i) {
    // Pattern::Pattern would renumber, so build the replaced term directly.
    std::vector<Term> args;
    for (const auto& s : p.slots()) {
      if (s.is_constant()) args.push_back(Term::constant(s.constant));
      else args.push_back(Term::var(class_var_name(s.var_class == i ? fresh : s.var_class)));
    }
    if (world_->same(node, world_->node_of(Term::app(p.op(), std::move(args)), idx))) out.insert(i);
  }
  return out;
}

SaturatedTheory SaturatedTheory::with_merged_constants(
    const std::vector<std::pair<std::string, std::string>>& merges) const {
  Theory t = base_.theory();
  for (const auto& [a, b] : merges) t.axioms.push_back({Term::constant(a), Term::constant(b)});
  return saturate(LinearTheory(std::move(t)));
}

std::vector<Equation> SaturatedTheory::derived_equations() const {
  std::vector<Equation> out;
  if (is_trivial()) {
    out.push_back({Term::var("x0"), Term::var("x1")});
    return out;
  }
  for (std::int64_t n = 0; n < world_->num_nodes(); ++n) {
    const auto r = world_->root(n);
    if (r != n) out.push_back({world_->term_of(n), world_->term_of(r)});
  }
  return out;
}

}  // namespace linamalg
