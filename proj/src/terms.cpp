#include "linamalg/terms.hpp"

#include <algorithm>

#include "linamalg/error.hpp"

namespace linamalg {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "parse-error";
    case ErrorKind::signature_mismatch: return "signature-mismatch";
    case ErrorKind::linearity: return "linearity";
    case ErrorKind::overlap_mismatch: return "overlap-mismatch";
    case ErrorKind::subalgebra_failure: return "subalgebra-failure";
    case ErrorKind::constant_clash: return "constant-clash";
    case ErrorKind::not_a_model: return "not-a-model";
    case ErrorKind::jep_unsupported: return "jep-unsupported";
    case ErrorKind::policy_partial: return "policy-partial";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::invariant_violation: return "invariant-violation";
  }
  return "unknown";
}

void Signature::add_operation(const std::string& name, int arity) {
  if (arity < 1) fail(ErrorKind::signature_mismatch, "operation " + name + " must have arity >= 1");
  if (consts_.count(name) || ops_.count(name))
    fail(ErrorKind::signature_mismatch, "duplicate symbol " + name);
  ops_.emplace(name, arity);
}

void Signature::add_constant(const std::string& name) {
  if (consts_.count(name) || ops_.count(name))
    fail(ErrorKind::signature_mismatch, "duplicate symbol " + name);
  consts_.insert(name);
}

int Signature::arity(const std::string& name) const {
  auto it = ops_.find(name);
  if (it == ops_.end()) fail(ErrorKind::signature_mismatch, "unknown operation " + name);
  return it->second;
}

int Signature::max_arity() const {
  int m = 0;
  for (const auto& [_, a] : ops_) m = std::max(m, a);
  return m;
}

int Signature::op_index(const std::string& name) const {
  auto it = ops_.find(name);
  if (it == ops_.end()) fail(ErrorKind::signature_mismatch, "unknown operation " + name);
  return static_cast<int>(std::distance(ops_.begin(), it));
}

std::vector<std::string> Signature::op_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : ops_) out.push_back(name);
  return out;
}

std::vector<std::string> Signature::constant_names() const {
  return {consts_.begin(), consts_.end()};
}

Signature Signature::without(const std::set<std::string>& ops) const {
  Signature out;
  for (const auto& [name, a] : ops_)
    if (!ops.count(name)) out.add_operation(name, a);
  for (const auto& c : consts_) out.add_constant(c);
  return out;
}

Term Term::var(std::string name) { return Term(Kind::variable, std::move(name), {}); }
Term Term::constant(std::string name) { return Term(Kind::constant, std::move(name), {}); }
Term Term::app(std::string op, std::vector<Term> args) {
  return Term(Kind::application, std::move(op), std::move(args));
}

std::strong_ordering Term::operator<=>(const Term& other) const {
  if (auto c = kind_ <=> other.kind_; c != 0) return c;
  if (auto c = name_ <=> other.name_; c != 0) return c;
  return args_ <=> other.args_;
}

int Term::depth() const {
  int d = 0;
  for (const auto& a : args_) d = std::max(d, a.depth());
  return is_application() ? d + 1 : 0;
}

std::string Term::str() const {
  switch (kind_) {
    case Kind::variable: return name_;
    case Kind::constant: return "'" + name_;
    case Kind::application: {
      std::string s = name_ + "(";
      for (size_t i = 0; i < args_.size(); ++i) {
        if (i) s += ",";
        s += args_[i].str();
      }
      return s + ")";
    }
  }
  return {};
}

const char* to_string(Linearity l) {
  switch (l) {
    case Linearity::nonlinear: return "nonlinear";
    case Linearity::linear: return "linear";
    case Linearity::equilinear: return "equilinear";
  }
  return "?";
}

namespace {

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) out.insert(t.name());
  for (const auto& a : t.args()) collect_vars(a, out);
}

void collect_consts(const Term& t, std::set<std::string>& out) {
  if (t.is_constant()) out.insert(t.name());
  for (const auto& a : t.args()) collect_consts(a, out);
}

}  // namespace

std::set<std::string> variables_of(const Term& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

std::set<std::string> variables_of(const Equation& eq) {
  auto out = variables_of(eq.lhs);
  collect_vars(eq.rhs, out);
  return out;
}

std::set<std::string> constants_of(const Term& t) {
  std::set<std::string> out;
  collect_consts(t, out);
  return out;
}

void check_term(const Signature& sig, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::variable:
      if (sig.has_operation(t.name()) || sig.has_constant(t.name()))
        fail(ErrorKind::signature_mismatch, "variable " + t.name() + " clashes with a symbol");
      return;
    case Term::Kind::constant:
      if (!sig.has_constant(t.name()))
        fail(ErrorKind::signature_mismatch, "unknown constant '" + t.name());
      return;
    case Term::Kind::application:
      if (!sig.has_operation(t.name()))
        fail(ErrorKind::signature_mismatch, "unknown operation " + t.name());
      if (static_cast<int>(t.args().size()) != sig.arity(t.name()))
        fail(ErrorKind::signature_mismatch, "wrong number of arguments in " + t.str());
      for (const auto& a : t.args()) check_term(sig, a);
      return;
  }
}

Linearity classify_equation(const Signature& sig, const Equation& eq) {
  check_term(sig, eq.lhs);
  check_term(sig, eq.rhs);
  if (!eq.lhs.is_flat() || !eq.rhs.is_flat()) return Linearity::nonlinear;
  if (eq.lhs.is_atom() || eq.rhs.is_atom()) return Linearity::equilinear;
  // Two applications: equilinear only for constant-free sides.
  if (!constants_of(eq.lhs).empty() || !constants_of(eq.rhs).empty()) return Linearity::linear;
  return variables_of(eq.lhs) == variables_of(eq.rhs) ? Linearity::equilinear : Linearity::linear;
}

Term substitute(const Term& t, const std::map<std::string, Term>& sigma) {
  if (t.is_variable()) {
    auto it = sigma.find(t.name());
    return it == sigma.end() ? t : it->second;
  }
  if (t.is_constant()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, sigma));
  return Term::app(t.name(), std::move(args));
}

LinearTheory::LinearTheory(Theory theory) : theory_(std::move(theory)) {
  for (const auto& ax : theory_.axioms)
    if (classify_equation(theory_.signature, ax) == Linearity::nonlinear)
      fail(ErrorKind::linearity, "axiom is not linear: " + ax.str());
}

bool LinearTheory::equilinear_without_constants() const {
  return theory_.signature.constants().empty() && !first_non_equilinear();
}

std::optional<Equation> LinearTheory::first_non_equilinear() const {
  for (const auto& ax : theory_.axioms)
    if (classify_equation(theory_.signature, ax) != Linearity::equilinear) return ax;
  return std::nullopt;
}

}  // namespace linamalg
