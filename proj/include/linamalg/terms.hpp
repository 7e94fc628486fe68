#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace linamalg {

/// Operation symbols with their arities plus constant symbols. Constants are
/// never operations, so every arity is at least one.
class Signature {
 public:
  Signature() = default;

  void add_operation(const std::string& name, int arity);
  void add_constant(const std::string& name);

  const std::map<std::string, int>& operations() const { return ops_; }
  const std::set<std::string>& constants() const { return consts_; }

  bool has_operation(const std::string& name) const { return ops_.count(name) != 0; }
  bool has_constant(const std::string& name) const { return consts_.count(name) != 0; }
  int arity(const std::string& name) const;
  int max_arity() const;

  /// Position of an operation in name order; tables are indexed this way.
  int op_index(const std::string& name) const;
  std::vector<std::string> op_names() const;
  std::vector<std::string> constant_names() const;

  /// Copy without the listed operations.
  Signature without(const std::set<std::string>& ops) const;

  bool operator==(const Signature&) const = default;

 private:
  std::map<std::string, int> ops_;
  std::set<std::string> consts_;
};

class Term {
 public:
  enum class Kind { variable, constant, application };

  static Term var(std::string name);
  static Term constant(std::string name);
  static Term app(std::string op, std::vector<Term> args);

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::variable; }
  bool is_constant() const { return kind_ == Kind::constant; }
  bool is_application() const { return kind_ == Kind::application; }
  bool is_atom() const { return kind_ != Kind::application; }

  /// Variable name, constant name or operation symbol.
  const std::string& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }

  int depth() const;
  /// Depth at most one: an atom, or an application of atoms.
  bool is_flat() const { return depth() <= 1; }

  std::string str() const;

  bool operator==(const Term&) const = default;
  std::strong_ordering operator<=>(const Term& other) const;

 private:
  Term(Kind kind, std::string name, std::vector<Term> args)
      : kind_(kind), name_(std::move(name)), args_(std::move(args)) {}

  Kind kind_ = Kind::variable;
  std::string name_;
  std::vector<Term> args_;
};

struct Equation {
  Term lhs;
  Term rhs;

  std::string str() const { return lhs.str() + " = " + rhs.str(); }
  bool operator==(const Equation&) const = default;
};

enum class Linearity { nonlinear, linear, equilinear };
const char* to_string(Linearity l);

std::set<std::string> variables_of(const Term& t);
std::set<std::string> variables_of(const Equation& eq);
std::set<std::string> constants_of(const Term& t);

/// Throws signature_mismatch when a symbol is unknown or misapplied.
void check_term(const Signature& sig, const Term& t);

Linearity classify_equation(const Signature& sig, const Equation& eq);

/// Substitutes variables; unmapped variables are kept.
Term substitute(const Term& t, const std::map<std::string, Term>& sigma);

/// A signature with an arbitrary list of axioms.
struct Theory {
  Signature signature;
  std::vector<Equation> axioms;
};

/// A theory whose axioms have all been checked linear.
class LinearTheory {
 public:
  /// Throws linearity when some axiom is nonlinear.
  explicit LinearTheory(Theory theory);

  const Signature& signature() const { return theory_.signature; }
  const std::vector<Equation>& axioms() const { return theory_.axioms; }
  const Theory& theory() const { return theory_; }

  /// All axioms equilinear and no constants in the language.
  bool equilinear_without_constants() const;
  /// First axiom that is linear but not equilinear, if any.
  std::optional<Equation> first_non_equilinear() const;

 private:
  Theory theory_;
};

}  // namespace linamalg
