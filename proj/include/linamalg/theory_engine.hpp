#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "linamalg/terms.hpp"

namespace linamalg {

/// One argument position of a pattern: a variable class or a constant.
struct Slot {
  int var_class = -1;
  std::string constant;

  static Slot var(int id) { return Slot{id, {}}; }
  static Slot constant_slot(std::string name) { return Slot{-1, std::move(name)}; }
  bool is_constant() const { return var_class < 0; }

  bool operator==(const Slot&) const = default;
  auto operator<=>(const Slot&) const = default;
};

/// A flat application whose variables are identified by class. Class ids are
/// renumbered to first-occurrence order starting at 0.
class Pattern {
 public:
  Pattern(std::string op, std::vector<Slot> slots);

  const std::string& op() const { return op_; }
  const std::vector<Slot>& slots() const { return slots_; }
  int num_classes() const { return num_classes_; }

  /// The pattern as a term over variables x0, x1, ...
  Term as_term() const;
  std::string str() const { return as_term().str(); }

  bool operator==(const Pattern&) const = default;
  auto operator<=>(const Pattern&) const = default;

 private:
  std::string op_;
  std::vector<Slot> slots_;
  int num_classes_ = 0;
};

/// Per-class variable names used when patterns are printed or rebuilt.
std::string class_var_name(int id);

/// Every canonical pattern of an operation over the given constants.
std::vector<Pattern> all_patterns(const std::string& op, int arity,
                                  const std::vector<std::string>& constants);

struct CollapseTarget {
  bool is_constant = false;
  int var_class = -1;
  std::string constant;

  bool operator==(const CollapseTarget&) const = default;
};

namespace detail {
class FlatWorld;
}

/// Closure of a linear theory under its derivable flat consequences.
///
/// Flat equations with at most `world_vars()` variables are decided inside a
/// single union-find over every flat term on that many variables and the
/// constants; larger queries build a temporary closure of their own. The
/// object is immutable once built and safe to query from several threads.
class SaturatedTheory {
 public:
  const LinearTheory& base() const { return base_; }
  bool is_trivial() const;
  int world_vars() const;

  std::string merged_constant_rep(const std::string& c) const;
  /// Constant partition, each class sorted with its representative first.
  std::vector<std::vector<std::string>> constant_classes() const;

  /// Throws linearity when a side is not flat.
  bool is_valid_flat(const Equation& eq) const;

  std::optional<CollapseTarget> collapse_target(const Pattern& p) const;
  std::set<int> exceptional_variables(const Pattern& p) const;

  /// The saturation of the base theory plus `c1 = c2` for each listed pair.
  SaturatedTheory with_merged_constants(
      const std::vector<std::pair<std::string, std::string>>& merges) const;

  /// One equation per non-representative flat term, stated against the
  /// representative of its class.
  std::vector<Equation> derived_equations() const;

 private:
  friend SaturatedTheory saturate(const LinearTheory& theory);
  SaturatedTheory(LinearTheory base, std::shared_ptr<const detail::FlatWorld> world)
      : base_(std::move(base)), world_(std::move(world)) {}

  Pattern canonical_constants(const Pattern& p) const;

  LinearTheory base_;
  std::shared_ptr<const detail::FlatWorld> world_;
};

SaturatedTheory saturate(const LinearTheory& theory);

}  // namespace linamalg
