#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "linamalg/terms.hpp"

namespace linamalg::detail {

/// Union-find over every flat term on `num_vars` variables and the constants
/// of a linear theory, closed under axiom instances, transitivity and
/// congruence for merged constants.
///
/// Atoms are numbered variables first (0..num_vars-1), then constants in name
/// order. Application nodes follow, one dense block per operation, indexed
/// row-major over atom arguments.
class FlatWorld {
 public:
  FlatWorld(const LinearTheory& theory, int num_vars);

  int num_vars() const { return num_vars_; }
  int num_atoms() const { return num_atoms_; }
  bool trivial() const { return trivial_; }
  std::int64_t num_nodes() const { return static_cast<std::int64_t>(root_.size()); }

  int var_atom(int i) const { return i; }
  int const_atom(const std::string& c) const;
  const std::vector<std::string>& constants() const { return consts_; }

  std::int64_t app_node(int op, std::span<const int> atoms) const;
  /// Node of a flat term; variables are looked up in `var_index`.
  std::int64_t node_of(const Term& t, const std::map<std::string, int>& var_index) const;
  Term term_of(std::int64_t node) const;

  bool same(std::int64_t a, std::int64_t b) const { return root_[a] == root_[b]; }
  std::int64_t root(std::int64_t a) const { return root_[a]; }

  /// Representative constant of a constant's class.
  const std::string& const_rep(const std::string& c) const;

 private:
  std::int64_t find(std::int64_t a);
  bool unite(std::int64_t a, std::int64_t b);
  void decode(std::int64_t node, int& op, std::vector<int>& atoms) const;
  void add_axiom_instances(const Equation& ax);
  bool apply_constant_congruence();
  bool atoms_collapsed();

  int num_vars_ = 0;
  int num_atoms_ = 0;
  std::vector<std::string> consts_;
  std::vector<std::string> ops_;
  std::vector<int> arity_;
  std::vector<std::int64_t> offset_;
  std::vector<std::int64_t> root_;
  bool trivial_ = false;
};

}  // namespace linamalg::detail
