#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linamalg/algebra.hpp"
#include "linamalg/terms.hpp"

namespace linamalg {

inline constexpr std::int64_t kDefaultSearchBudget = 100'000'000;

struct SearchOptions {
  /// Maximum number of value assignments tried before budget_exceeded.
  std::int64_t node_budget = kDefaultSearchBudget;
  /// Stop after this many models; 0 collects all of them.
  std::size_t limit = 0;
  /// When set, candidate values are tried in a seeded random order.
  std::optional<std::uint64_t> shuffle_seed;
};

/// A carrier with operation tables and constants partially filled in; -1
/// marks a free entry.
struct PartialAlgebra {
  Signature signature;
  std::vector<std::string> carrier;
  std::vector<std::vector<int>> tables;
  std::map<std::string, int> constants;

  /// Every entry free.
  static PartialAlgebra empty(const Signature& sig, std::vector<std::string> carrier);
  /// Entries whose arguments all lie in `part` are copied from it; the
  /// remaining entries are free. `part`'s elements must be in `carrier`.
  void fix_from(const FiniteAlgebra& part);
  std::int64_t free_entries() const;
};

/// Element names e0, e1, ...
std::vector<std::string> default_carrier(int n);

/// Backtracking completion of `start` into models of the equations.
///
/// Equation instances are watched on the first undetermined table entry they
/// need, so each assignment only re-checks the instances it can affect. An
/// instance with one side known and the other a single missing entry fixes
/// that entry immediately.
/// Results come out in search order, which is deterministic for a fixed seed.
std::vector<FiniteAlgebra> complete_models(const std::vector<Equation>& equations,
                                           const PartialAlgebra& start,
                                           const SearchOptions& options = {});

/// All models of the theory on {e0..e(n-1)}, by table identity.
std::vector<FiniteAlgebra> enumerate_models(const Theory& theory, int n,
                                            const SearchOptions& options = {});

std::optional<FiniteAlgebra> find_model(const Theory& theory, const PartialAlgebra& start,
                                        const SearchOptions& options = {});

}  // namespace linamalg
