#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linamalg/terms.hpp"

namespace linamalg {

/// A finite algebra with dense operation tables.
///
/// Elements are opaque names; internally they are addressed by their position
/// in the carrier. Table entries are stored row-major with the first argument
/// most significant, and constants map to carrier positions.
class FiniteAlgebra {
 public:
  /// Throws precondition if the carrier is empty or has duplicate names,
  /// signature_mismatch if tables or constants do not fit the signature.
  FiniteAlgebra(Signature sig, std::vector<std::string> carrier,
                std::vector<std::vector<int>> tables, std::map<std::string, int> constants);

  const Signature& signature() const { return sig_; }
  int size() const { return static_cast<int>(carrier_.size()); }
  const std::vector<std::string>& carrier() const { return carrier_; }
  const std::string& name(int i) const { return carrier_[i]; }
  std::optional<int> index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return index_of(name).has_value(); }

  int apply(int op, std::span<const int> args) const;
  int constant(const std::string& c) const;
  const std::map<std::string, int>& constants() const { return consts_; }
  const std::vector<int>& table(int op) const { return tables_[op]; }
  const std::vector<std::vector<int>>& tables() const { return tables_; }

  /// Restriction to the operations and constants of `sub`.
  FiniteAlgebra reduct(const Signature& sub) const;
  /// Same algebra with elements renamed; unmapped names are kept.
  FiniteAlgebra renamed(const std::map<std::string, std::string>& names) const;

  bool operator==(const FiniteAlgebra&) const = default;

 private:
  Signature sig_;
  std::vector<std::string> carrier_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> tables_;
  std::map<std::string, int> consts_;
};

std::int64_t table_size(int n, int arity);
/// Row-major index of a tuple of carrier positions.
std::int64_t tuple_index(std::span<const int> args, int n);
void tuple_at(std::int64_t index, int n, std::vector<int>& out);

/// The one-element algebra over `sig`.
FiniteAlgebra singleton(const Signature& sig, const std::string& element);

using Assignment = std::map<std::string, std::string>;

std::string evaluate(const FiniteAlgebra& alg, const Term& t, const Assignment& a);
int evaluate_index(const FiniteAlgebra& alg, const Term& t, const std::map<std::string, int>& a);

bool satisfies(const FiniteAlgebra& alg, const Equation& eq);
bool is_model(const FiniteAlgebra& alg, const Theory& theory);
/// First axiom that fails, for diagnostics.
std::optional<Equation> first_failing_axiom(const FiniteAlgebra& alg, const Theory& theory);

/// C is a subalgebra of A by element names. Throws signature_mismatch.
bool is_subalgebra(const FiniteAlgebra& c, const FiniteAlgebra& a);
/// The subalgebra of `a` on the given element names; they must be closed.
FiniteAlgebra subalgebra_on(const FiniteAlgebra& a, const std::vector<std::string>& elements);
/// Closed subsets of `a`, as element-name lists in carrier order.
std::vector<std::vector<std::string>> closed_subsets(const FiniteAlgebra& a);

using ElementMap = std::map<std::string, std::string>;

/// Backtracking search for an injective homomorphism from `a` into `d`
/// extending `partial`.
std::optional<ElementMap> find_embedding(const FiniteAlgebra& a, const FiniteAlgebra& d,
                                         const ElementMap& partial = {});
/// All embeddings of `a` into `d`, in search order.
std::vector<ElementMap> all_embeddings(const FiniteAlgebra& a, const FiniteAlgebra& d);
/// Exhaustive post-hoc check that `h` is an injective homomorphism.
bool is_embedding(const ElementMap& h, const FiniteAlgebra& a, const FiniteAlgebra& d);
bool isomorphic(const FiniteAlgebra& a, const FiniteAlgebra& b);

/// D agrees with `part` on every tuple of `part`'s elements.
bool extends(const FiniteAlgebra& d, const FiniteAlgebra& part);

}  // namespace linamalg
