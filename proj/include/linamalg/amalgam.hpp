#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "linamalg/algebra.hpp"
#include "linamalg/model_search.hpp"
#include "linamalg/theory_engine.hpp"

namespace linamalg {

/// How unforced table entries of an amalgam are filled.
struct DefaultPolicy {
  enum class Kind { fixed_element, max_under_order, fresh_element, custom };

  Kind kind = Kind::fixed_element;
  /// fixed_element: the default value; unset means the least element of C,
  /// or of A when there is no C. fresh_element: the new element's name;
  /// unset means `_fresh`, suffixed until it is unused.
  std::optional<std::string> element;
  /// custom: value for each set of ordinary elements that gets queried.
  std::map<std::set<std::string>, std::string> eta;

  static DefaultPolicy fixed(std::optional<std::string> e = std::nullopt) {
    return {Kind::fixed_element, std::move(e), {}};
  }
  static DefaultPolicy max_under_order() { return {Kind::max_under_order, std::nullopt, {}}; }
  static DefaultPolicy fresh(std::optional<std::string> name = std::nullopt) {
    return {Kind::fresh_element, std::move(name), {}};
  }
  static DefaultPolicy custom(std::map<std::set<std::string>, std::string> eta) {
    return {Kind::custom, std::nullopt, std::move(eta)};
  }
};

struct AmalgamationInput {
  FiniteAlgebra a;
  FiniteAlgebra b;
  FiniteAlgebra c;
};

/// An input triple that passed validation, plus the constant pairs that C
/// interprets by one element although the theory does not identify them.
struct ValidatedTriple {
  AmalgamationInput input;
  std::vector<std::pair<std::string, std::string>> constant_merges;
};

/// Checks C <= A, C <= B, A ∩ B = C by element names, and that A and B are
/// models of the theory. Throws overlap_mismatch, subalgebra_failure,
/// constant_clash or not_a_model.
ValidatedTriple validate_triple(const SaturatedTheory& sat, const AmalgamationInput& inp);

/// The flat pattern behind one table entry: constant-interpreting elements
/// become constant slots, and equal elements share a variable class.
struct AssociatedTerm {
  Pattern pattern;
  /// One element per variable class, in class order.
  std::vector<std::string> class_elements;
  std::set<int> exceptional;
  std::vector<int> ordinary;

  std::set<std::string> ordinary_elements() const;
};

AssociatedTerm associate_term(const SaturatedTheory& sat, const std::string& op,
                              const std::vector<std::string>& tuple,
                              const std::map<std::string, std::string>& const_elems);

struct ForcedValue {
  std::optional<std::string> value;
  bool by_collapse = false;  // the theory proves t = v for a class or constant v
  bool by_side = false;      // the ordinary elements all lie in A or all in B
};

/// The value of an entry forced by a collapse equation or by evaluating the
/// pattern inside A or B with exceptional classes set to `d`. When both
/// apply they must agree, otherwise invariant_violation is thrown.
ForcedValue forced_value(const SaturatedTheory& sat, const AssociatedTerm& at,
                         const AmalgamationInput& inp, const std::string& d);

struct AmalgamStats {
  std::int64_t entries = 0;
  std::int64_t from_sides = 0;        // tuples inside A or inside B
  std::int64_t by_collapse = 0;
  std::int64_t by_side = 0;
  std::int64_t defaulted = 0;
  std::int64_t agreement_checks = 0;  // entries where two sources were compared
  std::int64_t padding_checks = 0;    // entries recomputed with a second element of C
};

struct Amalgam {
  FiniteAlgebra algebra;
  /// False only when the model check was skipped for size.
  bool verified = false;
  AmalgamStats stats;
};

struct AmalgamOptions {
  /// Elements added to the carrier beyond A ∪ B.
  std::vector<std::string> extra_elements;
  /// Exhaustive verification runs when |D|^max-arity * #ops stays below this.
  std::int64_t verify_limit = 10'000'000;
};

/// The strong amalgam of A and B over C on the union of their carriers.
/// Trivial theories return C.
Amalgam amalgamate(const SaturatedTheory& sat, const AmalgamationInput& inp,
                   const DefaultPolicy& policy = {}, const AmalgamOptions& options = {});

struct JointEmbedding {
  Amalgam amalgam;
  ElementMap from_a;
  ElementMap from_b;
};

/// Why joint_embed cannot handle the theory, if it cannot.
std::optional<std::string> jep_obstruction(const SaturatedTheory& sat);

/// A common extension of A and B. Needs either equilinear axioms with no
/// constants, or a single constant c with f(c,...,c) = c valid for every
/// operation; otherwise throws jep_unsupported. B's elements are renamed
/// when they collide with A's.
JointEmbedding joint_embed(const SaturatedTheory& sat, const FiniteAlgebra& a, const FiniteAlgebra& b,
                           const DefaultPolicy& policy = {});

/// A verified model with exactly n elements. Throws precondition for a
/// trivial theory with n > 1.
FiniteAlgebra build_n_element(const SaturatedTheory& sat, int n);

/// Amalgamation of algebras expanded by a unary bijection h with inverse k.
/// Inputs carry tables for `h` and `k` on top of the theory's operations;
/// `respected` lists the operations h must commute with. The result adds one
/// fresh element fixed by both h and k.
Amalgam amalgamate_hk(const SaturatedTheory& sat, const AmalgamationInput& inp,
                      const std::set<std::string>& respected);

/// Checks k(h(x)) = h(k(x)) = x, h(c) = c and h(f(x..)) = f(h(x)..) for each
/// respected f. Returns a description of the first failure.
std::optional<std::string> hk_violation(const FiniteAlgebra& alg, const std::set<std::string>& respected);

/// Exhaustive search for a model of arbitrary equations on carrier A ∪ B
/// extending both. An empty result refutes amalgamation on the union.
std::optional<FiniteAlgebra> search_amalgam_on_union(const Theory& theory, const AmalgamationInput& inp,
                                                     const SearchOptions& options = {});

struct JointWitness {
  FiniteAlgebra algebra;
  ElementMap from_a;
  ElementMap from_b;
};

/// Scans all models of size 1..max_size for one into which A and B embed.
std::optional<JointWitness> search_joint_embedding(const Theory& theory, const FiniteAlgebra& a,
                                                   const FiniteAlgebra& b, int max_size,
                                                   const SearchOptions& options = {});

}  // namespace linamalg
