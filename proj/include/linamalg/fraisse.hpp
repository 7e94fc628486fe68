#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linamalg/algebra.hpp"
#include "linamalg/amalgam.hpp"
#include "linamalg/theory_engine.hpp"

namespace linamalg {

struct GenerateOptions {
  /// Sizes whose model count stays within this are enumerated completely;
  /// larger sizes are sampled and capped at this many algebras.
  std::int64_t count_budget = 64;
  std::uint64_t seed = 1;
  std::int64_t node_budget = kDefaultSearchBudget;
};

/// Pairwise non-isomorphic models of sizes 1..max_size, ordered by size.
std::vector<FiniteAlgebra> generate_small_algebras(const SaturatedTheory& sat, int max_size,
                                                   const GenerateOptions& options = {});

struct StageExtension {
  FiniteAlgebra stage;
  /// Embedding of the target into the new stage.
  ElementMap witness;
  bool skipped = false;
};

/// Amalgamates `target` onto `stage` over the subalgebra of `target` that
/// `over` maps into `stage`. Target elements outside `over` get fresh names
/// x<N>. An empty `over` falls back to joint embedding. When `target`
/// already embeds compatibly with `over`, the stage comes back unchanged.
StageExtension extend_stage(const SaturatedTheory& sat, const FiniteAlgebra& stage, const FiniteAlgebra& target,
                            const ElementMap& over);

struct ChainStep {
  int seed = -1;  // -1 when no seed needed work
  /// The embedding of a subalgebra of the seed into the previous stage
  /// that did not extend to the whole seed.
  ElementMap over;
  ElementMap witness;
  bool skipped = false;
};

struct FraisseChain {
  std::vector<FiniteAlgebra> stages;
  std::vector<ChainStep> log;
};

/// Starts at seeds[0] and, at each step, visits the seeds round-robin from
/// where the last step stopped. For the first seed with a proper subalgebra
/// (largest first, the empty one last when joint embedding applies) that
/// embeds into the stage without extending to the whole seed, the stage is
/// amalgamated with that seed. A step that finds nothing to do repeats the
/// stage.
FraisseChain run_chain(const SaturatedTheory& sat, const std::vector<FiniteAlgebra>& seeds, int steps);

struct UniversalityReport {
  std::vector<std::optional<ElementMap>> embeddings;
  bool all_embed() const;
};

UniversalityReport check_universality(const FiniteAlgebra& stage, const std::vector<FiniteAlgebra>& family);

}  // namespace linamalg
