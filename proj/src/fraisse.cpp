#include "linamalg/fraisse.hpp"

#include <algorithm>
#include <set>

#include "linamalg/error.hpp"
#include "linamalg/model_search.hpp"

namespace linamalg {

namespace {

void add_if_new(std::vector<FiniteAlgebra>& out, size_t from, FiniteAlgebra alg) {
  for (size_t i = from; i < out.size(); ++i)
    if (isomorphic(out[i], alg)) return;
  out.push_back(std::move(alg));
}

}  // namespace

std::vector<FiniteAlgebra> generate_small_algebras(const SaturatedTheory& sat, int max_size,
                                                   const GenerateOptions& options) {
  if (sat.is_trivial()) fail(ErrorKind::precondition, "a trivial theory has only one-element models");
  if (max_size < 1) return {};
  const Theory& theory = sat.base().theory();
  std::vector<FiniteAlgebra> out;
  out.push_back(singleton(theory.signature, "e0"));
  for (int n = 2; n <= max_size; ++n) {
    const size_t from = out.size();
    SearchOptions first;
    first.node_budget = options.node_budget;
    first.limit = static_cast<std::size_t>(options.count_budget) + 1;
    auto models = enumerate_models(theory, n, first);
    if (static_cast<std::int64_t>(models.size()) <= options.count_budget) {
      for (auto& m : models) add_if_new(out, from, std::move(m));
      continue;
    }
    // Too many to list: sample with shuffled value orders instead.
    add_if_new(out, from, build_n_element(sat, n));
    const auto start = PartialAlgebra::empty(theory.signature, default_carrier(n));
    for (std::int64_t k = 0; k < 4 * options.count_budget; ++k) {
      if (static_cast<std::int64_t>(out.size() - from) >= options.count_budget) break;
      SearchOptions shuffled;
      shuffled.node_budget = options.node_budget;
      shuffled.shuffle_seed = options.seed * 1000003ULL + static_cast<std::uint64_t>(n) * 7919ULL + k;
      if (auto m = find_model(theory, start, shuffled)) add_if_new(out, from, std::move(*m));
    }
  }
  return out;
}

StageExtension extend_stage(const SaturatedTheory& sat, const FiniteAlgebra& stage, const FiniteAlgebra& target,
                            const ElementMap& over) {
  if (auto w = find_embedding(target, stage, over)) return {stage, std::move(*w), true};
  if (over.empty()) {
    JointEmbedding j = joint_embed(sat, stage, target);
    return {std::move(j.amalgam.algebra), std::move(j.from_b), false};
  }

  std::vector<std::string> dom;
  for (const auto& e : target.carrier())
    if (over.count(e)) dom.push_back(e);
  if (dom.size() != over.size()) fail(ErrorKind::precondition, "overlap map names elements outside the target");
  const FiniteAlgebra part = subalgebra_on(target, dom);
  if (!is_embedding(over, part, stage)) fail(ErrorKind::precondition, "overlap map is not an embedding");

  std::set<std::string> taken(stage.carrier().begin(), stage.carrier().end());
  ElementMap rename = over;
  int next = stage.size();
  for (const auto& e : target.carrier()) {
    if (rename.count(e)) continue;
    std::string name;
    do name = "x" + std::to_string(next++);
    while (taken.count(name));
    taken.insert(name);
    rename[e] = name;
  }
  std::vector<std::string> images;
  for (const auto& e : stage.carrier())
    for (const auto& [_, v] : over)
      if (v == e) images.push_back(e);
  const FiniteAlgebra base = subalgebra_on(stage, images);
  Amalgam d = amalgamate(sat, {stage, target.renamed(rename), base});
  return {std::move(d.algebra), std::move(rename), false};
}

FraisseChain run_chain(const SaturatedTheory& sat, const std::vector<FiniteAlgebra>& seeds, int steps) {
  if (sat.is_trivial()) fail(ErrorKind::precondition, "a trivial theory has only one-element models");
  if (seeds.empty()) fail(ErrorKind::precondition, "a chain needs at least one seed");
  FraisseChain chain;
  chain.stages.push_back(seeds.front());
  const bool jep = !jep_obstruction(sat).has_value();

  // Proper subalgebras of each seed, largest first.
  std::vector<std::vector<FiniteAlgebra>> parts(seeds.size());
  for (size_t i = 0; i < seeds.size(); ++i) {
    auto subsets = closed_subsets(seeds[i]);
    std::stable_sort(subsets.begin(), subsets.end(),
                     [](const auto& x, const auto& y) { return x.size() > y.size(); });
    for (const auto& s : subsets)
      if (static_cast<int>(s.size()) < seeds[i].size()) parts[i].push_back(subalgebra_on(seeds[i], s));
  }

  size_t cursor = 0;
  for (int step = 0; step < steps; ++step) {
    const FiniteAlgebra& stage = chain.stages.back();
    std::optional<std::pair<int, ElementMap>> task;
    for (size_t visited = 0; visited < seeds.size() && !task; ++visited) {
      const size_t i = (cursor + visited) % seeds.size();
      for (const auto& part : parts[i]) {
        for (auto& e : all_embeddings(part, stage)) {
          if (!find_embedding(seeds[i], stage, e)) {
            task.emplace(static_cast<int>(i), std::move(e));
            break;
          }
        }
        if (task) break;
      }
      if (!task && jep && !find_embedding(seeds[i], stage)) task.emplace(static_cast<int>(i), ElementMap{});
      if (task) cursor = i + 1;
    }
    if (!task) {
      chain.log.push_back({-1, {}, {}, true});
      chain.stages.push_back(stage);
      continue;
    }
    StageExtension next = extend_stage(sat, stage, seeds[task->first], task->second);
    chain.log.push_back({task->first, task->second, next.witness, next.skipped});
    chain.stages.push_back(std::move(next.stage));
  }
  return chain;
}

bool UniversalityReport::all_embed() const {
  return std::all_of(embeddings.begin(), embeddings.end(), [](const auto& e) { return e.has_value(); });
}

UniversalityReport check_universality(const FiniteAlgebra& stage, const std::vector<FiniteAlgebra>& family) {
  UniversalityReport report;
  for (const auto& alg : family) report.embeddings.push_back(find_embedding(alg, stage));
  return report;
}

}  // namespace linamalg
