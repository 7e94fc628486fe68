#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "linamalg/algebra.hpp"
#include "linamalg/model_search.hpp"
#include "linamalg/terms.hpp"

namespace linamalg {

/// A bundled file, addressed as `<fixture>/<file>`.
struct FixtureFile {
  const char* path;
  const char* content;
};

const std::vector<FixtureFile>& fixture_files();
/// The text of a bundled file; throws precondition when it does not exist.
std::string fixture_text(const std::string& path);

/// What a fixture is expected to show.
enum class FixtureCheck {
  amalgamate,     // the construction on A ∪ B is a verified model
  jep_refuted,    // no model up to max_size embeds both A and B
  union_refuted,  // no model on A ∪ B extends both A and B
  amalgamate_hk,  // the h/k expansion of the amalgam is verified
};

struct Fixture {
  std::string name;
  std::string title;
  Theory theory;
  std::optional<FiniteAlgebra> a;
  std::optional<FiniteAlgebra> b;
  std::optional<FiniteAlgebra> c;
  FixtureCheck check = FixtureCheck::amalgamate;
  int max_size = 0;
  std::set<std::string> respected;
};

std::vector<std::string> fixture_names();
Fixture load_fixture(const std::string& name);

/// Signature of the theory plus unary h and k.
Signature with_hk(const Signature& sig);

struct FixtureOutcome {
  bool pass = false;
  std::string detail;
  /// The amalgam or other witness built along the way, if any.
  std::optional<FiniteAlgebra> witness;
};

FixtureOutcome run_fixture(const Fixture& fx, const SearchOptions& options = {});

}  // namespace linamalg
