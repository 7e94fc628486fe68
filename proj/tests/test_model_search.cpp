#include <gtest/gtest.h>

#include <algorithm>

#include "linamalg/error.hpp"
#include "linamalg/io.hpp"
#include "linamalg/model_search.hpp"
#include "oracles.hpp"

using namespace linamalg;

namespace {

const Theory kMaltsev = parse_theory("signature: f/3\naxioms:\n  f(x,y,y) = x\n  f(x,x,y) = y\n");

std::vector<std::vector<std::vector<int>>> tables_of(const std::vector<FiniteAlgebra>& ms) {
  std::vector<std::vector<std::vector<int>>> out;
  for (const auto& m : ms) {
    auto t = m.tables();
    for (const auto& [c, v] : m.constants()) t.push_back({v});
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(EnumerateModels, MaltsevOnTwoElementsMatchesNaiveScan) {
  const auto fast = enumerate_models(kMaltsev, 2);
  const auto naive = oracle::all_models(kMaltsev, 2);
  EXPECT_EQ(fast.size(), 4u);
  EXPECT_EQ(tables_of(fast), tables_of(naive));
}

TEST(EnumerateModels, AgreesWithNaiveScanOnSmallTheories) {
  const char* theories[] = {
      "signature: f/2\naxioms:\n  f(x,y) = f(y,x)\n",
      "signature: f/2\naxioms:\n  f(x,x) = x\n  f(x,f(y,z)) = f(f(x,y),z)\n",
      "signature: f/2, 'c\naxioms:\n  f(x,'c) = x\n",
      "signature: f/1, g/1\naxioms:\n  f(g(x)) = x\n",
      "signature: f/3\naxioms:\n  f(x,x,y) = x\n  f(x,y,x) = x\n  f(y,x,x) = x\n",
  };
  for (const char* text : theories) {
    const Theory th = parse_theory(text);
    for (int n = 1; n <= 3; ++n) {
      if (th.signature.max_arity() == 3 && n == 3) continue;
      EXPECT_EQ(tables_of(enumerate_models(th, n)), tables_of(oracle::all_models(th, n))) << text << " n=" << n;
    }
  }
}

TEST(EnumerateModels, EdgeCases) {
  const Theory empty = parse_theory("signature: f/2\naxioms:\n");
  EXPECT_EQ(enumerate_models(empty, 1).size(), 1u);
  EXPECT_EQ(enumerate_models(empty, 2).size(), 16u);
  const Theory trivial = parse_theory("signature: f/1\naxioms:\n  x = y\n");
  EXPECT_EQ(enumerate_models(trivial, 1).size(), 1u);
  EXPECT_TRUE(enumerate_models(trivial, 2).empty());
  EXPECT_EQ(default_carrier(3), (std::vector<std::string>{"e0", "e1", "e2"}));
}

TEST(CompleteModels, ExtensionsOfAFixedPart) {
  const auto z2 = oracle::all_models(kMaltsev, 2).front().renamed({{"e0", "0"}, {"e1", "a"}});
  PartialAlgebra start = PartialAlgebra::empty(kMaltsev.signature, {"0", "a", "b"});
  EXPECT_EQ(start.free_entries(), 27);
  start.fix_from(z2);
  EXPECT_EQ(start.free_entries(), 19);
  const auto found = complete_models(kMaltsev.axioms, start);
  EXPECT_FALSE(found.empty());
  for (const auto& m : found) {
    EXPECT_TRUE(oracle::agrees_on(m, z2));
    EXPECT_TRUE(oracle::models(m, kMaltsev.axioms));
  }
}

TEST(CompleteModels, MatchesNaiveCompletion) {
  const Theory th = parse_theory("signature: f/2\naxioms:\n  f(x,x) = x\n  f(x,y) = f(y,x)\n");
  const FiniteAlgebra part(th.signature, {"0", "a"}, {{0, 0, 0, 1}}, {});
  PartialAlgebra start = PartialAlgebra::empty(th.signature, {"0", "a", "b", "c"});
  start.fix_from(part);
  const auto found = complete_models(th.axioms, start);
  std::vector<FiniteAlgebra> naive;
  oracle::each_completion(start.signature, start.carrier, start.tables, start.constants, [&](const FiniteAlgebra& a) {
    if (oracle::models(a, th.axioms)) naive.push_back(a);
    return true;
  });
  EXPECT_EQ(tables_of(found), tables_of(naive));
  EXPECT_FALSE(found.empty());
}

TEST(CompleteModels, ConflictingPartsAreRejected) {
  const auto ms = oracle::all_models(kMaltsev, 2);
  PartialAlgebra start = PartialAlgebra::empty(kMaltsev.signature, {"e0", "e1"});
  start.fix_from(ms[0]);
  EXPECT_THROW(start.fix_from(ms[1]), Error);
  PartialAlgebra small = PartialAlgebra::empty(kMaltsev.signature, {"e0"});
  EXPECT_THROW(small.fix_from(ms[0]), Error);
}

TEST(SearchOptions, BudgetAndLimit) {
  SearchOptions tiny;
  tiny.node_budget = 10;
  try {
    enumerate_models(kMaltsev, 4, tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget_exceeded);
  }
  SearchOptions two;
  two.limit = 2;
  EXPECT_EQ(enumerate_models(kMaltsev, 3, two).size(), 2u);
}

TEST(SearchOptions, ShuffleIsDeterministicPerSeed) {
  const auto start = PartialAlgebra::empty(kMaltsev.signature, default_carrier(4));
  SearchOptions a;
  a.shuffle_seed = 17;
  const auto first = find_model(kMaltsev, start, a);
  const auto again = find_model(kMaltsev, start, a);
  ASSERT_TRUE(first);
  ASSERT_TRUE(again);
  EXPECT_EQ(*first, *again);
  EXPECT_TRUE(is_model(*first, kMaltsev));
  std::set<std::vector<std::vector<int>>> seen;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    a.shuffle_seed = seed;
    seen.insert(find_model(kMaltsev, start, a)->tables());
  }
  EXPECT_GT(seen.size(), 1u);
}

TEST(SearchOptions, ConstantsAreSearchedToo) {
  const Theory th = parse_theory("signature: f/2, 'c\naxioms:\n  f(x,'c) = x\n  f('c,x) = x\n");
  const auto ms = enumerate_models(th, 2);
  EXPECT_EQ(tables_of(ms), tables_of(oracle::all_models(th, 2)));
  for (const auto& m : ms) EXPECT_TRUE(is_model(m, th));
}
