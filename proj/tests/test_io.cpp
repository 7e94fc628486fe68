#include <gtest/gtest.h>

#include "linamalg/error.hpp"
#include "linamalg/io.hpp"

using namespace linamalg;

namespace {

const char* kTheory = R"(# lattice fragment
signature: j/2, m/2, 'z
axioms:
  j(x,y) = j(y,x)   # commutative
  m(x,'z) = 'z
  j(x,m(x,y)) = x
)";

const char* kChain = R"(elements: lo, hi
const 'z = lo
table j:
  j(lo,lo) = lo
  j(lo,hi) = hi
  j(hi,lo) = hi
  j(hi,hi) = hi
table m:
  m(lo,lo) = lo
  m(lo,hi) = lo
  m(hi,lo) = lo
  m(hi,hi) = hi
)";

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::invariant_violation;
}

}  // namespace

TEST(ParseTerm, Shapes) {
  const Term t = parse_term(" f( x ,'c, g(y)) ");
  EXPECT_EQ(t.str(), "f(x,'c,g(y))");
  EXPECT_TRUE(parse_term("x").is_variable());
  EXPECT_TRUE(parse_term("'c").is_constant());
  EXPECT_EQ(kind_of([] { parse_term("f(x"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { parse_term("f(x))"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { parse_term(""); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { parse_equation("f(x) g(x)"); }), ErrorKind::parse);
}

TEST(ParseTheory, RoundTrip) {
  const Theory th = parse_theory(kTheory);
  EXPECT_EQ(th.signature.arity("j"), 2);
  EXPECT_TRUE(th.signature.has_constant("z"));
  ASSERT_EQ(th.axioms.size(), 3u);
  EXPECT_EQ(th.axioms[0].str(), "j(x,y) = j(y,x)");
  const Theory again = parse_theory(format_theory(th));
  EXPECT_EQ(again.signature, th.signature);
  EXPECT_EQ(again.axioms, th.axioms);
}

TEST(ParseTheory, Errors) {
  EXPECT_EQ(kind_of([] { parse_theory("axioms:\n  x = x\n"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { parse_theory("signature: f/2\naxioms:\n  f(x) = x\n"); }), ErrorKind::signature_mismatch);
  EXPECT_EQ(kind_of([] { parse_theory("signature: f/2\naxioms:\n  g(x,y) = x\n"); }), ErrorKind::signature_mismatch);
  EXPECT_EQ(kind_of([] { parse_theory("signature: f/0\naxioms:\n"); }), ErrorKind::parse);
  try {
    parse_theory("signature: f/2\naxioms:\n  f(x,y) = x\n  f(x,y = y\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 4:", 0), 0u) << e.what();
  }
}

TEST(ParseAlgebra, RoundTripAndCanonicalOrder) {
  const Theory th = parse_theory(kTheory);
  const FiniteAlgebra a = parse_algebra(kChain, th.signature);
  EXPECT_EQ(a.carrier(), (std::vector<std::string>{"lo", "hi"}));
  EXPECT_EQ(a.name(a.constant("z")), "lo");
  EXPECT_EQ(parse_algebra(format_algebra(a), th.signature), a);

  const std::string canon = format_algebra(a, true);
  EXPECT_EQ(canon.rfind("elements: hi, lo", 0), 0u) << canon;
  const FiniteAlgebra c = parse_algebra(canon, th.signature);
  EXPECT_TRUE(isomorphic(a, c));
  EXPECT_EQ(c.carrier(), (std::vector<std::string>{"hi", "lo"}));
  EXPECT_EQ(format_algebra(c, true), canon);
}

TEST(ParseAlgebra, RejectsIncompleteOrInconsistentInput) {
  const Signature sig = parse_theory(kTheory).signature;
  auto without = [](const std::string& text, const std::string& line) {
    std::string s = text;
    s.erase(s.find(line), line.size());
    return s;
  };
  const std::string full = kChain;
  EXPECT_EQ(kind_of([&] { parse_algebra(without(full, "  m(hi,lo) = lo\n"), sig); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_algebra(without(full, "const 'z = lo\n"), sig); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_algebra(full + "  m(hi,hi) = lo\n", sig); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_algebra(without(full, "  j(lo,lo) = lo\n") + "  j(lo,lo) = mid\n", sig); }),
            ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_algebra(full + "table k:\n", sig); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_algebra("elements: a, a\n", sig); }), ErrorKind::parse);
}
