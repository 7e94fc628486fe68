#include <gtest/gtest.h>

#include "linamalg/error.hpp"
#include "linamalg/io.hpp"
#include "linamalg/terms.hpp"

using namespace linamalg;

namespace {

Signature sig_f3() {
  Signature s;
  s.add_operation("f", 3);
  return s;
}

Linearity classify(const Signature& s, const char* text) { return classify_equation(s, parse_equation(text)); }

}  // namespace

TEST(Signature, RejectsDuplicatesAndNullaryOperations) {
  Signature s;
  s.add_operation("f", 2);
  EXPECT_THROW(s.add_operation("f", 1), Error);
  EXPECT_THROW(s.add_constant("f"), Error);
  EXPECT_THROW(s.add_operation("g", 0), Error);
  s.add_constant("c");
  EXPECT_THROW(s.add_operation("c", 1), Error);
  EXPECT_EQ(s.max_arity(), 2);
  EXPECT_EQ(s.op_names(), std::vector<std::string>{"f"});
}

TEST(Classify, MaltsevAxiomIsEquilinear) {
  EXPECT_EQ(classify(sig_f3(), "f(x,y,y) = x"), Linearity::equilinear);
  EXPECT_EQ(classify(sig_f3(), "f(x,x,y) = y"), Linearity::equilinear);
}

TEST(Classify, DifferentVariableSetsAreOnlyLinear) {
  EXPECT_EQ(classify(sig_f3(), "f(x,y,y) = f(x,z,z)"), Linearity::linear);
}

TEST(Classify, NestedApplicationIsNonlinear) {
  Signature s;
  s.add_operation("join", 2);
  s.add_operation("meet", 2);
  EXPECT_EQ(classify(s, "meet(x,join(y,z)) = join(meet(x,y),meet(x,z))"), Linearity::nonlinear);
}

TEST(Classify, AtomicSides) {
  EXPECT_EQ(classify(sig_f3(), "x = x"), Linearity::equilinear);
  EXPECT_EQ(classify(sig_f3(), "x = y"), Linearity::equilinear);
  // One atomic side makes any flat equation equilinear, even a collapse to
  // a variable that does not occur on the other side.
  EXPECT_EQ(classify(sig_f3(), "f(x,x,x) = y"), Linearity::equilinear);
}

TEST(Classify, ConstantsInTwoApplicationEquations) {
  Signature s = sig_f3();
  s.add_constant("c");
  EXPECT_EQ(classify(s, "f(x,'c,y) = f(y,'c,x)"), Linearity::linear);
  EXPECT_EQ(classify(s, "f(x,y,x) = f(y,x,y)"), Linearity::equilinear);
  EXPECT_EQ(classify(s, "f(x,'c,x) = x"), Linearity::equilinear);
  EXPECT_EQ(classify(s, "f('c,'c,'c) = 'c"), Linearity::equilinear);
}

TEST(Classify, UnknownSymbolIsSignatureMismatch) {
  try {
    classify(sig_f3(), "g(x) = x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::signature_mismatch);
  }
  EXPECT_THROW(classify(sig_f3(), "f(x,y) = x"), Error);
}

TEST(Classify, SymmetricAndInvariantUnderRenaming) {
  Signature s = sig_f3();
  s.add_operation("g", 2);
  const char* cases[] = {"f(x,y,y) = x", "f(x,y,y) = f(x,z,z)", "g(x,y) = g(y,x)", "f(x,g(x,y),y) = x",
                         "g(x,x) = f(x,x,y)", "x = y"};
  for (const char* text : cases) {
    const Equation eq = parse_equation(text);
    EXPECT_EQ(classify_equation(s, eq), classify_equation(s, {eq.rhs, eq.lhs})) << text;
    const std::map<std::string, Term> rename = {{"x", Term::var("u")}, {"y", Term::var("x")}, {"z", Term::var("w")}};
    const Equation renamed{substitute(eq.lhs, rename), substitute(eq.rhs, rename)};
    EXPECT_EQ(classify_equation(s, eq), classify_equation(s, renamed)) << text;
  }
}

TEST(VariablesOf, IgnoresMultiplicityAndConstants) {
  EXPECT_EQ(variables_of(parse_term("f(x,y,y)")), (std::set<std::string>{"x", "y"}));
  EXPECT_TRUE(variables_of(parse_term("'c")).empty());
  EXPECT_EQ(variables_of(parse_term("f(x,x,'c,z)")), (std::set<std::string>{"x", "z"}));
}

TEST(Term, DepthAndPrinting) {
  const Term t = parse_term("f(x, g(y), 'c)");
  EXPECT_EQ(t.depth(), 2);
  EXPECT_FALSE(t.is_flat());
  EXPECT_EQ(t.str(), "f(x,g(y),'c)");
  EXPECT_TRUE(parse_term("'c").is_flat());
  EXPECT_EQ(parse_term("x").depth(), 0);
}

TEST(LinearTheory, RejectsNonlinearAxioms) {
  Theory th{sig_f3(), {parse_equation("f(f(x,y,z),y,z) = x")}};
  try {
    LinearTheory lt(th);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::linearity);
  }
  LinearTheory ok({sig_f3(), {parse_equation("f(x,y,y) = f(x,z,z)")}});
  EXPECT_FALSE(ok.equilinear_without_constants());
  ASSERT_TRUE(ok.first_non_equilinear());
  EXPECT_EQ(ok.first_non_equilinear()->str(), "f(x,y,y) = f(x,z,z)");
}
