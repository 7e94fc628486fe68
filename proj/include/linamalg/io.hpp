#pragma once

#include <string>
#include <string_view>

#include "linamalg/algebra.hpp"
#include "linamalg/terms.hpp"

namespace linamalg {

/// Terms use `x` for variables, `'c` for constants and `f(t1,...,tn)` for
/// applications. Symbols are checked against the signature when one is given.
Term parse_term(std::string_view text);
Equation parse_equation(std::string_view text);

/// Theory files:
///
///   signature: f/3, g/2, 'c
///   axioms:
///     f(x,y,y) = x
///
/// `#` starts a comment. Axioms need not be linear at this layer.
Theory parse_theory(std::string_view text);
std::string format_theory(const Theory& theory);

/// Algebra files:
///
///   elements: 0, a
///   const 'c = 0
///   table f:
///     f(0,0,0) = 0
///     ...
///
/// Every operation of `sig` needs a complete table and every constant an
/// interpretation; partial tables are rejected.
FiniteAlgebra parse_algebra(std::string_view text, const Signature& sig);
/// With `canonical` the carrier is re-emitted in sorted order.
std::string format_algebra(const FiniteAlgebra& alg, bool canonical = false);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace linamalg
