#pragma once

#include <string>

#include "hysim/polynomial.hpp"

namespace hysim {

// Parses a polynomial over the hybrid coordinates.
//
// Grammar (whitespace insensitive):
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := ('+'|'-') unary | power
//   power   := primary ('^' integer)?
//   primary := integer | variable | '(' expr ')'
//   variable:= ('x'|'p') index | ('X'|'P') index        (1-based index)
//
// Lowercase x/p are classical coordinates, uppercase X/P quantum ones.
// Literals are exact integers; rationals are written with '/' (e.g. 3/4).
// Division requires a constant, nonzero divisor.  Coefficients stay exact.
//
// Errors carry the 1-based column of the offending token.
Polynomial<Rational> parse_polynomial(const std::string& text, Dims dims);

// Canonical textual form; parse_polynomial(print_polynomial(p)) == p.
std::string print_polynomial(const Polynomial<Rational>& poly);
std::string print_polynomial(const Polynomial<double>& poly);

}  // namespace hysim
