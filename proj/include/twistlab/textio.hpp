#pragma once

// Textual syntax for field elements, polynomials and rational functions over
// GF(3^(2n))(t): parsing for command-line inputs and deterministic printing
// for JSON reports.  Field elements are written as integer-coefficient
// expressions in the generator symbol `z` (e.g. `z`, `1+2*z`); polynomials
// and rational functions extend that with the indeterminate `t`
// (e.g. `t^3 - t`, `z*t^4`, `(t^2 + 1)/(t + 2)`).

#include <string>

#include "twistlab/funcfield.hpp"
#include "twistlab/gf3.hpp"

namespace twistlab::textio {

using funcfield::Poly;
using funcfield::RatFunc;
using gf3::CtxPtr;
using gf3::FieldElement;

// Grammar (whitespace insignificant):
//   expr   := factor (('+'|'-') factor)*
//   factor := unary (('*'|'/') unary)*
//   unary  := '-' unary | atom ('^' digits)?
//   atom   := digits | 'z' | 't' | '(' expr ')'
// Malformed input throws ValidationError("ParseError"); dividing by the zero
// function surfaces the arithmetic DivisionByZero error.
RatFunc parse_ratfunc(const CtxPtr& ctx, const std::string& text);

// As parse_ratfunc, then requires the value to be a polynomial
// (ValidationError NotAPolynomial) or a constant (ValidationError NotAConstant).
Poly parse_poly(const CtxPtr& ctx, const std::string& text);
FieldElement parse_element(const CtxPtr& ctx, const std::string& text);

// Printing is canonical: ascending powers of z inside coefficients,
// descending powers of t, `+`-joined with composite coefficients
// parenthesized; every output reparses to the original value.
std::string to_string(const FieldElement& e);
std::string to_string(const Poly& p);
std::string to_string(const RatFunc& r);

}  // namespace twistlab::textio
