#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace hypermat {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p", "p/q", "-p/q" (surrounding whitespace allowed). Throws ParseError.
Rational parse_rational(std::string_view text);

/// "p" when the denominator is 1, otherwise "p/q" in lowest terms.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

Rational abs(const Rational& r);

}  // namespace hypermat
