#ifndef TREEMEASURE_RATIONAL_HPP
#define TREEMEASURE_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace treemeasure {

using Rational = boost::rational<std::int64_t>;

/// Accepts `3`, `1/2`, `0.25` (optionally signed).  Throws DomainError.
Rational parse_rational(std::string_view text);

/// `1/2`, `0`, `-3/4`.
std::string to_string(const Rational& q);

/// SMT-LIB real literal: `(/ 1 2)`, `1`, `(- (/ 1 2))`.
std::string to_smtlib(const Rational& q);

/// Nearest fraction with denominator 10^9.
Rational approximate(double x);

double to_double(const Rational& q);

} // namespace treemeasure

#endif
