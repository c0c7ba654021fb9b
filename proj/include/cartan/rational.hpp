#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace cartan {

using Rational = boost::rational<std::int64_t>;

// Accepts "p/q", "p" and surrounding whitespace.
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& r);
// Best approximation with denominator at most max_den (continued fractions).
Rational approximate(double x, std::int64_t max_den = 1 << 20);

} // namespace cartan
