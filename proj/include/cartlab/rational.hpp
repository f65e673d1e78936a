#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <limits>
#include <string>

#include "cartlab/errors.hpp"

namespace cartlab {

// Exact arithmetic for pruning temperatures, empirical error rates and
// loss integrals. Every value that enters a tie-sensitive comparison is a
// Rational; doubles are derived views only.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

long long to_int64(const BigInt& v, const char* what);

// Accepts "p/q", plain integers and fixed-point decimals ("0.25" == 1/4).
Rational parse_rational(const std::string& text);

std::string format_rational(const Rational& r);

} // namespace cartlab
