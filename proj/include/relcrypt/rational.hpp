#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace relcrypt {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

Rational rat(long long num, long long den = 1);

// Accepts "n", "n/d" and finite decimals such as "-0.125".
Rational parse_rational(std::string_view text);

// Always "num/den" in lowest terms, e.g. "0/1", "-3/4".
std::string to_string(const Rational& r);

double to_double(const Rational& r);

Rational abs(const Rational& r);

}  // namespace relcrypt
