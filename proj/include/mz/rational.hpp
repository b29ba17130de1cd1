#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace mz {

using Q = boost::multiprecision::cpp_rational;
using Z = boost::multiprecision::cpp_int;

/// Parses "n", "-n" or "n/d". Throws std::invalid_argument on malformed text or a zero denominator.
Q parse_rational(std::string_view text);

/// "n" when the denominator is 1, else "n/d" in lowest terms.
std::string format_rational(const Q& q);

double to_double(const Q& q);

}  // namespace mz
