#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace srtk {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational arithmetic. ECMP fractions are products of 1/out-degree
// terms, so equality tests must never go through floating point.
using Fraction = boost::multiprecision::cpp_rational;

inline std::string fraction_to_string(const Fraction& q) {
    std::string s = numerator(q).str();
    s += '/';
    s += denominator(q).str();
    return s;
}

} // namespace srtk
