#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

namespace probinv {

/// Exact rational scalar used everywhere downstream of the parser.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/// Parses "3", "-3", "0.999", "1/5", "1.5/2", "1e-3" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical text: "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

Integer floor(const Rational& r);
Integer ceil(const Rational& r);

Integer lcm(const Integer& a, const Integer& b);

std::int64_t to_int64(const Integer& z);

}  // namespace probinv
