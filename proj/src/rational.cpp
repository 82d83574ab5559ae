#include "probinv/rational.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace probinv {

namespace {

Rational parse_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::string digits;
  int scale = 0;
  bool seen_dot = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) ++scale;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c == 'e' || c == 'E') {
      break;
    } else {
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  long exponent = 0;
  if (pos < text.size()) {
    const std::string exp(text.substr(pos + 1));
    if (exp.empty()) throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
    std::size_t used = 0;
    exponent = std::stol(exp, &used);
    if (used != exp.size()) throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
  }
  const auto first = digits.find_first_not_of('0');
  Integer num(first == std::string::npos ? std::string("0") : digits.substr(first));
  exponent -= scale;
  Integer ten_pow = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  return negative ? -r : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("division by zero in '" + std::string(text) + "'");
  return num / den;
}

std::string to_string(const Rational& r) {
  if (is_integer(r)) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Integer floor(const Rational& r) {
  Integer q = numerator(r) / denominator(r);  // truncates toward zero
  if (r < 0 && Rational(q) != r) q -= 1;
  return q;
}

Integer ceil(const Rational& r) {
  Integer q = numerator(r) / denominator(r);
  if (r > 0 && Rational(q) != r) q += 1;
  return q;
}

Integer lcm(const Integer& a, const Integer& b) {
  return boost::multiprecision::lcm(a, b);
}

std::int64_t to_int64(const Integer& z) {
  if (z > std::numeric_limits<std::int64_t>::max() || z < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer " + z.str() + " does not fit in 64 bits");
  return z.convert_to<std::int64_t>();
}

}  // namespace probinv
