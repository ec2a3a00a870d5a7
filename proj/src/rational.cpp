#include "locdim/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace locdim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  Integer v{std::string(s)};
  if (neg) v = -v;
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer p = parse_integer(trim(s.substr(0, slash)));
    Integer q = parse_integer(trim(s.substr(slash + 1)));
    if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    return Rational(p, q);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
      throw std::invalid_argument("malformed decimal '" + std::string(s) + "'");
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
    Integer num = Integer(std::string(whole)) * scale + (frac.empty() ? Integer(0) : Integer(std::string(frac)));
    Rational r(num, scale);
    return neg ? Rational(-r) : r;
  }
  return Rational(parse_integer(s));
}

std::string to_string(const Rational& q) {
  if (denom(q) == 1) return numer(q).str();
  return numer(q).str() + "/" + denom(q).str();
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
  int e = 0;
  double m = std::frexp(x, &e);
  // 53 significant bits fit exactly in an int64 after scaling.
  auto mant = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rational r{Integer(mant)};
  if (e > 0) r *= Rational(boost::multiprecision::pow(Integer(2), static_cast<unsigned>(e)));
  if (e < 0) r /= Rational(boost::multiprecision::pow(Integer(2), static_cast<unsigned>(-e)));
  return r;
}

Rational rational_pow(const Rational& q, unsigned e) {
  return Rational(boost::multiprecision::pow(numer(q), e), boost::multiprecision::pow(denom(q), e));
}

Integer lcm_of_denominators(const std::vector<Rational>& values) {
  Integer l = 1;
  for (const auto& v : values) l = boost::multiprecision::lcm(l, denom(v));
  return l;
}

Rational round_dyadic(const Rational& q, unsigned bits, bool round_up) {
  Integer scale = Integer(1) << bits;
  Integer n = numer(q) * scale;
  Integer d = denom(q);
  Integer f = n / d;  // truncates toward zero
  if (n % d != 0) {
    if (q < 0 && !round_up) f -= 1;
    if (q > 0 && round_up) f += 1;
  }
  return Rational(f, scale);
}

long double log_integer(const Integer& n) {
  if (n <= 0) throw std::domain_error("log of non-positive integer");
  std::size_t bits = boost::multiprecision::msb(n);
  if (bits < 60) return std::log(static_cast<long double>(n.convert_to<unsigned long long>()));
  std::size_t shift = bits - 60;
  Integer top = n >> shift;
  return std::log(static_cast<long double>(top.convert_to<unsigned long long>())) +
         static_cast<long double>(shift) * std::log(2.0L);
}

long double log_rational(const Rational& q) {
  if (q <= 0) throw std::domain_error("log of non-positive rational");
  return log_integer(numer(q)) - log_integer(denom(q));
}

}  // namespace locdim
