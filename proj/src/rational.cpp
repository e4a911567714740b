#include "ldarlct/rational.hpp"

#include "ldarlct/error.hpp"

#include <charconv>
#include <numeric>
#include <ostream>

namespace ldarlct {
namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out))
    fail(ErrorCode::domain, "rational overflow in multiplication");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out))
    fail(ErrorCode::domain, "rational overflow in addition");
  return out;
}

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  const char *first = text.data();
  const char *last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last)
    fail(ErrorCode::parse, "not an integer: '" + std::string(text) + "'");
  return value;
}

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  require(den != 0, ErrorCode::domain, "rational with zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

Rational Rational::operator-() const {
  Rational out = *this;
  out.num_ = checked_mul(out.num_, -1);
  return out;
}

Rational &Rational::operator+=(const Rational &rhs) {
  const std::int64_t g = std::gcd(den_, rhs.den_);
  const std::int64_t lhs_scale = rhs.den_ / g;
  const std::int64_t rhs_scale = den_ / g;
  num_ = checked_add(checked_mul(num_, lhs_scale), checked_mul(rhs.num_, rhs_scale));
  den_ = checked_mul(den_, lhs_scale);
  normalize();
  return *this;
}

Rational &Rational::operator-=(const Rational &rhs) { return *this += -rhs; }

Rational &Rational::operator*=(const Rational &rhs) {
  // cross-reduce first to keep intermediates small
  const std::int64_t g1 = std::gcd(num_, rhs.den_);
  const std::int64_t g2 = std::gcd(rhs.num_, den_);
  const std::int64_t a = g1 ? num_ / g1 : 0;
  const std::int64_t d = g1 ? rhs.den_ / g1 : rhs.den_;
  const std::int64_t c = g2 ? rhs.num_ / g2 : 0;
  const std::int64_t b = g2 ? den_ / g2 : den_;
  num_ = checked_mul(a, c);
  den_ = checked_mul(b, d);
  normalize();
  return *this;
}

Rational &Rational::operator/=(const Rational &rhs) {
  require(rhs.num_ != 0, ErrorCode::domain, "rational division by zero");
  return *this *= Rational(rhs.den_, rhs.num_);
}

std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
  // denominators are positive, so cross-multiplication preserves order
  const std::int64_t lhs = checked_mul(a.num_, b.den_);
  const std::int64_t rhs = checked_mul(b.num_, a.den_);
  return lhs <=> rhs;
}

std::ostream &operator<<(std::ostream &os, const Rational &r) {
  return os << r.to_string();
}

} // namespace ldarlct
