#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace ldarlct {

/// Exact rational number over 64-bit integers, always kept in lowest terms
/// with a positive denominator. Arithmetic throws on overflow instead of
/// wrapping.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value), den_(1) {} // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_integer() const noexcept { return den_ == 1; }
  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// "21/2", "12", "-3/4".
  std::string to_string() const;

  /// Accepts "p/q" or a plain integer.
  static Rational parse(std::string_view text);

  Rational operator-() const;
  Rational &operator+=(const Rational &rhs);
  Rational &operator-=(const Rational &rhs);
  Rational &operator*=(const Rational &rhs);
  Rational &operator/=(const Rational &rhs);

  friend Rational operator+(Rational a, const Rational &b) { return a += b; }
  friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational &b) { return a /= b; }

  friend bool operator==(const Rational &a, const Rational &b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational &a, const Rational &b);

private:
  void normalize();

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream &operator<<(std::ostream &os, const Rational &r);

} // namespace ldarlct
