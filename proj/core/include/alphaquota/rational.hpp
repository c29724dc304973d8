#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace alphaquota {

/// Exact fraction in lowest terms with a positive denominator.
///
/// Every alpha-value, quota, load, budget and price in the library is a
/// Rational; nothing is ever rounded. Arbitrary precision, so long
/// sequential-rule runs cannot overflow.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t numerator, std::int64_t denominator);

  /// Parses "p/q", "p", or a finite decimal such as "0.25".
  static Rational parse(std::string_view text);

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;

  /// Smallest integer >= value. Throws if it does not fit in int64.
  std::int64_t ceil() const;
  std::int64_t floor() const;

  std::string numerator_str() const;
  std::string denominator_str() const;
  /// Numerator/denominator as int64; throws std::overflow_error if too large.
  std::int64_t numerator() const;
  std::int64_t denominator() const;

  /// Nearest double (exact rounding when numerator and denominator fit in 53 bits).
  double to_double() const;
  /// Always "p/q" (e.g. "0/1", "4/5").
  std::string to_string() const;

  /// The rational with the smallest denominator in the open interval
  /// (lo, hi), found by descending the Stern-Brocot tree. Requires lo < hi.
  static Rational simplest_between(const Rational& lo, const Rational& hi);

  const mpq_class& raw() const { return value_; }

 private:
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }
  mpq_class value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

}  // namespace alphaquota
