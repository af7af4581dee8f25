#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace preludec {

// Arbitrary-precision signed integer. Clock arithmetic chains periods and
// phases through repeated multiplication, so fixed-width integers are not an
// option anywhere in the checker.
using BigInt = boost::multiprecision::cpp_int;

/// Raised on rational contract violations: zero denominators, division by
/// zero, and narrowing a non-integer to an integer.
class RationalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact rational number, always held in canonical form: denominator >= 1 and
/// gcd(|numerator|, denominator) == 1. Canonical form makes structural
/// equality semantic equality.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(BigInt value) : num_(std::move(value)), den_(1) {}
  Rational(int value) : num_(value), den_(1) {}

  /// Builds num/den in canonical form; the sign is carried by the numerator.
  /// Throws RationalError when den == 0.
  Rational(BigInt num, BigInt den);

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  /// Returns the numerator of an integer-valued rational.
  /// Throws RationalError when the value is not an integer.
  const BigInt& to_integer() const;

  /// Integers render without a denominator ("5"), everything else as
  /// "num/den" ("1/2", "-3/4").
  std::string to_string() const;

  /// Accepts both rendered forms; returns nullopt on malformed text.
  static std::optional<Rational> parse(std::string_view text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  /// Throws RationalError when b is zero.
  friend Rational operator/(const Rational& a, const Rational& b);

  Rational operator-() const;

  bool operator==(const Rational& other) const = default;

  // Ordering by cross-multiplication (denominators are always positive).
  std::strong_ordering operator<=>(const Rational& other) const;

 private:
  BigInt num_;
  BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& value);

}  // namespace preludec
