#include "preludec/rational.hpp"

#include <cctype>
#include <ostream>
#include <utility>

namespace preludec {

namespace {

BigInt abs_value(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

std::optional<BigInt> parse_digits(std::string_view text) {
  if (text.empty()) return std::nullopt;
  BigInt value = 0;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw RationalError("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = boost::multiprecision::gcd(abs_value(num_), den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

const BigInt& Rational::to_integer() const {
  if (!is_integer()) throw RationalError("rational " + to_string() + " is not an integer");
  return num_;
}

std::string Rational::to_string() const {
  std::string out = num_.str();
  if (den_ != 1) {
    out += '/';
    out += den_.str();
  }
  return out;
}

std::optional<Rational> Rational::parse(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  std::optional<BigInt> num;
  std::optional<BigInt> den;
  if (slash == std::string_view::npos) {
    num = parse_digits(text);
    den = BigInt(1);
  } else {
    num = parse_digits(text.substr(0, slash));
    den = parse_digits(text.substr(slash + 1));
  }
  if (!num || !den || *den == 0) return std::nullopt;
  return Rational(negative ? BigInt(-*num) : *num, *den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw RationalError("rational division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational Rational::operator-() const {
  Rational out = *this;
  out.num_ = -out.num_;
  return out;
}

std::strong_ordering Rational::operator<=>(const Rational& other) const {
  BigInt lhs = num_ * other.den_;
  BigInt rhs = other.num_ * den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) {
  return os << value.to_string();
}

}  // namespace preludec
