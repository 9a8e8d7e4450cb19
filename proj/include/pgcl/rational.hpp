#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace pgcl {

/// Exact rational number. Always canonical: gcd(num, den) = 1, den > 0.
/// All arithmetic is exact; there is no floating-point path anywhere.
class Rational {
 public:
  Rational() : value_(0) {}
  Rational(long n) : value_(n) {}            // NOLINT(google-explicit-constructor)
  Rational(unsigned long n) : value_(n) {}   // NOLINT(google-explicit-constructor)
  Rational(int n) : value_(n) {}             // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(const mpz_class& n) : value_(n) {}
  explicit Rational(const mpq_class& q) : value_(q) { value_.canonicalize(); }

  /// Accepts "INT", "INT/INT", and decimal forms like "0.5" (converted
  /// exactly). Returns nullopt on anything else, including negative input
  /// when allow_negative is false.
  static std::optional<Rational> parse(std::string_view text,
                                       bool allow_negative = true);

  /// 2^e for e >= 0.
  static Rational pow2(unsigned long e);

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_negative() const { return sgn(value_) < 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  /// "7", "3/2", "-1/4": denominator omitted when it is 1.
  std::string str() const;

  double to_double() const { return value_.get_d(); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) { value_ /= o.value_; return *this; }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.value_.get_mpq_t(), b.value_.get_mpq_t()) != 0;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return mpq_cmp(a.value_.get_mpq_t(), b.value_.get_mpq_t()) < 0;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  /// Three-way compare for ordered containers.
  friend int compare(const Rational& a, const Rational& b) {
    return mpq_cmp(a.value_.get_mpq_t(), b.value_.get_mpq_t());
  }

  const mpq_class& raw() const { return value_; }

 private:
  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

}  // namespace pgcl
