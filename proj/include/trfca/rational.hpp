#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace trfca {

using BigInt = mpz_class;

/// Exact rational in lowest terms with a positive denominator.
class ExactRational {
public:
  ExactRational() : q_(0) {}
  ExactRational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  ExactRational(const BigInt& num, const BigInt& den = 1) : q_(num, den) {
    if (den == 0) throw std::domain_error("zero denominator");
    q_.canonicalize();
  }
  static ExactRational from_mpq(mpq_class q) {
    ExactRational r;
    r.q_ = std::move(q);
    r.q_.canonicalize();
    return r;
  }

  BigInt num() const { return q_.get_num(); }
  BigInt den() const { return q_.get_den(); }
  const mpq_class& mpq() const { return q_; }

  double to_double() const { return q_.get_d(); }

  /// "num/den"; integers print as "num/1".
  std::string to_string() const { return q_.get_num().get_str() + "/" + q_.get_den().get_str(); }

  /// Decimal expansion truncated toward zero after `places` digits.
  std::string to_decimal(unsigned places = 12) const {
    BigInt n = q_.get_num(), d = q_.get_den();
    const bool neg = n < 0;
    if (neg) n = -n;
    BigInt ip = n / d, rem = n % d;
    std::string s = (neg ? "-" : "") + ip.get_str();
    if (places) {
      s += '.';
      for (unsigned i = 0; i < places; ++i) {
        rem *= 10;
        BigInt digit = rem / d;
        rem %= d;
        s += static_cast<char>('0' + digit.get_ui());
      }
    }
    return s;
  }

  ExactRational abs() const { return from_mpq(::abs(q_)); }

  friend ExactRational operator+(const ExactRational& a, const ExactRational& b) { return from_mpq(a.q_ + b.q_); }
  friend ExactRational operator-(const ExactRational& a, const ExactRational& b) { return from_mpq(a.q_ - b.q_); }
  friend ExactRational operator*(const ExactRational& a, const ExactRational& b) { return from_mpq(a.q_ * b.q_); }
  friend ExactRational operator/(const ExactRational& a, const ExactRational& b) {
    if (b.q_ == 0) throw std::domain_error("division by zero");
    return from_mpq(a.q_ / b.q_);
  }
  friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  friend std::ostream& operator<<(std::ostream& os, const ExactRational& r) { return os << r.to_string(); }

private:
  mpq_class q_;
};

}  // namespace trfca
