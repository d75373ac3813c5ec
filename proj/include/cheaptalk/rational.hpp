// Copyright 2026 The Cheaptalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "cheaptalk/error.hpp"

namespace cheaptalk {

/// Exact rational number in canonical form (positive denominator, reduced).
///
/// Values whose numerator and denominator fit in 64 bits are stored inline and
/// combined with 128-bit intermediates; anything larger is promoted to a GMP
/// rational held behind an immutable shared pointer. The representation is
/// always canonical, so two equal values never differ in storage kind.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) {  // NOLINT: implicit by design of numeric types
    if (value == kMin) {
      *this = from_mpq(mpq_class(static_cast<long>(value)));
    } else {
      num_ = value;
    }
  }
  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ValidationError("rational with zero denominator");
    if (den < 0) {
      *this = from_wide(-static_cast<i128>(num), -static_cast<i128>(den));
    } else {
      *this = from_wide(num, den);
    }
  }
  explicit Rational(const mpq_class& value) { *this = from_mpq(value); }

  /// Parses "a", "-a", "a/b" or "-a/b" with b > 0. Non-reduced input such as
  /// "2/4" is accepted and canonicalised.
  static Rational parse(std::string_view text) {
    auto fail = [&]() -> Rational {
      throw ValidationError("malformed rational '" + std::string(text) + "'");
    };
    if (text.empty()) return fail();
    std::string_view body = text;
    bool negative = false;
    if (body.front() == '-') {
      negative = true;
      body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num_text = body.substr(0, slash);
    std::string_view den_text =
        slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    auto all_digits = [](std::string_view s) {
      if (s.empty()) return false;
      for (char c : s) {
        if (c < '0' || c > '9') return false;
      }
      return true;
    };
    if (!all_digits(num_text) || !all_digits(den_text)) return fail();
    mpz_class num(std::string(num_text), 10);
    mpz_class den(std::string(den_text), 10);
    if (den == 0) throw ValidationError("rational with zero denominator '" + std::string(text) + "'");
    if (negative) num = -num;
    mpq_class q(num, den);
    q.canonicalize();
    return from_mpq(q);
  }

  std::string str() const {
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
  }

  bool is_zero() const { return !big_ && num_ == 0; }
  int sign() const {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
  }
  bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

  Rational operator-() const {
    if (big_) return from_mpq(-*big_);
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.big_ || b.big_) return from_mpq(a.to_mpq() + b.to_mpq());
    if (a.den_ == b.den_) return from_wide(static_cast<i128>(a.num_) + b.num_, a.den_);
    return from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                     static_cast<i128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.big_ || b.big_) return from_mpq(a.to_mpq() - b.to_mpq());
    if (a.den_ == b.den_) return from_wide(static_cast<i128>(a.num_) - b.num_, a.den_);
    return from_wide(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                     static_cast<i128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.big_ || b.big_) return from_mpq(a.to_mpq() * b.to_mpq());
    if (a.num_ == 0 || b.num_ == 0) return Rational();
    return from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw ValidationError("division by zero");
    if (a.big_ || b.big_) return from_mpq(a.to_mpq() / b.to_mpq());
    i128 num = static_cast<i128>(a.num_) * b.den_;
    i128 den = static_cast<i128>(a.den_) * b.num_;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return from_wide(num, den);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.big_ || b.big_) {
      if (static_cast<bool>(a.big_) != static_cast<bool>(b.big_)) return false;
      return *a.big_ == *b.big_;
    }
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c;
    if (a.big_ || b.big_) {
      c = cmp(a.to_mpq(), b.to_mpq());
    } else {
      i128 lhs = static_cast<i128>(a.num_) * b.den_;
      i128 rhs = static_cast<i128>(b.num_) * a.den_;
      c = (lhs > rhs) - (lhs < rhs);
    }
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  using i128 = __int128;
  using u128 = unsigned __int128;
  static constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
  static constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

  static u128 gcd128(u128 a, u128 b) {
    if ((a >> 64) == 0 && (b >> 64) == 0) {
      return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    }
    while (b != 0) {
      u128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static mpz_class to_mpz(i128 v) {
    bool negative = v < 0;
    u128 mag = negative ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
    mpz_class hi(static_cast<unsigned long>(mag >> 64));
    mpz_class lo(static_cast<unsigned long>(mag & ~std::uint64_t{0}));
    mpz_class out = (hi << 64) + lo;
    return negative ? mpz_class(-out) : out;
  }

  // Requires den > 0.
  static Rational from_wide(i128 num, i128 den) {
    if (num == 0) return Rational();
    u128 mag = num < 0 ? static_cast<u128>(-num) : static_cast<u128>(num);
    u128 g = gcd128(mag, static_cast<u128>(den));
    if (g != 1) {
      num /= static_cast<i128>(g);
      den /= static_cast<i128>(g);
    }
    if (num > kMin && num <= kMax && den <= kMax) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(num);
      r.den_ = static_cast<std::int64_t>(den);
      return r;
    }
    Rational r;
    r.big_ = std::make_shared<const mpq_class>(to_mpz(num), to_mpz(den));
    return r;
  }

  static Rational from_mpq(mpq_class q) {
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    Rational r;
    if (n.fits_slong_p() && d.fits_slong_p() && n.get_si() != kMin) {
      r.num_ = n.get_si();
      r.den_ = d.get_si();
      return r;
    }
    r.big_ = std::make_shared<const mpq_class>(std::move(q));
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

static_assert(sizeof(long) == sizeof(std::int64_t), "Rational assumes LP64");

}  // namespace cheaptalk
