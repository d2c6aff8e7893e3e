#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "mobility/errors.hpp"

namespace mobility {

// Fixed-point decimal with exactly six fractional digits, stored as a count
// of micro-units in an int64. Addition, subtraction, comparison, and
// multiplication by an integer are exact; decimal-by-decimal multiplication
// and division by an integer round half away from zero to six digits.
// Rounding is monotone, so order relations survive it.
class Decimal {
 public:
  static constexpr std::int64_t kScale = 1'000'000;
  static constexpr int kFractionDigits = 6;

  constexpr Decimal() = default;

  static constexpr Decimal from_units(std::int64_t micro) {
    Decimal d;
    d.units_ = micro;
    return d;
  }

  static constexpr Decimal from_int(std::int64_t whole) {
    return from_units(whole * kScale);
  }

  // Accepts [-]digits[.digits], at most six fractional digits.
  static Decimal parse(std::string_view text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
      negative = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
      throw ParseError("not a decimal number: '" + std::string(text) + "'");
    }
    __int128 whole = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      whole = whole * 10 + (text[pos] - '0');
      if (whole > kMaxWhole) {
        throw ParseError("decimal out of range: '" + std::string(text) + "'");
      }
      ++pos;
    }
    __int128 frac = 0;
    int frac_digits = 0;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
        throw ParseError("not a decimal number: '" + std::string(text) + "'");
      }
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        if (++frac_digits > kFractionDigits) {
          throw ParseError("more than " + std::to_string(kFractionDigits) +
                           " fractional digits: '" + std::string(text) + "'");
        }
        frac = frac * 10 + (text[pos] - '0');
        ++pos;
      }
    }
    if (pos != text.size()) {
      throw ParseError("not a decimal number: '" + std::string(text) + "'");
    }
    for (int i = frac_digits; i < kFractionDigits; ++i) frac *= 10;
    __int128 units = whole * kScale + frac;
    if (negative) units = -units;
    return from_units(static_cast<std::int64_t>(units));
  }

  constexpr std::int64_t units() const { return units_; }
  constexpr bool is_zero() const { return units_ == 0; }
  constexpr bool is_negative() const { return units_ < 0; }

  // Canonical form: minimal digits, no trailing fractional zeros.
  std::string str() const {
    std::int64_t v = units_;
    std::string sign;
    if (v < 0) {
      sign = "-";
      v = -v;
    }
    std::int64_t whole = v / kScale;
    std::int64_t frac = v % kScale;
    std::string out = sign + std::to_string(whole);
    if (frac != 0) {
      std::string digits = std::to_string(frac);
      digits.insert(digits.begin(), kFractionDigits - digits.size(), '0');
      while (!digits.empty() && digits.back() == '0') digits.pop_back();
      out += '.';
      out += digits;
    }
    return out;
  }

  friend constexpr Decimal operator+(Decimal a, Decimal b) {
    return from_units(a.units_ + b.units_);
  }
  friend constexpr Decimal operator-(Decimal a, Decimal b) {
    return from_units(a.units_ - b.units_);
  }
  friend constexpr Decimal operator-(Decimal a) { return from_units(-a.units_); }

  Decimal& operator+=(Decimal other) {
    units_ += other.units_;
    return *this;
  }
  Decimal& operator-=(Decimal other) {
    units_ -= other.units_;
    return *this;
  }

  // Exact scaling by an integer count.
  friend constexpr Decimal operator*(Decimal a, std::int64_t n) {
    return from_units(a.units_ * n);
  }
  friend constexpr Decimal operator*(std::int64_t n, Decimal a) { return a * n; }

  // Rounded to six digits, half away from zero.
  friend Decimal operator*(Decimal a, Decimal b) {
    __int128 p = static_cast<__int128>(a.units_) * b.units_;
    return from_units(round_scaled(p, kScale));
  }

  Decimal div_int(std::int64_t n) const {
    return from_units(round_scaled(static_cast<__int128>(units_), n));
  }

  friend constexpr auto operator<=>(Decimal, Decimal) = default;

 private:
  static constexpr __int128 kMaxWhole = 9'000'000'000'000;  // keeps units in int64

  static std::int64_t round_scaled(__int128 value, std::int64_t divisor) {
    __int128 d = divisor;
    __int128 half = d / 2;
    __int128 q = value >= 0 ? (value + half) / d : -((-value + half) / d);
    return static_cast<std::int64_t>(q);
  }

  std::int64_t units_ = 0;
};

inline Decimal min(Decimal a, Decimal b) { return a < b ? a : b; }
inline Decimal max(Decimal a, Decimal b) { return a < b ? b : a; }

inline Decimal clamp(Decimal v, Decimal lo, Decimal hi) {
  return v < lo ? lo : (hi < v ? hi : v);
}

// Money and travel times share the representation; the aliases mark intent.
using Money = Decimal;
using Minutes = Decimal;

}  // namespace mobility
