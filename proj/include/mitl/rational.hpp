#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mitl {

/// Exact rational number; all clock arithmetic in the library uses these.
/// Floating point is never used for timestamps or valuations.
struct Rat {
  long long num = 0;
  long long den = 1;  // > 0

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    normalize();
  }

  void normalize() {
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  friend Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
  friend Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
  friend Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
  friend Rat operator/(Rat a, Rat b) {
    if (b.num == 0) throw std::invalid_argument("Rat: division by zero");
    return Rat(a.num * b.den, a.den * b.num);
  }
  Rat operator-() const { return Rat(-num, den); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.num * b.den <= b.num * a.den; }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

  bool is_integer() const { return den == 1; }

  /// Largest integer <= this.
  long long floor() const {
    if (num >= 0) return num / den;
    return -(((-num) + den - 1) / den);
  }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

/// Parses "n", "n/d" or a plain decimal like "0.5" (kept exact).
Rat parse_rat(const std::string& text);

}  // namespace mitl
