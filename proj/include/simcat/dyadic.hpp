#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace simcat {

/// Exact dyadic rational `numerator / 2^exponent`.
///
/// Always kept canonical: the numerator is odd, or it is zero and the exponent
/// is zero. Canonical form makes structural equality coincide with numeric
/// equality. Arithmetic throws OverflowError instead of rounding.
class Dyadic {
 public:
  constexpr Dyadic() = default;
  constexpr Dyadic(std::int64_t integer) : num_(integer) { normalize(); }  // NOLINT
  Dyadic(std::int64_t numerator, int exponent);

  static Dyadic pow2(int k);  // 2^k, k may be negative

  std::int64_t numerator() const { return num_; }
  int exponent() const { return exp_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return exp_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  // Numerator of this value over the fixed scale 2^scale. Requires
  // exponent() <= scale.
  std::int64_t scaled_to(int scale) const;

  Dyadic operator-() const;
  Dyadic& operator+=(const Dyadic& rhs);
  Dyadic& operator-=(const Dyadic& rhs);
  Dyadic& operator*=(const Dyadic& rhs);

  // Multiply by 2^k (k may be negative).
  Dyadic ldexp(int k) const;

  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  // `num/2^k`, or a bare integer when the exponent is zero.
  std::string to_string() const;

  // Parses the to_string() format, plus plain `p/q` with q a power of two.
  static Dyadic parse(const std::string& text);

 private:
  constexpr void normalize() {
    if (num_ == 0) {
      exp_ = 0;
      return;
    }
    while (exp_ > 0 && (num_ & 1) == 0) {
      num_ /= 2;
      --exp_;
    }
  }

  std::int64_t num_ = 0;
  int exp_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Dyadic& d);

}  // namespace simcat
