#include "simcat/dyadic.hpp"

#include <bit>
#include <charconv>
#include <ostream>

#include "simcat/error.hpp"

namespace simcat {
namespace {

using Wide = __int128;

constexpr Wide kMaxNum = INT64_MAX;
constexpr Wide kMinNum = INT64_MIN;

// Builds a canonical dyadic from a wide numerator and a possibly negative
// exponent.
Dyadic make(Wide num, int exp) {
  if (num == 0) return Dyadic{};
  while (exp > 0 && (num & 1) == 0) {
    num /= 2;
    --exp;
  }
  while (exp < 0) {
    num *= 2;
    ++exp;
    if (num > kMaxNum || num < kMinNum) break;
  }
  if (num > kMaxNum || num < kMinNum) {
    throw OverflowError("dyadic numerator overflow");
  }
  return Dyadic(static_cast<std::int64_t>(num), exp);
}

}  // namespace

Dyadic::Dyadic(std::int64_t numerator, int exponent)
    : num_(numerator), exp_(exponent) {
  if (exp_ < 0) {
    *this = make(num_, exp_);
    return;
  }
  normalize();
}

Dyadic Dyadic::pow2(int k) {
  if (k >= 0) {
    if (k > 62) throw OverflowError("2^k out of range");
    return Dyadic(std::int64_t{1} << k);
  }
  return Dyadic(1, -k);
}

std::int64_t Dyadic::scaled_to(int scale) const {
  if (exp_ > scale) throw DimensionError("dyadic finer than requested scale");
  Wide v = static_cast<Wide>(num_) << (scale - exp_);
  if (v > kMaxNum || v < kMinNum) throw OverflowError("scaled numerator overflow");
  return static_cast<std::int64_t>(v);
}

Dyadic Dyadic::operator-() const {
  if (num_ == INT64_MIN) throw OverflowError("dyadic negation overflow");
  Dyadic r = *this;
  r.num_ = -num_;
  return r;
}

Dyadic& Dyadic::operator+=(const Dyadic& rhs) {
  if (rhs.num_ == 0) return *this;
  if (num_ == 0) return *this = rhs;
  int e = std::max(exp_, rhs.exp_);
  if (e - std::min(exp_, rhs.exp_) > 62) throw OverflowError("dyadic add overflow");
  Wide a = static_cast<Wide>(num_) << (e - exp_);
  Wide b = static_cast<Wide>(rhs.num_) << (e - rhs.exp_);
  return *this = make(a + b, e);
}

Dyadic& Dyadic::operator-=(const Dyadic& rhs) { return *this += -rhs; }

Dyadic& Dyadic::operator*=(const Dyadic& rhs) {
  if (num_ == 0 || rhs.num_ == 0) return *this = Dyadic{};
  return *this = make(static_cast<Wide>(num_) * rhs.num_, exp_ + rhs.exp_);
}

Dyadic Dyadic::ldexp(int k) const {
  if (num_ == 0) return *this;
  return make(num_, exp_ - k);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  int e = std::max(a.exp_, b.exp_);
  Wide x = static_cast<Wide>(a.num_) << (e - a.exp_);
  Wide y = static_cast<Wide>(b.num_) << (e - b.exp_);
  return x <=> y;
}

std::string Dyadic::to_string() const {
  if (exp_ == 0) return std::to_string(num_);
  return std::to_string(num_) + "/2^" + std::to_string(exp_);
}

Dyadic Dyadic::parse(const std::string& text) {
  auto fail = [&] { return MalformedError("not a dyadic number: '" + text + "'"); };
  auto slash = text.find('/');
  std::int64_t num = 0;
  auto head = std::string_view(text).substr(0, slash);
  auto [p, ec] = std::from_chars(head.data(), head.data() + head.size(), num);
  if (ec != std::errc{} || p != head.data() + head.size() || head.empty()) throw fail();
  if (slash == std::string::npos) return Dyadic(num);

  auto tail = std::string_view(text).substr(slash + 1);
  if (tail.starts_with("2^")) {
    int k = 0;
    auto body = tail.substr(2);
    auto [q, ec2] = std::from_chars(body.data(), body.data() + body.size(), k);
    if (ec2 != std::errc{} || q != body.data() + body.size() || body.empty() || k < 0) {
      throw fail();
    }
    return Dyadic(num, k);
  }
  std::uint64_t den = 0;
  auto [q, ec2] = std::from_chars(tail.data(), tail.data() + tail.size(), den);
  if (ec2 != std::errc{} || q != tail.data() + tail.size() || !std::has_single_bit(den)) {
    throw fail();
  }
  return Dyadic(num, std::countr_zero(den));
}

std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.to_string(); }

}  // namespace simcat
