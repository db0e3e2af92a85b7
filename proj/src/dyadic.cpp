#include "hamrec/dyadic.hpp"

#include <cmath>

namespace hamrec {

Dyadic::Dyadic(BigInt numerator, std::uint64_t exponent) : num_(std::move(numerator)), exp_(exponent) {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while (exp_ > 0 && !bit_test(num_, 0)) {
    num_ >>= 1;
    --exp_;
  }
}

double scaled_to_double(const BigInt& value, std::uint64_t shift) {
  if (value == 0) return 0.0;
  const bool negative = value < 0;
  BigInt mag = negative ? BigInt(-value) : value;
  const std::uint64_t bits = msb(mag) + 1;
  std::uint64_t drop = bits > 64 ? bits - 64 : 0;
  const double head = static_cast<double>(static_cast<std::uint64_t>(mag >> drop));
  const double result = std::ldexp(head, static_cast<int>(static_cast<std::int64_t>(drop) - static_cast<std::int64_t>(shift)));
  return negative ? -result : result;
}

double Dyadic::to_double() const { return scaled_to_double(num_, exp_); }

std::string Dyadic::to_string() const {
  if (exp_ == 0) return num_.str();
  return num_.str() + "/" + denominator().str();
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const std::uint64_t e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
  const BigInt lhs = a.num_ << (e - a.exp_);
  const BigInt rhs = b.num_ << (e - b.exp_);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace hamrec
