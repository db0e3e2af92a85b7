#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace hamrec {

using BigInt = boost::multiprecision::cpp_int;

// Exact value numerator / 2^exponent, kept in lowest terms.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(BigInt numerator, std::uint64_t exponent);
  static Dyadic from_int(const BigInt& value) { return Dyadic(value, 0); }

  const BigInt& numerator() const noexcept { return num_; }
  std::uint64_t exponent() const noexcept { return exp_; }
  BigInt denominator() const { return BigInt(1) << exp_; }

  double to_double() const;
  // "a/b" with b a power of two ("0" and integers print without a slash).
  std::string to_string() const;

  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.exp_ == b.exp_ && a.num_ == b.num_; }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  BigInt num_ = 0;
  std::uint64_t exp_ = 0;
};

// Double approximation of value / 2^shift for large exact counts.
double scaled_to_double(const BigInt& value, std::uint64_t shift);

}  // namespace hamrec
