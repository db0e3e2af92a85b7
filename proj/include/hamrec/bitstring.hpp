#pragma once

// Finite 0/1 words, packed LSB-first into 64-bit words. Bit i lives in
// word i / 64 at position i % 64. Bits past size() are always zero, so
// word-level kernels never need tail masking on read.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hamrec {

class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t size, bool value = false);

  // Parses '0'/'1' characters; anything else is a domain error.
  static BitString parse(std::string_view text);
  // Bits with the given (0-based) indices set.
  static BitString with_ones(std::size_t size, std::span<const std::size_t> ones);
  // Low `size` bits of `code` (bit i of code -> position i).
  static BitString from_code(std::uint64_t code, std::size_t size);
  // Successive generator outputs, LSB first.
  static BitString random(std::size_t size, std::mt19937_64& rng);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  // Bounds-checked read; dimension error when i >= size().
  bool at(std::size_t i) const;
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i);
  void push_back(bool value);
  void append(const BitString& other);
  void resize(std::size_t size);

  // Ones in the whole string / in [begin, end).
  std::size_t count() const;
  std::size_t count(std::size_t begin, std::size_t end) const;

  BitString prefix(std::size_t n) const;
  BitString slice(std::size_t begin, std::size_t end) const;
  BitString complement() const;
  std::uint64_t to_code() const;  // requires size() <= 64

  std::string to_string() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  BitString& operator^=(const BitString& other);
  friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }

  friend bool operator==(const BitString& a, const BitString& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  // Lexicographic order of the '0'/'1' text.
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept;

 private:
  void clear_tail() noexcept;

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Number of set bits in the low `n` bits of code; handy for cube points.
inline unsigned weight(std::uint64_t code) noexcept { return static_cast<unsigned>(__builtin_popcountll(code)); }

}  // namespace hamrec
