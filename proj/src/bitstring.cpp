#include "hamrec/bitstring.hpp"

#include <algorithm>
#include <bit>

#include "hamrec/error.hpp"
#include "hamrec/kernels.hpp"

namespace hamrec {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::domain: return "domain";
    case ErrorKind::contract: return "contract";
    case ErrorKind::resource: return "resource";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

namespace {
constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }
constexpr std::uint64_t low_mask(std::size_t bits) {
  return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}
}  // namespace

BitString::BitString(std::size_t size, bool value)
    : size_(size), words_(words_for(size), value ? ~std::uint64_t{0} : 0) {
  clear_tail();
}

BitString BitString::parse(std::string_view text) {
  BitString out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '1') {
      out.set(i);
    } else if (c != '0') {
      fail(ErrorKind::domain, "bit string contains '" + std::string(1, c) + "' at offset " +
                                  std::to_string(i));
    }
  }
  return out;
}

BitString BitString::with_ones(std::size_t size, std::span<const std::size_t> ones) {
  BitString out(size);
  for (std::size_t i : ones) out.set(i);
  return out;
}

BitString BitString::from_code(std::uint64_t code, std::size_t size) {
  require(size <= 64, ErrorKind::dimension, "from_code supports at most 64 bits");
  BitString out(size);
  if (size > 0) out.words_[0] = code & low_mask(size);
  return out;
}

BitString BitString::random(std::size_t size, std::mt19937_64& rng) {
  BitString out(size);
  for (auto& w : out.words_) w = rng();
  out.clear_tail();
  return out;
}

bool BitString::at(std::size_t i) const {
  require(i < size_, ErrorKind::dimension,
          "bit index " + std::to_string(i) + " out of range for length " + std::to_string(size_));
  return (*this)[i];
}

void BitString::set(std::size_t i, bool value) {
  require(i < size_, ErrorKind::dimension,
          "bit index " + std::to_string(i) + " out of range for length " + std::to_string(size_));
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= bit;
  } else {
    words_[i >> 6] &= ~bit;
  }
}

void BitString::flip(std::size_t i) {
  require(i < size_, ErrorKind::dimension,
          "bit index " + std::to_string(i) + " out of range for length " + std::to_string(size_));
  words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
}

void BitString::push_back(bool value) {
  resize(size_ + 1);
  if (value) set(size_ - 1);
}

void BitString::append(const BitString& other) {
  const std::size_t offset = size_;
  resize(size_ + other.size_);
  if (offset % 64 == 0) {
    std::copy(other.words_.begin(), other.words_.end(), words_.begin() + static_cast<std::ptrdiff_t>(offset / 64));
    return;
  }
  for (std::size_t i = 0; i < other.size_; ++i) {
    if (other[i]) set(offset + i);
  }
}

void BitString::resize(std::size_t size) {
  size_ = size;
  words_.resize(words_for(size), 0);
  clear_tail();
}

std::size_t BitString::count() const { return kernels::popcount(words_); }

std::size_t BitString::count(std::size_t begin, std::size_t end) const {
  require(begin <= end && end <= size_, ErrorKind::dimension,
          "range [" + std::to_string(begin) + ", " + std::to_string(end) + ") outside length " +
              std::to_string(size_));
  if (begin == end) return 0;
  const std::size_t first = begin / 64;
  const std::size_t last = (end - 1) / 64;
  const std::uint64_t head = ~std::uint64_t{0} << (begin % 64);
  const std::uint64_t tail = low_mask(end - last * 64);
  if (first == last) return static_cast<std::size_t>(std::popcount(words_[first] & head & tail));
  std::size_t total = static_cast<std::size_t>(std::popcount(words_[first] & head)) +
                      static_cast<std::size_t>(std::popcount(words_[last] & tail));
  if (last > first + 1) {
    total += kernels::popcount(std::span<const std::uint64_t>(words_).subspan(first + 1, last - first - 1));
  }
  return total;
}

BitString BitString::prefix(std::size_t n) const { return slice(0, n); }

BitString BitString::slice(std::size_t begin, std::size_t end) const {
  require(begin <= end && end <= size_, ErrorKind::dimension,
          "slice [" + std::to_string(begin) + ", " + std::to_string(end) + ") outside length " +
              std::to_string(size_));
  BitString out(end - begin);
  if (begin % 64 == 0) {
    std::copy_n(words_.begin() + static_cast<std::ptrdiff_t>(begin / 64), out.words_.size(), out.words_.begin());
    out.clear_tail();
    return out;
  }
  const unsigned shift = begin % 64;
  for (std::size_t w = 0; w < out.words_.size(); ++w) {
    const std::size_t src = begin / 64 + w;
    std::uint64_t v = words_[src] >> shift;
    if (src + 1 < words_.size()) v |= words_[src + 1] << (64 - shift);
    out.words_[w] = v;
  }
  out.clear_tail();
  return out;
}

BitString BitString::complement() const {
  BitString out(*this);
  for (auto& w : out.words_) w = ~w;
  out.clear_tail();
  return out;
}

std::uint64_t BitString::to_code() const {
  require(size_ <= 64, ErrorKind::dimension, "to_code supports at most 64 bits");
  return words_.empty() ? 0 : words_[0];
}

std::string BitString::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

BitString& BitString::operator^=(const BitString& other) {
  require(size_ == other.size_, ErrorKind::dimension,
          "xor of lengths " + std::to_string(size_) + " and " + std::to_string(other.size_));
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept {
  const std::size_t common = std::min(a.size_, b.size_);
  const std::size_t full = common / 64;
  for (std::size_t w = 0; w <= full && w < a.words_.size() && w < b.words_.size(); ++w) {
    std::uint64_t diff = a.words_[w] ^ b.words_[w];
    if (w == full) diff &= low_mask(common % 64);
    if (diff != 0) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(diff));
      return ((a.words_[w] >> bit) & 1u) ? std::strong_ordering::greater : std::strong_ordering::less;
    }
  }
  return a.size_ <=> b.size_;
}

void BitString::clear_tail() noexcept {
  if (size_ % 64 != 0 && !words_.empty()) words_.back() &= low_mask(size_ % 64);
}

}  // namespace hamrec
