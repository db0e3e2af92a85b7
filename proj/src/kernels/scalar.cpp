#include "hamrec/kernels.hpp"

#include <bit>

namespace hamrec::kernels::scalar {

std::uint64_t popcount(const std::uint64_t* words, std::size_t count) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < count; ++i) total += std::popcount(words[i]);
  return total;
}

std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < count; ++i) total += std::popcount(a[i] ^ b[i]);
  return total;
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < count; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

}  // namespace hamrec::kernels::scalar
