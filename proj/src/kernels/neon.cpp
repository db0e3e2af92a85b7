#include "hamrec/kernels.hpp"

#include <arm_neon.h>

#include <bit>

namespace hamrec::kernels::neon {
namespace {

template <class Combine, class ScalarCombine>
std::uint64_t reduce(const std::uint64_t* a, const std::uint64_t* b, std::size_t count,
                     Combine combine, ScalarCombine scalar_combine) {
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const uint64x2_t va = vld1q_u64(a + i);
    const uint64x2_t vb = b ? vld1q_u64(b + i) : vdupq_n_u64(0);
    const uint8x16_t bytes = vcntq_u8(vreinterpretq_u8_u64(combine(va, vb)));
    acc = vaddq_u64(acc, vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(bytes))));
  }
  std::uint64_t total = vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1);
  for (; i < count; ++i) total += std::popcount(scalar_combine(a[i], b ? b[i] : 0));
  return total;
}

}  // namespace

std::uint64_t popcount(const std::uint64_t* words, std::size_t count) {
  return reduce(
      words, nullptr, count, [](uint64x2_t x, uint64x2_t) { return x; },
      [](std::uint64_t x, std::uint64_t) { return x; });
}

std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count) {
  return reduce(
      a, b, count, [](uint64x2_t x, uint64x2_t y) { return veorq_u64(x, y); },
      [](std::uint64_t x, std::uint64_t y) { return x ^ y; });
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count) {
  return reduce(
      a, b, count, [](uint64x2_t x, uint64x2_t y) { return vandq_u64(x, y); },
      [](std::uint64_t x, std::uint64_t y) { return x & y; });
}

}  // namespace hamrec::kernels::neon
