// AVX2 popcount kernels: nibble lookup through vpshufb, horizontal byte sums
// through vpsadbw (Mula, Kurz, Lemire). Compiled with -mavx2; only reached
// after a runtime CPU check.

#include "hamrec/kernels.hpp"

#include <immintrin.h>

#include <bit>

namespace hamrec::kernels::avx2 {
namespace {

inline __m256i popcount_bytes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
}

inline std::uint64_t horizontal_sum(__m256i acc) {
  return static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 0)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 1)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 2)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 3));
}

template <class Combine, class ScalarCombine>
std::uint64_t reduce(const std::uint64_t* a, const std::uint64_t* b, std::size_t count,
                     Combine combine, ScalarCombine scalar_combine) {
  __m256i acc = _mm256_setzero_si256();
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = b ? _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i)) : zero;
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(combine(va, vb)), zero));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < count; ++i) total += std::popcount(scalar_combine(a[i], b ? b[i] : 0));
  return total;
}

}  // namespace

std::uint64_t popcount(const std::uint64_t* words, std::size_t count) {
  return reduce(
      words, nullptr, count, [](__m256i x, __m256i) { return x; },
      [](std::uint64_t x, std::uint64_t) { return x; });
}

std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count) {
  return reduce(
      a, b, count, [](__m256i x, __m256i y) { return _mm256_xor_si256(x, y); },
      [](std::uint64_t x, std::uint64_t y) { return x ^ y; });
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count) {
  return reduce(
      a, b, count, [](__m256i x, __m256i y) { return _mm256_and_si256(x, y); },
      [](std::uint64_t x, std::uint64_t y) { return x & y; });
}

}  // namespace hamrec::kernels::avx2
