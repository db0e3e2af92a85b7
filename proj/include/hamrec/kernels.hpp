#pragma once

// Bit-parallel popcount kernels over packed 64-bit words.
//
// Every kernel has a portable scalar reference implementation; SIMD variants
// (AVX2 on x86-64, NEON on AArch64) are compiled when the toolchain allows it
// and selected once at runtime from CPU feature detection. Results must be
// bit-identical across backends.
//
// Setting HAMREC_KERNELS=scalar in the environment pins the scalar backend.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hamrec::kernels {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
  Backend backend;
  std::uint64_t (*popcount)(const std::uint64_t* words, std::size_t count);
  std::uint64_t (*xor_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t count);
  std::uint64_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t count);
};

std::string_view name(Backend backend) noexcept;

// Compiled in and supported by the running CPU.
bool available(Backend backend) noexcept;
std::vector<Backend> available_backends();

// Throws Error(resource) if the backend is not available.
const KernelTable& table(Backend backend);

// The table selected for this process.
const KernelTable& active() noexcept;

// Overrides runtime selection; intended for equivalence tests and benchmarks.
void force(Backend backend);
void reset_selection() noexcept;

inline std::uint64_t popcount(std::span<const std::uint64_t> words) {
  return active().popcount(words.data(), words.size());
}

inline std::uint64_t xor_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active().xor_popcount(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active().and_popcount(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

namespace scalar {
std::uint64_t popcount(const std::uint64_t* words, std::size_t count);
std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count);
std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count);
}  // namespace scalar

namespace avx2 {
std::uint64_t popcount(const std::uint64_t* words, std::size_t count);
std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count);
std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count);
}  // namespace avx2

namespace neon {
std::uint64_t popcount(const std::uint64_t* words, std::size_t count);
std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count);
std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t count);
}  // namespace neon

}  // namespace hamrec::kernels
