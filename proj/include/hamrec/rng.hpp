#pragma once

#include <cstdint>
#include <random>

namespace hamrec {

// Generator for trial `trial` of an experiment rooted at `root`. Seeded
// through std::seed_seq so other implementations can reproduce the stream.
inline std::mt19937_64 trial_rng(std::uint64_t root, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace hamrec
