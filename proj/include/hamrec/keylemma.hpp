#pragma once

// Finite form of the ball-containment lemma: for E in {0,1}^n with
// b(n,r) <= |E| < b(n,r+1),
//   P(Γ_d({X}) ⊆ E) <= q_{r+1-d},   q_t = b(n,t) / 2^n.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamrec/dyadic.hpp"
#include "hamrec/hamming.hpp"

namespace hamrec {

inline constexpr std::size_t kKeyLemmaCeiling = 16;

// The r with b(n,r) <= size < b(n,r+1); n for the full cube, -1 for size 0.
std::int64_t ball_rank(std::size_t n, const BigInt& size);

// {x : Γ_1({x}) ⊆ E} applied d times.
EventFamily erode(const EventFamily& family, std::size_t d);

// Exact P(Γ_d({X}) ⊆ E) by enumeration. Resource error above `ceiling`.
Dyadic ball_containment_probability(const EventFamily& family, std::size_t d,
                                    std::size_t ceiling = kKeyLemmaCeiling);

// q_{r+1-d}; zero when r + 1 - d < 0, one for the full cube.
Dyadic sphere_tail_bound(std::size_t n, const BigInt& size, std::size_t d);

struct KeyLemmaRow {
  std::size_t d = 0;
  Dyadic exact;
  Dyadic bound;
};

struct FamilyReport {
  std::string label;
  std::size_t n = 0;
  std::uint64_t size = 0;
  std::int64_t r = -1;
  std::vector<KeyLemmaRow> rows;    // d = 0..n
  std::optional<std::size_t> tight_at;  // smallest d with exact == bound
  std::size_t violations = 0;
  bool sampled = false;             // true for families drawn under the threshold
};

FamilyReport evaluate_family(const std::string& label, const EventFamily& family, bool sampled = false);

struct KeyLemmaReport {
  std::size_t n = 0;
  std::size_t trials = 0;
  Dyadic threshold;
  std::uint64_t seed = 0;
  std::vector<FamilyReport> families;
  std::size_t violations = 0;
  // moduli[j-1]: smallest d with q_{r+1-d} <= 2^-j for the largest size
  // allowed by the threshold, j = 1..8.
  std::vector<std::size_t> moduli;
};

// `trials` random families with P(E) <= threshold, plus balls, subcubes,
// weight cuts, canonical spheres, unions of two balls, and the empty and
// full cube.
KeyLemmaReport verify_key_lemma(std::size_t n, std::size_t trials, const Dyadic& threshold, std::uint64_t seed);

nlohmann::json to_json(const FamilyReport& family);
nlohmann::json to_json(const KeyLemmaReport& report);

}  // namespace hamrec
