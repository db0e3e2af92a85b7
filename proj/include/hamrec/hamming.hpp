#pragma once

// Exact combinatorics on the Hamming cube {0,1}^n.
//
// Cube points of dimension n <= 64 are also handled as integer codes: bit i
// of the code is position i of the string (BitString::from_code / to_code).

#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

#include "hamrec/bitstring.hpp"
#include "hamrec/dyadic.hpp"

namespace hamrec {

using PointSet = std::set<BitString>;

// Positions where the strings differ. Dimension error on length mismatch.
std::size_t hamming_distance(const BitString& sigma, const BitString& tau);

BigInt binomial(std::int64_t n, std::int64_t k);

// b(n,k) = C(n,0) + ... + C(n,k); 0 for k < 0 and 2^n for k >= n.
BigInt binomial_tail(std::int64_t n, std::int64_t k);

// Γ_d(A): every point within distance d of some member of A. Γ_d(∅) = ∅.
PointSet neighborhood(const PointSet& points, std::size_t d);

// A ball Γ_k({c}) plus the first `shell_count` points at distance exactly
// k+1 from c, taken in simplicial order: supports of x XOR c compared
// set-lexicographically, so "1100" precedes "1010" precedes "0011".
struct SphereSpec {
  std::size_t dimension = 0;
  BitString center;
  std::int64_t inner_radius = -1;
  BigInt shell_count = 0;

  BigInt size() const { return binomial_tail(static_cast<std::int64_t>(dimension), inner_radius) + shell_count; }
  bool contains(const BitString& x) const;
  // Explicit member list; resource error above 24 dimensions.
  std::vector<BitString> members() const;
};

// Canonical sphere with exactly `size` points around `center`.
SphereSpec make_sphere(std::size_t n, const BigInt& size, const BitString& center);

// Rank of a weight-r support among all r-subsets of {0..n-1} in
// set-lexicographic order.
BigInt simplicial_rank(const BitString& support);

struct HarperResult {
  std::uint64_t exhaustive_min = 0;  // min |Γ_d(A)| over all A with |A| = size
  std::uint64_t sphere_value = 0;    // |Γ_d(S)| for the canonical sphere S of that size
};

inline constexpr std::size_t kDefaultHarperCeiling = 4;

// Exhaustive over all subsets of the requested size. Resource error if n
// exceeds `ceiling`; the hard limit is 5 (32 cube points per set mask).
HarperResult harper_min_neighborhood(std::size_t n, std::uint64_t size, std::size_t d,
                                     std::size_t ceiling = kDefaultHarperCeiling);

// Explicit subset of {0,1}^n stored as an indicator over point codes.
class EventFamily {
 public:
  static constexpr std::size_t kMaxDimension = 24;

  explicit EventFamily(std::size_t n);
  // Domain error on duplicates or wrong lengths.
  static EventFamily from_members(std::size_t n, const std::vector<BitString>& members);
  static EventFamily from_codes(std::size_t n, const std::vector<std::uint64_t>& codes);

  std::size_t dimension() const noexcept { return n_; }
  void insert(std::uint64_t code) { indicator_.set(code); }
  bool contains(std::uint64_t code) const { return indicator_[code]; }
  bool contains(const BitString& x) const;
  std::uint64_t size() const { return indicator_.count(); }
  Dyadic probability() const { return Dyadic(BigInt(size()), n_); }
  std::vector<BitString> members() const;
  EventFamily complement() const;

  // 2^n bits, bit c set iff the point with code c is a member.
  const BitString& indicator() const noexcept { return indicator_; }
  BitString& indicator() noexcept { return indicator_; }

 private:
  std::size_t n_;
  BitString indicator_;
};

}  // namespace hamrec
