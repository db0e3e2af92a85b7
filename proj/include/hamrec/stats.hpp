#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hamrec/bitstring.hpp"
#include "hamrec/dyadic.hpp"
#include "hamrec/extractor.hpp"

namespace hamrec {

inline constexpr double kBerryEsseenConstant = 0.71;
inline constexpr std::uint64_t kMaxCltN = 100000;

// 0.71 / sqrt(n): the Berry-Esseen bound for centered fair coins
// (sigma = 1/2, rho = 1/8). Domain error for n = 0.
double berry_esseen_bound(std::uint64_t n);

double normal_cdf(double x);

// sup_j |P(Bin(n, 1/2) <= j) - Phi((j - n/2) / (sqrt(n)/2))|, exact binomial
// sums. Resource error above kMaxCltN.
double binomial_cdf_gap(std::uint64_t n);

// Exact P(|S_n| <= g) for S_n = sum of n centered fair coins (+-1/2 each).
Dyadic small_ball_probability(std::uint64_t n, std::uint64_t g);
// 4 g / sqrt(2 pi n) + 2 * 0.71 / sqrt(n).
double small_ball_bound(std::uint64_t n, std::uint64_t g);

struct WeberSeries {
  std::vector<std::uint64_t> nu;
  std::vector<std::uint64_t> p;  // p[m] for m = 0..n_max; block m is (2^(m-1), 2^m]

  std::uint64_t n_max() const noexcept { return p.empty() ? 0 : p.size() - 1; }
  // Λ(k) = ln p_m for k in block m; -inf when p_m = 0.
  double lambda(std::uint64_t k) const;
};

// Dyadic block holding k >= 1: the m with 2^(m-1) < k <= 2^m.
std::uint64_t dyadic_block(std::uint64_t k);

// Domain error unless nu is strictly increasing and positive.
WeberSeries weber_series(std::span<const std::uint64_t> nu, std::uint64_t n_max);

using OrderFunction = std::function<double(std::uint64_t)>;

struct SparseSubsequence {
  std::vector<std::uint64_t> nu;  // one representative 2^m per admitted block m
  std::uint64_t threshold = 0;    // Λ(k) <= f(k) for every k >= threshold up to 2^n_max
};

SparseSubsequence sparse_subsequence(const OrderFunction& f, std::uint64_t n_max);

// First k0 such that Λ(k) <= f(k) for all k0 <= k <= limit, recomputed from
// weber_series(nu).
std::uint64_t weber_violation_threshold(std::span<const std::uint64_t> nu, const OrderFunction& f,
                                        std::uint64_t limit);

// Read-only view of the bits before position `size()`.
class PrefixView {
 public:
  PrefixView(const BitString& x, std::size_t size, std::size_t ones) : x_(x), size_(size), ones_(ones) {}
  std::size_t size() const noexcept { return size_; }
  std::size_t ones() const noexcept { return ones_; }
  bool operator[](std::size_t i) const;  // contract error for i >= size()

 private:
  const BitString& x_;
  std::size_t size_;
  std::size_t ones_;
};

struct SelectionRule {
  std::string description;
  std::function<bool(const PrefixView&)> decide;  // select the next position?

  static SelectionRule all();
  static SelectionRule even_indices();
  static SelectionRule even_parity();
  // "all", "even", "parity"; config error otherwise.
  static SelectionRule named(const std::string& name);
};

struct FrequencyReport {
  std::uint64_t checkpoint = 0;
  std::uint64_t positions_examined = 0;
  std::uint64_t ones_count = 0;
  std::optional<double> relative_frequency;  // empty when nothing was examined
  double deviation_from_half() const { return relative_frequency ? *relative_frequency - 0.5 : 0.0; }
};

FrequencyReport apply_selection(const SelectionRule& rule, const BitString& x);

// At each checkpoint n: ones of x among positions of `set` below n.
std::vector<FrequencyReport> frequency_on_set(const BitString& x, std::span<const std::uint64_t> set,
                                              std::span<const std::uint64_t> checkpoints);

struct Refinement {
  IndexSet positions;
  std::vector<bool> constants;
};

// i_0 = majority of sigma_0, B_0 = its positions; then i_{s+1} = majority of
// sigma_{s+1} on B_s, B_{s+1} = agreeing positions. Ties go to 1. Contract
// error unless lengths agree and length * 2^-q >= 1.
Refinement majority_refinement(const std::vector<BitString>& strings);

struct LilPoint {
  std::uint64_t n = 0;
  double statistic = 0.0;  // (|X|n| - n/2) / sqrt(2 n ln ln n)
};

struct LilScan {
  LilPoint max;
  std::vector<LilPoint> samples;  // at the requested sample points
};

// Every n in [n_min, |x|] is a checkpoint. Domain error if n_min < 16.
LilScan lil_scan(const BitString& x, std::uint64_t n_min, std::span<const std::uint64_t> sample_points = {});

}  // namespace hamrec
