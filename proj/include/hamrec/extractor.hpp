#pragma once

// Majority truth-table extractor over a schedule of disjoint blocks.
//
// Output bit k is the majority of the oracle on block k's odd core (the block
// with its largest index dropped when the block has even size). With a fair
// coin oracle the outputs are again independent fair coins; corrupting at
// most g(n_k) bits of block k cannot change output k when the block margin
// |S_k| already exceeds g(n_k).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hamrec/bitstring.hpp"
#include "hamrec/budget.hpp"

namespace hamrec {

using IndexSet = std::vector<std::uint64_t>;  // sorted, duplicate-free

struct Block {
  std::uint64_t start = 0;
  std::uint64_t end = 0;  // exclusive

  std::uint64_t size() const noexcept { return end - start; }
  std::uint64_t odd_end() const noexcept { return size() % 2 ? end : end - 1; }
  std::uint64_t core_size() const noexcept { return odd_end() - start; }

  friend bool operator==(const Block&, const Block&) = default;
};

// Contiguous, consecutive, nonempty blocks with nondecreasing sizes.
class BlockSchedule {
 public:
  BlockSchedule() = default;
  // Dimension/domain error if the blocks violate the schedule invariants.
  explicit BlockSchedule(std::vector<Block> blocks);
  static BlockSchedule from_sizes(std::span<const std::uint64_t> sizes, std::uint64_t origin = 0);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  bool empty() const noexcept { return blocks_.empty(); }
  const Block& operator[](std::size_t k) const { return blocks_[k]; }

  std::uint64_t total_length() const noexcept { return blocks_.empty() ? 0 : blocks_.back().end; }
  std::vector<std::uint64_t> sizes() const;
  // Σ_{j<=m} n_j for each m (offset by the first block's start).
  std::vector<std::uint64_t> partial_sums() const;

  // Adversary stage that targets block k, if any.
  std::optional<std::uint64_t> stage_of(std::size_t k) const { return stages_.at(k); }
  void set_stage(std::size_t k, std::optional<std::uint64_t> stage) { stages_.at(k) = stage; }

  BlockSchedule prefix(std::size_t count) const;

  // One line per block: "k start end odd_end [stage]". '#' starts a comment.
  std::string to_text() const;
  static BlockSchedule parse_text(std::string_view text);

  friend bool operator==(const BlockSchedule&, const BlockSchedule&) = default;

 private:
  std::vector<Block> blocks_;
  std::vector<std::optional<std::uint64_t>> stages_;
};

// Drops the maximum of an even-size block. Domain error on an empty block.
IndexSet odd_trim(IndexSet block);

// 1 iff strictly more ones than zeros of x on core. Contract error for an
// empty or even core; dimension error for indices outside x.
bool majority_bit(const BitString& x, std::span<const std::uint64_t> core);

struct ExtractionTrace {
  BitString outputs;
  std::vector<std::int64_t> margins;  // 2 * S_k = ones - zeros on the odd core; always odd
  std::vector<bool> robust;           // |S_k| > g(n_k)
};

// Dimension error naming the first block that x does not cover. Without a
// budget, robust flags compare against g = 0.
ExtractionTrace extract(const BitString& x, const BlockSchedule& schedule);
ExtractionTrace extract(const BitString& x, const BlockSchedule& schedule, const BudgetFunction& g);
// Arbitrary pairwise-disjoint nonempty index sets; each is odd-trimmed.
ExtractionTrace extract_sets(const BitString& x, const std::vector<IndexSet>& blocks, const BudgetFunction& g);

struct ScheduleOptions {
  std::uint64_t scan_bound = std::uint64_t{1} << 40;
  // When present, every partial sum must land in this set.
  std::optional<std::vector<std::uint64_t>> checkpoints;
};

// Smallest sizes, block by block, with g(n_k)/sqrt(n_k) <= 2^-k,
// n_k >= n_0 + ... + n_{k-1}, and partial sums in the checkpoint set. A
// bounded g yields the identity schedule (singletons). Resource error when
// the scan bound is reached.
BlockSchedule make_schedule(const BudgetFunction& g, std::size_t block_count, const ScheduleOptions& options = {});

struct ScheduleCheck {
  bool ok = true;
  std::string reason;
};

// Re-verifies make_schedule's constraints in floating point, without using
// its search.
ScheduleCheck check_schedule(const BlockSchedule& schedule, const BudgetFunction& g,
                             const std::optional<std::vector<std::uint64_t>>& checkpoints = std::nullopt);

// X ~_{p,N} Y on the finite checkpoint set: d(X|n, Y|n) <= p(n) for every
// n in N with n >= n0. Checkpoints are prefix lengths in [1, |X|].
bool similar_p_N(const BitString& x, const BitString& y, const BudgetFunction& p,
                 std::span<const std::uint64_t> checkpoints, std::uint64_t n0 = 0);

// At most g(n_k) disagreements inside every block.
bool similar_g_phi(const BitString& x, const BitString& y, const BudgetFunction& g, const BlockSchedule& schedule);

struct PsiPoint {
  std::uint64_t n = 0;
  std::uint64_t distance = 0;
  double statistic = 0.0;   // (d(X|n, A|n) - n/2) / sqrt(2 n Lambda(n))
  bool within_psi = false;  // distance <= n/2 + (1 - eps) sqrt(2 n Lambda(n))
};

using LambdaFn = std::function<double(std::uint64_t)>;

// Domain error when Lambda(n) <= 0 at a checkpoint.
std::vector<PsiPoint> psi_deviation(const BitString& x, const BitString& a, const LambdaFn& lambda, double epsilon,
                                    std::span<const std::uint64_t> checkpoints);

}  // namespace hamrec
