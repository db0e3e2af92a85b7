#pragma once

// Budget-constrained Hamming adversary against the majority extractor.
//
// Stage s owns the window [n_s, n_{s+1}) of the oracle and attacks one
// output: the first extractor block inside the window. The corrupted string
// Y agrees with X outside the targeted odd cores.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamrec/bitstring.hpp"
#include "hamrec/budget.hpp"
#include "hamrec/extractor.hpp"

namespace hamrec {

struct AdversarySchedule {
  std::vector<std::uint64_t> stage_bounds;  // n_0 < n_1 < ... < n_S
  std::vector<std::size_t> targets;         // block index attacked at each stage
  BudgetFunction budget;
  std::size_t blocks_used = 0;              // blocks covered by [0, n_S)

  std::size_t stages() const noexcept { return targets.size(); }
};

struct GrowthReport {
  std::vector<double> ratios;     // p(n_{s+1} - n_s) / sqrt(n_{s+1} - n_s)
  std::vector<bool> telescoping;  // sum_{k<=s} p(n_{k+1} - n_k) <= p(n_{s+1})
};

GrowthReport growth_conditions(const AdversarySchedule& adv);

// Greedy windows over `blocks`: each window starts at a block boundary,
// targets its first block, and ends at the first block end where the worst
// case cost (core + 1) / 2 fits p(window), the cumulative worst case fits
// p(n_{s+1}), and p(window) >= threshold * sqrt(window). Resource error when
// the blocks run out.
AdversarySchedule make_adversary_schedule(const BlockSchedule& blocks, const BudgetFunction& p, std::size_t stages,
                                          double threshold = 1.0);

struct ForceResult {
  IndexSet flips;
  std::uint64_t cost = 0;
  bool forced = false;
  bool budget_exceeded = false;
  int case_id = 1;  // 2 when no setting of the window yields output 0
};

// Clears the lowest-index ones of the odd core until the majority is 0.
ForceResult force_majority_zero(const BitString& x, std::span<const std::uint64_t> core);

using Evaluator = std::function<bool(const BitString&)>;

inline constexpr std::size_t kDefaultWindowCeiling = 24;

// Exhaustive minimal-cost search over the window bits of x. `evaluate`
// sees oracle_prefix followed by the candidate window. Flip sets are tried
// by increasing size, lexicographically within a size.
ForceResult force_output_zero_generic(const BitString& x, Block window, const BitString& oracle_prefix,
                                      const Evaluator& evaluate, std::uint64_t budget,
                                      std::size_t ceiling = kDefaultWindowCeiling);

struct StageRecord {
  std::size_t stage = 0;
  Block window;
  std::size_t target = 0;
  IndexSet flips;
  std::uint64_t cost = 0;
  bool forced = false;
  bool budget_exceeded = false;
  int case_id = 1;
};

struct CorruptionReport {
  BitString y;
  std::string y_file;
  std::vector<StageRecord> stages;
  std::vector<std::uint64_t> cumulative;
  bool budget_ok = true;
};

CorruptionReport corrupt(const BitString& x, const BlockSchedule& schedule, const AdversarySchedule& adv,
                         bool enforce_budget = true);

// Recomputes, without trusting the report: Y differs from X exactly on the
// reported flips, every flip lies in its stage window, and
// d(X|n, Y|n) <= p(n) for every n in checkpoints.
bool verify_similarity(const CorruptionReport& report, const BitString& x, const BudgetFunction& p,
                       std::span<const std::uint64_t> checkpoints);

nlohmann::json to_json(const CorruptionReport& report);

}  // namespace hamrec
