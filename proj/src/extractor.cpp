#include "hamrec/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hamrec/error.hpp"
#include "hamrec/kernels.hpp"

namespace hamrec {

BlockSchedule::BlockSchedule(std::vector<Block> blocks) : blocks_(std::move(blocks)), stages_(blocks_.size()) {
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Block& b = blocks_[k];
    require(b.end > b.start, ErrorKind::domain, "block " + std::to_string(k) + " is empty");
    if (k == 0) continue;
    const Block& prev = blocks_[k - 1];
    require(b.start == prev.end, ErrorKind::domain,
            "block " + std::to_string(k) + " does not start where block " + std::to_string(k - 1) + " ends");
    require(b.size() >= prev.size(), ErrorKind::domain,
            "block " + std::to_string(k) + " is smaller than its predecessor");
  }
}

BlockSchedule BlockSchedule::from_sizes(std::span<const std::uint64_t> sizes, std::uint64_t origin) {
  std::vector<Block> blocks;
  blocks.reserve(sizes.size());
  std::uint64_t at = origin;
  for (auto n : sizes) {
    blocks.push_back({at, at + n});
    at += n;
  }
  return BlockSchedule(std::move(blocks));
}

std::vector<std::uint64_t> BlockSchedule::sizes() const {
  std::vector<std::uint64_t> out;
  for (const auto& b : blocks_) out.push_back(b.size());
  return out;
}

std::vector<std::uint64_t> BlockSchedule::partial_sums() const {
  std::vector<std::uint64_t> out;
  for (const auto& b : blocks_) out.push_back(b.end);
  return out;
}

BlockSchedule BlockSchedule::prefix(std::size_t count) const {
  require(count <= blocks_.size(), ErrorKind::domain, "schedule prefix longer than schedule");
  BlockSchedule out(std::vector<Block>(blocks_.begin(), blocks_.begin() + static_cast<std::ptrdiff_t>(count)));
  for (std::size_t k = 0; k < count; ++k) out.stages_[k] = stages_[k];
  return out;
}

std::string BlockSchedule::to_text() const {
  std::ostringstream out;
  out << "# k start end odd_end [stage]\n";
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Block& b = blocks_[k];
    out << k << ' ' << b.start << ' ' << b.end << ' ' << b.odd_end();
    if (stages_[k]) out << ' ' << *stages_[k];
    out << '\n';
  }
  return out.str();
}

BlockSchedule BlockSchedule::parse_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Block> blocks;
  std::vector<std::optional<std::uint64_t>> stages;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::uint64_t> v;
    std::uint64_t x;
    while (fields >> x) v.push_back(x);
    require(fields.eof(), ErrorKind::config, "schedule line " + std::to_string(lineno) + ": not an integer");
    if (v.empty()) continue;
    require(v.size() == 4 || v.size() == 5, ErrorKind::config,
            "schedule line " + std::to_string(lineno) + ": expected 4 or 5 fields");
    require(v[0] == blocks.size(), ErrorKind::config,
            "schedule line " + std::to_string(lineno) + ": block index out of sequence");
    const Block b{v[1], v[2]};
    require(b.end > b.start && v[3] == b.odd_end(), ErrorKind::config,
            "schedule line " + std::to_string(lineno) + ": odd_end inconsistent with block");
    blocks.push_back(b);
    stages.push_back(v.size() == 5 ? std::optional<std::uint64_t>(v[4]) : std::nullopt);
  }
  BlockSchedule out(std::move(blocks));
  out.stages_ = std::move(stages);
  return out;
}

IndexSet odd_trim(IndexSet block) {
  require(!block.empty(), ErrorKind::domain, "odd_trim: empty block");
  std::sort(block.begin(), block.end());
  block.erase(std::unique(block.begin(), block.end()), block.end());
  if (block.size() % 2 == 0) block.pop_back();
  return block;
}

bool majority_bit(const BitString& x, std::span<const std::uint64_t> core) {
  require(!core.empty() && core.size() % 2 == 1, ErrorKind::contract,
          "majority_bit: core of size " + std::to_string(core.size()) + " is not odd; odd_trim it first");
  std::size_t ones = 0;
  for (auto i : core) ones += x.at(static_cast<std::size_t>(i));
  return 2 * ones > core.size();
}

namespace {

ExtractionTrace extract_impl(const BitString& x, const BlockSchedule& schedule, const BudgetFunction* g) {
  ExtractionTrace t;
  t.outputs = BitString(schedule.size());
  t.margins.resize(schedule.size());
  t.robust.resize(schedule.size());
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const Block& b = schedule[k];
    require(b.end <= x.size(), ErrorKind::dimension,
            "extract: input of length " + std::to_string(x.size()) + " does not cover block " +
                std::to_string(k) + " [" + std::to_string(b.start) + ", " + std::to_string(b.end) + ")");
    const auto ones = static_cast<std::int64_t>(x.count(b.start, b.odd_end()));
    const std::int64_t margin = 2 * ones - static_cast<std::int64_t>(b.core_size());
    t.margins[k] = margin;
    if (margin > 0) t.outputs.set(k);
    const std::int64_t budget = g ? (*g)(b.size()) : 0;
    t.robust[k] = std::abs(margin) > 2 * budget;
  }
  return t;
}

}  // namespace

ExtractionTrace extract(const BitString& x, const BlockSchedule& schedule) { return extract_impl(x, schedule, nullptr); }

ExtractionTrace extract(const BitString& x, const BlockSchedule& schedule, const BudgetFunction& g) {
  return extract_impl(x, schedule, &g);
}

ExtractionTrace extract_sets(const BitString& x, const std::vector<IndexSet>& blocks, const BudgetFunction& g) {
  std::vector<std::uint64_t> all;
  for (const auto& b : blocks) {
    require(!b.empty(), ErrorKind::domain, "extract_sets: empty block");
    all.insert(all.end(), b.begin(), b.end());
  }
  std::sort(all.begin(), all.end());
  require(std::adjacent_find(all.begin(), all.end()) == all.end(), ErrorKind::domain,
          "extract_sets: blocks are not pairwise disjoint");
  ExtractionTrace t;
  t.outputs = BitString(blocks.size());
  t.margins.resize(blocks.size());
  t.robust.resize(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const IndexSet core = odd_trim(blocks[k]);
    std::int64_t ones = 0;
    for (auto i : core) {
      require(i < x.size(), ErrorKind::dimension, "extract_sets: block " + std::to_string(k) + " exceeds input");
      ones += x[static_cast<std::size_t>(i)];
    }
    const std::int64_t margin = 2 * ones - static_cast<std::int64_t>(core.size());
    t.margins[k] = margin;
    if (margin > 0) t.outputs.set(k);
    t.robust[k] = std::abs(margin) > 2 * g(blocks[k].size());
  }
  return t;
}

namespace {

// 4^k * v^2 <= n, i.e. v / sqrt(n) <= 2^-k, in exact integer arithmetic.
bool decays(std::int64_t v, std::uint64_t n, std::size_t k) {
  const unsigned __int128 lhs = static_cast<unsigned __int128>(v) * static_cast<unsigned __int128>(v);
  if (k >= 32) return lhs == 0;
  return (lhs << (2 * k)) <= n;
}

}  // namespace

BlockSchedule make_schedule(const BudgetFunction& g, std::size_t block_count, const ScheduleOptions& options) {
  if (g.bounded()) {
    return BlockSchedule::from_sizes(std::vector<std::uint64_t>(block_count, 1));
  }
  std::vector<std::uint64_t> checkpoints;
  if (options.checkpoints) {
    checkpoints = *options.checkpoints;
    std::sort(checkpoints.begin(), checkpoints.end());
  }
  std::vector<std::uint64_t> sizes;
  std::uint64_t sum = 0;
  std::uint64_t prev = 1;
  for (std::size_t k = 0; k < block_count; ++k) {
    const std::uint64_t lo = std::max({prev, sum, std::uint64_t{1}});
    std::uint64_t n = 0;
    if (!options.checkpoints) {
      n = lo;
      while (true) {
        require(n <= options.scan_bound, ErrorKind::resource,
                "make_schedule: block " + std::to_string(k) + " needs a size above the scan bound " +
                    std::to_string(options.scan_bound));
        const std::int64_t v = g(n);
        if (decays(v, n, k)) break;
        // g is nondecreasing, so nothing below 4^k g(n)^2 can satisfy the decay bound.
        const unsigned __int128 square = static_cast<unsigned __int128>(v) * static_cast<unsigned __int128>(v);
        const bool huge = k >= 32 || (square >> (126 - 2 * k)) != 0;
        const unsigned __int128 need = huge ? ~static_cast<unsigned __int128>(0) : square << (2 * k);
        n = need > options.scan_bound ? options.scan_bound + 1 : static_cast<std::uint64_t>(need);
      }
    } else {
      bool found = false;
      for (auto e : checkpoints) {
        if (e < sum || e - sum < lo) continue;
        if (e - sum > options.scan_bound) break;
        if (decays(g(e - sum), e - sum, k)) {
          n = e - sum;
          found = true;
          break;
        }
      }
      require(found, ErrorKind::resource,
              "make_schedule: checkpoint set too sparse for block " + std::to_string(k));
    }
    sizes.push_back(n);
    sum += n;
    prev = n;
  }
  return BlockSchedule::from_sizes(sizes);
}

ScheduleCheck check_schedule(const BlockSchedule& schedule, const BudgetFunction& g,
                             const std::optional<std::vector<std::uint64_t>>& checkpoints) {
  auto bad = [](std::string why) { return ScheduleCheck{false, std::move(why)}; };
  const auto& blocks = schedule.blocks();
  if (!blocks.empty() && blocks.front().start != 0) return bad("schedule does not start at 0");
  if (g.bounded()) {
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      if (blocks[k].size() != 1) return bad("bounded budget requires singleton blocks");
    }
    return {};
  }
  long double sum = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const long double n = static_cast<long double>(blocks[k].size());
    if (n < 1) return bad("block " + std::to_string(k) + " is empty");
    if (k > 0 && blocks[k].start != blocks[k - 1].end) return bad("block " + std::to_string(k) + " not contiguous");
    if (k > 0 && blocks[k].size() < blocks[k - 1].size()) return bad("block " + std::to_string(k) + " shrinks");
    const long double ratio = static_cast<long double>(g(blocks[k].size())) / std::sqrt(n);
    if (ratio > std::ldexp(1.0L, -static_cast<int>(k)) * (1 + 1e-15L)) {
      return bad("block " + std::to_string(k) + ": g(n)/sqrt(n) exceeds 2^-" + std::to_string(k));
    }
    if (n < sum) return bad("block " + std::to_string(k) + " smaller than the sum of its predecessors");
    sum += n;
    if (checkpoints && std::find(checkpoints->begin(), checkpoints->end(), blocks[k].end) == checkpoints->end()) {
      return bad("partial sum " + std::to_string(blocks[k].end) + " not in checkpoint set");
    }
  }
  return {};
}

bool similar_p_N(const BitString& x, const BitString& y, const BudgetFunction& p,
                 std::span<const std::uint64_t> checkpoints, std::uint64_t n0) {
  require(x.size() == y.size(), ErrorKind::dimension, "similar_p_N: lengths differ");
  const BitString diff = x ^ y;
  for (auto n : checkpoints) {
    require(n >= 1 && n <= x.size(), ErrorKind::contract,
            "similar_p_N: checkpoint " + std::to_string(n) + " outside [1, " + std::to_string(x.size()) + "]");
    if (n < n0) continue;
    if (static_cast<std::int64_t>(diff.count(0, n)) > p(n)) return false;
  }
  return true;
}

bool similar_g_phi(const BitString& x, const BitString& y, const BudgetFunction& g, const BlockSchedule& schedule) {
  require(x.size() == y.size(), ErrorKind::dimension, "similar_g_phi: lengths differ");
  require(schedule.total_length() <= x.size(), ErrorKind::dimension, "similar_g_phi: input does not cover schedule");
  const BitString diff = x ^ y;
  for (const auto& b : schedule.blocks()) {
    if (static_cast<std::int64_t>(diff.count(b.start, b.end)) > g(b.size())) return false;
  }
  return true;
}

std::vector<PsiPoint> psi_deviation(const BitString& x, const BitString& a, const LambdaFn& lambda, double epsilon,
                                    std::span<const std::uint64_t> checkpoints) {
  require(x.size() == a.size(), ErrorKind::dimension, "psi_deviation: lengths differ");
  const BitString diff = x ^ a;
  std::vector<PsiPoint> out;
  out.reserve(checkpoints.size());
  for (auto n : checkpoints) {
    require(n >= 1 && n <= x.size(), ErrorKind::contract, "psi_deviation: checkpoint outside input");
    const double lam = lambda(n);
    require(lam > 0 && std::isfinite(lam), ErrorKind::domain,
            "psi_deviation: Lambda(" + std::to_string(n) + ") must be positive");
    PsiPoint pt;
    pt.n = n;
    pt.distance = diff.count(0, n);
    const double scale = std::sqrt(2.0 * static_cast<double>(n) * lam);
    pt.statistic = (static_cast<double>(pt.distance) - static_cast<double>(n) / 2) / scale;
    pt.within_psi = static_cast<double>(pt.distance) <= static_cast<double>(n) / 2 + (1 - epsilon) * scale;
    out.push_back(pt);
  }
  return out;
}

}  // namespace hamrec
