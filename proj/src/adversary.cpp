#include "hamrec/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "hamrec/error.hpp"

namespace hamrec {

GrowthReport growth_conditions(const AdversarySchedule& adv) {
  GrowthReport out;
  std::int64_t running = 0;
  for (std::size_t s = 0; s + 1 < adv.stage_bounds.size(); ++s) {
    const std::uint64_t len = adv.stage_bounds[s + 1] - adv.stage_bounds[s];
    const std::int64_t budget = adv.budget(len);
    out.ratios.push_back(static_cast<double>(budget) / std::sqrt(static_cast<double>(len)));
    running += budget;
    out.telescoping.push_back(running <= adv.budget(adv.stage_bounds[s + 1]));
  }
  return out;
}

AdversarySchedule make_adversary_schedule(const BlockSchedule& blocks, const BudgetFunction& p, std::size_t stages,
                                          double threshold) {
  AdversarySchedule adv{{0}, {}, p, 0};
  std::size_t next = 0;
  std::uint64_t worst_total = 0;
  for (std::size_t s = 0; s < stages; ++s) {
    require(next < blocks.size(), ErrorKind::resource,
            "adversary schedule: ran out of blocks before stage " + std::to_string(s));
    const std::uint64_t start = blocks[next].start;
    const std::uint64_t worst = (blocks[next].core_size() + 1) / 2;
    bool placed = false;
    for (std::size_t last = next; last < blocks.size(); ++last) {
      const std::uint64_t end = blocks[last].end;
      const std::uint64_t len = end - start;
      const auto budget = static_cast<long double>(p(len));
      if (budget < static_cast<long double>(worst)) continue;
      if (p(end) < static_cast<std::int64_t>(worst_total + worst)) continue;
      if (budget * budget < static_cast<long double>(threshold) * threshold * static_cast<long double>(len)) continue;
      adv.targets.push_back(next);
      adv.stage_bounds.push_back(end);
      worst_total += worst;
      next = last + 1;
      placed = true;
      break;
    }
    require(placed, ErrorKind::resource,
            "adversary schedule: no window for stage " + std::to_string(s) + " fits the budget within " +
                std::to_string(blocks.size()) + " blocks");
  }
  adv.blocks_used = next;
  return adv;
}

ForceResult force_majority_zero(const BitString& x, std::span<const std::uint64_t> core) {
  require(!core.empty() && core.size() % 2 == 1, ErrorKind::contract, "force_majority_zero: core must be odd");
  std::uint64_t ones = 0;
  for (auto i : core) ones += x.at(static_cast<std::size_t>(i));
  const std::uint64_t half = core.size() / 2;
  ForceResult out;
  out.forced = true;
  out.cost = ones > half ? ones - half : 0;
  IndexSet sorted(core.begin(), core.end());
  std::sort(sorted.begin(), sorted.end());
  for (auto i : sorted) {
    if (out.flips.size() == out.cost) break;
    if (x[static_cast<std::size_t>(i)]) out.flips.push_back(i);
  }
  return out;
}

ForceResult force_output_zero_generic(const BitString& x, Block window, const BitString& oracle_prefix,
                                      const Evaluator& evaluate, std::uint64_t budget, std::size_t ceiling) {
  require(window.end <= x.size(), ErrorKind::dimension, "force_output_zero_generic: window exceeds input");
  require(oracle_prefix.size() == window.start, ErrorKind::dimension,
          "force_output_zero_generic: oracle prefix must end where the window starts");
  const std::size_t len = window.size();
  require(len <= ceiling, ErrorKind::resource,
          "force_output_zero_generic: window of " + std::to_string(len) + " bits exceeds the exhaustive ceiling " +
              std::to_string(ceiling));
  BitString base = oracle_prefix;
  base.append(x.slice(window.start, window.end));

  ForceResult out;
  std::vector<std::size_t> pick;
  for (std::size_t c = 0; c <= len; ++c) {
    pick.resize(c);
    for (std::size_t j = 0; j < c; ++j) pick[j] = j;
    while (true) {
      BitString candidate = base;
      for (auto j : pick) candidate.flip(window.start + j);
      if (!evaluate(candidate)) {
        out.cost = c;
        for (auto j : pick) out.flips.push_back(window.start + j);
        if (c > budget) {
          out.flips.clear();
          out.budget_exceeded = true;
        } else {
          out.forced = true;
        }
        return out;
      }
      // next c-combination of {0..len-1}
      std::size_t j = c;
      while (j > 0 && pick[j - 1] == len - c + j - 1) --j;
      if (j == 0) break;
      ++pick[j - 1];
      for (std::size_t t = j; t < c; ++t) pick[t] = pick[t - 1] + 1;
    }
  }
  out.case_id = 2;
  return out;
}

CorruptionReport corrupt(const BitString& x, const BlockSchedule& schedule, const AdversarySchedule& adv,
                         bool enforce_budget) {
  require(adv.stage_bounds.size() == adv.targets.size() + 1, ErrorKind::config,
          "corrupt: need one more stage bound than targets");
  require(adv.stage_bounds.back() <= x.size(), ErrorKind::dimension,
          "corrupt: input of length " + std::to_string(x.size()) + " does not reach n_S = " +
              std::to_string(adv.stage_bounds.back()));
  CorruptionReport report;
  report.y = x;
  std::uint64_t total = 0;
  for (std::size_t s = 0; s < adv.targets.size(); ++s) {
    const Block window{adv.stage_bounds[s], adv.stage_bounds[s + 1]};
    require(window.end > window.start, ErrorKind::config, "corrupt: stage bounds must increase");
    const std::size_t t = adv.targets[s];
    require(t < schedule.size(), ErrorKind::config, "corrupt: target block " + std::to_string(t) + " not in schedule");
    const Block& b = schedule[t];
    require(b.start >= window.start && b.end <= window.end, ErrorKind::config,
            "corrupt: target block " + std::to_string(t) + " lies outside stage window " + std::to_string(s));
    IndexSet core;
    for (std::uint64_t i = b.start; i < b.odd_end(); ++i) core.push_back(i);
    ForceResult f = force_majority_zero(x, core);
    const std::int64_t allowed = adv.budget(window.size());
    if (enforce_budget && static_cast<std::int64_t>(f.cost) > allowed) {
      f.flips.clear();
      f.forced = false;
      f.budget_exceeded = true;
    }
    StageRecord rec;
    rec.stage = s;
    rec.window = window;
    rec.target = t;
    rec.cost = f.forced ? f.cost : 0;
    rec.flips = std::move(f.flips);
    rec.forced = f.forced;
    rec.budget_exceeded = f.budget_exceeded;
    rec.case_id = f.case_id;
    for (auto i : rec.flips) report.y.flip(static_cast<std::size_t>(i));
    total += rec.cost;
    report.cumulative.push_back(total);
    if (static_cast<std::int64_t>(rec.cost) > allowed || static_cast<std::int64_t>(total) > adv.budget(window.end)) {
      report.budget_ok = false;
    }
    report.stages.push_back(std::move(rec));
  }
  return report;
}

bool verify_similarity(const CorruptionReport& report, const BitString& x, const BudgetFunction& p,
                       std::span<const std::uint64_t> checkpoints) {
  if (report.y.size() != x.size()) return false;
  BitString expected(x.size());
  for (const auto& st : report.stages) {
    for (auto i : st.flips) {
      if (i < st.window.start || i >= st.window.end || expected[static_cast<std::size_t>(i)]) return false;
      expected.set(static_cast<std::size_t>(i));
    }
  }
  if ((x ^ report.y) != expected) return false;
  return similar_p_N(x, report.y, p, checkpoints);
}

nlohmann::json to_json(const CorruptionReport& report) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& st : report.stages) {
    stages.push_back({{"s", st.stage},
                      {"window", {st.window.start, st.window.end}},
                      {"target", st.target},
                      {"flips", st.flips},
                      {"cost", st.cost},
                      {"forced", st.forced},
                      {"budget_exceeded", st.budget_exceeded},
                      {"case", st.case_id}});
  }
  return {{"y_file", report.y_file},
          {"stages", stages},
          {"cumulative", report.cumulative},
          {"budget_ok", report.budget_ok}};
}

}  // namespace hamrec
