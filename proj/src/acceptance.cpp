#include "hamrec/acceptance.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hamrec/adversary.hpp"
#include "hamrec/budget.hpp"
#include "hamrec/extractor.hpp"
#include "hamrec/hamming.hpp"
#include "hamrec/keylemma.hpp"
#include "hamrec/rng.hpp"
#include "hamrec/stats.hpp"

namespace hamrec::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
Result timed(std::string id, std::string title, double limit, F&& body) {
  Result r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.limit_seconds = limit;
  const auto t0 = Clock::now();
  std::ostringstream detail;
  const bool ok = body(detail);
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.detail = detail.str();
  r.pass = ok && (limit <= 0 || r.seconds <= limit);
  if (ok && !r.pass) r.detail += "; exceeded time limit";
  return r;
}

struct AdversaryRun {
  std::size_t runs = 0;
  std::size_t unforced = 0;
  std::size_t re_extract_failures = 0;
  std::size_t stage_budget_failures = 0;
  std::size_t cumulative_failures = 0;
  std::size_t verify_failures = 0;
  std::uint64_t corrupted_ones = 0, corrupted_total = 0;
  std::uint64_t clean_ones = 0, clean_total = 0;
  std::size_t telescoping_holds = 0, telescoping_total = 0;
  std::uint64_t length = 0;
};

// Shared by criteria 3 and 4; computed once per seed.
const AdversaryRun& adversary_runs(std::uint64_t seed) {
  static std::uint64_t cached_seed = 0;
  static bool have = false;
  static AdversaryRun run;
  if (have && cached_seed == seed) return run;
  run = {};
  const BudgetFunction g = BudgetFunction::power(1, 6);
  const BudgetFunction p = BudgetFunction::power(2, 3);
  const BlockSchedule all_blocks = make_schedule(g, 12);
  const AdversarySchedule adv = make_adversary_schedule(all_blocks, p, 4);
  const BlockSchedule blocks = all_blocks.prefix(adv.blocks_used);
  const std::vector<std::uint64_t> checkpoints(adv.stage_bounds.begin() + 1, adv.stage_bounds.end());
  const GrowthReport growth = growth_conditions(adv);
  for (bool t : growth.telescoping) run.telescoping_holds += t;
  run.telescoping_total = growth.telescoping.size();
  run.length = blocks.total_length();

  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    auto rng = trial_rng(seed, trial);
    const BitString x = BitString::random(blocks.total_length(), rng);
    const CorruptionReport rep = corrupt(x, blocks, adv);
    const ExtractionTrace clean = extract(x, blocks);
    const ExtractionTrace dirty = extract(rep.y, blocks);
    ++run.runs;
    for (std::size_t s = 0; s < adv.stages(); ++s) {
      const auto& st = rep.stages[s];
      const std::size_t target = adv.targets[s];
      if (!st.forced) ++run.unforced;
      if (dirty.outputs[target]) ++run.re_extract_failures;
      if (static_cast<std::int64_t>(st.cost) > p(st.window.size())) ++run.stage_budget_failures;
      if (static_cast<std::int64_t>(rep.cumulative[s]) > p(st.window.end)) ++run.cumulative_failures;
      run.corrupted_ones += dirty.outputs[target];
      run.clean_ones += clean.outputs[target];
      ++run.corrupted_total;
      ++run.clean_total;
    }
    if (!verify_similarity(rep, x, p, checkpoints) || !rep.budget_ok) ++run.verify_failures;
  }
  cached_seed = seed;
  have = true;
  return run;
}

}  // namespace

Result distribution_preservation(const Options&) {
  return timed("1", "distribution preservation", 1.0, [](std::ostringstream& out) {
    const std::array<std::uint64_t, 2> sizes{3, 5};
    const BlockSchedule sched = BlockSchedule::from_sizes(sizes);
    std::array<std::uint64_t, 2> ones{};
    std::array<std::uint64_t, 4> pairs{};
    for (std::uint64_t code = 0; code < 256; ++code) {
      const auto t = extract(BitString::from_code(code, 8), sched);
      ones[0] += t.outputs[0];
      ones[1] += t.outputs[1];
      ++pairs[t.outputs[0] + 2 * t.outputs[1]];
    }
    out << "ones per bit (" << ones[0] << "," << ones[1] << "), pairs (" << pairs[0] << "," << pairs[1] << ","
        << pairs[2] << "," << pairs[3] << ")";
    return ones[0] == 128 && ones[1] == 128 && pairs[0] == 64 && pairs[1] == 64 && pairs[2] == 64 && pairs[3] == 64;
  });
}

Result extractor_robustness(const Options&) {
  return timed("2", "extractor robustness", 120.0, [](std::ostringstream& out) {
    const std::array<std::uint64_t, 3> sizes{3, 5, 6};
    const BlockSchedule sched = BlockSchedule::from_sizes(sizes);
    const BudgetFunction g = BudgetFunction::constant(1);
    // At most one flip per block: -1 means no flip.
    std::vector<std::uint64_t> patterns;
    for (int a = -1; a < 3; ++a)
      for (int b = -1; b < 5; ++b)
        for (int c = -1; c < 6; ++c) {
          std::uint64_t m = 0;
          if (a >= 0) m |= std::uint64_t{1} << a;
          if (b >= 0) m |= std::uint64_t{1} << (3 + b);
          if (c >= 0) m |= std::uint64_t{1} << (8 + c);
          patterns.push_back(m);
        }
    std::uint64_t checked = 0, violations = 0;
    for (std::uint64_t code = 0; code < (1u << 14); ++code) {
      const BitString x = BitString::from_code(code, 14);
      const auto tx = extract(x, sched, g);
      for (auto m : patterns) {
        const BitString y = BitString::from_code(code ^ m, 14);
        if (!similar_g_phi(x, y, g, sched)) {
          ++violations;
          continue;
        }
        const auto ty = extract(y, sched);
        for (std::size_t k = 0; k < sched.size(); ++k) {
          if (tx.robust[k]) {
            ++checked;
            if (tx.outputs[k] != ty.outputs[k]) ++violations;
          }
        }
      }
    }
    out << patterns.size() << " flip patterns x 16384 inputs, " << checked << " robust outputs, " << violations
        << " violations";
    return violations == 0;
  });
}

Result adversary_soundness(const Options& opt) {
  return timed("3", "adversary soundness and budget", 60.0, [&](std::ostringstream& out) {
    const AdversaryRun& a = adversary_runs(opt.seed);
    out << a.runs << " runs over " << a.length << " bits: unforced " << a.unforced << ", re-extraction failures "
        << a.re_extract_failures << ", stage budget failures " << a.stage_budget_failures
        << ", cumulative failures " << a.cumulative_failures << ", verify failures " << a.verify_failures
        << "; telescoping sum holds at " << a.telescoping_holds << "/" << a.telescoping_total << " stages";
    return a.runs == 100 && a.unforced == 0 && a.re_extract_failures == 0 && a.stage_budget_failures == 0 &&
           a.cumulative_failures == 0 && a.verify_failures == 0;
  });
}

Result output_bias(const Options& opt) {
  return timed("4", "output bias on targeted positions", 0.0, [&](std::ostringstream& out) {
    const AdversaryRun& a = adversary_runs(opt.seed);
    const double dirty = static_cast<double>(a.corrupted_ones) / static_cast<double>(a.corrupted_total);
    const double clean = static_cast<double>(a.clean_ones) / static_cast<double>(a.clean_total);
    out << "corrupted frequency " << a.corrupted_ones << "/" << a.corrupted_total << ", uncorrupted frequency "
        << a.clean_ones << "/" << a.clean_total << " = " << clean;
    return a.corrupted_ones == 0 && a.corrupted_total > 0 && std::abs(clean - 0.5) <= 0.15 && dirty == 0.0;
  });
}

Result harper_exhaustive(const Options&) {
  return timed("5", "Harper exhaustive", 300.0, [](std::ostringstream& out) {
    std::uint64_t cases = 0, mismatches = 0;
    for (std::size_t n = 2; n <= 4; ++n) {
      for (std::uint64_t size = 0; size <= (std::uint64_t{1} << n); ++size) {
        for (std::size_t d = 0; d <= n; ++d) {
          const HarperResult h = harper_min_neighborhood(n, size, d);
          ++cases;
          if (h.exhaustive_min != h.sphere_value) ++mismatches;
        }
      }
    }
    out << cases << " (n, size, d) cases, " << mismatches << " mismatches";
    return mismatches == 0;
  });
}

Result berry_esseen(const Options&) {
  return timed("6", "Berry-Esseen gap", 10.0, [](std::ostringstream& out) {
    bool ok = true;
    for (std::uint64_t n : {10, 100, 1000, 10000}) {
      const double gap = binomial_cdf_gap(n);
      const double bound = berry_esseen_bound(n);
      char buf[96];
      std::snprintf(buf, sizeof buf, "n=%llu gap %.6f <= %.6f; ", static_cast<unsigned long long>(n), gap, bound);
      out << buf;
      ok = ok && gap <= bound;
    }
    return ok;
  });
}

Result small_ball(const Options&) {
  return timed("7", "small-ball bound", 0.0, [](std::ostringstream& out) {
    const BudgetFunction g = BudgetFunction::power(1, 3);
    std::size_t violations = 0, cases = 0;
    double worst = 0;
    for (std::uint64_t n = 16; n <= 4096; n *= 2) {
      const auto gn = static_cast<std::uint64_t>(g(n));
      const double exact = small_ball_probability(n, gn).to_double();
      const double bound = small_ball_bound(n, gn);
      ++cases;
      worst = std::max(worst, exact / bound);
      if (exact > bound) ++violations;
    }
    out << cases << " values of n, " << violations << " violations, max exact/bound " << worst;
    return violations == 0;
  });
}

std::vector<Result> key_lemma(const Options& opt) {
  std::size_t violations = 0, families = 0, sub_balls = 0, sub_balls_tight = 0;
  std::vector<std::string> untight;
  const Result a = timed("8a", "key lemma inequality", 300.0, [&](std::ostringstream& out) {
    for (std::size_t n = 4; n <= 12; ++n) {
      const KeyLemmaReport rep = verify_key_lemma(n, 200, Dyadic(1, 1), opt.seed + n);
      violations += rep.violations;
      families += rep.families.size();
      for (const auto& f : rep.families) {
        if (f.label.rfind("ball:", 0) != 0) continue;
        ++sub_balls;
        if (f.tight_at && *f.tight_at == 0) {
          ++sub_balls_tight;
        } else if (untight.size() < 3) {
          untight.push_back("n=" + std::to_string(n) + " " + f.label + " exact " + f.rows[0].exact.to_string() +
                            " < bound " + f.rows[0].bound.to_string());
        }
      }
    }
    out << families << " families over n=4..12, all d: " << violations << " violations";
    return violations == 0;
  });
  Result b;
  b.id = "8b";
  b.title = "key lemma sub-ball equality at d=0";
  b.pass = sub_balls > 0 && sub_balls_tight == sub_balls;
  std::ostringstream detail;
  detail << sub_balls_tight << "/" << sub_balls << " sub-ball families tight at d=0";
  for (const auto& u : untight) detail << "; " << u;
  b.detail = detail.str();
  return {a, b};
}

Result weber_machinery(const Options&) {
  return timed("9", "Weber machinery", 0.0, [](std::ostringstream& out) {
    const OrderFunction f = [](std::uint64_t k) { return default_lambda(k); };
    const std::uint64_t limit = std::uint64_t{1} << 20;
    const SparseSubsequence sub = sparse_subsequence(f, 20);
    const std::uint64_t recheck = weber_violation_threshold(sub.nu, f, limit);
    std::vector<std::uint64_t> naturals(limit);
    for (std::uint64_t j = 0; j < limit; ++j) naturals[j] = j + 1;
    const WeberSeries w = weber_series(naturals, 20);
    bool p_is_n = true;
    for (std::uint64_t m = 0; m <= 20; ++m) p_is_n = p_is_n && w.p[m] == m;
    out << "sparse nu has " << sub.nu.size() << " terms, reported threshold " << sub.threshold
        << ", re-verified threshold " << recheck << "; nu = naturals gives p_n = n: " << (p_is_n ? "yes" : "no");
    return recheck <= sub.threshold && p_is_n;
  });
}

Result lil_smoke(const Options& opt) {
  return timed("10", "LIL smoke (statistical, not a theorem)", 0.0, [&](std::ostringstream& out) {
    const std::uint64_t len = std::uint64_t{1} << 20;
    std::size_t inside = 0;
    double lo = 1e9, hi = -1e9;
    for (std::uint64_t t = 0; t < 64; ++t) {
      auto rng = trial_rng(opt.seed, 1000 + t);
      const LilScan scan = lil_scan(BitString::random(len, rng), 16);
      const double m = scan.max.statistic;
      lo = std::min(lo, m);
      hi = std::max(hi, m);
      if (m >= 0.5 && m <= 1.6) ++inside;
    }
    out << inside << "/64 seeds with max statistic in [0.5, 1.6]; observed range [" << lo << ", " << hi << "]";
    return inside >= 60;
  });
}

std::vector<Result> run_all(const Options& opt, const std::function<void(const Result&)>& on_result) {
  std::vector<Result> out;
  auto push = [&](Result r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  push(distribution_preservation(opt));
  push(extractor_robustness(opt));
  push(adversary_soundness(opt));
  push(output_bias(opt));
  push(harper_exhaustive(opt));
  push(berry_esseen(opt));
  push(small_ball(opt));
  for (auto& r : key_lemma(opt)) push(std::move(r));
  push(weber_machinery(opt));
  push(lil_smoke(opt));
  return out;
}

std::string format_line(const Result& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
  return "criterion " + r.id + " " + (r.pass ? "PASS" : "FAIL") + " " + r.title + ": " + r.detail + " (" + secs +
         " s)";
}

}  // namespace hamrec::acceptance
