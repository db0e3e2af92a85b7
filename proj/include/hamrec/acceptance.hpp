#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hamrec::acceptance {

struct Result {
  std::string id;  // "1" .. "10", with a letter suffix for split criteria
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;  // 0 = none
};

struct Options {
  std::uint64_t seed = 1;
};

Result distribution_preservation(const Options& opt);
Result extractor_robustness(const Options& opt);
Result adversary_soundness(const Options& opt);
Result output_bias(const Options& opt);
Result harper_exhaustive(const Options& opt);
Result berry_esseen(const Options& opt);
Result small_ball(const Options& opt);
std::vector<Result> key_lemma(const Options& opt);  // inequality, then sub-ball equality
Result weber_machinery(const Options& opt);
Result lil_smoke(const Options& opt);

// All criteria in order; `on_result` fires as each finishes.
std::vector<Result> run_all(const Options& opt, const std::function<void(const Result&)>& on_result = {});

// "criterion <id> PASS|FAIL <title>: <detail> (<seconds> s)"
std::string format_line(const Result& r);

}  // namespace hamrec::acceptance
