#include "hamrec/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "hamrec/error.hpp"
#include "hamrec/hamming.hpp"

namespace hamrec {

double berry_esseen_bound(std::uint64_t n) {
  require(n >= 1, ErrorKind::domain, "berry_esseen_bound: n must be positive");
  return kBerryEsseenConstant / std::sqrt(static_cast<double>(n));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double binomial_cdf_gap(std::uint64_t n) {
  require(n >= 1, ErrorKind::domain, "binomial_cdf_gap: n must be positive");
  require(n <= kMaxCltN, ErrorKind::resource,
          "binomial_cdf_gap: n = " + std::to_string(n) + " exceeds " + std::to_string(kMaxCltN));
  // Exact running sum of C(n, j); the ratio to 2^n is taken only at the end.
  BigInt c = 1;
  BigInt cumulative = 0;
  const double half = static_cast<double>(n) / 2;
  const double scale = std::sqrt(static_cast<double>(n)) / 2;
  double gap = 0.0;
  for (std::uint64_t j = 0; j <= n; ++j) {
    cumulative += c;
    const double cdf = scaled_to_double(cumulative, n);
    gap = std::max(gap, std::abs(cdf - normal_cdf((static_cast<double>(j) - half) / scale)));
    c = c * (n - j) / (j + 1);
  }
  return gap;
}

Dyadic small_ball_probability(std::uint64_t n, std::uint64_t g) {
  require(n >= 1, ErrorKind::domain, "small_ball_probability: n must be positive");
  // |j - n/2| <= g  <=>  |2j - n| <= 2g
  BigInt mass = 0;
  BigInt c = 1;
  for (std::uint64_t j = 0; j <= n; ++j) {
    const auto twice = static_cast<std::int64_t>(2 * j) - static_cast<std::int64_t>(n);
    if (static_cast<std::uint64_t>(std::abs(twice)) <= 2 * g) mass += c;
    c = c * (n - j) / (j + 1);
  }
  return Dyadic(mass, n);
}

double small_ball_bound(std::uint64_t n, std::uint64_t g) {
  const double rn = std::sqrt(static_cast<double>(n));
  return 4.0 * static_cast<double>(g) / std::sqrt(2 * std::numbers::pi * static_cast<double>(n)) +
         2 * kBerryEsseenConstant / rn;
}

std::uint64_t dyadic_block(std::uint64_t k) {
  require(k >= 1, ErrorKind::domain, "dyadic_block: k must be positive");
  return static_cast<std::uint64_t>(std::bit_width(k - 1));
}

double WeberSeries::lambda(std::uint64_t k) const {
  const std::uint64_t m = dyadic_block(k);
  require(m < p.size(), ErrorKind::domain, "WeberSeries::lambda: k beyond 2^n_max");
  return p[m] == 0 ? -std::numeric_limits<double>::infinity() : std::log(static_cast<double>(p[m]));
}

WeberSeries weber_series(std::span<const std::uint64_t> nu, std::uint64_t n_max) {
  require(n_max < 64, ErrorKind::domain, "weber_series: n_max must be below 64");
  WeberSeries out;
  out.nu.assign(nu.begin(), nu.end());
  std::vector<bool> hit(n_max + 1, false);
  for (std::size_t j = 0; j < nu.size(); ++j) {
    require(nu[j] >= 1, ErrorKind::domain, "weber_series: entries must be positive");
    require(j == 0 || nu[j] > nu[j - 1], ErrorKind::domain, "weber_series: nu must be strictly increasing");
    const std::uint64_t m = dyadic_block(nu[j]);
    if (m >= 1 && m <= n_max) hit[m] = true;
  }
  out.p.assign(n_max + 1, 0);
  for (std::uint64_t m = 1; m <= n_max; ++m) out.p[m] = out.p[m - 1] + (hit[m] ? 1 : 0);
  return out;
}

SparseSubsequence sparse_subsequence(const OrderFunction& f, std::uint64_t n_max) {
  require(n_max < 63, ErrorKind::domain, "sparse_subsequence: n_max must be below 63");
  SparseSubsequence out;
  std::uint64_t count = 0;
  for (std::uint64_t m = 1; m <= n_max; ++m) {
    if (std::log(static_cast<double>(count + 1)) <= f(std::uint64_t{1} << (m - 1))) {
      out.nu.push_back(std::uint64_t{1} << m);
      ++count;
    }
  }
  out.threshold = weber_violation_threshold(out.nu, f, std::uint64_t{1} << n_max);
  return out;
}

std::uint64_t weber_violation_threshold(std::span<const std::uint64_t> nu, const OrderFunction& f,
                                        std::uint64_t limit) {
  const std::uint64_t n_max = dyadic_block(std::max<std::uint64_t>(limit, 1));
  const WeberSeries w = weber_series(nu, n_max);
  std::uint64_t threshold = 1;
  for (std::uint64_t k = 1; k <= limit; ++k) {
    if (w.lambda(k) > f(k)) threshold = k + 1;
  }
  return threshold;
}

bool PrefixView::operator[](std::size_t i) const {
  require(i < size_, ErrorKind::contract, "selection rule read past its prefix");
  return x_[i];
}

SelectionRule SelectionRule::all() {
  return {"all", [](const PrefixView&) { return true; }};
}

SelectionRule SelectionRule::even_indices() {
  return {"even", [](const PrefixView& v) { return v.size() % 2 == 0; }};
}

SelectionRule SelectionRule::even_parity() {
  return {"parity", [](const PrefixView& v) { return v.ones() % 2 == 0; }};
}

SelectionRule SelectionRule::named(const std::string& name) {
  if (name == "all") return all();
  if (name == "even") return even_indices();
  if (name == "parity") return even_parity();
  fail(ErrorKind::config, "unknown selection rule '" + name + "' (expected all, even or parity)");
}

FrequencyReport apply_selection(const SelectionRule& rule, const BitString& x) {
  FrequencyReport r;
  r.checkpoint = x.size();
  std::size_t ones = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (rule.decide(PrefixView(x, i, ones))) {
      ++r.positions_examined;
      r.ones_count += x[i];
    }
    ones += x[i];
  }
  if (r.positions_examined > 0) {
    r.relative_frequency = static_cast<double>(r.ones_count) / static_cast<double>(r.positions_examined);
  }
  return r;
}

std::vector<FrequencyReport> frequency_on_set(const BitString& x, std::span<const std::uint64_t> set,
                                              std::span<const std::uint64_t> checkpoints) {
  BitString mask(x.size());
  for (auto i : set) {
    require(i < x.size(), ErrorKind::domain, "frequency_on_set: position " + std::to_string(i) + " outside X");
    mask.set(static_cast<std::size_t>(i));
  }
  BitString both = mask;
  auto bw = both.words();
  auto xw = x.words();
  for (std::size_t w = 0; w < bw.size(); ++w) bw[w] &= xw[w];

  std::vector<FrequencyReport> out;
  for (auto n : checkpoints) {
    require(n <= x.size(), ErrorKind::domain, "frequency_on_set: checkpoint beyond X");
    FrequencyReport r;
    r.checkpoint = n;
    r.positions_examined = mask.count(0, n);
    r.ones_count = both.count(0, n);
    if (r.positions_examined > 0) {
      r.relative_frequency = static_cast<double>(r.ones_count) / static_cast<double>(r.positions_examined);
    }
    out.push_back(r);
  }
  return out;
}

Refinement majority_refinement(const std::vector<BitString>& strings) {
  require(!strings.empty(), ErrorKind::contract, "majority_refinement: no strings");
  const std::size_t len = strings.front().size();
  for (const auto& s : strings) {
    require(s.size() == len, ErrorKind::contract, "majority_refinement: strings differ in length");
  }
  require(strings.size() < 64 && (len >> strings.size()) >= 1, ErrorKind::contract,
          "majority_refinement: length * 2^-q must be at least 1");
  Refinement out;
  for (std::size_t i = 0; i < len; ++i) out.positions.push_back(i);
  for (const auto& s : strings) {
    std::size_t ones = 0;
    for (auto i : out.positions) ones += s[static_cast<std::size_t>(i)];
    const bool bit = 2 * ones >= out.positions.size();
    IndexSet kept;
    for (auto i : out.positions) {
      if (s[static_cast<std::size_t>(i)] == bit) kept.push_back(i);
    }
    out.positions = std::move(kept);
    out.constants.push_back(bit);
  }
  return out;
}

LilScan lil_scan(const BitString& x, std::uint64_t n_min, std::span<const std::uint64_t> sample_points) {
  require(n_min >= 16, ErrorKind::domain, "lil_scan: n_min must be at least 16");
  require(n_min <= x.size(), ErrorKind::dimension, "lil_scan: input shorter than n_min");
  LilScan out;
  out.max.statistic = -std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> samples(sample_points.begin(), sample_points.end());
  std::sort(samples.begin(), samples.end());
  auto next_sample = samples.begin();
  std::uint64_t ones = x.count(0, n_min - 1);
  for (std::uint64_t n = n_min; n <= x.size(); ++n) {
    ones += x[n - 1];
    const double dn = static_cast<double>(n);
    const double stat = (static_cast<double>(ones) - dn / 2) / std::sqrt(2 * dn * std::log(std::log(dn)));
    if (stat > out.max.statistic) out.max = {n, stat};
    while (next_sample != samples.end() && *next_sample <= n) {
      if (*next_sample == n) out.samples.push_back({n, stat});
      ++next_sample;
    }
  }
  return out;
}

}  // namespace hamrec
