#include <doctest.h>

#include <cmath>
#include <random>

#include "hamrec/error.hpp"
#include "hamrec/hamming.hpp"
#include "hamrec/rng.hpp"
#include "hamrec/stats.hpp"

using namespace hamrec;

namespace {

// Independent floating-point binomial CDF gap, usable for small n.
double float_gap(std::uint64_t n) {
  double cdf = 0, gap = 0;
  for (std::uint64_t j = 0; j <= n; ++j) {
    cdf += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) - n * std::log(2.0));
    const double x = (j - n / 2.0) / (std::sqrt(static_cast<double>(n)) / 2);
    gap = std::max(gap, std::abs(cdf - 0.5 * std::erfc(-x / std::sqrt(2.0))));
  }
  return gap;
}

}  // namespace

TEST_CASE("berry_esseen_bound oracle examples") {
  CHECK(berry_esseen_bound(100) == doctest::Approx(0.071));
  CHECK(berry_esseen_bound(1) == doctest::Approx(0.71));
  CHECK(berry_esseen_bound(10000) == doctest::Approx(0.0071));
  CHECK_THROWS_AS(berry_esseen_bound(0), Error);
}

TEST_CASE("normal CDF reference values") {
  CHECK(normal_cdf(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-13));
  CHECK(normal_cdf(-3) == doctest::Approx(0.0013498980316301).epsilon(1e-12));
}

TEST_CASE("binomial_cdf_gap oracle examples") {
  CHECK(binomial_cdf_gap(100) <= 0.071);
  CHECK(binomial_cdf_gap(1) <= 0.71);
  CHECK(binomial_cdf_gap(10000) <= 0.0071);
  // n = 1: CDF 1/2 at x = -1 against Phi(-1)
  CHECK(binomial_cdf_gap(1) == doctest::Approx(0.5 - normal_cdf(-1)));
  for (std::uint64_t n : {2, 7, 30, 64, 200}) CHECK(binomial_cdf_gap(n) == doctest::Approx(float_gap(n)).epsilon(1e-9));
}

TEST_CASE("binomial_cdf_gap range") {
  try {
    binomial_cdf_gap(kMaxCltN + 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::resource);
  }
  CHECK_THROWS_AS(binomial_cdf_gap(0), Error);
}

TEST_CASE("Berry-Esseen holds exactly on a sweep of n up to 10^4") {
  for (std::uint64_t n = 1; n <= 10000; n += (n < 600 ? 1 : 97)) {
    CAPTURE(n);
    REQUIRE(binomial_cdf_gap(n) <= berry_esseen_bound(n));
  }
}

TEST_CASE("small_ball_probability oracle examples") {
  CHECK(small_ball_probability(4, 0) == Dyadic(6, 4));
  CHECK(small_ball_probability(4, 0).to_string() == "3/8");
  CHECK(small_ball_probability(7, 4) == Dyadic(1, 0));
  CHECK(small_ball_probability(100, 5).to_double() <= 4 * 5 / std::sqrt(200 * M_PI) + 1.42 / 10);
  CHECK(small_ball_bound(100, 5) == doctest::Approx(4 * 5 / std::sqrt(200 * M_PI) + 0.142));
}

TEST_CASE("small_ball_probability matches enumeration for small n") {
  for (std::uint64_t n = 1; n <= 12; ++n) {
    for (std::uint64_t g = 0; g <= n; ++g) {
      std::uint64_t count = 0;
      for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
        if (std::abs(2 * static_cast<double>(weight(c)) - static_cast<double>(n)) <= 2.0 * g) ++count;
      }
      REQUIRE(small_ball_probability(n, g) == Dyadic(BigInt(count), n));
    }
  }
}

TEST_CASE("small-ball bound holds for g up to sqrt(n) log n") {
  for (std::uint64_t n = 1; n <= 10000; n += (n < 300 ? 1 : 211)) {
    const auto gmax = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)) * std::log(static_cast<double>(n)));
    for (std::uint64_t g = 0; g <= gmax; g += 1 + gmax / 8) {
      REQUIRE(small_ball_probability(n, g).to_double() <= small_ball_bound(n, g));
    }
  }
}

TEST_CASE("weber_series oracle examples") {
  std::vector<std::uint64_t> naturals;
  for (std::uint64_t j = 1; j <= 1024; ++j) naturals.push_back(j);
  const auto w = weber_series(naturals, 10);
  for (std::uint64_t m = 0; m <= 10; ++m) CHECK(w.p[m] == m);

  std::vector<std::uint64_t> fours;
  for (std::uint64_t v = 4; v <= (1u << 20); v *= 4) fours.push_back(v);
  CHECK(weber_series(fours, 10).p[10] == 5);

  std::vector<std::uint64_t> doubly{2, 4, 16, 256, 65536};
  const auto d = weber_series(doubly, 20);
  for (std::uint64_t n = 1; n <= 20; ++n) CHECK(d.p[n] == static_cast<std::uint64_t>(std::floor(std::log2(n))) + 1);
}

TEST_CASE("weber_series invariants") {
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint64_t> nu;
    std::uint64_t v = 0;
    while (nu.size() < 30) {
      v += 1 + rng() % (1 + v);
      nu.push_back(v);
    }
    const auto w = weber_series(nu, 24);
    for (std::uint64_t m = 1; m <= 24; ++m) {
      REQUIRE(w.p[m] >= w.p[m - 1]);
      REQUIRE(w.p[m] <= m);
      // Λ constant on the dyadic block (2^(m-1), 2^m]
      const std::uint64_t lo = (std::uint64_t{1} << (m - 1)) + 1, hi = std::uint64_t{1} << m;
      REQUIRE(w.lambda(lo) == w.lambda(hi));
      REQUIRE(w.lambda((lo + hi) / 2) == w.lambda(hi));
    }
  }
  CHECK(dyadic_block(1) == 0);
  CHECK(dyadic_block(2) == 1);
  CHECK(dyadic_block(3) == 2);
  CHECK(dyadic_block(4) == 2);
  CHECK(dyadic_block(5) == 3);
  CHECK_THROWS_AS(weber_series(std::vector<std::uint64_t>{3, 3}, 4), Error);
  CHECK_THROWS_AS(weber_series(std::vector<std::uint64_t>{0, 3}, 4), Error);
}

TEST_CASE("sparse_subsequence passes re-verification") {
  const OrderFunction lnln = [](std::uint64_t k) { return default_lambda(k); };
  const auto s = sparse_subsequence(lnln, 20);
  CHECK(weber_violation_threshold(s.nu, lnln, std::uint64_t{1} << 20) <= s.threshold);
  CHECK(s.nu.size() < 20);

  const OrderFunction identity = [](std::uint64_t k) { return static_cast<double>(k); };
  const auto all = sparse_subsequence(identity, 16);
  const auto w = weber_series(all.nu, 16);
  for (std::uint64_t m = 0; m <= 16; ++m) CHECK(w.p[m] == m);
  CHECK(all.threshold == 1);

  // eventually large: 0 below 2^10, then ln ln k + 3
  const OrderFunction late = [](std::uint64_t k) { return k < 1024 ? 0.0 : default_lambda(k) + 3; };
  const auto l = sparse_subsequence(late, 18);
  CHECK(weber_violation_threshold(l.nu, late, std::uint64_t{1} << 18) <= l.threshold);
}

TEST_CASE("weber_violation_threshold finds the last violation") {
  const OrderFunction zero = [](std::uint64_t) { return 0.0; };
  // p = 2 from block 2 on gives Λ = ln 2 > 0
  CHECK(weber_violation_threshold(std::vector<std::uint64_t>{2, 4}, zero, 16) == 17);
  CHECK(weber_violation_threshold(std::vector<std::uint64_t>{2}, zero, 16) == 1);
}

TEST_CASE("apply_selection oracle examples") {
  std::mt19937_64 rng(82);
  const BitString x = BitString::random(1000, rng);
  const auto all = apply_selection(SelectionRule::all(), x);
  CHECK(all.positions_examined == 1000);
  CHECK(all.ones_count == x.count());
  CHECK(*all.relative_frequency == doctest::Approx(x.count() / 1000.0));

  BitString alt(100);
  for (std::size_t i = 0; i < 100; i += 2) alt.set(i);
  CHECK(apply_selection(SelectionRule::even_indices(), alt).relative_frequency == std::optional<double>(1.0));

  auto r7 = trial_rng(7, 0);
  const auto parity = apply_selection(SelectionRule::even_parity(), BitString::random(1 << 16, r7));
  CHECK(std::abs(*parity.relative_frequency - 0.5) < 0.02);

  CHECK_FALSE(apply_selection(SelectionRule::all(), BitString()).relative_frequency.has_value());
}

TEST_CASE("selection rules only see the prefix") {
  const SelectionRule peek{"peek", [](const PrefixView& v) { return v[v.size()]; }};
  CHECK_THROWS_AS(apply_selection(peek, BitString::parse("0101")), Error);
  CHECK(SelectionRule::named("parity").description == "parity");
  CHECK_THROWS_AS(SelectionRule::named("oracle"), Error);
}

TEST_CASE("identity selection reproduces frequency_on_set over all positions") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    const BitString x = BitString::random(1 + rng() % 500, rng);
    std::vector<std::uint64_t> everything;
    for (std::uint64_t i = 0; i < x.size(); ++i) everything.push_back(i);
    const auto a = apply_selection(SelectionRule::all(), x);
    const auto b = frequency_on_set(x, everything, std::vector<std::uint64_t>{x.size()});
    REQUIRE(a.ones_count == b[0].ones_count);
    REQUIRE(a.positions_examined == b[0].positions_examined);
    REQUIRE(a.relative_frequency == b[0].relative_frequency);
  }
}

TEST_CASE("frequency_on_set oracle examples") {
  BitString alt(200);
  for (std::size_t i = 0; i < 200; i += 2) alt.set(i);
  std::vector<std::uint64_t> evens;
  for (std::uint64_t i = 0; i < 200; i += 2) evens.push_back(i);
  for (const auto& r : frequency_on_set(alt, evens, std::vector<std::uint64_t>{1, 50, 200})) {
    CHECK(r.relative_frequency == std::optional<double>(1.0));
  }
  const auto empty = frequency_on_set(alt, std::vector<std::uint64_t>{100}, std::vector<std::uint64_t>{50, 101});
  CHECK_FALSE(empty[0].relative_frequency.has_value());
  CHECK(empty[1].relative_frequency == std::optional<double>(1.0));

  const std::uint64_t n = std::uint64_t{1} << 20;
  auto rng = trial_rng(9, 0);
  const BitString x = BitString::random(n, rng);
  std::vector<std::uint64_t> ev;
  for (std::uint64_t i = 0; i < n; i += 2) ev.push_back(i);
  CHECK(std::abs(*frequency_on_set(x, ev, std::vector<std::uint64_t>{n})[0].relative_frequency - 0.5) < 0.01);
  CHECK_THROWS_AS(frequency_on_set(alt, std::vector<std::uint64_t>{500}, std::vector<std::uint64_t>{1}), Error);
}

TEST_CASE("majority_refinement oracle examples") {
  const auto r = majority_refinement({BitString::parse("11100"), BitString::parse("10110")});
  CHECK(r.positions == IndexSet{0, 2});
  CHECK(r.constants == std::vector<bool>{true, true});

  const auto ones = majority_refinement({BitString(6, true)});
  CHECK(ones.positions.size() == 6);
  CHECK(ones.constants == std::vector<bool>{true});

  const BitString s = BitString::parse("0010010001");
  const auto same = majority_refinement({s, s, s});
  CHECK(same.positions.size() == 7);
  CHECK(same.constants == std::vector<bool>{false, false, false});
}

TEST_CASE("majority_refinement invariants") {
  std::mt19937_64 rng(84);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t q = 1 + rng() % 6;
    const std::size_t len = (std::size_t{1} << q) + rng() % 40;
    std::vector<BitString> strings;
    for (std::size_t s = 0; s < q; ++s) strings.push_back(BitString::random(len, rng));
    const auto r = majority_refinement(strings);
    REQUIRE(r.constants.size() == q);
    REQUIRE((r.positions.size() << q) >= len);
    for (auto p : r.positions) {
      for (std::size_t s = 0; s < q; ++s) REQUIRE(strings[s][p] == r.constants[s]);
    }
  }
}

TEST_CASE("majority_refinement preconditions") {
  CHECK_THROWS_AS(majority_refinement({}), Error);
  CHECK_THROWS_AS(majority_refinement({BitString(4), BitString(5)}), Error);
  try {
    majority_refinement({BitString(3), BitString(3)});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::contract);
  }
}

TEST_CASE("lil_scan agrees with a direct computation") {
  std::mt19937_64 rng(85);
  const BitString x = BitString::random(5000, rng);
  const std::vector<std::uint64_t> samples{16, 100, 4096, 5000};
  const LilScan scan = lil_scan(x, 16, samples);
  REQUIRE(scan.samples.size() == 4);
  double best = -1e9;
  for (std::uint64_t n = 16; n <= 5000; ++n) {
    const double d = static_cast<double>(n);
    const double stat = (static_cast<double>(x.count(0, n)) - d / 2) / std::sqrt(2 * d * std::log(std::log(d)));
    best = std::max(best, stat);
    for (const auto& s : scan.samples) {
      if (s.n == n) REQUIRE(s.statistic == doctest::Approx(stat));
    }
  }
  CHECK(scan.max.statistic == doctest::Approx(best));
  CHECK_THROWS_AS(lil_scan(x, 8), Error);
  CHECK_THROWS_AS(lil_scan(BitString(10), 16), Error);
}
