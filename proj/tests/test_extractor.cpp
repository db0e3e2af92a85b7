#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "hamrec/error.hpp"
#include "hamrec/extractor.hpp"
#include "hamrec/rng.hpp"

using namespace hamrec;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::config;
}

BlockSchedule sizes(std::initializer_list<std::uint64_t> s) {
  return BlockSchedule::from_sizes(std::vector<std::uint64_t>(s));
}

}  // namespace

TEST_CASE("odd_trim oracle examples") {
  CHECK(odd_trim({3, 4, 5, 6}) == IndexSet{3, 4, 5});
  CHECK(odd_trim({0, 1, 2}) == IndexSet{0, 1, 2});
  CHECK(odd_trim({7}) == IndexSet{7});
  CHECK(odd_trim({9, 2}) == IndexSet{2});
  CHECK(kind_of([] { odd_trim({}); }) == ErrorKind::domain);
}

TEST_CASE("majority_bit oracle examples") {
  const std::vector<std::uint64_t> first3{0, 1, 2};
  CHECK(majority_bit(BitString::parse("110000"), first3));
  CHECK_FALSE(majority_bit(BitString(9), std::vector<std::uint64_t>{1, 4, 8}));
  CHECK(majority_bit(BitString::parse("11001101"), std::vector<std::uint64_t>{3, 4, 5, 6, 7}));
  CHECK(kind_of([] { majority_bit(BitString(4), std::vector<std::uint64_t>{0, 1}); }) == ErrorKind::contract);
  CHECK(kind_of([] { majority_bit(BitString(4), std::vector<std::uint64_t>{}); }) == ErrorKind::contract);
  CHECK(kind_of([] { majority_bit(BitString(4), std::vector<std::uint64_t>{9}); }) == ErrorKind::dimension);
}

TEST_CASE("extract oracle examples") {
  const auto t = extract(BitString::parse("11001101"), sizes({3, 5}));
  CHECK(t.outputs.to_string() == "11");
  CHECK(t.margins == std::vector<std::int64_t>{1, 1});
  CHECK(extract(BitString(20, true), sizes({1, 3, 4, 8})).outputs.to_string() == "1111");
  CHECK(extract(BitString::parse("0"), sizes({1})).outputs.to_string() == "0");
  CHECK(extract(BitString::parse("1"), sizes({1})).outputs.to_string() == "1");
}

TEST_CASE("even blocks drop their last bit") {
  // block [0,4): core is bits 0..2 = 0,0,1 -> 0 even though bit 3 is 1
  const auto t = extract(BitString::parse("0011"), sizes({4}));
  CHECK(t.outputs.to_string() == "0");
  CHECK(t.margins[0] == -1);
}

TEST_CASE("extract names the first uncovered block") {
  try {
    extract(BitString(5), sizes({3, 5}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::dimension);
    CHECK(std::string(e.what()).find("block 1") != std::string::npos);
  }
}

TEST_CASE("robust flags compare |S| with g") {
  const auto g = BudgetFunction::constant(1);
  const auto t = extract(BitString::parse("111" "11111" "10000"), sizes({3, 5, 5}), g);
  // margins 3, 5, -3 -> |S| = 1.5, 2.5, 1.5
  CHECK(t.margins == std::vector<std::int64_t>{3, 5, -3});
  CHECK(t.robust == std::vector<bool>{true, true, true});
  const auto u = extract(BitString::parse("110" "11000"), sizes({3, 5}), g);
  CHECK(u.robust == std::vector<bool>{false, false});
}

TEST_CASE("extract_sets handles arbitrary disjoint sets") {
  const BitString x = BitString::parse("1010110");
  const auto t = extract_sets(x, {{0, 2, 4}, {1, 3, 6, 5}}, BudgetFunction::constant(0));
  CHECK(t.outputs.to_string() == "10");
  CHECK(kind_of([&] { extract_sets(x, {{0, 1}, {1, 2, 3}}, BudgetFunction::constant(0)); }) == ErrorKind::domain);
  CHECK(kind_of([&] { extract_sets(x, {{0, 9, 10}}, BudgetFunction::constant(0)); }) == ErrorKind::dimension);
}

TEST_CASE("BlockSchedule validates its invariants") {
  CHECK(kind_of([] { BlockSchedule({{0, 3}, {4, 8}}); }) == ErrorKind::domain);
  CHECK(kind_of([] { BlockSchedule({{0, 3}, {3, 5}}); }) == ErrorKind::domain);
  CHECK(kind_of([] { BlockSchedule({{0, 0}}); }) == ErrorKind::domain);
  const auto s = sizes({1, 2, 6});
  CHECK(s.partial_sums() == std::vector<std::uint64_t>{1, 3, 9});
  CHECK(s.sizes() == std::vector<std::uint64_t>{1, 2, 6});
  CHECK(s.total_length() == 9);
  CHECK(s[2].core_size() == 5);
  CHECK(s.prefix(2).total_length() == 3);
}

TEST_CASE("schedule text round trip") {
  auto s = sizes({1, 4, 7});
  s.set_stage(1, 0);
  const std::string text = s.to_text();
  CHECK(text.find("1 1 5 4 0") != std::string::npos);
  const auto back = BlockSchedule::parse_text(text);
  CHECK(back == s);
  CHECK(back.stage_of(1) == std::optional<std::uint64_t>(0));
  CHECK_FALSE(back.stage_of(0).has_value());
  CHECK(kind_of([] { BlockSchedule::parse_text("0 0 3 2\n"); }) == ErrorKind::config);
  CHECK(kind_of([] { BlockSchedule::parse_text("1 0 3 3\n"); }) == ErrorKind::config);
  CHECK(kind_of([] { BlockSchedule::parse_text("0 0 x 3\n"); }) == ErrorKind::config);
  CHECK(BlockSchedule::parse_text("# only a comment\n\n").empty());
}

TEST_CASE("make_schedule oracle examples") {
  const auto g = BudgetFunction::power(1, 3);
  // admissible schedule from the closed form 2^(6(k+2))
  const auto wide = sizes({16384, 1048576, 67108864});
  CHECK(check_schedule(wide, g).ok);
  const auto s = make_schedule(g, 3);
  CHECK(s.sizes() == std::vector<std::uint64_t>{1, 64, 4096});
  CHECK(check_schedule(s, g).ok);

  const auto id = make_schedule(BudgetFunction::constant(2), 5);
  CHECK(id.sizes() == std::vector<std::uint64_t>(5, 1));

  CHECK(kind_of([] { make_schedule(BudgetFunction::power(1, 1), 3); }) == ErrorKind::resource);
}

TEST_CASE("make_schedule picks the smallest admissible size") {
  for (const char* token : {"power:1/3", "power:1/6", "power:2/5", "power:1/4*2/1"}) {
    const auto g = BudgetFunction::parse(token);
    const auto s = make_schedule(g, 4);
    CAPTURE(std::string(token));
    REQUIRE(check_schedule(s, g).ok);
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const std::uint64_t lo = std::max<std::uint64_t>({k ? s[k - 1].size() : 1, sum, 1});
      for (std::uint64_t n = lo; n < s[k].size() && n < lo + 200000; ++n) {
        REQUIRE(static_cast<double>(g(n)) / std::sqrt(static_cast<double>(n)) > std::ldexp(1.0, -static_cast<int>(k)));
      }
      sum += s[k].size();
    }
  }
}

TEST_CASE("make_schedule respects a checkpoint set") {
  const auto g = BudgetFunction::power(1, 3);
  std::vector<std::uint64_t> squares;
  for (std::uint64_t i = 1; i <= 200; ++i) squares.push_back(i * i);
  ScheduleOptions opt;
  opt.checkpoints = squares;
  const auto s = make_schedule(g, 3, opt);
  CHECK(check_schedule(s, g, squares).ok);
  for (auto p : s.partial_sums()) CHECK(std::binary_search(squares.begin(), squares.end(), p));
  opt.checkpoints = std::vector<std::uint64_t>{1, 2, 3};
  CHECK(kind_of([&] { make_schedule(g, 3, opt); }) == ErrorKind::resource);
}

TEST_CASE("check_schedule catches each constraint independently") {
  const auto g = BudgetFunction::power(1, 3);
  CHECK_FALSE(check_schedule(sizes({1, 16, 4096}), g).ok);   // decay fails at k=1
  const auto slow = BudgetFunction::power(1, 6);
  CHECK(check_schedule(sizes({64, 64}), slow).ok);
  const auto dense = check_schedule(sizes({64, 64, 64}), slow);
  CHECK_FALSE(dense.ok);
  CHECK(dense.reason.find("sum") != std::string::npos);
  CHECK_FALSE(check_schedule(sizes({1, 64, 4096}), g, std::vector<std::uint64_t>{1, 65}).ok);
  CHECK(check_schedule(sizes({1, 64, 4096}), g, std::vector<std::uint64_t>{1, 65, 4161}).ok);
}

TEST_CASE("similar_p_N oracle examples") {
  const BitString x = BitString::parse("10110");
  const std::vector<std::uint64_t> all{1, 2, 3, 4, 5};
  CHECK(similar_p_N(x, x, BudgetFunction::constant(0), all));
  CHECK_FALSE(similar_p_N(BitString::parse("1111"), BitString::parse("0000"), BudgetFunction::constant(1),
                          std::vector<std::uint64_t>{4}));
  CHECK(similar_p_N(x, BitString::parse("00111"), BudgetFunction::power(1, 2), std::vector<std::uint64_t>{5}));
  // n0 skips early checkpoints
  CHECK(similar_p_N(BitString::parse("1000"), BitString::parse("0000"), BudgetFunction::constant(0),
                    std::vector<std::uint64_t>{1, 4}, 5));
  CHECK(kind_of([&] { similar_p_N(x, BitString(4), BudgetFunction::constant(0), all); }) == ErrorKind::dimension);
}

TEST_CASE("similar_p_N is monotone in p and antitone in N") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const BitString x = BitString::random(64, rng);
    BitString y = x;
    for (int f = 0; f < static_cast<int>(rng() % 20); ++f) y.flip(rng() % 64);
    std::vector<std::uint64_t> n;
    for (std::uint64_t i = 1; i <= 64; ++i)
      if (rng() % 3 == 0) n.push_back(i);
    const auto small = BudgetFunction::power(1, 2), big = BudgetFunction::power(2, 3);
    if (similar_p_N(x, y, small, n)) REQUIRE(similar_p_N(x, y, big, n));
    if (similar_p_N(x, y, small, n) && !n.empty()) {
      std::vector<std::uint64_t> fewer(n.begin(), n.end() - 1);
      REQUIRE(similar_p_N(x, y, small, fewer));
    }
  }
}

TEST_CASE("similar_g_phi oracle examples") {
  const auto s = sizes({3, 5});
  const auto g = BudgetFunction::constant(1);
  const BitString x = BitString::parse("10110011");
  CHECK(similar_g_phi(x, x, g, s));
  BitString y = x;
  y.flip(0);
  CHECK(similar_g_phi(x, y, g, s));
  y.flip(1);
  CHECK_FALSE(similar_g_phi(x, y, g, s));
}

TEST_CASE("prefix similarity transfers to block similarity") {
  // p(n) = g(n/2), i.e. g = p evaluated at twice its argument
  const auto p = BudgetFunction::power(2, 3);
  const auto g = p.with_argument_scale(2);
  const auto s = sizes({1, 2, 4, 8, 16, 32, 64});
  const auto checkpoints = s.partial_sums();
  std::mt19937_64 rng(31);
  int compliant = 0;
  for (int trial = 0; compliant < 100 && trial < 100000; ++trial) {
    const BitString x = BitString::random(s.total_length(), rng);
    BitString y = x;
    const int flips = static_cast<int>(rng() % 24);
    for (int f = 0; f < flips; ++f) y.flip(rng() % s.total_length());
    if (!similar_p_N(x, y, p, checkpoints)) continue;
    ++compliant;
    REQUIRE(similar_g_phi(x, y, g, s));
  }
  CHECK(compliant == 100);
}

TEST_CASE("psi_deviation oracle examples") {
  const LambdaFn lnln = [](std::uint64_t n) { return std::log(std::log(static_cast<double>(n))); };
  std::mt19937_64 rng(41);
  const BitString a = BitString::random(100, rng);
  const std::vector<std::uint64_t> cps{10, 50, 100};
  for (const auto& pt : psi_deviation(a, a, lnln, 0.1, cps)) {
    CHECK(pt.statistic < 0);
    CHECK(pt.within_psi);
  }
  const auto far = psi_deviation(a.complement(), a, lnln, 0.1, std::vector<std::uint64_t>{100});
  CHECK(far[0].statistic == doctest::Approx(2.861).epsilon(1e-3));
  CHECK_FALSE(far[0].within_psi);
  CHECK(kind_of([&] {
          psi_deviation(a, a, [](std::uint64_t) { return 0.0; }, 0.1, cps);
        }) == ErrorKind::domain);
}

TEST_CASE("psi statistic of random streams is moderate (smoke, not a theorem)") {
  const LambdaFn lnln = [](std::uint64_t n) { return std::log(std::log(static_cast<double>(n))); };
  const std::uint64_t n = std::uint64_t{1} << 20;
  const BitString zero(n);
  int inside = 0;
  for (std::uint64_t t = 0; t < 64; ++t) {
    auto rng = trial_rng(7, t);
    const auto pt = psi_deviation(BitString::random(n, rng), zero, lnln, 0.0, std::vector<std::uint64_t>{n});
    inside += std::abs(pt[0].statistic) <= 3.0;
  }
  CHECK(inside >= 63);
}

TEST_CASE("distribution preservation, exhaustive over small schedules") {
  for (auto sched : {sizes({3, 5}), sizes({1, 1, 2, 4}), sizes({1, 3, 5, 9}), sizes({2, 2, 3, 7})}) {
    const std::size_t len = sched.total_length();
    const std::size_t k = sched.size();
    std::vector<std::uint64_t> joint(std::size_t{1} << k, 0);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << len); ++code) {
      ++joint[extract(BitString::from_code(code, len), sched).outputs.to_code()];
    }
    for (auto c : joint) REQUIRE(c == (std::uint64_t{1} << (len - k)));
  }
}

TEST_CASE("robustness, exhaustive over inputs and admissible flip patterns") {
  const auto sched = sizes({1, 3, 5});
  const auto g = BudgetFunction::table({0, 0, 0, 1, 1, 2});
  const std::size_t len = sched.total_length();
  std::uint64_t checked = 0;
  for (std::uint64_t code = 0; code < (1u << len); ++code) {
    const BitString x = BitString::from_code(code, len);
    const auto tx = extract(x, sched, g);
    for (std::uint64_t m = 0; m < (1u << len); ++m) {
      const BitString y = BitString::from_code(code ^ m, len);
      if (!similar_g_phi(x, y, g, sched)) continue;
      const auto ty = extract(y, sched);
      for (std::size_t k = 0; k < sched.size(); ++k) {
        if (!tx.robust[k]) continue;
        ++checked;
        REQUIRE(tx.outputs[k] == ty.outputs[k]);
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("robustness, randomized on a generated schedule") {
  const auto g = BudgetFunction::power(1, 6);
  const auto sched = make_schedule(g, 6);
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const BitString x = BitString::random(sched.total_length(), rng);
    const auto tx = extract(x, sched, g);
    BitString y = x;
    for (std::size_t k = 0; k < sched.size(); ++k) {
      const auto b = sched[k];
      const auto flips = rng() % (g(b.size()) + 1);
      for (std::uint64_t f = 0; f < flips; ++f) y.set(b.start + rng() % b.size(), !x[b.start + rng() % b.size()]);
    }
    if (!similar_g_phi(x, y, g, sched)) continue;
    const auto ty = extract(y, sched);
    for (std::size_t k = 0; k < sched.size(); ++k) {
      if (tx.robust[k]) REQUIRE(tx.outputs[k] == ty.outputs[k]);
    }
  }
}

TEST_CASE("margins are odd and decide the outputs") {
  std::mt19937_64 rng(61);
  const auto sched = sizes({1, 2, 3, 4, 10, 17, 40});
  for (int trial = 0; trial < 500; ++trial) {
    const auto t = extract(BitString::random(sched.total_length(), rng), sched);
    for (std::size_t k = 0; k < sched.size(); ++k) {
      REQUIRE(std::abs(t.margins[k]) % 2 == 1);
      REQUIRE(t.outputs[k] == (t.margins[k] > 0));
    }
  }
}

TEST_CASE("generated schedules always pass the independent checker") {
  for (const char* token : {"power:1/3", "power:1/6", "power:2/5", "affine_sqrt:0,0.25", "table:0,1,1,2", "lil:0.999"}) {
    const auto g = BudgetFunction::parse(token);
    ScheduleOptions opt;
    opt.scan_bound = std::uint64_t{1} << 44;
    try {
      const auto s = make_schedule(g, 5, opt);
      CAPTURE(std::string(token));
      REQUIRE(check_schedule(s, g).ok);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::resource);
    }
  }
}
