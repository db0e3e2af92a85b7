#include "hamrec/keylemma.hpp"

#include <algorithm>
#include <numeric>

#include "hamrec/error.hpp"
#include "hamrec/rng.hpp"

namespace hamrec {

std::int64_t ball_rank(std::size_t n, const BigInt& size) {
  const auto nn = static_cast<std::int64_t>(n);
  require(size >= 0 && size <= (BigInt(1) << n), ErrorKind::domain, "ball_rank: size outside [0, 2^n]");
  std::int64_t r = -1;
  while (r < nn && binomial_tail(nn, r + 1) <= size) ++r;
  return r;
}

namespace {

// Indicator of {x : x XOR e_i in E}.
void shift_by_axis(std::span<const std::uint64_t> in, std::span<std::uint64_t> out, std::size_t axis) {
  static constexpr std::uint64_t kLow[6] = {0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
                                            0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL};
  if (axis < 6) {
    const unsigned s = 1u << axis;
    for (std::size_t w = 0; w < in.size(); ++w) {
      out[w] = ((in[w] & kLow[axis]) << s) | ((in[w] >> s) & kLow[axis]);
    }
  } else {
    const std::size_t stride = std::size_t{1} << (axis - 6);
    for (std::size_t w = 0; w < in.size(); ++w) out[w] = in[w ^ stride];
  }
}

}  // namespace

EventFamily erode(const EventFamily& family, std::size_t d) {
  const std::size_t n = family.dimension();
  EventFamily current = family;
  if (n < 6) {
    // Fewer than 64 points: the word trick does not apply.
    for (std::size_t step = 0; step < d; ++step) {
      EventFamily next(n);
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        bool inside = current.contains(x);
        for (std::size_t i = 0; inside && i < n; ++i) inside = current.contains(x ^ (std::uint64_t{1} << i));
        if (inside) next.insert(x);
      }
      current = std::move(next);
    }
    return current;
  }
  std::vector<std::uint64_t> shifted(current.indicator().words().size());
  for (std::size_t step = 0; step < d; ++step) {
    std::vector<std::uint64_t> base(current.indicator().words().begin(), current.indicator().words().end());
    auto words = current.indicator().words();
    for (std::size_t i = 0; i < n; ++i) {
      shift_by_axis(base, shifted, i);
      for (std::size_t w = 0; w < words.size(); ++w) words[w] &= shifted[w];
    }
  }
  return current;
}

Dyadic ball_containment_probability(const EventFamily& family, std::size_t d, std::size_t ceiling) {
  require(family.dimension() <= ceiling, ErrorKind::resource,
          "ball_containment_probability: n = " + std::to_string(family.dimension()) + " exceeds the ceiling " +
              std::to_string(ceiling));
  return erode(family, d).probability();
}

Dyadic sphere_tail_bound(std::size_t n, const BigInt& size, std::size_t d) {
  // No r satisfies b(n,r) <= 2^n < b(n,r+1); the cube contains every ball.
  if (size == (BigInt(1) << n)) return Dyadic(1, 0);
  const std::int64_t t = ball_rank(n, size) + 1 - static_cast<std::int64_t>(d);
  if (t < 0) return Dyadic();
  return Dyadic(binomial_tail(static_cast<std::int64_t>(n), t), n);
}

FamilyReport evaluate_family(const std::string& label, const EventFamily& family, bool sampled) {
  FamilyReport rep;
  rep.label = label;
  rep.n = family.dimension();
  rep.size = family.size();
  rep.r = ball_rank(rep.n, BigInt(rep.size));
  rep.sampled = sampled;
  EventFamily eroded = family;
  for (std::size_t d = 0; d <= rep.n; ++d) {
    if (d > 0) eroded = erode(eroded, 1);
    KeyLemmaRow row{d, eroded.probability(), sphere_tail_bound(rep.n, BigInt(rep.size), d)};
    if (row.exact > row.bound) ++rep.violations;
    if (!rep.tight_at && row.exact == row.bound) rep.tight_at = d;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

namespace {

EventFamily ball(std::size_t n, std::uint64_t center, std::int64_t radius) {
  EventFamily e(n);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    if (static_cast<std::int64_t>(weight(x ^ center)) <= radius) e.insert(x);
  }
  return e;
}

}  // namespace

KeyLemmaReport verify_key_lemma(std::size_t n, std::size_t trials, const Dyadic& threshold, std::uint64_t seed) {
  require(n >= 1 && n <= kKeyLemmaCeiling, ErrorKind::resource,
          "verify_key_lemma: n must be in [1, " + std::to_string(kKeyLemmaCeiling) + "]");
  require(threshold > Dyadic() && threshold < Dyadic(1, 0), ErrorKind::domain,
          "verify_key_lemma: threshold must lie in (0, 1)");
  KeyLemmaReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.threshold = threshold;
  rep.seed = seed;
  const std::uint64_t cube = std::uint64_t{1} << n;
  const auto max_size =
      static_cast<std::uint64_t>((threshold.numerator() << n) >> threshold.exponent());

  std::vector<std::uint64_t> codes(cube);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, t);
    std::iota(codes.begin(), codes.end(), 0);
    const std::uint64_t size = std::uniform_int_distribution<std::uint64_t>(0, max_size)(rng);
    for (std::uint64_t i = 0; i < size; ++i) {
      std::swap(codes[i], codes[std::uniform_int_distribution<std::uint64_t>(i, cube - 1)(rng)]);
    }
    EventFamily e(n);
    for (std::uint64_t i = 0; i < size; ++i) e.insert(codes[i]);
    rep.families.push_back(evaluate_family("random:" + std::to_string(t), e, true));
  }

  auto add = [&](const std::string& label, const EventFamily& e) { rep.families.push_back(evaluate_family(label, e)); };
  add("empty", EventFamily(n));
  const std::uint64_t ones = cube - 1;
  for (std::int64_t r = 0; r <= static_cast<std::int64_t>(n); ++r) {
    add("ball:" + std::to_string(r), ball(n, 0, r));
    add("weight_cut:" + std::to_string(r), ball(n, ones, r));
  }
  for (std::size_t k = 1; k <= n; ++k) {
    // subcube x_0 = ... = x_{k-1} = 0; k = 1 is a half-space
    EventFamily e(n);
    for (std::uint64_t x = 0; x < cube; ++x) {
      if ((x & ((std::uint64_t{1} << k) - 1)) == 0) e.insert(x);
    }
    add("subcube:" + std::to_string(k), e);
  }
  const BitString origin(n);
  for (std::uint64_t j = 1; j < 8; ++j) {
    const SphereSpec s = make_sphere(n, BigInt(cube * j / 8), origin);
    add("sphere:" + std::to_string(j) + "/8", EventFamily::from_members(n, s.members()));
  }
  auto rng = trial_rng(seed, trials);
  for (std::size_t u = 0; u < 8; ++u) {
    std::uniform_int_distribution<std::uint64_t> pt(0, ones);
    std::uniform_int_distribution<std::int64_t> rad(0, static_cast<std::int64_t>(n) / 2);
    const std::uint64_t c1 = pt(rng), c2 = pt(rng);
    const std::int64_t r1 = rad(rng), r2 = rad(rng);
    EventFamily e = ball(n, c1, r1);
    const EventFamily f = ball(n, c2, r2);
    auto ew = e.indicator().words();
    auto fw = f.indicator().words();
    for (std::size_t w = 0; w < ew.size(); ++w) ew[w] |= fw[w];
    add("union:" + std::to_string(u), e);
  }
  add("full", ball(n, 0, static_cast<std::int64_t>(n)));

  for (const auto& f : rep.families) rep.violations += f.violations;

  for (std::uint64_t j = 1; j <= 8; ++j) {
    std::size_t d = 0;
    while (sphere_tail_bound(n, BigInt(max_size), d) > Dyadic(1, j)) ++d;
    rep.moduli.push_back(d);
  }
  return rep;
}

nlohmann::json to_json(const FamilyReport& family) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : family.rows) {
    rows.push_back({{"d", row.d}, {"exact", row.exact.to_string()}, {"bound", row.bound.to_string()}});
  }
  nlohmann::json j = {{"label", family.label}, {"n", family.n},       {"size", family.size},
                      {"r", family.r},         {"rows", rows},        {"violations", family.violations}};
  j["tight_at"] = family.tight_at ? nlohmann::json(*family.tight_at) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const KeyLemmaReport& report) {
  nlohmann::json families = nlohmann::json::array();
  for (const auto& f : report.families) families.push_back(to_json(f));
  return {{"n", report.n},
          {"trials", report.trials},
          {"threshold", report.threshold.to_string()},
          {"seed", report.seed},
          {"violations", report.violations},
          {"moduli", report.moduli},
          {"families", families}};
}

}  // namespace hamrec
