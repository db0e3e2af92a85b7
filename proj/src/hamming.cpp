#include "hamrec/hamming.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hamrec/error.hpp"
#include "hamrec/kernels.hpp"

namespace hamrec {

std::size_t hamming_distance(const BitString& sigma, const BitString& tau) {
  require(sigma.size() == tau.size(), ErrorKind::dimension,
          "hamming_distance: lengths " + std::to_string(sigma.size()) + " and " +
              std::to_string(tau.size()) + " differ");
  return kernels::xor_popcount(sigma.words(), tau.words());
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  return c;
}

BigInt binomial_tail(std::int64_t n, std::int64_t k) {
  require(n >= 0, ErrorKind::domain, "binomial_tail: negative dimension");
  if (k < 0) return 0;
  if (k >= n) return BigInt(1) << n;
  BigInt term = 1;
  BigInt total = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    term *= n - i + 1;
    term /= i;
    total += term;
  }
  return total;
}

namespace {

// All supports of size w in {0..n-1}, set-lexicographic order; calls
// visit(indices) until it returns false.
template <class Visit>
void for_each_combination(std::size_t n, std::size_t w, Visit visit) {
  if (w > n) return;
  std::vector<std::size_t> idx(w);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    if (!visit(static_cast<const std::vector<std::size_t>&>(idx))) return;
    std::size_t i = w;
    while (i > 0 && idx[i - 1] == n - w + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < w; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void require_same_dimension(const PointSet& points, std::size_t n) {
  for (const auto& p : points) {
    require(p.size() == n, ErrorKind::dimension, "point set mixes dimensions");
  }
}

}  // namespace

PointSet neighborhood(const PointSet& points, std::size_t d) {
  if (points.empty()) return {};
  const std::size_t n = points.begin()->size();
  require_same_dimension(points, n);
  require(d <= n, ErrorKind::domain, "neighborhood radius exceeds dimension");
  PointSet out;
  for (const auto& a : points) {
    for (std::size_t w = 0; w <= d; ++w) {
      for_each_combination(n, w, [&](const std::vector<std::size_t>& flips) {
        BitString y = a;
        for (std::size_t i : flips) y.flip(i);
        out.insert(std::move(y));
        return true;
      });
    }
  }
  return out;
}

SphereSpec make_sphere(std::size_t n, const BigInt& size, const BitString& center) {
  require(center.size() == n, ErrorKind::dimension,
          "make_sphere: center length " + std::to_string(center.size()) + " != " + std::to_string(n));
  const BigInt cube = BigInt(1) << n;
  require(size >= 0 && size <= cube, ErrorKind::domain,
          "make_sphere: size " + size.str() + " outside [0, 2^" + std::to_string(n) + "]");
  SphereSpec s;
  s.dimension = n;
  s.center = center;
  BigInt ball = 0;  // b(n, inner_radius)
  BigInt level = 1; // C(n, inner_radius + 1)
  std::int64_t k = -1;
  while (k < static_cast<std::int64_t>(n) && ball + level <= size) {
    ball += level;
    ++k;
    level = level * (static_cast<std::int64_t>(n) - k) / (k + 1);
  }
  s.inner_radius = k;
  s.shell_count = size - ball;
  return s;
}

BigInt simplicial_rank(const BitString& support) {
  const auto n = static_cast<std::int64_t>(support.size());
  const auto r = static_cast<std::int64_t>(support.count());
  BigInt rank = 0;
  std::int64_t prev = -1;
  std::int64_t j = 0;
  for (std::int64_t pos = 0; pos < n; ++pos) {
    if (!support[static_cast<std::size_t>(pos)]) continue;
    ++j;
    for (std::int64_t v = prev + 1; v < pos; ++v) rank += binomial(n - 1 - v, r - j);
    prev = pos;
  }
  return rank;
}

bool SphereSpec::contains(const BitString& x) const {
  const auto dist = static_cast<std::int64_t>(hamming_distance(x, center));
  if (dist <= inner_radius) return true;
  if (dist != inner_radius + 1 || shell_count == 0) return false;
  return simplicial_rank(x ^ center) < shell_count;
}

std::vector<BitString> SphereSpec::members() const {
  require(dimension <= EventFamily::kMaxDimension, ErrorKind::resource,
          "SphereSpec::members: dimension above " + std::to_string(EventFamily::kMaxDimension));
  std::vector<BitString> out;
  auto emit = [&](const std::vector<std::size_t>& support) {
    BitString p = center;
    for (std::size_t i : support) p.flip(i);
    out.push_back(std::move(p));
  };
  for (std::int64_t w = 0; w <= inner_radius; ++w) {
    for_each_combination(dimension, static_cast<std::size_t>(w), [&](const auto& support) {
      emit(support);
      return true;
    });
  }
  if (shell_count > 0) {
    BigInt remaining = shell_count;
    for_each_combination(dimension, static_cast<std::size_t>(inner_radius + 1), [&](const auto& support) {
      emit(support);
      return --remaining > 0;
    });
  }
  return out;
}

HarperResult harper_min_neighborhood(std::size_t n, std::uint64_t size, std::size_t d, std::size_t ceiling) {
  constexpr std::size_t kHardLimit = 5;
  require(n <= ceiling && n <= kHardLimit, ErrorKind::resource,
          "harper_min_neighborhood: n=" + std::to_string(n) + " exceeds exhaustive ceiling " +
              std::to_string(std::min(ceiling, kHardLimit)));
  require(n >= 1, ErrorKind::domain, "harper_min_neighborhood: n must be at least 1");
  const std::uint64_t points = std::uint64_t{1} << n;
  require(size <= points, ErrorKind::domain, "harper_min_neighborhood: size exceeds 2^n");
  require(d <= n, ErrorKind::domain, "harper_min_neighborhood: d exceeds n");

  std::vector<std::uint64_t> ball(points, 0);
  for (std::uint64_t a = 0; a < points; ++a) {
    for (std::uint64_t y = 0; y < points; ++y) {
      if (weight(a ^ y) <= d) ball[a] |= std::uint64_t{1} << y;
    }
  }
  auto gamma_size = [&](std::uint64_t set) {
    std::uint64_t cover = 0;
    for (std::uint64_t rest = set; rest; rest &= rest - 1) cover |= ball[static_cast<std::size_t>(__builtin_ctzll(rest))];
    return static_cast<std::uint64_t>(weight(cover));
  };

  HarperResult result;
  if (size == 0) return result;

  std::uint64_t best = points;
  const std::uint64_t limit = std::uint64_t{1} << points;  // points <= 32
  for (std::uint64_t set = (std::uint64_t{1} << size) - 1; set < limit;) {
    best = std::min(best, gamma_size(set));
    const std::uint64_t low = set & (~set + 1);
    const std::uint64_t ripple = set + low;
    set = (((ripple ^ set) >> 2) / low) | ripple;
  }
  result.exhaustive_min = best;

  std::uint64_t sphere = 0;
  for (const auto& p : make_sphere(n, BigInt(size), BitString(n)).members()) sphere |= std::uint64_t{1} << p.to_code();
  result.sphere_value = gamma_size(sphere);
  return result;
}

EventFamily::EventFamily(std::size_t n) : n_(n), indicator_() {
  require(n <= kMaxDimension, ErrorKind::resource,
          "EventFamily: dimension " + std::to_string(n) + " above " + std::to_string(kMaxDimension));
  indicator_ = BitString(std::size_t{1} << n);
}

EventFamily EventFamily::from_members(std::size_t n, const std::vector<BitString>& members) {
  EventFamily e(n);
  for (const auto& m : members) {
    require(m.size() == n, ErrorKind::dimension, "EventFamily: member length differs from dimension");
    const auto code = m.to_code();
    require(!e.contains(code), ErrorKind::domain, "EventFamily: duplicate member " + m.to_string());
    e.insert(code);
  }
  return e;
}

EventFamily EventFamily::from_codes(std::size_t n, const std::vector<std::uint64_t>& codes) {
  EventFamily e(n);
  for (auto c : codes) {
    require(c < (std::uint64_t{1} << n), ErrorKind::dimension, "EventFamily: code outside cube");
    require(!e.contains(c), ErrorKind::domain, "EventFamily: duplicate code " + std::to_string(c));
    e.insert(c);
  }
  return e;
}

bool EventFamily::contains(const BitString& x) const {
  require(x.size() == n_, ErrorKind::dimension, "EventFamily: point length differs from dimension");
  return contains(x.to_code());
}

std::vector<BitString> EventFamily::members() const {
  std::vector<BitString> out;
  const std::uint64_t points = std::uint64_t{1} << n_;
  for (std::uint64_t c = 0; c < points; ++c) {
    if (indicator_[c]) out.push_back(BitString::from_code(c, n_));
  }
  return out;
}

EventFamily EventFamily::complement() const {
  EventFamily e(n_);
  e.indicator_ = indicator_.complement();
  return e;
}

}  // namespace hamrec
