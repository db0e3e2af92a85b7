#include "hamrec/budget.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "hamrec/dyadic.hpp"
#include "hamrec/error.hpp"

namespace hamrec {

double default_lambda(std::uint64_t n) {
  return std::log(std::log(static_cast<double>(std::max<std::uint64_t>(n, 16))));
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint32_t parse_u32(std::string_view s, std::string_view token) {
  std::uint32_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  require(res.ec == std::errc{} && res.ptr == s.data() + s.size(), ErrorKind::config,
          "budget '" + std::string(token) + "': bad integer '" + std::string(s) + "'");
  return v;
}

double parse_double(std::string_view s, std::string_view token) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  require(res.ec == std::errc{} && res.ptr == s.data() + s.size() && std::isfinite(v), ErrorKind::config,
          "budget '" + std::string(token) + "': bad number '" + std::string(s) + "'");
  return v;
}

std::pair<std::uint32_t, std::uint32_t> parse_ratio(std::string_view s, std::string_view token) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return {parse_u32(s, token), 1};
  return {parse_u32(s.substr(0, slash), token), parse_u32(s.substr(slash + 1), token)};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// ceil(x) for a nonnegative real computed in floating point, snapping values
// within rounding noise of an integer onto it.
std::int64_t ceil_snapped(long double x) {
  if (x <= 0) return 0;
  const long double r = std::nearbyint(x);
  if (std::fabs(x - r) <= 1e-9L * std::max<long double>(1.0L, x)) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

BudgetFunction BudgetFunction::power(std::uint32_t num, std::uint32_t den, std::uint32_t coef_num,
                                     std::uint32_t coef_den) {
  require(den > 0 && coef_den > 0, ErrorKind::domain, "power budget: zero denominator");
  BudgetFunction f;
  f.kind_ = Kind::power;
  f.num_ = num;
  f.den_ = den;
  f.coef_num_ = coef_num;
  f.coef_den_ = coef_den;
  return f;
}

BudgetFunction BudgetFunction::affine_sqrt(double a, double c) {
  require(a >= 0 && c >= 0, ErrorKind::domain, "affine_sqrt budget: coefficients must be nonnegative");
  BudgetFunction f;
  f.kind_ = Kind::affine_sqrt;
  f.a_ = a;
  f.c_ = c;
  return f;
}

BudgetFunction BudgetFunction::table(std::vector<std::int64_t> values) {
  require(!values.empty(), ErrorKind::domain, "table budget: no values");
  require(std::is_sorted(values.begin(), values.end()) && values.front() >= 0, ErrorKind::domain,
          "table budget: values must be nonnegative and nondecreasing");
  BudgetFunction f;
  f.kind_ = Kind::table;
  f.values_ = std::move(values);
  return f;
}

BudgetFunction BudgetFunction::lil(double epsilon) {
  require(epsilon >= 0 && epsilon <= 1, ErrorKind::domain, "lil budget: epsilon outside [0,1]");
  BudgetFunction f;
  f.kind_ = Kind::lil;
  f.a_ = epsilon;
  return f;
}

BudgetFunction BudgetFunction::with_argument_scale(std::uint64_t scale) const {
  require(scale >= 1, ErrorKind::domain, "budget argument scale must be positive");
  BudgetFunction f = *this;
  f.scale_ = scale_ * scale;
  return f;
}

BudgetFunction BudgetFunction::parse(std::string_view token) {
  std::string_view body = token;
  std::uint64_t scale = 1;
  if (const auto at = body.rfind('@'); at != std::string_view::npos) {
    scale = parse_u32(body.substr(at + 1), token);
    body = body.substr(0, at);
  }
  const auto colon = body.find(':');
  require(colon != std::string_view::npos, ErrorKind::config,
          "budget '" + std::string(token) + "': expected kind:params");
  const auto kind = body.substr(0, colon);
  const auto params = body.substr(colon + 1);
  BudgetFunction f;
  if (kind == "power") {
    const auto star = params.find('*');
    const auto [a, b] = parse_ratio(params.substr(0, star), token);
    std::pair<std::uint32_t, std::uint32_t> coef{1, 1};
    if (star != std::string_view::npos) coef = parse_ratio(params.substr(star + 1), token);
    f = power(a, b, coef.first, coef.second);
  } else if (kind == "affine_sqrt") {
    const auto parts = split(params, ',');
    require(parts.size() == 2, ErrorKind::config, "budget '" + std::string(token) + "': affine_sqrt needs a,c");
    f = affine_sqrt(parse_double(parts[0], token), parse_double(parts[1], token));
  } else if (kind == "table") {
    std::vector<std::int64_t> values;
    for (auto part : split(params, ',')) values.push_back(parse_u32(part, token));
    f = table(std::move(values));
  } else if (kind == "lil") {
    f = lil(parse_double(params, token));
  } else {
    fail(ErrorKind::config, "budget '" + std::string(token) + "': unknown kind '" + std::string(kind) + "'");
  }
  return scale == 1 ? f : f.with_argument_scale(scale);
}

std::string BudgetFunction::to_string() const {
  std::string out;
  switch (kind_) {
    case Kind::power:
      out = "power:" + std::to_string(num_) + "/" + std::to_string(den_);
      if (coef_num_ != 1 || coef_den_ != 1) {
        out += "*" + std::to_string(coef_num_) + "/" + std::to_string(coef_den_);
      }
      break;
    case Kind::affine_sqrt:
      out = "affine_sqrt:" + format_double(a_) + "," + format_double(c_);
      break;
    case Kind::table:
      out = "table:";
      for (std::size_t i = 0; i < values_.size(); ++i) out += (i ? "," : "") + std::to_string(values_[i]);
      break;
    case Kind::lil:
      out = "lil:" + format_double(a_);
      break;
  }
  if (scale_ != 1) out += "@" + std::to_string(scale_);
  return out;
}

std::int64_t BudgetFunction::operator()(std::uint64_t n) const {
  require(n <= std::numeric_limits<std::uint64_t>::max() / scale_, ErrorKind::domain,
          "budget argument overflows");
  return evaluate_unscaled(n * scale_);
}

std::int64_t BudgetFunction::evaluate_unscaled(std::uint64_t n) const {
  switch (kind_) {
    case Kind::power: {
      if (n == 0) return num_ == 0 ? ceil_snapped(static_cast<long double>(coef_num_) / coef_den_) : 0;
      const long double est = static_cast<long double>(coef_num_) / coef_den_ *
                              std::pow(static_cast<long double>(n), static_cast<long double>(num_) / den_);
      const long double r = std::nearbyint(est);
      if (std::fabs(est - r) > 1e-6L * std::max<long double>(1.0L, est)) {
        return static_cast<std::int64_t>(std::ceil(est));
      }
      // Close to an integer: settle exactly. Smallest m with (v m)^b >= u^b n^a.
      const BigInt rhs = pow(BigInt(coef_num_), den_) * pow(BigInt(n), num_);
      auto ok = [&](std::int64_t m) { return pow(BigInt(coef_den_) * m, den_) >= rhs; };
      std::int64_t m = std::max<std::int64_t>(static_cast<std::int64_t>(r) - 1, 0);
      while (!ok(m)) ++m;
      while (m > 0 && ok(m - 1)) --m;
      return m;
    }
    case Kind::affine_sqrt:
      return ceil_snapped(static_cast<long double>(a_) * n + static_cast<long double>(c_) * std::sqrt(static_cast<long double>(n)));
    case Kind::table:
      return values_[std::min<std::uint64_t>(n, values_.size() - 1)];
    case Kind::lil: {
      const long double nn = static_cast<long double>(n);
      return ceil_snapped(nn / 2 + (1.0L - a_) * std::sqrt(2.0L * nn * default_lambda(n)));
    }
  }
  return 0;
}

bool BudgetFunction::bounded() const noexcept {
  switch (kind_) {
    case Kind::power: return num_ == 0 || coef_num_ == 0;
    case Kind::affine_sqrt: return a_ == 0 && c_ == 0;
    case Kind::table: return true;
    case Kind::lil: return false;
  }
  return true;
}

std::optional<std::uint64_t> BudgetFunction::modulus(std::uint64_t k) const {
  // Witnesses come from a real lower bound on p that is increasing relative
  // to sqrt(n). They ignore the argument scale, which only increases p.
  long double bound = 0;
  const long double kk = static_cast<long double>(k);
  switch (kind_) {
    case Kind::power: {
      const long double alpha = static_cast<long double>(num_) / den_;
      if (coef_num_ == 0 || 2 * num_ <= den_) return std::nullopt;
      const long double coef = static_cast<long double>(coef_num_) / coef_den_;
      bound = std::pow(kk / coef, 1.0L / (alpha - 0.5L));
      break;
    }
    case Kind::affine_sqrt:
      if (a_ <= 0) return std::nullopt;
      bound = kk > c_ ? std::pow((kk - c_) / a_, 2.0L) : 0;
      break;
    case Kind::lil:
      bound = 4 * kk * kk;
      break;
    case Kind::table:
      return std::nullopt;
  }
  if (bound > 1.8e19L) return std::nullopt;
  return static_cast<std::uint64_t>(std::ceil(bound)) + 1;
}

}  // namespace hamrec
