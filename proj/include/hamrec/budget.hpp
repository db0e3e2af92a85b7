#pragma once

// Corruption budgets p : N -> N, always rounded up to integers.
//
// Token syntax (round-trips through parse/to_string):
//   power:A/B          ceil(n^(A/B))
//   power:A/B*U/V      ceil((U/V) * n^(A/B))
//   affine_sqrt:a,c    ceil(a*n + c*sqrt(n))
//   table:v0,v1,...    v_n, repeating the last value
//   lil:eps            ceil(n/2 + (1-eps) * sqrt(2 n ln ln max(n,16)))
// Any token may end in "@s" to evaluate at s*n instead of n, which is how
// g(n/2) = p(n) budgets are expressed.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hamrec {

// ln ln max(n, 16); the iterated-logarithm rate used when no subsequence
// statistic is supplied.
double default_lambda(std::uint64_t n);

class BudgetFunction {
 public:
  enum class Kind { power, affine_sqrt, table, lil };

  static BudgetFunction power(std::uint32_t num, std::uint32_t den, std::uint32_t coef_num = 1,
                              std::uint32_t coef_den = 1);
  static BudgetFunction affine_sqrt(double a, double c);
  static BudgetFunction table(std::vector<std::int64_t> values);
  static BudgetFunction lil(double epsilon);
  static BudgetFunction constant(std::int64_t value) { return table({value}); }

  static BudgetFunction parse(std::string_view token);
  std::string to_string() const;

  Kind kind() const noexcept { return kind_; }

  // Same budget evaluated at scale * n.
  BudgetFunction with_argument_scale(std::uint64_t scale) const;
  std::uint64_t argument_scale() const noexcept { return scale_; }

  std::int64_t operator()(std::uint64_t n) const;

  // True when the budget is eventually constant (the extractor then falls
  // back to the identity schedule).
  bool bounded() const noexcept;

  // N(k) with p(n) >= k * sqrt(n) for every n >= N(k), when the budget
  // grows faster than sqrt(n) and such a witness is known in closed form.
  std::optional<std::uint64_t> modulus(std::uint64_t k) const;

  friend bool operator==(const BudgetFunction&, const BudgetFunction&) = default;

 private:
  BudgetFunction() = default;
  std::int64_t evaluate_unscaled(std::uint64_t n) const;

  Kind kind_ = Kind::table;
  std::uint32_t num_ = 0, den_ = 1, coef_num_ = 1, coef_den_ = 1;
  double a_ = 0.0, c_ = 0.0;
  std::vector<std::int64_t> values_;
  std::uint64_t scale_ = 1;
};

}  // namespace hamrec
