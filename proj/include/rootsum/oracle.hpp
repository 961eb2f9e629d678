#pragma once

// Brute-force references: literal summation of floor(k^(1/m)) and
// {k^(1/m)}, and the direct count behind the square-root counting identity.

#include <cstdint>
#include <functional>
#include <vector>

#include "rootsum/errors.hpp"
#include "rootsum/exact.hpp"
#include "rootsum/hp.hpp"

namespace rootsum {

struct OracleConfig {
  Natural budget = Natural(100000000);
};

namespace detail {

inline void check_budget(const Natural& n, const OracleConfig& cfg, const char* who) {
  if (n > cfg.budget || !n.fits_u64()) {
    throw BudgetExceeded(std::string(who) + ": n=" + n.to_string() + " exceeds oracle budget " +
                         cfg.budget.to_string());
  }
}

}  // namespace detail

// sum_{k=1..n} floor(k^(1/m)) by constant-value runs: every k in
// [r^m, (r+1)^m - 1] contributes r. O(n^(1/m)) steps.
inline Natural brute_floor_sum(const Natural& n, unsigned m, const OracleConfig& cfg = {}) {
  if (m < 2) throw std::invalid_argument("brute_floor_sum: m must be >= 2");
  detail::check_budget(n, cfg, "brute_floor_sum");
  if (n.is_zero()) return Natural{};
  const std::uint64_t x = n.to_u64();
  const std::uint64_t root = detail::nth_root_u64(x, m);
  // total <= n * root < 2^96, so 128-bit accumulation cannot overflow.
  unsigned __int128 total = 0;
  for (std::uint64_t r = 1; r < root; ++r) {
    total += static_cast<unsigned __int128>(r) * (detail::pow_sat(r + 1, m) - detail::pow_sat(r, m));
  }
  total += static_cast<unsigned __int128>(root) * (x - static_cast<std::uint64_t>(detail::pow_sat(root, m)) + 1);
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(total), 0, 0, &total);
  return Natural(std::move(z));
}

// Literal loop k = 1..n_max, reporting the running total after every k.
inline void scan_floor_sums(std::uint64_t n_max, unsigned m,
                            const std::function<void(std::uint64_t, const Natural&)>& visit) {
  mpz_class total;
  for (std::uint64_t k = 1; k <= n_max; ++k) {
    total += integer_nth_root(Natural::from_u64(k), m).value();
    visit(k, Natural(total));
  }
}

// sum_{k=1..n} {k^(1/m)} with absolute error at most n 2^(1-P).
inline HPReal brute_frac_sum(const Natural& n, unsigned m, Precision P, const OracleConfig& cfg = {}) {
  if (m < 2) throw std::invalid_argument("brute_frac_sum: m must be >= 2");
  detail::check_budget(n, cfg, "brute_frac_sum");
  if (n.is_zero()) return HPReal::exact(Float(P));
  auto cs = detail::checkpoint_sums({n.to_u64()}, m, detail::SumKind::kFrac, P);
  Float err(n.value(), 64, MPFR_RNDU);
  mpfr_mul_2si(err.get(), err.get(), 1 - static_cast<long>(P), MPFR_RNDU);
  return {std::move(cs.sums.front()), std::move(err)};
}

// brute_frac_sum at several n in one pass; ns must be strictly increasing.
inline std::vector<HPReal> brute_frac_sums_at(const std::vector<Natural>& ns, unsigned m, Precision P,
                                              const OracleConfig& cfg = {}) {
  if (m < 2) throw std::invalid_argument("brute_frac_sums_at: m must be >= 2");
  if (ns.empty()) return {};
  detail::check_budget(ns.back(), cfg, "brute_frac_sums_at");
  std::vector<std::uint64_t> cps;
  for (const auto& n : ns) cps.push_back(n.to_u64());
  auto cs = detail::checkpoint_sums(cps, m, detail::SumKind::kFrac, P);
  std::vector<HPReal> out;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    Float err(ns[i].value(), 64, MPFR_RNDU);
    mpfr_mul_2si(err.get(), err.get(), 1 - static_cast<long>(P), MPFR_RNDU);
    out.push_back({std::move(cs.sums[i]), std::move(err)});
  }
  return out;
}

struct OracleSums {
  Natural n;
  unsigned m = 2;
  Natural floor_sum;
  HPReal frac_sum;
  HPReal power_sum;
};

// All three sums; throws ConsistencyError if power = frac + floor fails
// beyond the accumulated bounds.
inline OracleSums oracle_sums(const Natural& n, unsigned m, Precision P, const OracleConfig& cfg = {}) {
  OracleSums out{n, m, brute_floor_sum(n, m, cfg), brute_frac_sum(n, m, P, cfg), power_sum(n, m, P)};
  const Float floor_f = Float::exact(out.floor_sum.value());
  const Float gap = abs(exact_sub(out.power_sum.value, out.frac_sum.value + floor_f.rounded(out.frac_sum.precision() + 64)));
  Float allowed = out.frac_sum.error;
  detail::add_up(allowed, out.power_sum.error);
  if (gap > allowed) {
    throw ConsistencyError("oracle_sums: power sum != frac sum + floor sum beyond error bound");
  }
  return out;
}

struct CountBelowResult {
  Natural side;           // n; the range is k <= n^2
  Rat x;
  Natural formula_value;  // sum_{j=1..n-1} (1 + floor(x (2j + x)))
  Natural direct_count;   // |{k <= n^2 : {sqrt k} in (0, x)}|
  bool agrees = false;
};

// Evaluates the closed counting formula next to a literal count.
// Disagreement is reported, not thrown.
inline CountBelowResult count_frac_below(const Natural& side, const Rat& x) {
  if (side < Natural(2)) throw std::invalid_argument("count_frac_below: n must be >= 2");
  if (sgn(x) <= 0 || x > 1) throw std::invalid_argument("count_frac_below: x must lie in (0, 1]");
  const mpz_class& n = side.value();
  const mpz_class& num = x.get_num();
  const mpz_class& den = x.get_den();

  mpz_class formula;
  for (mpz_class j = 1; j < n; ++j) {
    // floor(x (2j + x)) = floor(num (2j den + num) / den^2)
    mpz_class q;
    const mpz_class t = num * (2 * j * den + num);
    const mpz_class d2 = den * den;
    mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), d2.get_mpz_t());
    formula += 1 + q;
  }

  // {sqrt k} in (0, x)  <=>  k is not a square and k < (r + x)^2, r = floor(sqrt k),
  // i.e. k den^2 < (r den + num)^2.
  mpz_class count;
  const mpz_class limit = n * n;
  for (mpz_class k = 1; k <= limit; ++k) {
    const mpz_class r = integer_nth_root(Natural(k), 2).value();
    if (r * r == k) continue;
    const mpz_class lhs = k * den * den;
    const mpz_class rhs = (r * den + num) * (r * den + num);
    if (lhs < rhs) ++count;
  }
  return {side, x, Natural(formula), Natural(count), formula == count};
}

}  // namespace rootsum
