#pragma once

// Exact integer and rational machinery: integer m-th roots, Bernoulli
// numbers, Faulhaber power sums and the closed forms for
// sum_{k<=n} floor(k^(1/m)).
//
// Nothing in this header touches floating point except the seed of the
// 64-bit integer_nth_root fast path, which is corrected exactly afterwards.

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rootsum/errors.hpp"

namespace rootsum {

using Rat = mpq_class;

// Canonical rational num/den; rejects a zero denominator.
inline Rat make_rat(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat out(num, den);
  out.canonicalize();
  return out;
}

// Arbitrary-size nonnegative integer.
class Natural {
 public:
  Natural() = default;

  template <std::integral T>
  Natural(T value) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<T>) {
      if (value < 0) throw std::invalid_argument("Natural cannot be negative");
    }
    v_ = static_cast<unsigned long>(value);
  }

  explicit Natural(mpz_class value) : v_(std::move(value)) {
    if (sgn(v_) < 0) throw std::invalid_argument("Natural cannot be negative");
  }

  // Accepts plain digits and exact scientific forms such as "1e6" or
  // "2.5e3"; anything that is not a nonnegative integer is rejected.
  static Natural parse(std::string_view text);

  const mpz_class& value() const noexcept { return v_; }

  bool is_zero() const noexcept { return sgn(v_) == 0; }
  std::size_t bit_length() const noexcept {
    return is_zero() ? 0 : mpz_sizeinbase(v_.get_mpz_t(), 2);
  }
  bool fits_u64() const noexcept { return bit_length() <= 64; }
  std::uint64_t to_u64() const {
    if (!fits_u64()) throw std::overflow_error("Natural does not fit in 64 bits");
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v_.get_mpz_t());
    return out;
  }
  static Natural from_u64(std::uint64_t x) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, -1, sizeof(x), 0, 0, &x);
    return Natural(std::move(z));
  }

  std::string to_string() const { return v_.get_str(); }

  friend bool operator==(const Natural& a, const Natural& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Natural& a, const Natural& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpz_class v_;
};

inline Natural Natural::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  std::string mantissa(text);
  long exp10 = 0;
  if (const auto e = mantissa.find_first_of("eE"); e != std::string::npos) {
    const std::string exp_text = mantissa.substr(e + 1);
    mantissa.resize(e);
    std::size_t used = 0;
    try {
      exp10 = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
    }
    if (used != exp_text.size()) throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
  }
  if (const auto dot = mantissa.find('.'); dot != std::string::npos) {
    exp10 -= static_cast<long>(mantissa.size() - dot - 1);
    mantissa.erase(dot, 1);
  }
  if (mantissa.empty() || mantissa.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("not a nonnegative integer: '" + std::string(text) + "'");
  }
  mpz_class digits(mantissa, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  if (exp10 >= 0) return Natural(digits * scale);
  if (!mpz_divisible_p(digits.get_mpz_t(), scale.get_mpz_t())) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return Natural(mpz_class(digits / scale));
}

inline mpz_class ipow(const mpz_class& base, unsigned long e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

namespace detail {

// r^m, saturating to UINT128 max on overflow.
inline unsigned __int128 pow_sat(std::uint64_t r, unsigned m) {
  constexpr auto kMax = ~static_cast<unsigned __int128>(0);
  unsigned __int128 out = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (r != 0 && out > kMax / r) return kMax;
    out *= r;
  }
  return out;
}

inline std::uint64_t nth_root_u64(std::uint64_t n, unsigned m) {
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / m));
  while (r > 0 && pow_sat(r, m) > n) --r;
  while (pow_sat(r + 1, m) <= n) ++r;
  return r;
}

// Newton iteration from above: x_{k+1} = ((m-1) x_k + n / x_k^(m-1)) / m
// decreases monotonically to floor(n^(1/m)) once x_0 >= the true root.
inline mpz_class nth_root_newton(const mpz_class& n, unsigned m) {
  const auto bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  mpz_class x;
  mpz_setbit(x.get_mpz_t(), (bits + m - 1) / m);
  for (;;) {
    mpz_class y = (mpz_class(m - 1) * x + n / ipow(x, m - 1)) / m;
    if (y >= x) break;
    x = std::move(y);
  }
  while (ipow(x, m) > n) --x;
  while (ipow(x + 1, m) <= n) ++x;
  return x;
}

}  // namespace detail

// floor(n^(1/m)), exact at any magnitude.
inline Natural integer_nth_root(const Natural& n, unsigned m) {
  if (m == 0) throw std::invalid_argument("integer_nth_root: m must be >= 1");
  if (m == 1 || n.value() <= 1) return n;
  if (n.fits_u64()) return Natural::from_u64(detail::nth_root_u64(n.to_u64(), m));
  return Natural(detail::nth_root_newton(n.value(), m));
}

// Bernoulli numbers with B_1 = -1/2, generated by
// sum_{j=0..n} C(n+1, j) B_j = 0 and memoized. Reads take a shared lock;
// extension takes the exclusive lock.
class BernoulliTable {
 public:
  Rat get(std::size_t k) const {
    {
      std::shared_lock lock(mu_);
      if (k < values_.size()) return values_[k];
    }
    std::unique_lock lock(mu_);
    extend_locked(k);
    return values_[k];
  }

  std::vector<Rat> prefix(std::size_t count) const {
    if (count == 0) return {};
    get(count - 1);
    std::shared_lock lock(mu_);
    return {values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(count)};
  }

  std::size_t cached() const {
    std::shared_lock lock(mu_);
    return values_.size();
  }

  static const BernoulliTable& shared() {
    static const BernoulliTable table;
    return table;
  }

 private:
  void extend_locked(std::size_t k) const {
    while (values_.size() <= k) {
      const auto n = values_.size();
      if (n == 0) {
        values_.emplace_back(1);
        continue;
      }
      Rat acc;
      for (std::size_t j = 0; j < n; ++j) {
        if (sgn(values_[j]) != 0) acc += Rat(binomial(n + 1, j)) * values_[j];
      }
      Rat b = -acc / Rat(static_cast<unsigned long>(n + 1));
      b.canonicalize();
      values_.push_back(std::move(b));
    }
  }

  mutable std::shared_mutex mu_;
  mutable std::vector<Rat> values_;
};

inline Rat bernoulli(unsigned k) { return BernoulliTable::shared().get(k); }

// sum_{k=1..n} k^m through Faulhaber's formula
//   (1/(m+1)) sum_{k=0..m} (-1)^k C(m+1,k) B_k n^(m+1-k).
inline Natural faulhaber_sum(const Natural& n, unsigned m) {
  if (n.is_zero()) return Natural{};
  const auto& b = BernoulliTable::shared();
  Rat acc;
  for (unsigned k = 0; k <= m; ++k) {
    const Rat bk = b.get(k);
    if (sgn(bk) == 0) continue;
    Rat term = Rat(binomial(m + 1, k) * ipow(n.value(), m + 1 - k)) * bk;
    if (k % 2 == 1) term = -term;
    acc += term;
  }
  acc /= Rat(m + 1);
  acc.canonicalize();
  if (acc.get_den() != 1 || sgn(acc.get_num()) < 0) {
    throw ConsistencyError("faulhaber_sum: non-integer result " + acc.get_str() +
                           " (Bernoulli sign convention?)");
  }
  return Natural(acc.get_num());
}

struct FloorSumResult {
  Natural n;
  unsigned m = 2;
  Natural root;   // floor(n^(1/m))
  Natural total;  // sum_{k=1..n} floor(k^(1/m))
};

namespace detail {

inline mpz_class exact_div(const mpz_class& num, unsigned long den, const char* where) {
  if (!mpz_divisible_ui_p(num.get_mpz_t(), den)) {
    throw ConsistencyError(std::string(where) + ": division by " + std::to_string(den) +
                           " is not exact");
  }
  mpz_class out;
  mpz_divexact_ui(out.get_mpz_t(), num.get_mpz_t(), den);
  return out;
}

}  // namespace detail

// b_n = (1/6) M (6n + 5 - 3M - 2M^2), M = floor(sqrt n).
inline FloorSumResult floor_sqrt_sum(const Natural& n) {
  if (n.is_zero()) return {n, 2, Natural{}, Natural{}};
  const Natural root = integer_nth_root(n, 2);
  const mpz_class& M = root.value();
  const mpz_class t = M * (6 * n.value() + 5 - 3 * M - 2 * M * M);
  return {n, 2, root, Natural(detail::exact_div(t, 6, "floor_sqrt_sum"))};
}

// A_n^(m) = M(n - M^m + 1) + M^(m+1) - sum_{k=1..M} k^m, M = floor(n^(1/m)).
inline FloorSumResult floor_root_sum(const Natural& n, unsigned m) {
  if (m < 2) throw std::invalid_argument("floor_root_sum: m must be >= 2");
  if (n.is_zero()) return {n, m, Natural{}, Natural{}};
  const Natural root = integer_nth_root(n, m);
  const mpz_class& M = root.value();
  const mpz_class Mm = ipow(M, m);
  mpz_class total = M * (n.value() - Mm + 1) + Mm * M - faulhaber_sum(root, m).value();
  if (sgn(total) < 0) throw ConsistencyError("floor_root_sum: negative total");
  return {n, m, root, Natural(std::move(total))};
}

// Dedicated closed forms for m = 3, 4, 5; a cross-check of
// floor_root_sum.
inline Natural floor_root_sum_special(const Natural& n, unsigned m) {
  if (m < 3 || m > 5) throw std::invalid_argument("floor_root_sum_special: m must be 3, 4 or 5");
  if (n.is_zero()) return Natural{};
  const mpz_class M = integer_nth_root(n, m).value();
  const mpz_class& x = n.value();
  const mpz_class M2 = M * M, M3 = M2 * M, M4 = M3 * M;
  switch (m) {
    case 3:
      return Natural(detail::exact_div(M * (4 * x + 4 - M - 2 * M2 - M3), 4, "cube-root form"));
    case 4:
      return Natural(
          detail::exact_div(M * (30 * x + 31 - 6 * M4 - 15 * M3 - 10 * M2), 30, "fourth-root form"));
    default:
      return Natural(detail::exact_div(M * (12 * x + 12 - 2 * M4 * M - 6 * M4 - 5 * M3 + M), 12,
                                       "fifth-root form"));
  }
}

}  // namespace rootsum
