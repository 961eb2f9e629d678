#pragma once

// High-precision evaluation on top of MPFR: m-th roots and fractional parts
// with stated error bounds, evaluation of an Expansion at n, and estimation
// of the constant zeta(-1/m) by the Euler-Maclaurin tail method.
//
// Error bounds are plain bookkeeping: every value carries an absolute bound
// that is the sum of the per-operation bounds, rounded upward.

#include <mpfr.h>

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rootsum/detail/summation.hpp"
#include "rootsum/exact.hpp"
#include "rootsum/float.hpp"
#include "rootsum/series.hpp"

namespace rootsum {

inline constexpr Precision kDefaultPrecision = 128;

struct HPReal {
  Float value;
  Float error;  // absolute bound on |value - exact|

  Precision precision() const noexcept { return value.precision(); }

  // Bound expressed in units of the last place of value.
  double ulps() const {
    if (error.is_zero()) return 0.0;
    return std::exp(error.log_abs() - ulp(value).log_abs());
  }

  static HPReal exact(Float v) { return {std::move(v), Float(32)}; }
};

namespace detail {

inline void add_up(Float& acc, const Float& x) {
  Float a = abs(x);
  if (acc.precision() < 53) acc = acc.rounded(53, MPFR_RNDU);
  mpfr_add(acc.get(), acc.get(), a.get(), MPFR_RNDU);
}

// |x| * 2^-bits, rounded up.
inline Float rel_bound(const Float& x, long bits, double factor = 1.0) {
  Float out = abs(x).rounded(53, MPFR_RNDU);
  mpfr_mul_d(out.get(), out.get(), factor, MPFR_RNDU);
  mpfr_mul_2si(out.get(), out.get(), -bits, MPFR_RNDU);
  return out;
}

}  // namespace detail

// k^(1/m) at precision P, rounded toward zero so the truncation of the
// result is floor(k^(1/m)). Perfect powers come back exact.
inline HPReal hp_root(const Natural& k, unsigned m, Precision P) {
  if (m < 1) throw std::invalid_argument("hp_root: m must be >= 1");
  const Natural r = integer_nth_root(k, m);
  if (ipow(r.value(), m) == k.value()) {
    return HPReal::exact(Float(r.value(), std::max<Precision>(P, static_cast<Precision>(r.bit_length()))));
  }
  const Float kf = Float::exact(k.value());
  HPReal out{Float(P), Float(32)};
  detail::root_into(out.value.get(), kf.get(), m, MPFR_RNDZ);
  out.error = ulp(out.value);
  return out;
}

// {k^(1/m)} with absolute error below 2^-P; exactly 0 for perfect powers.
// The root is taken at P + bitlen(floor root) bits so P fractional bits
// survive the subtraction.
inline HPReal frac_part(const Natural& k, unsigned m, Precision P) {
  if (k.is_zero()) throw std::invalid_argument("frac_part: k must be >= 1");
  const Natural r = integer_nth_root(k, m);
  if (ipow(r.value(), m) == k.value()) return HPReal::exact(Float(P));
  const Float kf = Float::exact(k.value());
  HPReal out{Float(P), pow2(-static_cast<long>(P))};
  // A fractional part below 2^-P would truncate to zero; widen until it
  // shows, so zero stays reserved for perfect powers.
  for (Precision wp = P + static_cast<Precision>(r.bit_length()); out.value.is_zero(); wp += 64) {
    out.value = Float(wp);
    detail::root_into(out.value.get(), kf.get(), m, MPFR_RNDZ);
    mpfr_sub_z(out.value.get(), out.value.get(), r.value().get_mpz_t(), MPFR_RNDN);  // exact
  }
  return out;
}

// sum_{k=1..n} k^(1/m) with absolute error below n 2^(1-P).
inline HPReal power_sum(const Natural& n, unsigned m, Precision P) {
  if (n.is_zero()) return HPReal::exact(Float(P));
  if (!n.fits_u64()) throw std::invalid_argument("power_sum: n out of range");
  auto cs = detail::checkpoint_sums({n.to_u64()}, m, detail::SumKind::kPower, P);
  Float err = Float(n.value(), 64, MPFR_RNDU);
  mpfr_mul_2si(err.get(), err.get(), 1 - static_cast<long>(P), MPFR_RNDU);
  return {std::move(cs.sums.front()), std::move(err)};
}

// coeff * n^exponent at precision P; the bound stays within 2 ulp.
inline HPReal hp_power_term(const ExpansionTerm& term, const Natural& n, Precision P) {
  if (n.is_zero()) throw std::invalid_argument("hp_power_term: n must be >= 1");
  const long a = term.exponent.get_num().get_si();
  const unsigned long b = term.exponent.get_den().get_ui();
  const long guard = 4 + static_cast<long>(detail::bit_length_u64(static_cast<std::uint64_t>(std::labs(a)) + 3));
  const Precision wp = P + guard;
  const Float nf = Float::exact(n.value());
  Float x(wp);
  if (b == 1) {
    mpfr_set(x.get(), nf.get(), MPFR_RNDN);
  } else {
    detail::root_into(x.get(), nf.get(), static_cast<unsigned>(b), MPFR_RNDN);
  }
  mpfr_pow_si(x.get(), x.get(), a, MPFR_RNDN);
  mpfr_mul_q(x.get(), x.get(), term.coeff.get_mpq_t(), MPFR_RNDN);
  // Relative error of root, power and product: (|a| + 2) 2^-wp to first
  // order; doubled for the higher-order terms.
  Float err = detail::rel_bound(x, wp - 1, static_cast<double>(std::labs(a) + 2));
  Float v = x.rounded(P);
  detail::add_up(err, ulp(v));  // final rounding, half ulp rounded up
  return {std::move(v), std::move(err)};
}

// sum of all expansion terms at n plus the supplied zeta value.
inline HPReal eval_expansion(const Expansion& e, const HPReal& zeta_value, const Natural& n,
                             Precision P) {
  if (n.is_zero()) throw std::invalid_argument("eval_expansion: n must be >= 1");
  const Precision wp = P + 16;
  Float acc = zeta_value.value.rounded(wp);
  Float err = zeta_value.error.rounded(53, MPFR_RNDU);
  detail::add_up(err, detail::rel_bound(acc, wp));
  for (const auto& t : e.all_terms()) {
    const HPReal v = hp_power_term(t, n, wp);
    detail::add_up(err, v.error);
    mpfr_add(acc.get(), acc.get(), v.value.get(), MPFR_RNDN);
    detail::add_up(err, detail::rel_bound(acc, wp));
  }
  Float out = acc.rounded(P);
  detail::add_up(err, ulp(out));
  return {std::move(out), std::move(err)};
}

struct ZetaEstimate {
  unsigned m = 2;
  HPReal value;
  Natural n_used;
  unsigned p_used = 0;
  Float error_estimate;
};

namespace detail {

// ln |coeff * n^exponent|.
inline double log_term_magnitude(const ExpansionTerm& t, const Natural& n) {
  const Float c(t.coeff, 64);
  const Float nf = Float::exact(n.value());
  return c.log_abs() + t.exponent.get_d() * nf.log_abs();
}

}  // namespace detail

// zeta(-1/m) ~ sum_{k<=n} k^(1/m) minus every non-constant expansion term
// through correction p. The first omitted correction bounds the truncation.
inline ZetaEstimate estimate_zeta_neg_inv(unsigned m, const Natural& n, unsigned p, Precision P) {
  if (m < 2) throw std::invalid_argument("estimate_zeta_neg_inv: m must be >= 2");
  if (n.is_zero()) throw std::invalid_argument("estimate_zeta_neg_inv: n must be >= 1");
  const Expansion e = build_power_sum_expansion(m, p + 1);

  double prev = detail::log_term_magnitude(e.correction_terms.front(), n);
  for (unsigned k = 1; k <= p; ++k) {
    const double cur = detail::log_term_magnitude(e.correction_terms[k], n);
    if (!(cur < prev)) {
      throw std::domain_error("estimate_zeta_neg_inv: correction terms stop decreasing at k=" +
                              std::to_string(k + 1) + "; n=" + n.to_string() +
                              " is too small for p=" + std::to_string(p));
    }
    prev = cur;
  }

  // Absolute accuracy target: P bits below the binary point, plus room for
  // the magnitude of the leading term (about n^2).
  const Precision abs_bits = P + 8;
  const Precision term_prec = abs_bits + 2 * static_cast<Precision>(n.bit_length()) + 4;
  HPReal sum = power_sum(n, m, abs_bits);
  Float acc = sum.value.rounded(term_prec);
  Float err = sum.error;
  const auto terms = e.all_terms();
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    const HPReal t = hp_power_term(terms[i], n, term_prec);
    detail::add_up(err, t.error);
    mpfr_sub(acc.get(), acc.get(), t.value.get(), MPFR_RNDN);
    detail::add_up(err, detail::rel_bound(acc, term_prec));
  }
  const HPReal omitted = hp_power_term(terms.back(), n, 64);
  Float value = acc.rounded(P);
  detail::add_up(err, ulp(value));
  Float estimate = err;
  detail::add_up(estimate, omitted.value);
  return {m, {std::move(value), std::move(err)}, n, p, std::move(estimate)};
}

// zeta(-1/m) estimates memoized per (m, P). Each entry is computed at a size
// where the first omitted correction is below 2^-(P+16).
class ZetaCache {
 public:
  ZetaEstimate get(unsigned m, Precision P) {
    const auto key = std::make_pair(m, P);
    {
      std::shared_lock lock(mu_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    ZetaEstimate est = compute(m, P);
    std::unique_lock lock(mu_);
    return cache_.try_emplace(key, std::move(est)).first->second;
  }

  static ZetaCache& shared() {
    static ZetaCache cache;
    return cache;
  }

 private:
  static ZetaEstimate compute(unsigned m, Precision P) {
    const Natural n(1000 + static_cast<unsigned long>(P));
    const double target = -static_cast<double>(P + 16) * std::log(2.0);
    unsigned p = 1;
    while (p < 200 && detail::log_term_magnitude(em_correction_coeff(m, p + 1), n) >= target) ++p;
    return estimate_zeta_neg_inv(m, n, p, P + 32);
  }

  std::shared_mutex mu_;
  std::map<std::pair<unsigned, Precision>, ZetaEstimate> cache_;
};

inline HPReal cached_zeta(unsigned m, Precision P) {
  ZetaEstimate est = ZetaCache::shared().get(m, P);
  return {std::move(est.value.value), std::move(est.error_estimate)};
}

}  // namespace rootsum
