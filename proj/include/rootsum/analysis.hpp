#pragma once

// Empirical checks of the expansions: residual tables and decay-rate fits,
// the y_n = x_n - n/2 + sqrt(n)/3 sequence and its extrema, bin statistics of
// {k^(1/m)}, and convergence of x_{n^2} - n^2/2 + n/3.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rootsum/errors.hpp"
#include "rootsum/exact.hpp"
#include "rootsum/hp.hpp"
#include "rootsum/oracle.hpp"
#include "rootsum/series.hpp"

namespace rootsum {

// ---- residuals ------------------------------------------------------------

struct ResidualRow {
  Natural n;
  HPReal reference;  // brute-force fractional sum
  HPReal predicted;  // expansion minus closed-form floor sum
  Float residual;    // reference - predicted, computed without rounding
  Float residual_bound;
  std::optional<double> local_slope;  // d log|residual| / d log n against the previous row
  bool precision_limited = false;     // |residual| <= residual_bound
};

struct ResidualTable {
  unsigned m = 2;
  unsigned p = 1;
  Precision precision = kDefaultPrecision;
  std::vector<ResidualRow> rows;
  Float first_omitted_at_max;  // |first omitted correction| at the largest n
};

// Magnitude of correction term k of the power-sum expansion at n.
inline Float correction_magnitude(unsigned m, unsigned k, const Natural& n, Precision P = 64) {
  return abs(hp_power_term(em_correction_coeff(m, k), n, P).value);
}

// X_n^(m) predicted by the expansion with p corrections: K_{n,p} - A_n.
inline HPReal predict_frac_sum(const Expansion& e, const HPReal& zeta, const Natural& n, Precision P) {
  const Precision wp = P + 2 * static_cast<Precision>(n.bit_length()) + 8;
  const HPReal power = eval_expansion(e, zeta, n, wp);
  const Float floor_f = Float::exact(floor_root_sum(n, e.m).total.value());
  Float value = sub(power.value, floor_f, wp);
  Float err = power.error;
  detail::add_up(err, ulp(value));
  return {std::move(value), std::move(err)};
}

inline ResidualTable residual_table(unsigned m, unsigned p, const std::vector<Natural>& ns,
                                    Precision P = kDefaultPrecision, const OracleConfig& cfg = {}) {
  if (m < 2 || p < 1) throw std::invalid_argument("residual_table: need m >= 2 and p >= 1");
  if (ns.empty()) throw std::invalid_argument("residual_table: no sample points");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i].is_zero() || (i > 0 && !(ns[i - 1] < ns[i]))) {
      throw std::invalid_argument("residual_table: ns must be positive and strictly increasing");
    }
  }
  ResidualTable table{m, p, P, {}, correction_magnitude(m, p + 1, ns.back())};

  // Oracle error at the largest n is n 2^(1-P); it has to sit well below the
  // size of the residual being measured.
  {
    Float oracle_err(ns.back().value(), 64, MPFR_RNDU);
    mpfr_mul_2si(oracle_err.get(), oracle_err.get(), 1 - static_cast<long>(P), MPFR_RNDU);
    if (!(oracle_err * Float(16, 64) < table.first_omitted_at_max)) {
      const double need = (std::log(32.0 * ns.back().value().get_d()) - table.first_omitted_at_max.log_abs()) /
                           std::log(2.0);
      throw PrecisionError("residual_table: precision " + std::to_string(P) +
                               " cannot resolve residuals of size " +
                               table.first_omitted_at_max.to_string(3),
                           static_cast<long>(std::ceil(need)));
    }
  }

  const Expansion e = build_power_sum_expansion(m, p);
  const HPReal zeta = cached_zeta(m, P + 64);
  auto refs = brute_frac_sums_at(ns, m, P, cfg);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    ResidualRow row{ns[i], std::move(refs[i]), predict_frac_sum(e, zeta, ns[i], P), Float(), Float(), {}, false};
    row.residual = exact_sub(row.reference.value, row.predicted.value);
    row.residual_bound = row.reference.error;
    detail::add_up(row.residual_bound, row.predicted.error);
    row.precision_limited = !(abs(row.residual) > row.residual_bound);
    if (i > 0) {
      const auto& prev = table.rows.back();
      if (!row.residual.is_zero() && !prev.residual.is_zero()) {
        const double dn = std::log(row.n.value().get_d()) - std::log(prev.n.value().get_d());
        row.local_slope = (row.residual.log_abs() - prev.residual.log_abs()) / dn;
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// Least-squares slope of log|residual| against log n over rows with
// n in [n_lo, n_hi], skipping precision-limited rows.
inline std::optional<double> fit_slope(const std::vector<ResidualRow>& rows, const Natural& n_lo,
                                       const Natural& n_hi) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (r.n < n_lo || n_hi < r.n || r.precision_limited || r.residual.is_zero()) continue;
    pts.emplace_back(std::log(r.n.value().get_d()), r.residual.log_abs());
  }
  if (pts.size() < 2) return std::nullopt;
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / static_cast<double>(pts.size());
  const double my = sy / static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

// Fit over the top decade [n_max/10, n_max] only.
inline std::optional<double> fit_slope_top_decade(const std::vector<ResidualRow>& rows) {
  if (rows.empty()) return std::nullopt;
  const Natural& top = rows.back().n;
  return fit_slope(rows, Natural(mpz_class(top.value() / 10)), top);
}

// Decay exponent of the first omitted correction: 1/m - (2p + 1).
inline double expected_residual_slope(unsigned m, unsigned p) {
  return 1.0 / m - (2.0 * p + 1.0);
}

// ---- y_n ------------------------------------------------------------------

struct YSeqPoint {
  Natural n;
  HPReal y;
};

// Visits y_n for n in [lo, hi]. y is accumulated twice, directly from the
// running fractional sum and through the increment
//   y_{n+1} - y_n = {sqrt(n+1)} - 1/2 + (sqrt(n+1) - sqrt(n))/3,
// and the two are compared every 10^4 steps and at the end.
inline void for_each_y(std::uint64_t lo, std::uint64_t hi, Precision P,
                       const std::function<void(const YSeqPoint&)>& visit) {
  if (lo < 1) throw std::invalid_argument("y_sequence: n_lo must be >= 1");
  if (hi < lo) return;
  const Precision wp = P + detail::bit_length_u64(detail::nth_root_u64(hi, 2)) + 2;
  const Precision acc_prec = P + 2 * detail::bit_length_u64(hi) + 4;
  Float kf(64), s(wp), s_prev(wp), f(wp), step(acc_prec), x(acc_prec), y_inc(acc_prec), y_dir(acc_prec);
  std::uint64_t r = 1;
  for (std::uint64_t k = 1; k <= hi; ++k) {
    if ((r + 1) * (r + 1) <= k) ++r;
    mpfr_set_ui(kf.get(), k, MPFR_RNDN);
    mpfr_sqrt(f.get(), kf.get(), MPFR_RNDZ);
    mpfr_sub_ui(f.get(), f.get(), r, MPFR_RNDN);
    mpfr_sqrt(s.get(), kf.get(), MPFR_RNDN);
    mpfr_add(x.get(), x.get(), f.get(), MPFR_RNDN);

    // direct: x_k - k/2 + sqrt(k)/3
    mpfr_set_ui(y_dir.get(), k, MPFR_RNDN);
    mpfr_div_2ui(y_dir.get(), y_dir.get(), 1, MPFR_RNDN);
    mpfr_sub(y_dir.get(), x.get(), y_dir.get(), MPFR_RNDN);
    mpfr_div_ui(step.get(), s.get(), 3, MPFR_RNDN);
    mpfr_add(y_dir.get(), y_dir.get(), step.get(), MPFR_RNDN);

    // incremental
    if (k == 1) {
      mpfr_set(y_inc.get(), y_dir.get(), MPFR_RNDN);
    } else {
      mpfr_sub(step.get(), s.get(), s_prev.get(), MPFR_RNDN);
      mpfr_div_ui(step.get(), step.get(), 3, MPFR_RNDN);
      mpfr_add(step.get(), step.get(), f.get(), MPFR_RNDN);
      mpfr_sub_d(step.get(), step.get(), 0.5, MPFR_RNDN);
      mpfr_add(y_inc.get(), y_inc.get(), step.get(), MPFR_RNDN);
    }
    mpfr_swap(s.get(), s_prev.get());

    // Each step contributes well under 2^(2-P) to either accumulator.
    Float err(static_cast<long>(k), 64);
    mpfr_mul_2si(err.get(), err.get(), 2 - static_cast<long>(P), MPFR_RNDU);
    if (k % 10000 == 0 || k == hi) {
      Float drift = abs(y_inc - y_dir);
      Float allowed = err * Float(2, 64);
      if (drift > allowed) {
        throw ConsistencyError("y_sequence: incremental and direct y disagree at n=" + std::to_string(k));
      }
    }
    if (k >= lo) visit({Natural::from_u64(k), {y_dir, err}});
  }
}

inline std::vector<YSeqPoint> y_sequence(std::uint64_t lo, std::uint64_t hi, Precision P = kDefaultPrecision) {
  std::vector<YSeqPoint> out;
  for_each_y(lo, hi, P, [&](const YSeqPoint& pt) { out.push_back(pt); });
  return out;
}

struct BlockMinimum {
  std::uint64_t block;     // j: the block is [j^2, (j+1)^2 - 1]
  std::uint64_t location;  // argmin
  double value;
};

struct ExtremaReport {
  std::uint64_t lo = 0, hi = 0;
  std::vector<std::uint64_t> local_minima;
  std::vector<std::uint64_t> local_maxima;
  std::vector<std::uint64_t> positive;  // n with y_n > 0
  std::uint64_t ambiguous = 0;          // comparisons inside the error bounds
  double running_max = 0;
  std::uint64_t running_max_at = 0;
  double limsup_target = 0;  // zeta(-1/2) + 1/2
  std::vector<BlockMinimum> block_minima;

  bool minima_at_expected = false;       // local minima == {j^2 + 3j + 1}
  bool positive_at_expected = false;     // y_n > 0 exactly on {j^2 + 2j}
  bool block_minima_decreasing = false;  // over complete blocks
};

inline ExtremaReport extrema_scan(std::uint64_t lo, std::uint64_t hi, Precision P = kDefaultPrecision) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("extrema_scan: bad range");
  const std::uint64_t first_block = detail::nth_root_u64(lo - 1, 2) + 1;  // first j with j^2 >= lo
  const std::uint64_t last_block = detail::nth_root_u64(hi + 1, 2) - 1;   // last j with (j+1)^2 - 1 <= hi
  if (last_block < first_block || last_block - first_block + 1 < 20) {
    throw std::invalid_argument("extrema_scan: range must cover at least 20 complete square blocks");
  }
  ExtremaReport rep;
  rep.lo = lo;
  rep.hi = hi;
  const HPReal zeta = cached_zeta(2, P);
  rep.limsup_target = zeta.value.to_double() + 0.5;

  std::set<std::uint64_t> expected_min, expected_pos;
  for (std::uint64_t j = 1; j * j + 3 * j + 1 <= hi; ++j) {
    if (j * j + 3 * j + 1 >= lo) expected_min.insert(j * j + 3 * j + 1);
  }
  for (std::uint64_t j = 1; j * j + 2 * j <= hi; ++j) {
    if (j * j + 2 * j >= lo) expected_pos.insert(j * j + 2 * j);
  }

  // Sliding window over y_{n-1}, y_n, y_{n+1}; n = 1 has no left neighbour.
  std::vector<YSeqPoint> win;
  std::optional<Float> best;
  std::optional<BlockMinimum> cur_block;
  auto definitely_less = [&](const HPReal& a, const HPReal& b) {
    Float gap = b.value - a.value;
    Float tol = a.error + b.error;
    if (abs(gap) <= tol) ++rep.ambiguous;
    return gap > tol;
  };
  auto classify = [&](const YSeqPoint& l, const YSeqPoint& c, const YSeqPoint& r) {
    const std::uint64_t n = c.n.to_u64();
    if (definitely_less(c.y, l.y) && definitely_less(c.y, r.y)) rep.local_minima.push_back(n);
    if (definitely_less(l.y, c.y) && definitely_less(r.y, c.y)) rep.local_maxima.push_back(n);
  };
  const std::uint64_t start = lo > 1 ? lo - 1 : 1;
  for_each_y(start, hi + 1, P, [&](const YSeqPoint& pt) {
    const std::uint64_t n = pt.n.to_u64();
    if (n >= lo && n <= hi) {
      if (pt.y.value > pt.y.error) {
        rep.positive.push_back(n);
      } else if (abs(pt.y.value) <= pt.y.error) {
        ++rep.ambiguous;
      }
      if (!best || pt.y.value > *best) {
        best = pt.y.value;
        rep.running_max = pt.y.value.to_double();
        rep.running_max_at = n;
      }
      const std::uint64_t j = detail::nth_root_u64(n, 2);
      if (j >= first_block && j <= last_block) {
        const double v = pt.y.value.to_double();
        if (!cur_block || cur_block->block != j) {
          if (cur_block) rep.block_minima.push_back(*cur_block);
          cur_block = BlockMinimum{j, n, v};
        } else if (v < cur_block->value) {
          cur_block->location = n;
          cur_block->value = v;
        }
      }
    }
    win.push_back(pt);
    if (win.size() > 3) win.erase(win.begin());
    if (win.size() == 3 && win[1].n.to_u64() >= lo && win[1].n.to_u64() <= hi) classify(win[0], win[1], win[2]);
  });
  if (cur_block) rep.block_minima.push_back(*cur_block);

  rep.minima_at_expected =
      std::set<std::uint64_t>(rep.local_minima.begin(), rep.local_minima.end()) == expected_min;
  rep.positive_at_expected = std::set<std::uint64_t>(rep.positive.begin(), rep.positive.end()) == expected_pos;
  rep.block_minima_decreasing = true;
  for (std::size_t i = 1; i < rep.block_minima.size(); ++i) {
    if (!(rep.block_minima[i].value < rep.block_minima[i - 1].value)) rep.block_minima_decreasing = false;
  }
  return rep;
}

// ---- equidistribution -----------------------------------------------------

struct EquidistReport {
  unsigned m = 2;
  Natural n;
  unsigned bins = 10;
  std::vector<std::uint64_t> counts;
  Rat max_deviation;  // max over bins of |count/n - 1/bins|, exact
  HPReal mean;        // (1/n) sum {k^(1/m)}
};

// Bin of {k^(1/m)} is floor(bins k^(1/m)) - bins floor(k^(1/m))
// = floor((k bins^m)^(1/m)) - bins r, all in integers.
inline EquidistReport equidist_stats(unsigned m, const Natural& n, unsigned bins,
                                     Precision P = 64, const OracleConfig& cfg = {}) {
  if (m < 2) throw std::invalid_argument("equidist_stats: m must be >= 2");
  if (bins < 1) throw std::invalid_argument("equidist_stats: bins must be >= 1");
  if (n.is_zero()) throw std::invalid_argument("equidist_stats: n must be >= 1");
  detail::check_budget(n, cfg, "equidist_stats");
  EquidistReport rep{m, n, bins, std::vector<std::uint64_t>(bins, 0), Rat(), HPReal{Float(P), Float(32)}};
  const std::uint64_t N = n.to_u64();
  const mpz_class scale = ipow(mpz_class(bins), m);
  const bool fast = scale.fits_ulong_p() &&
                    static_cast<unsigned __int128>(N) * scale.get_ui() <= ~static_cast<std::uint64_t>(0);
  const std::uint64_t s = fast ? scale.get_ui() : 0;
  std::uint64_t r = 1;
  for (std::uint64_t k = 1; k <= N; ++k) {
    if (detail::pow_sat(r + 1, m) <= k) ++r;
    std::uint64_t b = 0;
    if (fast) {
      b = detail::nth_root_u64(k * s, m) - bins * r;
    } else {
      const Natural scaled(mpz_class(scale * mpz_class(static_cast<unsigned long>(k))));
      b = mpz_class(integer_nth_root(scaled, m).value() - mpz_class(bins) * static_cast<unsigned long>(r)).get_ui();
    }
    ++rep.counts.at(b);
  }
  for (const auto c : rep.counts) {
    Rat dev = Rat(mpz_class(static_cast<unsigned long>(c)), n.value()) - Rat(1, bins);
    dev.canonicalize();
    if (abs(dev) > rep.max_deviation) rep.max_deviation = abs(dev);
  }
  const HPReal sum = brute_frac_sum(n, m, P, cfg);
  const Float nf = Float::exact(n.value());
  rep.mean = {sum.value / nf, sum.error / nf};
  detail::add_up(rep.mean.error, ulp(rep.mean.value));
  return rep;
}

// ---- x_{n^2} constant -----------------------------------------------------

struct XsqRow {
  Natural n;
  HPReal value;    // x_{n^2} - n^2/2 + n/3
  Float distance;  // value - zeta(-1/2)
};

struct XsqReport {
  std::vector<XsqRow> rows;
  HPReal zeta;
  bool distance_decreasing = false;
};

// Samples n = 10, 100, ... up to n_max (and n_max itself).
inline XsqReport xsq_constant_check(const Natural& n_max, Precision P = kDefaultPrecision,
                                    const OracleConfig& cfg = {}) {
  if (n_max < Natural(10)) throw std::invalid_argument("xsq_constant_check: n_max must be >= 10");
  std::vector<Natural> sides;
  for (mpz_class s = 10; s <= n_max.value(); s *= 10) sides.emplace_back(s);
  if (!(sides.back() == n_max)) sides.push_back(n_max);
  std::vector<Natural> squares;
  for (const auto& s : sides) squares.emplace_back(mpz_class(s.value() * s.value()));
  detail::check_budget(squares.back(), cfg, "xsq_constant_check");

  XsqReport rep;
  rep.zeta = cached_zeta(2, P);
  auto sums = brute_frac_sums_at(squares, 2, P, cfg);
  for (std::size_t i = 0; i < sides.size(); ++i) {
    const mpz_class& s = sides[i].value();
    // n^2/2 - n/3 as an exact rational
    const Rat shift = make_rat(s * s, 2) - make_rat(s, 3);
    const Float shift_f(shift, sums[i].precision() + 8);
    Float v = sub(sums[i].value, shift_f, sums[i].precision());
    Float err = sums[i].error;
    detail::add_up(err, ulp(v));
    detail::add_up(err, ulp(shift_f));
    Float dist = v - rep.zeta.value;
    rep.rows.push_back({sides[i], {std::move(v), std::move(err)}, std::move(dist)});
  }
  rep.distance_decreasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (!(abs(rep.rows[i].distance) < abs(rep.rows[i - 1].distance))) rep.distance_decreasing = false;
  }
  return rep;
}

}  // namespace rootsum
