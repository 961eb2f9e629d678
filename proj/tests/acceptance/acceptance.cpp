// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rootsum/rootsum.hpp"

using namespace rootsum;

namespace {

// Tolerances, fixed here and nowhere else.
constexpr double kZetaAgreement = 1e-12;            // AC4
constexpr double kMainResultFactor = 2.0;           // AC5: |residual| <= factor * first omitted
constexpr double kSlopeLo = -2.65, kSlopeHi = -2.35;  // AC6
constexpr double kGeneralMFactor = 1.0;             // AC7: |residual| <= factor * first omitted
constexpr double kLimsupTolerance = 1e-2;           // AC8
constexpr double kBinDeviation = 1e-2;              // AC9
constexpr double kMeanTolerance = 1e-2;             // AC9
constexpr double kXsqTolerance = 1e-2;              // AC10
constexpr Precision kP = 128;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %s %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const Float& x) {
  char buf[64];
  mpfr_snprintf(buf, sizeof buf, "%.7Re", x.get());
  return buf;
}

Float from_double(double v) {
  Float out(64);
  mpfr_set_d(out.get(), v, MPFR_RNDN);
  return out;
}

Float scaled(const Float& x, double factor) { return x * from_double(factor); }

}  // namespace

int main() {
  criterion("AC1", "closed form equals oracle", [] {
    std::uint64_t checked = 0;
    for (unsigned m = 2; m <= 5; ++m) {
      for (std::uint64_t n = 1; n <= 100000; ++n) {
        const Natural nn = Natural::from_u64(n);
        if (!(floor_root_sum(nn, m).total == brute_floor_sum(nn, m))) {
          return Outcome{false, "mismatch at n=" + std::to_string(n) + " m=" + std::to_string(m)};
        }
        ++checked;
      }
    }
    std::mt19937_64 rng(20261018);
    std::uniform_int_distribution<std::uint64_t> pick(1, 1000000000000ull);
    const OracleConfig wide{Natural(1000000000000ull)};
    for (unsigned m = 2; m <= 5; ++m) {
      for (int i = 0; i < 1000; ++i) {
        const Natural n = Natural::from_u64(pick(rng));
        if (!(floor_root_sum(n, m).total == brute_floor_sum(n, m, wide))) {
          return Outcome{false, "mismatch at n=" + n.to_string() + " m=" + std::to_string(m)};
        }
        ++checked;
      }
    }
    return Outcome{true, std::to_string(checked) + " (n, m) pairs exact"};
  });

  criterion("AC2", "floor sqrt sequence", [] {
    const std::vector<unsigned long> expected{1, 2, 3, 5, 7, 9, 11};
    std::string got;
    bool ok = true;
    for (unsigned long n = 1; n <= 7; ++n) {
      const Natural b = floor_sqrt_sum(Natural(n)).total;
      got += (n > 1 ? "," : "") + b.to_string();
      ok = ok && b == Natural(expected[n - 1]);
    }
    return Outcome{ok, "b_1..b_7 = " + got};
  });

  criterion("AC3", "square-root coefficient form equals generic form", [] {
    for (unsigned k = 1; k <= 10; ++k) {
      if (em_coeff_sqrt_paperform(k) != em_correction_coeff(2, k).coeff) {
        return Outcome{false, "differs at k=" + std::to_string(k)};
      }
    }
    return Outcome{true, "k = 1..10 exact"};
  });

  criterion("AC4", "zeta(-1/2) stability and round trip", [] {
    const auto a = estimate_zeta_neg_inv(2, Natural(10000), 3, kP);
    const auto b = estimate_zeta_neg_inv(2, Natural(20000), 4, kP);
    const Float gap = abs(a.value.value - b.value.value);
    const bool stable = gap < from_double(kZetaAgreement);

    const Natural n(100000);
    const unsigned p = 2;
    const auto v = eval_expansion(build_power_sum_expansion(2, p), a.value, n, 200);
    const auto oracle = power_sum(n, 2, kP);
    const Float miss = abs(v.value - oracle.value);
    Float bound = correction_magnitude(2, p + 1, n);
    detail::add_up(bound, a.error_estimate);
    detail::add_up(bound, oracle.error);
    const bool round_trip = miss <= bound;
    return Outcome{stable && round_trip, "estimate gap " + fmt(gap) + ", round trip miss " + fmt(miss) +
                                             " <= bound " + fmt(bound)};
  });

  criterion("AC5", "main result, m=2 p=2", [] {
    const std::vector<Natural> ns{Natural(1000), Natural(10000), Natural(100000), Natural(1000000)};
    const auto t = residual_table(2, 2, ns, kP);
    std::ostringstream ss;
    bool ok = true;
    for (const auto& r : t.rows) {
      const Float limit = scaled(correction_magnitude(2, 3, r.n), kMainResultFactor);
      const bool row_ok = abs(r.residual) <= limit;
      ok = ok && row_ok;
      ss << "n=" << r.n.to_string() << " |r|/omitted=" << std::exp(r.residual.log_abs() - limit.log_abs()) * kMainResultFactor
         << (row_ok ? "" : "!") << " ";
    }
    return Outcome{ok, ss.str()};
  });

  criterion("AC6", "residual slope m=2 p=1", [] {
    std::vector<Natural> ns;
    for (int i = 0; i <= 16; ++i) {
      ns.emplace_back(static_cast<unsigned long>(std::llround(std::pow(10.0, 4.0 + i / 8.0))));
    }
    const auto t = residual_table(2, 1, ns, kP);
    const auto s = fit_slope(t.rows, Natural(10000), Natural(1000000));
    if (!s) return Outcome{false, "no usable rows"};
    char buf[96];
    std::snprintf(buf, sizeof buf, "slope %.4f over %zu points in [1e4, 1e6]", *s, ns.size());
    return Outcome{*s >= kSlopeLo && *s <= kSlopeHi, buf};
  });

  criterion("AC7", "general m at n=1e6, p=1; m=2 paths identical", [] {
    const Natural n(1000000);
    std::ostringstream ss;
    bool ok = true;
    for (unsigned m = 3; m <= 5; ++m) {
      const auto t = residual_table(m, 1, {n}, kP);
      const Float omitted = correction_magnitude(m, 2, n);
      const bool row_ok = abs(t.rows[0].residual) <= scaled(omitted, kGeneralMFactor);
      ok = ok && row_ok;
      ss << "m=" << m << " |r|=" << fmt(abs(t.rows[0].residual)) << " omitted=" << fmt(omitted) << (row_ok ? "" : "!")
         << "; ";
    }
    bool same = true;
    const HPReal zeta = cached_zeta(2, kP + 64);
    for (unsigned p = 1; p <= 4; ++p) {
      for (unsigned long k : {1000ul, 31415ul, 1000000ul}) {
        const auto g = predict_frac_sum(build_power_sum_expansion(2, p), zeta, Natural(k), kP);
        const auto s = predict_frac_sum(build_sqrt_expansion_paperform(p), zeta, Natural(k), kP);
        same = same && g.value == s.value && g.error == s.error && g.value.precision() == s.value.precision();
      }
    }
    for (unsigned long k = 1; k <= 20000; ++k) {
      same = same && floor_root_sum(Natural(k), 2).total == floor_sqrt_sum(Natural(k)).total;
    }
    ss << "m=2 generic vs specialized " << (same ? "bit-identical" : "DIFFER");
    return Outcome{ok && same, ss.str()};
  });

  criterion("AC8", "y_n structure up to 1e5", [] {
    const auto rep = extrema_scan(1, 100000, kP);
    const double gap = std::abs(rep.running_max - rep.limsup_target);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "positive set %s, minima %s, running max %.6f vs %.6f (gap %.2e), block minima %s, ambiguous %llu",
                  rep.positive_at_expected ? "ok" : "WRONG", rep.minima_at_expected ? "ok" : "WRONG", rep.running_max,
                  rep.limsup_target, gap, rep.block_minima_decreasing ? "decreasing" : "NOT decreasing",
                  static_cast<unsigned long long>(rep.ambiguous));
    return Outcome{rep.positive_at_expected && rep.minima_at_expected && gap < kLimsupTolerance &&
                       rep.block_minima_decreasing,
                   buf};
  });

  criterion("AC9", "equidistribution at 1e6", [] {
    std::ostringstream ss;
    bool ok = true;
    for (unsigned m : {2u, 3u}) {
      const auto rep = equidist_stats(m, Natural(1000000), 10, kP);
      const double dev = rep.max_deviation.get_d();
      const double mean = rep.mean.value.to_double();
      ok = ok && dev < kBinDeviation && std::abs(mean - 0.5) < kMeanTolerance;
      ss << "m=" << m << " max dev " << dev << " mean " << mean << "; ";
    }
    return Outcome{ok, ss.str()};
  });

  criterion("AC10", "x_{n^2} constant at n=1000", [] {
    const auto rep = xsq_constant_check(Natural(1000), kP);
    const double d = std::abs(rep.rows.back().distance.to_double());
    char buf[96];
    std::snprintf(buf, sizeof buf, "|x - n^2/2 + n/3 - zeta(-1/2)| = %.3e", d);
    return Outcome{d < kXsqTolerance, buf};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
