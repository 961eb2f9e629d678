#pragma once

// Deterministic chunked summation of k^(1/m) and {k^(1/m)} over k = 1..n.
//
// The index range is cut into fixed-size work items (also cut at every
// requested checkpoint). Items are summed independently, possibly on several
// threads, and then folded strictly in ascending order, so the result is the
// same bit pattern whatever the thread count.

#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rootsum/exact.hpp"
#include "rootsum/float.hpp"

namespace rootsum::detail {

inline constexpr std::uint64_t kChunk = 1u << 15;

inline unsigned bit_length_u64(std::uint64_t x) {
  return x == 0 ? 0u : 64u - static_cast<unsigned>(__builtin_clzll(x));
}

// k^(1/m) rounded in direction rnd at out's precision; k held exactly in kf.
inline void root_into(mpfr_ptr out, mpfr_srcptr kf, unsigned m, mpfr_rnd_t rnd) {
  switch (m) {
    case 1: mpfr_set(out, kf, rnd); break;
    case 2: mpfr_sqrt(out, kf, rnd); break;
    case 3: mpfr_cbrt(out, kf, rnd); break;
    default: mpfr_rootn_ui(out, kf, m, rnd); break;
  }
}

enum class SumKind { kFrac, kPower };

// Sums over k in [lo, hi] into acc (acc keeps its precision).
// Frac terms: root rounded toward zero then the integer part removed exactly,
// so each term lies in [0,1) with error < 2^(bitlen(r) - term_prec).
// Power terms: root rounded to nearest.
inline void sum_range(std::uint64_t lo, std::uint64_t hi, unsigned m, SumKind kind,
                      Precision term_prec, mpfr_ptr acc) {
  mpfr_set_zero(acc, 1);
  if (lo > hi) return;
  mpfr_t kf, t;
  mpfr_init2(kf, 64);
  mpfr_init2(t, term_prec);
  std::uint64_t r = nth_root_u64(lo, m);
  unsigned __int128 next = pow_sat(r + 1, m);
  for (std::uint64_t k = lo;; ++k) {
    if (k >= next) {
      ++r;
      next = pow_sat(r + 1, m);
    }
    mpfr_set_ui(kf, k, MPFR_RNDN);
    if (kind == SumKind::kFrac) {
      root_into(t, kf, m, MPFR_RNDZ);
      mpfr_sub_ui(t, t, r, MPFR_RNDN);  // exact
    } else {
      root_into(t, kf, m, MPFR_RNDN);
    }
    mpfr_add(acc, acc, t, MPFR_RNDN);
    if (k == hi) break;
  }
  mpfr_clear(t);
  mpfr_clear(kf);
}

struct CheckpointSums {
  std::vector<Float> sums;     // prefix sum at each checkpoint
  Precision term_prec = 0;     // precision used for each root
  Precision acc_prec = 0;      // accumulator precision
};

// Prefix sums at each checkpoint (strictly increasing, all >= 1).
// Every term has absolute error below 2^-abs_bits and every addition adds
// at most 2^(-abs_bits-2), so the sum at n has error below n 2^(1-abs_bits).
inline CheckpointSums checkpoint_sums(const std::vector<std::uint64_t>& checkpoints, unsigned m,
                                      SumKind kind, Precision abs_bits,
                                      unsigned threads = std::thread::hardware_concurrency()) {
  CheckpointSums out;
  if (checkpoints.empty()) return out;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] == 0 || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw std::invalid_argument("checkpoints must be positive and strictly increasing");
    }
  }
  const std::uint64_t n_max = checkpoints.back();
  const unsigned root_bits = bit_length_u64(nth_root_u64(n_max, m)) + 1;
  out.term_prec = abs_bits + root_bits + 1;
  // Sums stay below n^2, so this keeps every rounding under 2^(-abs_bits-2).
  out.acc_prec = abs_bits + 2 * bit_length_u64(n_max) + 4;

  struct Item {
    std::uint64_t lo, hi;
    bool checkpoint;
  };
  std::vector<Item> items;
  std::uint64_t lo = 1;
  for (const auto cp : checkpoints) {
    while (lo <= cp) {
      const std::uint64_t hi = std::min(cp, lo + kChunk - 1);
      items.push_back({lo, hi, hi == cp});
      lo = hi + 1;
    }
  }

  std::vector<Float> partial(items.size(), Float(out.acc_prec));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      sum_range(items[i].lo, items[i].hi, m, kind, out.term_prec, partial[i].get());
    }
  };
  const unsigned n_threads =
      std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(std::min<std::size_t>(items.size(), 64)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Float running(out.acc_prec);
  for (std::size_t i = 0; i < items.size(); ++i) {
    mpfr_add(running.get(), running.get(), partial[i].get(), MPFR_RNDN);
    if (items[i].checkpoint) out.sums.push_back(running);
  }
  return out;
}

}  // namespace rootsum::detail
