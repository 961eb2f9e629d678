#pragma once

// Thin RAII wrapper over an MPFR variable. Every value carries its own
// precision; binary operators round to the larger operand precision.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

namespace rootsum {

using Precision = mpfr_prec_t;

class Float {
 public:
  explicit Float(Precision prec = 128) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }

  Float(long value, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, value, MPFR_RNDN);
  }

  Float(const mpz_class& value, Precision prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, value.get_mpz_t(), rnd);
  }

  Float(const mpq_class& value, Precision prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, value.get_mpq_t(), rnd);
  }

  // Exact copy of an integer: the precision grows to hold every bit.
  static Float exact(const mpz_class& value) {
    const auto bits = static_cast<Precision>(
        std::max<std::size_t>(mpz_sizeinbase(value.get_mpz_t(), 2), MPFR_PREC_MIN));
    return Float(value, bits);
  }

  static Float from_string(const std::string& text, Precision prec) {
    Float out(prec);
    mpfr_set_str(out.v_, text.c_str(), 10, MPFR_RNDN);
    return out;
  }

  Float(const Float& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }

  Float(Float&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }

  Float& operator=(const Float& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }

  Float& operator=(Float&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }

  ~Float() { mpfr_clear(v_); }

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }

  Precision precision() const noexcept { return mpfr_get_prec(v_); }

  // Same value rounded to a new precision.
  Float rounded(Precision prec, mpfr_rnd_t rnd = MPFR_RNDN) const {
    Float out(prec);
    mpfr_set(out.v_, v_, rnd);
    return out;
  }

  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const noexcept { return mpfr_nan_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }

  // Exponent e with 2^(e-1) <= |x| < 2^e; meaningless for zero.
  long exponent() const noexcept { return mpfr_get_exp(v_); }

  // Natural log of |x| as a double, valid far outside double's exponent range.
  double log_abs() const noexcept {
    long e = 0;
    const double mant = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log(std::abs(mant)) + static_cast<double>(e) * 0.69314718055994530942;
  }

  // Scientific notation with `digits` significant digits.
  std::string to_string(int digits) const {
    if (is_zero()) return "0";
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", std::max(digits - 1, 0), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  // Fixed notation with `decimals` digits after the point.
  std::string to_fixed(int decimals) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rf", decimals, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  friend bool operator==(const Float& a, const Float& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Float& a, const Float& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

 private:
  mpfr_t v_;
};

inline Precision max_prec(const Float& a, const Float& b) {
  return std::max(a.precision(), b.precision());
}

inline Float add(const Float& a, const Float& b, Precision prec, mpfr_rnd_t rnd = MPFR_RNDN) {
  Float out(prec);
  mpfr_add(out.get(), a.get(), b.get(), rnd);
  return out;
}

inline Float sub(const Float& a, const Float& b, Precision prec, mpfr_rnd_t rnd = MPFR_RNDN) {
  Float out(prec);
  mpfr_sub(out.get(), a.get(), b.get(), rnd);
  return out;
}

inline Float mul(const Float& a, const Float& b, Precision prec, mpfr_rnd_t rnd = MPFR_RNDN) {
  Float out(prec);
  mpfr_mul(out.get(), a.get(), b.get(), rnd);
  return out;
}

inline Float div(const Float& a, const Float& b, Precision prec, mpfr_rnd_t rnd = MPFR_RNDN) {
  Float out(prec);
  mpfr_div(out.get(), a.get(), b.get(), rnd);
  return out;
}

inline Float operator+(const Float& a, const Float& b) { return add(a, b, max_prec(a, b)); }
inline Float operator-(const Float& a, const Float& b) { return sub(a, b, max_prec(a, b)); }
inline Float operator*(const Float& a, const Float& b) { return mul(a, b, max_prec(a, b)); }
inline Float operator/(const Float& a, const Float& b) { return div(a, b, max_prec(a, b)); }

inline Float operator-(const Float& a) {
  Float out(a.precision());
  mpfr_neg(out.get(), a.get(), MPFR_RNDN);
  return out;
}

inline Float abs(const Float& a) {
  Float out(a.precision());
  mpfr_abs(out.get(), a.get(), MPFR_RNDN);
  return out;
}

// a - b with no rounding at all: the result precision is widened to cover
// both operands' bit ranges.
inline Float exact_sub(const Float& a, const Float& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  const long hi = std::max(a.exponent(), b.exponent()) + 1;
  const long lo = std::min(a.exponent() - static_cast<long>(a.precision()),
                           b.exponent() - static_cast<long>(b.precision()));
  Float out(static_cast<Precision>(std::max<long>(hi - lo, MPFR_PREC_MIN)));
  mpfr_sub(out.get(), a.get(), b.get(), MPFR_RNDN);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Float& x) {
  return os << x.to_string(std::max(2, static_cast<int>(static_cast<double>(x.precision()) * 0.30103)));
}

// 2^e at the given precision.
inline Float pow2(long e, Precision prec = 32) {
  Float out(prec);
  mpfr_set_ui_2exp(out.get(), 1, e, MPFR_RNDN);
  return out;
}

// Weight of the least significant bit of x at its own precision.
inline Float ulp(const Float& x) {
  if (x.is_zero()) return Float(32);
  return pow2(x.exponent() - static_cast<long>(x.precision()));
}

}  // namespace rootsum
