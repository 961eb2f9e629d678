#pragma once

// Exact coefficient lists for the Euler-Maclaurin expansion of
// sum_{k=1..n} k^(1/m):
//
//   m/(m+1) n^(1+1/m) + n^(1/m)/2 + zeta(-1/m)
//     + sum_{k=1..p} C(1/m, 2k-1) (2k-1)! B_2k/(2k)! n^(1/m-(2k-1)) + ...
//
// Everything here is an exact rational; conversion to reals happens in hp.hpp.

#include <gmpxx.h>

#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rootsum/exact.hpp"

namespace rootsum {

// k!, memoized.
inline mpz_class factorial(unsigned k) {
  static std::mutex mu;
  static std::vector<mpz_class> table{mpz_class(1)};
  std::lock_guard lock(mu);
  while (table.size() <= k) table.push_back(table.back() * static_cast<unsigned long>(table.size()));
  return table[k];
}

// Generalized binomial coefficient alpha (alpha-1) ... (alpha-j+1) / j!.
inline Rat binom_rational(const Rat& alpha, unsigned j) {
  Rat out(1);
  for (unsigned k = 1; k <= j; ++k) {
    out *= (alpha - Rat(k - 1)) / Rat(k);
  }
  out.canonicalize();
  return out;
}

struct ExpansionTerm {
  Rat coeff;
  Rat exponent;  // power of n

  friend bool operator==(const ExpansionTerm&, const ExpansionTerm&) = default;
};

struct Expansion {
  unsigned m = 2;
  unsigned p = 0;
  std::vector<ExpansionTerm> leading_terms;
  // The additive constant is zeta(zeta_arg); zeta_arg = -1/m.
  Rat zeta_arg;
  std::vector<ExpansionTerm> correction_terms;

  // leading + corrections, in strictly decreasing exponent order.
  std::vector<ExpansionTerm> all_terms() const {
    std::vector<ExpansionTerm> out = leading_terms;
    out.insert(out.end(), correction_terms.begin(), correction_terms.end());
    return out;
  }

  friend bool operator==(const Expansion&, const Expansion&) = default;
};

// Coefficient B_2k/(2k)! f^(2k-1)(n) for f(x) = x^(1/m), split into the
// rational factor and the power of n.
inline ExpansionTerm em_correction_coeff(unsigned m, unsigned k) {
  if (m < 1 || k < 1) throw std::invalid_argument("em_correction_coeff: m, k must be >= 1");
  const Rat inv_m(1, m);
  Rat coeff = binom_rational(inv_m, 2 * k - 1) * Rat(factorial(2 * k - 1)) * bernoulli(2 * k) /
              Rat(factorial(2 * k));
  coeff.canonicalize();
  Rat exponent = inv_m - Rat(2 * k - 1);
  exponent.canonicalize();
  return {coeff, exponent};
}

// The square-root coefficient in its dedicated closed form
//   B_2k (4k-1)! / (4^(2k-1) (2k-1)! (2k)! (4k-1)(4k-3)).
inline Rat em_coeff_sqrt_paperform(unsigned k) {
  if (k < 1) throw std::invalid_argument("em_coeff_sqrt_paperform: k must be >= 1");
  const mpz_class den = ipow(mpz_class(4), 2 * k - 1) * factorial(2 * k - 1) * factorial(2 * k) *
                        mpz_class(4 * k - 1) * mpz_class(4 * k - 3);
  Rat out = bernoulli(2 * k) * make_rat(factorial(4 * k - 1), den);
  out.canonicalize();
  return out;
}

inline Expansion build_power_sum_expansion(unsigned m, unsigned p) {
  if (m < 2) throw std::invalid_argument("build_power_sum_expansion: m must be >= 2");
  Expansion e;
  e.m = m;
  e.p = p;
  const Rat inv_m(1, m);
  e.leading_terms.push_back({make_rat(m, m + 1), Rat(1) + inv_m});
  e.leading_terms.push_back({Rat(1, 2), inv_m});
  e.zeta_arg = -inv_m;
  for (unsigned k = 1; k <= p; ++k) e.correction_terms.push_back(em_correction_coeff(m, k));
  return e;
}

// Square-root expansion assembled from the dedicated coefficient formula
// instead of the generic one.
inline Expansion build_sqrt_expansion_paperform(unsigned p) {
  Expansion e;
  e.m = 2;
  e.p = p;
  e.leading_terms.push_back({Rat(2, 3), Rat(3, 2)});
  e.leading_terms.push_back({Rat(1, 2), Rat(1, 2)});
  e.zeta_arg = Rat(-1, 2);
  for (unsigned k = 1; k <= p; ++k) {
    e.correction_terms.push_back({em_coeff_sqrt_paperform(k), make_rat(1, 2) - Rat(2 * k - 1)});
  }
  return e;
}

// ---- JSON ---------------------------------------------------------------
//
// {"m":2,"p":1,"terms":[{"num":2,"den":3,"exp_num":3,"exp_den":2},...],
//  "zeta_arg_num":-1,"zeta_arg_den":2}
//
// Integers that fit in int64 are written as JSON numbers, larger ones as
// decimal strings. The reader accepts either.

namespace detail {

inline nlohmann::ordered_json big_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline mpz_class big_from_json(const nlohmann::ordered_json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) return mpz_class(j.get<std::string>(), 10);
  throw std::invalid_argument("expected integer or decimal string in expansion JSON");
}

inline nlohmann::ordered_json term_to_json(const ExpansionTerm& t) {
  nlohmann::ordered_json j;
  j["num"] = big_to_json(t.coeff.get_num());
  j["den"] = big_to_json(t.coeff.get_den());
  j["exp_num"] = big_to_json(t.exponent.get_num());
  j["exp_den"] = big_to_json(t.exponent.get_den());
  return j;
}

inline ExpansionTerm term_from_json(const nlohmann::ordered_json& j) {
  return {make_rat(big_from_json(j.at("num")), big_from_json(j.at("den"))),
          make_rat(big_from_json(j.at("exp_num")), big_from_json(j.at("exp_den")))};
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const Expansion& e) {
  nlohmann::ordered_json j;
  j["m"] = e.m;
  j["p"] = e.p;
  auto terms = nlohmann::ordered_json::array();
  for (const auto& t : e.all_terms()) terms.push_back(detail::term_to_json(t));
  j["terms"] = std::move(terms);
  j["zeta_arg_num"] = detail::big_to_json(e.zeta_arg.get_num());
  j["zeta_arg_den"] = detail::big_to_json(e.zeta_arg.get_den());
  return j;
}

// The first two terms are the leading pair; the rest are corrections.
inline Expansion expansion_from_json(const nlohmann::ordered_json& j) {
  Expansion e;
  e.m = j.at("m").get<unsigned>();
  e.p = j.at("p").get<unsigned>();
  const auto& terms = j.at("terms");
  if (terms.size() != 2 + e.p) throw std::invalid_argument("expansion JSON: expected p + 2 terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    auto t = detail::term_from_json(terms[i]);
    (i < 2 ? e.leading_terms : e.correction_terms).push_back(std::move(t));
  }
  e.zeta_arg = make_rat(detail::big_from_json(j.at("zeta_arg_num")),
                        detail::big_from_json(j.at("zeta_arg_den")));
  return e;
}

}  // namespace rootsum
