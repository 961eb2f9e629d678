#pragma once

// rootsum command-line front end. run() is the whole program; main() only
// forwards argv so tests can drive it in-process.

#include <mpfr.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rootsum/rootsum.hpp"

namespace rootsum::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConsistency = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A consistency check ran and failed; the report is still printed.
struct Mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  Precision precision = kDefaultPrecision;
  Natural budget = Natural(100000000);
  std::string format = "plain";
};

// ---- output model ---------------------------------------------------------

struct Cell {
  enum class Kind { kInt, kReal, kText, kBool, kNull };
  Kind kind = Kind::kNull;
  std::string text;
  std::string bound;  // reals only; empty when exact
};

inline std::string format_real(const Float& x, int digits) {
  if (x.is_zero()) return "0";
  const int len = mpfr_snprintf(nullptr, 0, "%.*RNg", digits, x.get());
  std::string s(static_cast<std::size_t>(len) + 1, '\0');
  mpfr_snprintf(s.data(), s.size(), "%.*RNg", digits, x.get());
  s.resize(static_cast<std::size_t>(len));
  return s;
}

inline std::string format_bound(const Float& e) {
  if (e.is_zero()) return "0";
  char buf[64];
  mpfr_snprintf(buf, sizeof buf, "%.2RUe", e.get());
  return buf;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline int digits_for(Precision P) { return std::max(6, static_cast<int>(static_cast<double>(P) * 0.30103)); }

inline Cell int_cell(const mpz_class& z) { return {Cell::Kind::kInt, z.get_str(), {}}; }
inline Cell int_cell(const Natural& n) { return int_cell(n.value()); }
inline Cell int_cell(std::uint64_t v) { return {Cell::Kind::kInt, std::to_string(v), {}}; }
inline Cell text_cell(std::string s) { return {Cell::Kind::kText, std::move(s), {}}; }
inline Cell bool_cell(bool b) { return {Cell::Kind::kBool, b ? "true" : "false", {}}; }
inline Cell rat_cell(const Rat& q) { return text_cell(q.get_str()); }
inline Cell double_cell(double v) { return {Cell::Kind::kReal, format_double(v), {}}; }
inline Cell opt_double_cell(const std::optional<double>& v) { return v ? double_cell(*v) : Cell{}; }
inline Cell real_cell(const Float& x, Precision P) { return {Cell::Kind::kReal, format_real(x, digits_for(P)), {}}; }
inline Cell real_cell(const Float& x, const Float& err, Precision P) {
  return {Cell::Kind::kReal, format_real(x, digits_for(P)), format_bound(err)};
}
inline Cell real_cell(const HPReal& x, Precision P) { return real_cell(x.value, x.error, P); }

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Doc {
  std::vector<std::pair<std::string, Cell>> fields;
  std::optional<Table> table;
  std::optional<nlohmann::ordered_json> json;  // replaces the generic JSON rendering

  void add(std::string name, Cell c) { fields.emplace_back(std::move(name), std::move(c)); }
};

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline nlohmann::ordered_json json_value(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::kInt: {
      const mpz_class z(c.text, 10);
      if (z.fits_slong_p()) return z.get_si();
      return c.text;
    }
    case Cell::Kind::kBool:
      return c.text == "true";
    case Cell::Kind::kNull:
      return nullptr;
    default:
      return c.text;
  }
}

inline void put_json(nlohmann::ordered_json& obj, const std::string& name, const Cell& c) {
  obj[name] = json_value(c);
  if (!c.bound.empty()) obj[name + "_bound"] = c.bound;
}

inline std::string plain_text(const Cell& c) {
  if (c.kind == Cell::Kind::kNull) return "-";
  if (c.bound.empty() || c.bound == "0") return c.text;
  return c.text + " ± " + c.bound;
}

inline void render(const Doc& doc, const std::string& format, std::ostream& out) {
  if (format == "json") {
    if (doc.json) {
      out << doc.json->dump(2) << "\n";
      return;
    }
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [name, c] : doc.fields) put_json(j, name, c);
    if (doc.table) {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto& row : doc.table->rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) put_json(r, doc.table->columns[i], row[i]);
        rows.push_back(std::move(r));
      }
      j["rows"] = std::move(rows);
    }
    out << j.dump(2) << "\n";
  } else if (format == "csv") {
    // A table is the record set when present; otherwise the fields form one row.
    if (doc.table) {
      for (std::size_t i = 0; i < doc.table->columns.size(); ++i) {
        out << (i ? "," : "") << csv_escape(doc.table->columns[i]);
      }
      out << "\n";
      for (const auto& row : doc.table->rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i].text);
        out << "\n";
      }
      return;
    }
    std::vector<std::string> head, vals;
    for (const auto& [name, c] : doc.fields) {
      head.push_back(name);
      vals.push_back(c.text);
      if (!c.bound.empty()) {
        head.push_back(name + "_bound");
        vals.push_back(c.bound);
      }
    }
    for (std::size_t i = 0; i < head.size(); ++i) out << (i ? "," : "") << csv_escape(head[i]);
    out << "\n";
    for (std::size_t i = 0; i < vals.size(); ++i) out << (i ? "," : "") << csv_escape(vals[i]);
    out << "\n";
  } else {
    std::size_t width = 0;
    for (const auto& f : doc.fields) width = std::max(width, f.first.size());
    for (const auto& [name, c] : doc.fields) {
      out << name << ": " << std::string(width - name.size(), ' ') << plain_text(c) << "\n";
    }
    if (doc.table) {
      if (!doc.fields.empty()) out << "\n";
      const auto& t = *doc.table;
      std::vector<std::size_t> w(t.columns.size());
      for (std::size_t i = 0; i < t.columns.size(); ++i) w[i] = t.columns[i].size();
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) w[i] = std::max(w[i], plain_text(row[i]).size());
      }
      auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (i) s += "  ";
          s += cells[i];
          if (i + 1 < cells.size()) s += std::string(w[i] - cells[i].size(), ' ');
        }
        out << s << "\n";
      };
      line(t.columns);
      for (const auto& row : t.rows) {
        std::vector<std::string> cells;
        for (const auto& c : row) cells.push_back(plain_text(c));
        line(cells);
      }
    }
  }
}

// ---- argument parsing helpers -------------------------------------------

inline Natural parse_natural(const std::string& text, const char* what) {
  try {
    return Natural::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

inline std::vector<Natural> parse_list(const std::string& text, const char* what) {
  std::vector<Natural> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_natural(item, what));
  }
  if (out.empty()) throw UsageError(std::string(what) + ": empty list");
  return out;
}

// "p/q", or a decimal such as "0.25" or "5e-3", parsed exactly.
inline Rat parse_rat(const std::string& text, const char* what) {
  try {
    if (const auto slash = text.find('/'); slash != std::string::npos) {
      const Natural num = Natural::parse(text.substr(0, slash));
      const Natural den = Natural::parse(text.substr(slash + 1));
      return make_rat(num.value(), den.value());
    }
    std::string mantissa = text;
    long exp10 = 0;
    if (const auto e = mantissa.find_first_of("eE"); e != std::string::npos) {
      std::size_t used = 0;
      const std::string exp_text = mantissa.substr(e + 1);
      exp10 = std::stol(exp_text, &used);
      if (used != exp_text.size()) throw std::invalid_argument("bad exponent");
      mantissa.resize(e);
    }
    if (const auto dot = mantissa.find('.'); dot != std::string::npos) {
      exp10 -= static_cast<long>(mantissa.size() - dot - 1);
      mantissa.erase(dot, 1);
    }
    const Natural digits = Natural::parse(mantissa);
    const mpz_class scale = ipow(mpz_class(10), static_cast<unsigned long>(std::labs(exp10)));
    return exp10 >= 0 ? Rat(digits.value() * scale) : make_rat(digits.value(), scale);
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + ": not a nonnegative rational: '" + text + "'");
  }
}

inline void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

inline std::uint64_t small_natural(const Natural& n, const char* what) {
  require(n.fits_u64(), std::string(what) + " is too large");
  return n.to_u64();
}

// ---- subcommands ----------------------------------------------------------

inline Doc cmd_root(const Config& cfg, const Natural& k, unsigned m) {
  require(!k.is_zero(), "--k must be >= 1");
  require(m >= 2, "--m must be >= 2");
  Doc d;
  d.add("k", int_cell(k));
  d.add("m", int_cell(m));
  d.add("floor_root", int_cell(integer_nth_root(k, m)));
  d.add("root", real_cell(hp_root(k, m, cfg.precision), cfg.precision));
  d.add("frac", real_cell(frac_part(k, m, cfg.precision), cfg.precision));
  return d;
}

inline Doc cmd_bernoulli(unsigned k, bool all) {
  Doc d;
  if (!all) {
    const Rat b = bernoulli(k);
    d.add("k", int_cell(k));
    d.add("num", int_cell(b.get_num()));
    d.add("den", int_cell(b.get_den()));
    return d;
  }
  Table t{{"k", "num", "den"}, {}};
  for (unsigned i = 0; i <= k; ++i) {
    const Rat b = bernoulli(i);
    t.rows.push_back({int_cell(i), int_cell(b.get_num()), int_cell(b.get_den())});
  }
  d.table = std::move(t);
  return d;
}

inline Doc cmd_faulhaber(const Config& cfg, const Natural& n, unsigned m, bool check) {
  Doc d;
  const Natural s = faulhaber_sum(n, m);
  d.add("n", int_cell(n));
  d.add("m", int_cell(m));
  d.add("sum", int_cell(s));
  if (check) {
    detail::check_budget(n, OracleConfig{cfg.budget}, "faulhaber --check");
    mpz_class direct;
    for (mpz_class k = 1; k <= n.value(); ++k) direct += ipow(k, m);
    const bool ok = direct == s.value();
    d.add("direct", int_cell(direct));
    d.add("match", bool_cell(ok));
    if (!ok) throw Mismatch("faulhaber: closed form disagrees with the direct sum");
  }
  return d;
}

inline Doc cmd_floor_sum(const Config& cfg, const Natural& n, unsigned m, bool special, bool check,
                         bool& mismatch) {
  require(!n.is_zero(), "--n must be >= 1");
  require(m >= 2, "--m must be >= 2");
  Doc d;
  const FloorSumResult r = floor_root_sum(n, m);
  d.add("n", int_cell(n));
  d.add("m", int_cell(m));
  d.add("root", int_cell(r.root));
  d.add("total", int_cell(r.total));
  if (special) {
    require(m >= 2 && m <= 5, "--special needs m in {2, 3, 4, 5}");
    const Natural alt = m == 2 ? floor_sqrt_sum(n).total : floor_root_sum_special(n, m);
    d.add("special", int_cell(alt));
    d.add("forms_agree", bool_cell(alt == r.total));
    if (!(alt == r.total)) mismatch = true;
  }
  if (check) {
    const Natural oracle = brute_floor_sum(n, m, OracleConfig{cfg.budget});
    d.add("oracle", int_cell(oracle));
    d.add("match", bool_cell(oracle == r.total));
    if (!(oracle == r.total)) mismatch = true;
  }
  return d;
}

inline Doc cmd_frac_sum(const Config& cfg, const Natural& n, unsigned m, unsigned p, const std::string& mode) {
  require(!n.is_zero(), "--n must be >= 1");
  require(m >= 2, "--m must be >= 2");
  require(p >= 1, "--p must be >= 1");
  const Precision P = cfg.precision;
  Doc d;
  d.add("n", int_cell(n));
  d.add("m", int_cell(m));
  std::optional<HPReal> oracle, predicted;
  if (mode == "oracle" || mode == "both") {
    oracle = brute_frac_sum(n, m, P, OracleConfig{cfg.budget});
    d.add("oracle", real_cell(*oracle, P));
  }
  if (mode == "expansion" || mode == "both") {
    d.add("p", int_cell(p));
    predicted = predict_frac_sum(build_power_sum_expansion(m, p), cached_zeta(m, P + 64), n, P);
    d.add("expansion", real_cell(*predicted, P));
  }
  if (oracle && predicted) {
    const Float residual = exact_sub(oracle->value, predicted->value);
    Float bound = oracle->error;
    detail::add_up(bound, predicted->error);
    const Float omitted = correction_magnitude(m, p + 1, n);
    d.add("residual", real_cell(residual, bound, P));
    d.add("first_omitted", real_cell(omitted, 24));
    d.add("within_2x_omitted", bool_cell(!(abs(residual) > omitted * Float(2, 64))));
  }
  return d;
}

inline Doc cmd_split(const Config& cfg, const Natural& n, unsigned m) {
  require(!n.is_zero(), "--n must be >= 1");
  require(m >= 2, "--m must be >= 2");
  const auto s = oracle_sums(n, m, cfg.precision, OracleConfig{cfg.budget});
  Doc d;
  d.add("n", int_cell(n));
  d.add("m", int_cell(m));
  d.add("power_sum", real_cell(s.power_sum, cfg.precision));
  d.add("frac_sum", real_cell(s.frac_sum, cfg.precision));
  d.add("floor_sum", int_cell(s.floor_sum));
  return d;
}

inline Doc cmd_zeta(const Config& cfg, unsigned m, const std::optional<Natural>& n, std::optional<unsigned> p) {
  require(m >= 2, "--m must be >= 2");
  require(n.has_value() == p.has_value(), "--n and --p go together");
  const ZetaEstimate est = n ? estimate_zeta_neg_inv(m, *n, *p, cfg.precision)
                             : ZetaCache::shared().get(m, cfg.precision);
  Doc d;
  d.add("m", int_cell(m));
  d.add("value", real_cell(est.value.value, est.error_estimate, cfg.precision));
  d.add("n_used", int_cell(est.n_used));
  d.add("p_used", int_cell(est.p_used));
  return d;
}

inline Doc cmd_expansion(const Config& cfg, unsigned m, unsigned p, bool paperform,
                         const std::optional<Natural>& eval_at) {
  require(m >= 2, "--m must be >= 2");
  require(p >= 1, "--p must be >= 1");
  require(!paperform || m == 2, "--paperform needs m = 2");
  const Expansion e = paperform ? build_sqrt_expansion_paperform(p) : build_power_sum_expansion(m, p);
  Doc d;
  d.add("m", int_cell(m));
  d.add("p", int_cell(p));
  d.add("zeta_arg", rat_cell(e.zeta_arg));
  Table t{{"num", "den", "exp_num", "exp_den"}, {}};
  for (const auto& term : e.all_terms()) {
    t.rows.push_back({int_cell(term.coeff.get_num()), int_cell(term.coeff.get_den()), int_cell(term.exponent.get_num()),
                      int_cell(term.exponent.get_den())});
  }
  d.table = std::move(t);
  nlohmann::ordered_json j = to_json(e);
  if (eval_at) {
    require(!eval_at->is_zero(), "--eval must be >= 1");
    const HPReal v = eval_expansion(e, cached_zeta(m, cfg.precision + 64), *eval_at, cfg.precision);
    const Cell c = real_cell(v, cfg.precision);
    d.add("n", int_cell(*eval_at));
    d.add("power_sum_estimate", c);
    j["n"] = json_value(int_cell(*eval_at));
    put_json(j, "power_sum_estimate", c);
  }
  d.json = std::move(j);
  return d;
}

inline Doc cmd_binom(const Rat& alpha, unsigned j) {
  Doc d;
  d.add("alpha", rat_cell(alpha));
  d.add("j", int_cell(j));
  d.add("value", rat_cell(binom_rational(alpha, j)));
  return d;
}

inline Doc cmd_residuals(const Config& cfg, unsigned m, unsigned p, const std::vector<Natural>& ns,
                         const std::optional<Natural>& fit_lo, const std::optional<Natural>& fit_hi) {
  const ResidualTable t = residual_table(m, p, ns, cfg.precision, OracleConfig{cfg.budget});
  const auto fit = fit_lo || fit_hi ? fit_slope(t.rows, fit_lo.value_or(Natural(1)), fit_hi.value_or(ns.back()))
                                    : fit_slope_top_decade(t.rows);
  Doc d;
  d.add("m", int_cell(m));
  d.add("p", int_cell(p));
  d.add("precision", int_cell(cfg.precision));
  d.add("fitted_slope", opt_double_cell(fit));
  d.add("expected_slope", double_cell(expected_residual_slope(m, p)));
  d.add("first_omitted_at_max", real_cell(t.first_omitted_at_max, 24));
  Table tab{{"n", "reference", "predicted", "residual", "slope", "flag"}, {}};
  for (const auto& r : t.rows) {
    tab.rows.push_back({int_cell(r.n), real_cell(r.reference, cfg.precision), real_cell(r.predicted, cfg.precision),
                        real_cell(r.residual, r.residual_bound, cfg.precision), opt_double_cell(r.local_slope),
                        text_cell(r.precision_limited ? "precision-limited" : "ok")});
  }
  d.table = std::move(tab);
  return d;
}

inline Doc cmd_equidist(const Config& cfg, unsigned m, const Natural& n, unsigned bins) {
  require(m >= 2, "--m must be >= 2");
  require(!n.is_zero(), "--n must be >= 1");
  require(bins >= 1, "--bins must be >= 1");
  const auto rep = equidist_stats(m, n, bins, cfg.precision, OracleConfig{cfg.budget});
  Doc d;
  d.add("m", int_cell(m));
  d.add("n", int_cell(n));
  d.add("bins", int_cell(bins));
  d.add("max_deviation", rat_cell(rep.max_deviation));
  d.add("max_deviation_decimal", real_cell(Float(rep.max_deviation, 64), 24));
  d.add("mean", real_cell(rep.mean, cfg.precision));
  Table t{{"bin", "lo", "hi", "count"}, {}};
  for (unsigned b = 0; b < bins; ++b) {
    t.rows.push_back({int_cell(b), rat_cell(make_rat(b, bins)), rat_cell(make_rat(b + 1, bins)), int_cell(rep.counts[b])});
  }
  d.table = std::move(t);
  return d;
}

inline Doc cmd_extrema(const Config& cfg, std::uint64_t lo, std::uint64_t hi) {
  detail::check_budget(Natural::from_u64(hi), OracleConfig{cfg.budget}, "extrema");
  const auto rep = extrema_scan(lo, hi, cfg.precision);
  Doc d;
  d.add("lo", int_cell(lo));
  d.add("hi", int_cell(hi));
  d.add("local_minima", int_cell(rep.local_minima.size()));
  d.add("local_maxima", int_cell(rep.local_maxima.size()));
  d.add("positive", int_cell(rep.positive.size()));
  d.add("ambiguous", int_cell(rep.ambiguous));
  d.add("minima_at_j2_3j_1", bool_cell(rep.minima_at_expected));
  d.add("positive_on_j2_2j", bool_cell(rep.positive_at_expected));
  d.add("block_minima_decreasing", bool_cell(rep.block_minima_decreasing));
  d.add("running_max", double_cell(rep.running_max));
  d.add("running_max_at", int_cell(rep.running_max_at));
  d.add("limsup_target", double_cell(rep.limsup_target));
  Table t{{"block", "location", "value"}, {}};
  for (const auto& b : rep.block_minima) t.rows.push_back({int_cell(b.block), int_cell(b.location), double_cell(b.value)});
  d.table = std::move(t);
  return d;
}

inline Doc cmd_y_seq(const Config& cfg, std::uint64_t lo, std::uint64_t hi) {
  require(lo >= 1 && hi >= lo, "need 1 <= --lo <= --hi");
  detail::check_budget(Natural::from_u64(hi), OracleConfig{cfg.budget}, "y-seq");
  Table t{{"n", "y"}, {}};
  for_each_y(lo, hi, cfg.precision,
             [&](const YSeqPoint& pt) { t.rows.push_back({int_cell(pt.n), real_cell(pt.y, cfg.precision)}); });
  Doc d;
  d.table = std::move(t);
  return d;
}

inline Doc cmd_xsq(const Config& cfg, const Natural& n_max) {
  const auto rep = xsq_constant_check(n_max, cfg.precision, OracleConfig{cfg.budget});
  Doc d;
  d.add("zeta", real_cell(rep.zeta, cfg.precision));
  d.add("distance_decreasing", bool_cell(rep.distance_decreasing));
  Table t{{"n", "value", "distance"}, {}};
  for (const auto& r : rep.rows) {
    t.rows.push_back({int_cell(r.n), real_cell(r.value, cfg.precision), real_cell(r.distance, 24)});
  }
  d.table = std::move(t);
  return d;
}

inline Doc cmd_count_below(const Config& cfg, const Natural& side, const Rat& x) {
  detail::check_budget(Natural(mpz_class(side.value() * side.value())), OracleConfig{cfg.budget}, "count-below");
  const auto r = count_frac_below(side, x);
  Doc d;
  d.add("n", int_cell(r.side));
  d.add("x", rat_cell(r.x));
  d.add("formula", int_cell(r.formula_value));
  d.add("direct", int_cell(r.direct_count));
  d.add("agrees", bool_cell(r.agrees));
  return d;
}

// ---- driver ---------------------------------------------------------------

// Prints the failure and maps it to an exit code.
inline int report_error(const std::exception_ptr& ep, std::ostream& err) {
  try {
    std::rethrow_exception(ep);
  } catch (const Mismatch& e) {
    err << "error: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const PrecisionError& e) {
    err << "error: " << e.what() << "; rerun with --precision " << e.required_bits() << "\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << " (raise --budget)\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and high-precision summatory functions of floor and fractional parts of k^(1/m)",
               "rootsum"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  std::optional<long> precision_opt;
  std::string budget_text = "1e8";
  app.add_option("--precision", precision_opt, "working precision in bits (>= 64; env ROOTSUM_PRECISION)");
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"plain", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--budget", budget_text, "largest n a brute-force oracle may scan")->capture_default_str();

  std::string n_text, k_text, ns_text, x_text, alpha_text, eval_text, fit_lo_text, fit_hi_text, side_text;
  std::string mode = "both";
  unsigned m = 2, p = 1, bins = 10, j = 0, bk = 0;
  std::optional<unsigned> p_opt;
  bool special = false, check = false, paperform = false, all = false;
  std::uint64_t lo = 1, hi = 1;

  auto* root = app.add_subcommand("root", "k^(1/m), its floor and fractional part");
  root->add_option("--k", k_text, "radicand")->required();
  root->add_option("--m", m, "root order")->required();

  auto* bern = app.add_subcommand("bernoulli", "Bernoulli number B_k (B_1 = -1/2)");
  bern->add_option("--k", bk, "index")->required();
  bern->add_flag("--all", all, "list B_0 .. B_k");

  auto* faul = app.add_subcommand("faulhaber", "sum_{k<=n} k^m by Faulhaber's formula");
  faul->add_option("--n", n_text)->required();
  faul->add_option("--m", m)->required();
  faul->add_flag("--check", check, "compare with the direct sum");

  auto* floor = app.add_subcommand("floor-sum", "sum_{k<=n} floor(k^(1/m)) in closed form");
  floor->add_option("--n", n_text)->required();
  floor->add_option("--m", m)->required();
  floor->add_flag("--special", special, "also evaluate the dedicated closed form for m <= 5");
  floor->add_flag("--check", check, "compare with the brute-force oracle");

  auto* frac = app.add_subcommand("frac-sum", "sum_{k<=n} {k^(1/m)} by oracle and expansion");
  frac->add_option("--n", n_text)->required();
  frac->add_option("--m", m)->required();
  frac->add_option("--p", p, "number of correction terms")->capture_default_str();
  frac->add_option("--mode", mode)->check(CLI::IsMember({"oracle", "expansion", "both"}))->capture_default_str();

  auto* split = app.add_subcommand("split", "power sum, fractional sum and floor sum with the identity checked");
  split->add_option("--n", n_text)->required();
  split->add_option("--m", m)->required();

  auto* zeta = app.add_subcommand("zeta", "zeta(-1/m) by the corrected tail method");
  zeta->add_option("--m", m)->required();
  zeta->add_option("--n", n_text, "sum length (default: chosen for the precision)");
  zeta->add_option("--p", p_opt, "correction terms removed");

  auto* expn = app.add_subcommand("expansion", "coefficients of the power-sum expansion");
  expn->add_option("--m", m)->required();
  expn->add_option("--p", p)->required();
  expn->add_flag("--paperform", paperform, "m = 2 coefficients from the dedicated square-root formula");
  expn->add_option("--eval", eval_text, "evaluate the expansion at this n");

  auto* binom = app.add_subcommand("binom", "generalized binomial coefficient C(alpha, j)");
  binom->add_option("--alpha", alpha_text, "p/q or decimal (may start with -)")->required();
  binom->add_option("--j", j)->required();

  auto* resid = app.add_subcommand("residuals", "oracle minus expansion over a list of n");
  resid->add_option("--m", m)->required();
  resid->add_option("--p", p)->required();
  resid->add_option("--ns", ns_text, "comma-separated, increasing; 1e5 style accepted")->required();
  resid->add_option("--fit-lo", fit_lo_text, "slope fit lower end (default: top decade)");
  resid->add_option("--fit-hi", fit_hi_text, "slope fit upper end");

  auto* equi = app.add_subcommand("equidist", "bin counts of {k^(1/m)}");
  equi->add_option("--m", m)->required();
  equi->add_option("--n", n_text)->required();
  equi->add_option("--bins", bins)->capture_default_str();

  auto* extr = app.add_subcommand("extrema", "extrema and sign structure of y_n = x_n - n/2 + sqrt(n)/3");
  extr->add_option("--lo", lo)->required();
  extr->add_option("--hi", hi)->required();

  auto* yseq = app.add_subcommand("y-seq", "y_n for n in [lo, hi]");
  yseq->add_option("--lo", lo)->required();
  yseq->add_option("--hi", hi)->required();

  auto* xsq = app.add_subcommand("xsq-check", "x_{n^2} - n^2/2 + n/3 against zeta(-1/2)");
  xsq->add_option("--nmax", n_text)->required();

  auto* below = app.add_subcommand("count-below", "count k <= n^2 with {sqrt k} in (0, x), two ways");
  below->add_option("--n", side_text)->required();
  below->add_option("--x", x_text, "p/q or decimal in (0, 1]")->required();

  std::vector<std::string> argv_store{"rootsum"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (precision_opt) {
      cfg.precision = *precision_opt;
    } else if (const char* env = std::getenv("ROOTSUM_PRECISION"); env && *env) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      require(*end == '\0', std::string("ROOTSUM_PRECISION is not an integer: '") + env + "'");
      cfg.precision = v;
    }
    require(cfg.precision >= 64, "precision must be >= 64 bits");
    require(cfg.precision <= 1 << 20, "precision must be <= 2^20 bits");
    cfg.budget = parse_natural(budget_text, "--budget");

    auto maybe = [](const std::string& s, const char* what) -> std::optional<Natural> {
      if (s.empty()) return std::nullopt;
      return parse_natural(s, what);
    };

    Doc doc;
    bool mismatch = false;
    if (*root) {
      doc = cmd_root(cfg, parse_natural(k_text, "--k"), m);
    } else if (*bern) {
      doc = cmd_bernoulli(bk, all);
    } else if (*faul) {
      doc = cmd_faulhaber(cfg, parse_natural(n_text, "--n"), m, check);
    } else if (*floor) {
      doc = cmd_floor_sum(cfg, parse_natural(n_text, "--n"), m, special, check, mismatch);
    } else if (*frac) {
      doc = cmd_frac_sum(cfg, parse_natural(n_text, "--n"), m, p, mode);
    } else if (*split) {
      doc = cmd_split(cfg, parse_natural(n_text, "--n"), m);
    } else if (*zeta) {
      doc = cmd_zeta(cfg, m, maybe(n_text, "--n"), p_opt);
    } else if (*expn) {
      doc = cmd_expansion(cfg, m, p, paperform, maybe(eval_text, "--eval"));
    } else if (*binom) {
      const bool neg = !alpha_text.empty() && alpha_text[0] == '-';
      Rat alpha = parse_rat(neg ? alpha_text.substr(1) : alpha_text, "--alpha");
      if (neg) alpha = -alpha;
      doc = cmd_binom(alpha, j);
    } else if (*resid) {
      doc = cmd_residuals(cfg, m, p, parse_list(ns_text, "--ns"), maybe(fit_lo_text, "--fit-lo"),
                          maybe(fit_hi_text, "--fit-hi"));
    } else if (*equi) {
      doc = cmd_equidist(cfg, m, parse_natural(n_text, "--n"), bins);
    } else if (*extr) {
      doc = cmd_extrema(cfg, lo, hi);
    } else if (*yseq) {
      doc = cmd_y_seq(cfg, lo, hi);
    } else if (*xsq) {
      doc = cmd_xsq(cfg, parse_natural(n_text, "--nmax"));
    } else if (*below) {
      doc = cmd_count_below(cfg, parse_natural(side_text, "--n"), parse_rat(x_text, "--x"));
    }
    render(doc, cfg.format, out);
    if (mismatch) {
      err << "error: consistency check failed\n";
      return kExitConsistency;
    }
    return kExitOk;
  } catch (...) {
    return report_error(std::current_exception(), err);
  }
}

}  // namespace rootsum::cli
