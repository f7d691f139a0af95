#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace mcm {

// Exact rational scalar. All construction geometry and integration run on
// this type; conversion to double happens only at export boundaries.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline double to_double(const Rat& x) { return x.get_d(); }

// floor(x) as an integer-valued rational helper; exact.
inline long rat_floor_long(const Rat& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  if (!q.fits_slong_p()) throw std::overflow_error("rat_floor_long: out of range");
  return q.get_si();
}

inline bool is_integer(const Rat& x) { return x.get_den() == 1; }

// Parses "p/q", "-p/q", plain integers, and decimal literals ("0.01" ->
// 1/100) without any floating-point round trip.
inline Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rat r;
    if (r.set_str(text, 10) != 0) throw std::invalid_argument("parse_rational: bad fraction '" + text + "'");
    if (r.get_den() == 0) throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rat r;
    if (r.set_str(text, 10) != 0) throw std::invalid_argument("parse_rational: bad integer '" + text + "'");
    return r;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const size_t frac_digits = text.size() - dot - 1;
  if (frac_digits == 0 || digits.empty()) throw std::invalid_argument("parse_rational: bad decimal '" + text + "'");
  mpz_class num;
  if (num.set_str(digits, 10) != 0) throw std::invalid_argument("parse_rational: bad decimal '" + text + "'");
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits);
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline std::string fraction_string(const Rat& x) { return x.get_str(); }

// Decimal rendering with 15 significant digits (export convention).
std::string decimal_string(const Rat& x);

}  // namespace mcm
