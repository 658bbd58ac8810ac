#ifndef HALLWALK_RATIONAL_HPP
#define HALLWALK_RATIONAL_HPP

// Exact integer and rational arithmetic, thin aliases over GMP plus the
// handful of helpers the rest of the library needs (integer powers of
// rationals, parsing and printing in the "num/den" wire format).

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hallwalk {

using ZZ = mpz_class;
using QQ = mpq_class;

inline ZZ z_pow(const ZZ& base, unsigned long e) {
  ZZ r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// base^e for possibly negative e; base must be nonzero when e < 0.
inline QQ q_pow(const QQ& base, long e) {
  if (e == 0) return QQ(1);
  const bool neg = e < 0;
  const unsigned long a = neg ? static_cast<unsigned long>(-(e + 1)) + 1ul
                              : static_cast<unsigned long>(e);
  QQ b = base;
  if (neg) {
    if (b == 0) throw std::domain_error("q_pow: zero base with negative exponent");
    b = QQ(1) / b;
  }
  QQ r;
  mpz_pow_ui(r.get_num_mpz_t(), b.get_num_mpz_t(), a);
  mpz_pow_ui(r.get_den_mpz_t(), b.get_den_mpz_t(), a);
  r.canonicalize();
  return r;
}

// Canonical string form: "7", "-2/3". Always in lowest terms.
inline std::string rat_str(const QQ& x) {
  QQ c = x;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

// Accepts "a", "a/b" and plain decimals like "0.5" or "-1.25",
// all parsed exactly.
inline QQ parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("parse_rat: empty string");
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos)
      throw std::invalid_argument("parse_rat: mixed decimal and fraction: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const size_t frac_len = s.size() - dot - 1;
    if (frac_len == 0 || digits.empty())
      throw std::invalid_argument("parse_rat: malformed decimal: " + s);
    // mpz's default string constructor auto-detects the base, which would
    // read a leading zero ("025") as octal. Force base 10.
    QQ r(ZZ(digits, 10), z_pow(ZZ(10), frac_len));
    r.canonicalize();
    return r;
  }
  QQ r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("parse_rat: malformed rational: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("parse_rat: zero denominator: " + s);
  r.canonicalize();
  return r;
}

// mpq_class(n, d) does not reduce to lowest terms on its own.
inline QQ make_q(const ZZ& num, const ZZ& den) {
  if (den == 0) throw std::domain_error("make_q: zero denominator");
  QQ r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const QQ& x) {
  QQ c = x;
  c.canonicalize();
  return c.get_den() == 1;
}

}  // namespace hallwalk

#endif
