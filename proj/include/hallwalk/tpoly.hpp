#ifndef HALLWALK_TPOLY_HPP
#define HALLWALK_TPOLY_HPP

// Polynomials in one variable t with bigint coefficients, dense ascending
// storage. These carry the deformation parameter of the spherical functions:
// expansion coefficients, Poincare series, structure constants.

#include <cstddef>
#include <vector>

#include "hallwalk/rational.hpp"

namespace hallwalk {

class TPoly {
 public:
  TPoly() = default;
  TPoly(long c) { if (c != 0) c_ = {ZZ(c)}; }          // NOLINT(runtime/explicit)
  TPoly(const ZZ& c) { if (c != 0) c_ = {c}; }         // NOLINT(runtime/explicit)
  explicit TPoly(std::vector<ZZ> coeffs) : c_(std::move(coeffs)) { trim(); }

  static TPoly t() { return TPoly(std::vector<ZZ>{ZZ(0), ZZ(1)}); }
  static TPoly monomial(std::size_t deg, const ZZ& c = ZZ(1)) {
    std::vector<ZZ> v(deg + 1, ZZ(0));
    v[deg] = c;
    return TPoly(std::move(v));
  }

  bool is_zero() const { return c_.empty(); }
  // degree of the zero polynomial reported as -1
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<ZZ>& coeffs() const { return c_; }
  ZZ coeff(std::size_t k) const { return k < c_.size() ? c_[k] : ZZ(0); }

  TPoly& operator+=(const TPoly& o);
  TPoly& operator-=(const TPoly& o);
  friend TPoly operator+(TPoly a, const TPoly& b) { a += b; return a; }
  friend TPoly operator-(TPoly a, const TPoly& b) { a -= b; return a; }
  TPoly operator-() const;
  friend TPoly operator*(const TPoly& a, const TPoly& b);
  friend bool operator==(const TPoly& a, const TPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const TPoly& a, const TPoly& b) { return !(a == b); }

  QQ eval(const QQ& t0) const;

  // Exact quotient; throws std::domain_error if the division leaves a
  // remainder (callers rely on divisibility as a structural invariant).
  TPoly divexact(const TPoly& den) const;

  std::string str() const;  // e.g. "1 - 2*t + t^3"

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<ZZ> c_;
};

}  // namespace hallwalk

#endif
