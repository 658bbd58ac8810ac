#include "hallwalk/tpoly.hpp"

#include <stdexcept>

namespace hallwalk {

TPoly& TPoly::operator+=(const TPoly& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), ZZ(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

TPoly& TPoly::operator-=(const TPoly& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), ZZ(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

TPoly TPoly::operator-() const {
  TPoly r(*this);
  for (auto& v : r.c_) v = -v;
  return r;
}

TPoly operator*(const TPoly& a, const TPoly& b) {
  if (a.is_zero() || b.is_zero()) return TPoly();
  std::vector<ZZ> r(a.c_.size() + b.c_.size() - 1, ZZ(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return TPoly(std::move(r));
}

QQ TPoly::eval(const QQ& t0) const {
  QQ acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t0 + QQ(*it);
  return acc;
}

TPoly TPoly::divexact(const TPoly& den) const {
  if (den.is_zero()) throw std::domain_error("TPoly::divexact: division by zero");
  if (is_zero()) return TPoly();
  if (degree() < den.degree())
    throw std::domain_error("TPoly::divexact: remainder nonzero");
  std::vector<ZZ> rem = c_;
  const ZZ& lead = den.c_.back();
  std::vector<ZZ> quot(c_.size() - den.c_.size() + 1, ZZ(0));
  for (long k = static_cast<long>(quot.size()) - 1; k >= 0; --k) {
    ZZ& top = rem[k + den.degree()];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lead.get_mpz_t()))
      throw std::domain_error("TPoly::divexact: remainder nonzero");
    ZZ q = top / lead;
    quot[k] = q;
    for (std::size_t i = 0; i < den.c_.size(); ++i)
      rem[k + i] -= q * den.c_[i];
  }
  for (const auto& v : rem)
    if (v != 0) throw std::domain_error("TPoly::divexact: remainder nonzero");
  return TPoly(std::move(quot));
}

std::string TPoly::str() const {
  if (is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    ZZ a = c_[i];
    if (s.empty()) {
      if (a < 0) { s += "-"; a = -a; }
    } else {
      s += (a < 0) ? " - " : " + ";
      if (a < 0) a = -a;
    }
    const bool unit = (a == 1);
    if (i == 0) {
      s += a.get_str();
    } else {
      if (!unit) s += a.get_str() + "*";
      s += (i == 1) ? "t" : "t^" + std::to_string(i);
    }
  }
  return s;
}

}  // namespace hallwalk
