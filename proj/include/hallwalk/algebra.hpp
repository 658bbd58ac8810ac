#ifndef HALLWALK_ALGEBRA_HPP
#define HALLWALK_ALGEBRA_HPP

// Sparse elements of the coweight group algebra: finite sums of monomials
// e^nu with exact coefficients. The coefficient ring is a template
// parameter; TPoly carries the full t-dependence, QQ is used once t has
// been specialized to a fixed rational. Both rings share all the algebra
// below, including the exact division by (1 - e^{-beta}) factors.

#include <map>
#include <string>
#include <utility>

#include "hallwalk/coweight.hpp"
#include "hallwalk/errors.hpp"
#include "hallwalk/rational.hpp"
#include "hallwalk/root_system.hpp"
#include "hallwalk/tpoly.hpp"

namespace hallwalk {

inline bool coeff_is_zero(const TPoly& c) { return c.is_zero(); }
inline bool coeff_is_zero(const QQ& c) { return c == 0; }

template <class R>
class Element {
 public:
  using Map = std::map<Coweight, R, GradedLess>;

  explicit Element(std::size_t rank) : rank_(rank) {}

  static Element monomial(const Coweight& nu, R c) {
    Element e(nu.size());
    e.add_term(nu, std::move(c));
    return e;
  }

  std::size_t rank() const { return rank_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Map& terms() const { return terms_; }

  R coeff(const Coweight& nu) const {
    auto it = terms_.find(nu);
    return it == terms_.end() ? R(0) : it->second;
  }

  void add_term(const Coweight& nu, const R& c) {
    if (coeff_is_zero(c)) return;
    if (nu.size() != rank_) throw std::invalid_argument("Element: rank mismatch");
    auto [it, fresh] = terms_.emplace(nu, c);
    if (!fresh) {
      it->second += c;
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  Element& operator+=(const Element& o) {
    check_rank(o);
    for (const auto& [nu, c] : o.terms_) add_term(nu, c);
    return *this;
  }

  Element& operator-=(const Element& o) {
    check_rank(o);
    for (const auto& [nu, c] : o.terms_) add_term(nu, R(0) - c);
    return *this;
  }

  friend Element operator+(Element a, const Element& b) { a += b; return a; }
  friend Element operator-(Element a, const Element& b) { a -= b; return a; }

  friend Element operator*(const Element& a, const Element& b) {
    a.check_rank(b);
    Element r(a.rank_);
    for (const auto& [nu1, c1] : a.terms_)
      for (const auto& [nu2, c2] : b.terms_) r.add_term(cw_add(nu1, nu2), c1 * c2);
    return r;
  }

  // this -= c * e^shift * o, the workhorse of peeling and division
  void sub_scaled_shifted(const R& c, const Coweight& shift, const Element& o) {
    check_rank(o);
    for (const auto& [nu, oc] : o.terms_) add_term(cw_add(nu, shift), R(0) - c * oc);
  }

  void scale(const R& c) {
    if (coeff_is_zero(c)) {
      terms_.clear();
      return;
    }
    for (auto& [nu, v] : terms_) v = v * c;
  }

  // Largest support point in the graded (height, then lex) order.
  const std::pair<const Coweight, R>& leading() const {
    if (terms_.empty()) throw std::logic_error("Element::leading on zero element");
    return *terms_.rbegin();
  }

  std::int64_t min_height() const {
    if (terms_.empty()) throw std::logic_error("Element::min_height on zero element");
    std::int64_t h = height(terms_.begin()->first);  // graded order: front is lowest
    return h;
  }

  Element weyl_image(const RootSystem& rs, const WeylElement& w) const {
    Element r(rank_);
    for (const auto& [nu, c] : terms_) r.terms_.emplace(rs.apply(w, nu), c);
    return r;
  }

  friend bool operator==(const Element& a, const Element& b) {
    return a.rank_ == b.rank_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

 private:
  void check_rank(const Element& o) const {
    if (rank_ != o.rank_) throw std::invalid_argument("Element: rank mismatch");
  }
  std::size_t rank_;
  Map terms_;
};

// Exact quotient a / (1 - e^{-beta}) for a coweight beta of positive
// height. Leading-term elimination in the graded order: the divisor's
// leading monomial is e^0, so each step cancels the current leading
// monomial mu and reintroduces mu - beta. When the division is exact every
// quotient monomial has height at least min_height(a) + height(beta);
// crossing below that line proves non-divisibility and stops the loop.
template <class R>
Element<R> exact_divide(const Element<R>& a, const Coweight& beta) {
  const std::int64_t hbeta = height(beta);
  if (hbeta <= 0)
    throw InvariantViolation("exact_divide: divisor coweight must have positive height");
  Element<R> quot(a.rank());
  if (a.is_zero()) return quot;
  const std::int64_t floor = a.min_height() + hbeta;
  Element<R> rem = a;
  while (!rem.is_zero()) {
    const auto& [mu, c] = rem.leading();
    if (height(mu) < floor)
      throw InvariantViolation("exact_divide: not divisible, residual monomial at " +
                               cw_str(mu));
    const Coweight mu_copy = mu;
    const R c_copy = c;
    quot.add_term(mu_copy, c_copy);
    // rem -= c * (e^mu - e^{mu-beta})
    rem.add_term(mu_copy, R(0) - c_copy);
    rem.add_term(cw_sub(mu_copy, beta), c_copy);
  }
  return quot;
}

// Multiplicative coweight specializations: theta_0 sends every e^nu to 1,
// theta_q sends e^nu to q^height(nu).
class Specialization {
 public:
  static Specialization theta0() { return Specialization(QQ(0), true); }
  static Specialization theta_q(const QQ& q) { return Specialization(q, false); }

  QQ value(const Coweight& nu) const {
    if (trivial_) return QQ(1);
    return q_pow(q_, height(nu));
  }
  bool is_theta0() const { return trivial_; }
  const QQ& q() const { return q_; }

 private:
  Specialization(QQ q, bool trivial) : q_(std::move(q)), trivial_(trivial) {}
  QQ q_;
  bool trivial_;
};

inline QQ specialize(const Element<TPoly>& a, const Specialization& s, const QQ& t_value) {
  QQ acc(0);
  for (const auto& [nu, c] : a.terms()) acc += c.eval(t_value) * s.value(nu);
  return acc;
}

inline QQ specialize(const Element<QQ>& a, const Specialization& s) {
  QQ acc(0);
  for (const auto& [nu, c] : a.terms()) acc += c * s.value(nu);
  return acc;
}

}  // namespace hallwalk

#endif
