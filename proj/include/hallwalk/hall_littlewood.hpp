#ifndef HALLWALK_HALL_LITTLEWOOD_HPP
#define HALLWALK_HALL_LITTLEWOOD_HPP

// Hall-Littlewood expansions over an arbitrary finite root system.
//
// P_lambda(t) is computed entirely in exact Laurent-polynomial arithmetic:
//
//   N = sum over w in W of  sign(w) e^{w(rho-check) - rho-check}
//                           * w( e^lambda * prod_{beta>0} (1 - t e^{-beta}) )
//
// followed by one exact division per positive coroot beta (the divisor is
// 1 - e^{-beta}) and a final division of every t-coefficient by the
// stabilizer Poincare polynomial W_lambda(t). The anti-invariance identity
// w prod(1 - e^{-beta}) = sign(w) e^{rho-check - w(rho-check)} prod(1 - e^{-beta})
// is what turns the usual sum of rational functions into this form.
//
// The same pipeline runs with coefficients already specialized at a fixed
// rational t0; the probability layer uses that to keep supports light.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include "hallwalk/algebra.hpp"
#include "hallwalk/coweight.hpp"
#include "hallwalk/root_system.hpp"

namespace hallwalk {

struct HLExpansion {
  Coweight lambda;
  Element<TPoly> terms;  // full W-orbit-closed support

  explicit HLExpansion(std::size_t rank) : terms(rank) {}

  // u_{lambda,nu}(t); zero polynomial off the support
  TPoly u(const Coweight& nu) const { return terms.coeff(nu); }
};

struct LRTable {
  Coweight mu, nu;
  std::map<Coweight, TPoly, GradedLess> coeffs;  // lambda -> c_{mu,nu}^lambda(t)

  TPoly c(const Coweight& lambda) const {
    auto it = coeffs.find(lambda);
    return it == coeffs.end() ? TPoly() : it->second;
  }
};

namespace detail {

// Numerator sum and coroot divisions, before the W_lambda(t) division.
template <class R>
Element<R> hl_core(const RootSystem& rs, const Coweight& lambda, const R& tval) {
  rs.require_dominant(lambda, "hl_expand");
  Element<R> f = Element<R>::monomial(lambda, R(1));
  for (const auto& d : rs.positive_roots()) {
    Element<R> next = f;
    next.sub_scaled_shifted(tval, cw_neg(d.coroot), f);  // f *= 1 - t e^{-beta}
    f = std::move(next);
  }
  const Coweight& two_rho = rs.two_rho_check();
  Element<R> num(rs.rank());
  for (const auto& w : rs.weyl()) {
    Coweight shift = cw_sub(rs.apply(w, two_rho), two_rho);
    for (auto& v : shift) {
      if (v % 2 != 0)
        throw InvariantViolation("hl_expand: w(rho-check) - rho-check not integral");
      v /= 2;
    }
    // num += sign(w) e^shift w(f)
    num.sub_scaled_shifted(R(-w.sign), shift, f.weyl_image(rs, w));
  }
  for (const auto& d : rs.positive_roots()) num = exact_divide(num, d.coroot);
  return num;
}

// Shared peeling loop: repeatedly strip the graded-maximal support point,
// which is automatically dominant for a W-invariant element (within an
// orbit only the dominant point attains the maximal height). Each round
// records c atkappa and subtracts c * P_kappa, whose support sits strictly
// below kappa, so the leading term descends and the loop terminates.
template <class R, class PFn>
std::map<Coweight, R, GradedLess> lr_peel(const RootSystem& rs, const Coweight& mu,
                                          const Coweight& nu, PFn&& get_p) {
  rs.require_dominant(mu, "lr_coefficients");
  rs.require_dominant(nu, "lr_coefficients");
  Element<R> rem = get_p(mu) * get_p(nu);
  const Coweight bound = cw_add(mu, nu);
  const Coweight zero = cw_zero(rs.rank());
  std::map<Coweight, R, GradedLess> table;
  std::optional<Coweight> prev;
  while (!rem.is_zero()) {
    const Coweight kappa = rem.leading().first;
    const R c = rem.leading().second;
    if (!rs.is_dominant(kappa))
      throw InvariantViolation("lr_coefficients: non-dominant leading term at " +
                               cw_str(kappa));
    if (!cw_dominated(kappa, bound))
      throw InvariantViolation("lr_coefficients: leading term " + cw_str(kappa) +
                               " exceeds mu+nu");
    if (prev && !GradedLess{}(kappa, *prev))
      throw InvariantViolation("lr_coefficients: peeling failed to descend at " +
                               cw_str(kappa));
    prev = kappa;
    rem.sub_scaled_shifted(c, zero, get_p(kappa));
    table.emplace(kappa, c);
  }
  return table;
}

}  // namespace detail

HLExpansion hl_expand(const RootSystem& rs, const Coweight& lambda);

// Same expansion with t already evaluated at an exact rational t0.
Element<QQ> hl_expand_eval(const RootSystem& rs, const Coweight& lambda, const QQ& t0);

// Thread-safe memo of HLExpansions for one root system (insert-or-get;
// duplicate computations of the same key yield identical values, so the
// race is benign).
class HLCache {
 public:
  explicit HLCache(const RootSystem& rs) : rs_(rs) {}
  std::shared_ptr<const HLExpansion> get(const Coweight& lambda);
  const RootSystem& root_system() const { return rs_; }

 private:
  const RootSystem& rs_;
  std::mutex mutex_;
  std::map<Coweight, std::shared_ptr<const HLExpansion>, GradedLess> memo_;
};

LRTable lr_coefficients(const RootSystem& rs, const Coweight& mu, const Coweight& nu);
LRTable lr_coefficients(HLCache& cache, const Coweight& mu, const Coweight& nu);

struct NumericOracleReport {
  int trials = 0;
  int agreements = 0;
  int resamples = 0;  // points discarded for hitting a pole
  bool ok = false;
};

// Evaluates the defining Weyl-sum of rational functions at random exact
// rational points (monomial values per coordinate plus a random t) and
// compares with the computed expansion, in exact arithmetic.
NumericOracleReport numeric_oracle_check(const RootSystem& rs, const Coweight& lambda,
                                         int trials, std::uint64_t seed);

}  // namespace hallwalk

#endif
