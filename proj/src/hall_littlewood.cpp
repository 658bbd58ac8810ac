#include "hallwalk/hall_littlewood.hpp"

#include <vector>

#include "hallwalk/rng.hpp"

namespace hallwalk {

HLExpansion hl_expand(const RootSystem& rs, const Coweight& lambda) {
  Element<TPoly> raw = detail::hl_core<TPoly>(rs, lambda, TPoly::t());
  const TPoly wl = rs.stabilizer_poincare(lambda);
  HLExpansion out(rs.rank());
  out.lambda = lambda;
  for (const auto& [nu, c] : raw.terms()) out.terms.add_term(nu, c.divexact(wl));
  if (out.terms.coeff(lambda) != TPoly(1))
    throw InvariantViolation("hl_expand: expansion is not monic at " + cw_str(lambda));
  return out;
}

Element<QQ> hl_expand_eval(const RootSystem& rs, const Coweight& lambda, const QQ& t0) {
  Element<QQ> raw = detail::hl_core<QQ>(rs, lambda, t0);
  const QQ wl = rs.stabilizer_poincare(lambda).eval(t0);
  if (wl == 0)
    throw InvariantViolation("hl_expand_eval: stabilizer series vanishes at t0");
  Element<QQ> out(rs.rank());
  for (const auto& [nu, c] : raw.terms()) out.add_term(nu, c / wl);
  if (out.coeff(lambda) != 1)
    throw InvariantViolation("hl_expand_eval: expansion is not monic at " + cw_str(lambda));
  return out;
}

std::shared_ptr<const HLExpansion> HLCache::get(const Coweight& lambda) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(lambda);
    if (it != memo_.end()) return it->second;
  }
  auto value = std::make_shared<const HLExpansion>(hl_expand(rs_, lambda));
  std::lock_guard<std::mutex> lock(mutex_);
  return memo_.emplace(lambda, std::move(value)).first->second;
}

LRTable lr_coefficients(HLCache& cache, const Coweight& mu, const Coweight& nu) {
  // Keep the per-kappa expansions alive for the whole peel.
  std::vector<std::shared_ptr<const HLExpansion>> pinned;
  auto get_p = [&](const Coweight& kappa) -> const Element<TPoly>& {
    pinned.push_back(cache.get(kappa));
    return pinned.back()->terms;
  };
  LRTable out;
  out.mu = mu;
  out.nu = nu;
  out.coeffs = detail::lr_peel<TPoly>(cache.root_system(), mu, nu, get_p);
  return out;
}

LRTable lr_coefficients(const RootSystem& rs, const Coweight& mu, const Coweight& nu) {
  HLCache cache(rs);
  return lr_coefficients(cache, mu, nu);
}

namespace {

// Value of e^nu at the point x, i.e. prod x_i^{nu_i}.
QQ monomial_value(const std::vector<QQ>& x, const Coweight& nu) {
  QQ acc(1);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (nu[i] != 0) acc *= q_pow(x[i], nu[i]);
  return acc;
}

}  // namespace

NumericOracleReport numeric_oracle_check(const RootSystem& rs, const Coweight& lambda,
                                         int trials, std::uint64_t seed) {
  rs.require_dominant(lambda, "numeric_oracle_check");
  const HLExpansion expansion = hl_expand(rs, lambda);
  Rng rng(seed);
  NumericOracleReport report;
  report.trials = trials;

  for (int trial = 0; trial < trials; ++trial) {
    constexpr int kMaxResample = 200;
    bool done = false;
    for (int attempt = 0; attempt < kMaxResample && !done; ++attempt) {
      // Random exact point: coordinates in (0, 8], t0 in (0, 1).
      std::vector<QQ> x(rs.rank());
      for (auto& v : x)
        v = make_q(1 + static_cast<long>(rng.next() % 120),
                   1 + static_cast<long>(rng.next() % 16));
      const long tden = 2 + static_cast<long>(rng.next() % 30);
      const QQ t0 = make_q(1 + static_cast<long>(rng.next() % (tden - 1)), tden);

      // Direct evaluation of the symmetrized sum of rational functions.
      QQ lhs(0);
      bool pole = false;
      for (const auto& w : rs.weyl()) {
        QQ term = monomial_value(x, rs.apply(w, lambda));
        for (const auto& d : rs.positive_roots()) {
          const QQ mv = monomial_value(x, cw_neg(rs.apply(w, d.coroot)));
          const QQ den = QQ(1) - mv;
          if (den == 0) {
            pole = true;
            break;
          }
          term *= (QQ(1) - t0 * mv) / den;
        }
        if (pole) break;
        lhs += term;
      }
      if (pole) {
        ++report.resamples;
        continue;
      }
      lhs /= rs.stabilizer_poincare(lambda).eval(t0);

      QQ rhs(0);
      for (const auto& [nu, c] : expansion.terms.terms())
        rhs += c.eval(t0) * monomial_value(x, nu);

      if (lhs == rhs) ++report.agreements;
      done = true;
    }
    if (!done)
      throw InvariantViolation("numeric_oracle_check: could not find a pole-free point");
  }
  report.ok = (report.agreements == report.trials);
  return report;
}

}  // namespace hallwalk
