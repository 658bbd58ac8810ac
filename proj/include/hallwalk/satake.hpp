#ifndef HALLWALK_SATAKE_HPP
#define HALLWALK_SATAKE_HPP

// Probabilistic consequences of the Hall-Littlewood data at a fixed
// parameter q > 1: principal specializations, exact transition laws for
// singular numbers of products, exact corners laws, Hecke structure
// constants g and double-coset volumes. Everything here is an exact
// rational; claims like "sums to one" are enforced, not approximated.

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "hallwalk/algebra.hpp"
#include "hallwalk/coweight.hpp"
#include "hallwalk/hall_littlewood.hpp"
#include "hallwalk/root_system.hpp"

namespace hallwalk {

// Finitely supported probability measure on the coweight lattice.
class LatticeDistribution {
 public:
  using Map = std::map<Coweight, QQ, GradedLess>;

  // Validates: no negative mass, exact sum 1; zero entries are dropped.
  explicit LatticeDistribution(Map support);

  const Map& support() const { return support_; }
  std::size_t size() const { return support_.size(); }
  std::size_t rank() const { return rank_; }

  QQ prob(const Coweight& nu) const {
    auto it = support_.find(nu);
    return it == support_.end() ? QQ(0) : it->second;
  }

  std::vector<QQ> mean() const;            // coordinate-wise expectation
  QQ mean_height() const;                  // expectation of height
  bool is_point_mass(const Coweight& nu) const {
    return support_.size() == 1 && support_.begin()->first == nu;
  }

  friend bool operator==(const LatticeDistribution& a, const LatticeDistribution& b) {
    return a.support_ == b.support_;
  }
  friend bool operator!=(const LatticeDistribution& a, const LatticeDistribution& b) {
    return !(a == b);
  }

 private:
  Map support_;
  std::size_t rank_;
};

// Shared context for one (root system, q) pair. Owns the polynomial and
// evaluated-at-1/q expansion caches; meant to be long-lived and shared
// across threads (all public methods are safe for concurrent use).
class ProbabilityContext {
 public:
  ProbabilityContext(const RootSystem& rs, QQ q);
  ProbabilityContext(const ProbabilityContext&) = delete;
  ProbabilityContext& operator=(const ProbabilityContext&) = delete;

  const RootSystem& rs() const { return rs_; }
  const QQ& q() const { return q_; }
  const QQ& t0() const { return t0_; }  // 1/q

  // W(q^-1)/W_lambda(q^-1) * q^height(lambda)
  QQ principal_specialization(const Coweight& lambda);

  // Law of the singular numbers of a product of two Haar-rotated matrices
  // with fixed singular numbers mu and nu.
  LatticeDistribution product_transition(const Coweight& mu, const Coweight& nu);

  // Law of the corners coweight given singular numbers lambda.
  LatticeDistribution corners_distribution(const Coweight& lambda);

  // q^{height(mu+nu-lambda)} * c_{mu,nu}^{lambda}(1/q)
  QQ g_coefficient(const Coweight& mu, const Coweight& nu, const Coweight& lambda);

  // Volume of the double coset indexed by lambda, q^{2 height} * W/W_lambda.
  QQ orbit_volume(const Coweight& lambda);

  QQ expected_corner_height(const Coweight& lambda);
  // Mass of corners nu with height(lambda - nu) >= threshold.
  QQ corner_tail_mass(const Coweight& lambda, std::int64_t threshold);

  // Full t-polynomial structure constants, cached per (mu, nu).
  std::shared_ptr<const LRTable> lr_table(const Coweight& mu, const Coweight& nu);

  // Expansion of P_lambda with coefficients evaluated at t = 1/q.
  std::shared_ptr<const Element<QQ>> eval_p(const Coweight& lambda);

  HLCache& poly_cache() { return poly_cache_; }

 private:
  const RootSystem& rs_;
  QQ q_, t0_;
  HLCache poly_cache_;
  std::mutex mutex_;
  std::map<Coweight, std::shared_ptr<const Element<QQ>>, GradedLess> eval_cache_;
  std::map<Coweight, QQ, GradedLess> ps_cache_;
  std::map<std::pair<Coweight, Coweight>, std::shared_ptr<const LRTable>> lr_cache_;
};

// A coweight with every simple pairing >= 2*height(lambda) + 2, the
// operational meaning of "sufficiently dominant" for the corners limit:
// the smallest multiple of the coroot sum works since <2 rho-check, alpha_i> = 2.
Coweight very_dominant_for(const RootSystem& rs, const Coweight& lambda);

}  // namespace hallwalk

#endif
