#include "hallwalk/satake.hpp"

#include <utility>

#include "hallwalk/errors.hpp"
#include "hallwalk/rational.hpp"

namespace hallwalk {

LatticeDistribution::LatticeDistribution(Map support) : support_(std::move(support)) {
  if (support_.empty())
    throw InvariantViolation("distribution has empty support");
  rank_ = support_.begin()->first.size();
  QQ total(0);
  for (auto it = support_.begin(); it != support_.end();) {
    if (it->first.size() != rank_)
      throw InvariantViolation("mixed ranks in distribution support");
    if (it->second == 0) {
      it = support_.erase(it);
      continue;
    }
    if (it->second < 0)
      throw InvariantViolation("negative probability at " + cw_str(it->first) +
                               ": " + rat_str(it->second));
    total += it->second;
    ++it;
  }
  if (total != 1)
    throw InvariantViolation("probabilities sum to " + rat_str(total) + ", not 1");
}

std::vector<QQ> LatticeDistribution::mean() const {
  std::vector<QQ> m(rank_, QQ(0));
  for (const auto& [nu, p] : support_)
    for (std::size_t j = 0; j < rank_; ++j)
      m[j] += p * QQ(static_cast<long>(nu[j]));
  return m;
}

QQ LatticeDistribution::mean_height() const {
  QQ m(0);
  for (const auto& [nu, p] : support_)
    m += p * QQ(static_cast<long>(height(nu)));
  return m;
}

ProbabilityContext::ProbabilityContext(const RootSystem& rs, QQ q)
    : rs_(rs), q_(std::move(q)), poly_cache_(rs) {
  if (q_ <= 1)
    throw ConfigError("q must be greater than 1, got " + rat_str(q_));
  t0_ = QQ(1) / q_;
}

QQ ProbabilityContext::principal_specialization(const Coweight& lambda) {
  rs_.require_dominant(lambda);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = ps_cache_.find(lambda);
    if (it != ps_cache_.end()) return it->second;
  }
  const QQ w_full = rs_.poincare().eval(t0_);
  const QQ w_stab = rs_.stabilizer_poincare(lambda).eval(t0_);
  const QQ ps = w_full / w_stab * q_pow(q_, height(lambda));
  std::lock_guard<std::mutex> lock(mutex_);
  ps_cache_.emplace(lambda, ps);
  return ps;
}

std::shared_ptr<const Element<QQ>> ProbabilityContext::eval_p(const Coweight& lambda) {
  rs_.require_dominant(lambda);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = eval_cache_.find(lambda);
    if (it != eval_cache_.end()) return it->second;
  }
  auto computed = std::make_shared<Element<QQ>>(hl_expand_eval(rs_, lambda, t0_));
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = eval_cache_.emplace(lambda, std::move(computed));
  return it->second;
}

std::shared_ptr<const LRTable> ProbabilityContext::lr_table(const Coweight& mu,
                                                            const Coweight& nu) {
  const auto key = std::make_pair(mu, nu);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = lr_cache_.find(key);
    if (it != lr_cache_.end()) return it->second;
  }
  auto computed = std::make_shared<LRTable>(lr_coefficients(poly_cache_, mu, nu));
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = lr_cache_.emplace(key, std::move(computed));
  return it->second;
}

LatticeDistribution ProbabilityContext::product_transition(const Coweight& mu,
                                                           const Coweight& nu) {
  rs_.require_dominant(mu);
  rs_.require_dominant(nu);
  std::vector<std::shared_ptr<const Element<QQ>>> pinned;
  auto get = [this, &pinned](const Coweight& k) -> const Element<QQ>& {
    pinned.push_back(eval_p(k));
    return *pinned.back();
  };
  const auto coeffs = detail::lr_peel<QQ>(rs_, mu, nu, get);
  const QQ denom = principal_specialization(mu) * principal_specialization(nu);
  LatticeDistribution::Map out;
  const Coweight bound = cw_add(mu, nu);
  for (const auto& [lambda, c] : coeffs) {
    if (c == 0) continue;
    if (c < 0)
      throw InvariantViolation("negative structure constant at " + cw_str(lambda));
    if (!cw_dominated(lambda, bound))
      throw InvariantViolation("transition target " + cw_str(lambda) +
                               " exceeds " + cw_str(bound));
    out.emplace(lambda, c * principal_specialization(lambda) / denom);
  }
  return LatticeDistribution(std::move(out));
}

LatticeDistribution ProbabilityContext::corners_distribution(const Coweight& lambda) {
  rs_.require_dominant(lambda);
  const auto p = eval_p(lambda);
  const QQ ps = principal_specialization(lambda);
  const std::int64_t h = height(lambda);
  LatticeDistribution::Map out;
  for (const auto& [nu, u] : p->terms()) {
    if (u == 0) continue;
    const std::int64_t hn = height(nu);
    if (hn < -h || hn > h)
      throw InvariantViolation("corner " + cw_str(nu) + " outside height range of " +
                               cw_str(lambda));
    out.emplace(nu, u * q_pow(q_, hn) / ps);
  }
  return LatticeDistribution(std::move(out));
}

QQ ProbabilityContext::g_coefficient(const Coweight& mu, const Coweight& nu,
                                     const Coweight& lambda) {
  rs_.require_dominant(mu);
  rs_.require_dominant(nu);
  rs_.require_dominant(lambda);
  const auto table = lr_table(mu, nu);
  const TPoly c = table->c(lambda);
  const std::int64_t shift = height(mu) + height(nu) - height(lambda);
  return q_pow(q_, shift) * c.eval(t0_);
}

QQ ProbabilityContext::orbit_volume(const Coweight& lambda) {
  // q^{2h} W(1/q)/W_lambda(1/q) = q^h * PS(lambda)
  return q_pow(q_, height(lambda)) * principal_specialization(lambda);
}

QQ ProbabilityContext::expected_corner_height(const Coweight& lambda) {
  return corners_distribution(lambda).mean_height();
}

QQ ProbabilityContext::corner_tail_mass(const Coweight& lambda, std::int64_t threshold) {
  const LatticeDistribution corners = corners_distribution(lambda);
  const std::int64_t h = height(lambda);
  QQ mass(0);
  for (const auto& [nu, p] : corners.support())
    if (h - height(nu) >= threshold) mass += p;
  return mass;
}

Coweight very_dominant_for(const RootSystem& rs, const Coweight& lambda) {
  rs.require_dominant(lambda);
  const std::int64_t k = height(lambda) + 1;
  return cw_scale(k, rs.two_rho_check());
}

}  // namespace hallwalk
