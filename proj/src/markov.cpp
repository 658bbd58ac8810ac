#include "hallwalk/markov.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "hallwalk/errors.hpp"
#include "hallwalk/parallel.hpp"
#include "hallwalk/rational.hpp"

namespace hallwalk {

static_assert(sizeof(long) >= sizeof(std::int64_t),
              "coweight coordinates must fit in long for exact GMP conversions");

ExactSampler::ExactSampler(const LatticeDistribution& dist) {
  ZZ lcm(1);
  for (const auto& [cw, p] : dist.support())
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.get_den().get_mpz_t());
  ZZ run(0);
  atoms_.reserve(dist.size());
  cum_.reserve(dist.size());
  for (const auto& [cw, p] : dist.support()) {
    atoms_.push_back(cw);
    run += p.get_num() * (lcm / p.get_den());
    cum_.push_back(run);
  }
  total_ = run;
  if (total_ != lcm)
    throw InvariantViolation("sampler thresholds do not exhaust the denominator");
}

const Coweight& ExactSampler::draw(Rng& rng) const {
  const ZZ u = rng.below(total_);
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  return atoms_[static_cast<std::size_t>(it - cum_.begin())];
}

namespace {

void validate_step_law(const RootSystem& rs, const LatticeDistribution& law) {
  if (law.rank() != rs.rank())
    throw ConfigError("step law has rank " + std::to_string(law.rank()) +
                      ", root system has rank " + std::to_string(rs.rank()));
  for (const auto& [cw, p] : law.support())
    if (!rs.is_dominant(cw))
      throw ConfigError("step law atom " + cw_str(cw) + " is not dominant");
}

}  // namespace

StepSequence StepSequence::iid(const RootSystem& rs, LatticeDistribution law) {
  validate_step_law(rs, law);
  StepSequence s;
  s.iid_ = true;
  s.samplers_.emplace_back(law);
  s.laws_.push_back(std::move(law));
  return s;
}

StepSequence StepSequence::per_step(const RootSystem& rs,
                                    std::vector<LatticeDistribution> laws) {
  if (laws.empty()) throw ConfigError("empty step law list");
  StepSequence s;
  s.iid_ = false;
  for (const auto& law : laws) {
    validate_step_law(rs, law);
    s.samplers_.emplace_back(law);
  }
  s.laws_ = std::move(laws);
  return s;
}

const LatticeDistribution& StepSequence::law(std::size_t k) const {
  if (k == 0) throw ConfigError("step indices start at 1");
  if (iid_) return laws_[0];
  if (k > laws_.size())
    throw ConfigError("step " + std::to_string(k) + " requested but only " +
                      std::to_string(laws_.size()) + " laws were given");
  return laws_[k - 1];
}

const ExactSampler& StepSequence::sampler(std::size_t k) const {
  if (k == 0) throw ConfigError("step indices start at 1");
  if (iid_) return samplers_[0];
  if (k > samplers_.size())
    throw ConfigError("step " + std::to_string(k) + " requested but only " +
                      std::to_string(samplers_.size()) + " laws were given");
  return samplers_[k - 1];
}

void StepSequence::require_steps(std::size_t K) const {
  if (!iid_ && laws_.size() < K)
    throw ConfigError("run of " + std::to_string(K) + " steps needs " +
                      std::to_string(K) + " laws, got " + std::to_string(laws_.size()));
}

KernelCache::KernelCache(ProbabilityContext& ctx, std::size_t cap)
    : ctx_(ctx), cap_(cap) {}

KernelCache::Entry& KernelCache::product_entry(const Coweight& state,
                                               const Coweight& step) {
  const auto key = std::make_pair(state, step);
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = product_.find(key);
  if (it != product_.end()) return it->second;
  if (product_.size() + corner_.size() >= cap_)
    throw CapExceeded("kernel cache exceeded its cap of " + std::to_string(cap_) +
                      " entries");
  auto law = std::make_shared<const LatticeDistribution>(
      ctx_.product_transition(state, step));
  Entry e{law, std::make_shared<const ExactSampler>(*law)};
  return product_.emplace(key, std::move(e)).first->second;
}

KernelCache::Entry& KernelCache::corner_entry(const Coweight& step) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = corner_.find(step);
  if (it != corner_.end()) return it->second;
  if (product_.size() + corner_.size() >= cap_)
    throw CapExceeded("kernel cache exceeded its cap of " + std::to_string(cap_) +
                      " entries");
  auto law = std::make_shared<const LatticeDistribution>(
      ctx_.corners_distribution(step));
  Entry e{law, std::make_shared<const ExactSampler>(*law)};
  return corner_.emplace(step, std::move(e)).first->second;
}

std::shared_ptr<const ExactSampler> KernelCache::product_kernel(const Coweight& state,
                                                                const Coweight& step) {
  return product_entry(state, step).sampler;
}

std::shared_ptr<const ExactSampler> KernelCache::corner_kernel(const Coweight& step) {
  return corner_entry(step).sampler;
}

std::shared_ptr<const LatticeDistribution> KernelCache::product_law(
    const Coweight& state, const Coweight& step) {
  return product_entry(state, step).law;
}

std::shared_ptr<const LatticeDistribution> KernelCache::corner_law(
    const Coweight& step) {
  return corner_entry(step).law;
}

bool KernelCache::product_matches_shifted_corners(const Coweight& state,
                                                  const Coweight& step) {
  const auto key = std::make_pair(state, step);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = product_.find(key);
    if (it != product_.end() && it->second.shifted_corners >= 0)
      return it->second.shifted_corners == 1;
  }
  const auto prod = product_law(state, step);
  const auto corn = corner_law(step);
  // Translation by a fixed vector shifts heights uniformly and preserves
  // lexicographic order, so both supports iterate in matching order.
  bool eq = prod->size() == corn->size();
  if (eq) {
    auto pi = prod->support().begin();
    for (const auto& [nu, p] : corn->support()) {
      if (pi->first != cw_add(state, nu) || pi->second != p) {
        eq = false;
        break;
      }
      ++pi;
    }
  }
  std::lock_guard<std::mutex> lock(mutex_);
  product_.find(key)->second.shifted_corners = eq ? 1 : 0;
  return eq;
}

Trajectory simulate_product_chain(KernelCache& kc, const StepSequence& steps,
                                  std::size_t K, Rng& rng) {
  steps.require_steps(K);
  const RootSystem& rs = kc.ctx().rs();
  Trajectory t;
  t.lambda.reserve(K);
  Coweight cur = cw_zero(rs.rank());
  for (std::size_t k = 1; k <= K; ++k) {
    const Coweight s = steps.sampler(k).draw(rng);
    const Coweight next = kc.product_kernel(cur, s)->draw(rng);
    if (!cw_dominated(next, cw_add(cur, s)))
      throw InvariantViolation("product chain step " + std::to_string(k) +
                               " exceeded subadditive bound: " + cw_str(next));
    cur = next;
    t.lambda.push_back(cur);
  }
  return t;
}

Trajectory simulate_corner_sum(KernelCache& kc, const StepSequence& steps,
                               std::size_t K, Rng& rng) {
  steps.require_steps(K);
  const RootSystem& rs = kc.ctx().rs();
  Trajectory t;
  t.nu.reserve(K);
  Coweight sum = cw_zero(rs.rank());
  for (std::size_t k = 1; k <= K; ++k) {
    const Coweight s = steps.sampler(k).draw(rng);
    const Coweight inc = kc.corner_kernel(s)->draw(rng);
    const auto [rep, word] = rs.dominant_representative(inc);
    if (!cw_dominated(rep, s))
      throw InvariantViolation("corner increment " + cw_str(inc) +
                               " escapes the orbit hull of its step");
    sum = cw_add(sum, inc);
    t.nu.push_back(sum);
  }
  return t;
}

DiscrepancyRun joint_discrepancy_run(KernelCache& kc, const StepSequence& steps,
                                     std::size_t K, Rng& rng, const QQ& epsilon,
                                     std::int64_t k0) {
  steps.require_steps(K);
  if (epsilon <= 0 || epsilon >= 1)
    throw ConfigError("epsilon must lie strictly between 0 and 1, got " +
                      rat_str(epsilon));
  QQ eps = epsilon;
  eps.canonicalize();
  if (!eps.get_num().fits_ulong_p() || !eps.get_den().fits_ulong_p())
    throw ConfigError("epsilon terms too large: " + rat_str(eps));
  const unsigned long a = eps.get_num().get_ui();
  const unsigned long b = eps.get_den().get_ui();
  const RootSystem& rs = kc.ctx().rs();
  DiscrepancyRun run;
  run.traj.lambda.reserve(K);
  run.traj.nu.reserve(K);
  Coweight lam = cw_zero(rs.rank());
  Coweight nu = cw_zero(rs.rank());
  constexpr int kMaxTries = 1 << 22;
  for (std::size_t k = 1; k <= K; ++k) {
    const Coweight s = steps.sampler(k).draw(rng);
    const Coweight c = kc.corner_kernel(s)->draw(rng);
    const Coweight next_nu = cw_add(nu, c);
    Coweight next_lam;
    if (kc.product_matches_shifted_corners(lam, s)) {
      // Deep in the cone both kernels are the same law; moving lambda by the
      // very increment that moved nu keeps the gap fixed, which is the regime
      // the discrepancy bound rides on. The gap stays nonnegative since it
      // was before.
      next_lam = cw_add(lam, c);
    } else {
      // Near a wall the product kernel genuinely differs; draw from it,
      // conditioned on staying above the updated corner sum. lam + s is in
      // the kernel's support and dominates next_nu, so the acceptance set is
      // never empty.
      const auto kernel = kc.product_kernel(lam, s);
      int tries = 0;
      do {
        if (++tries > kMaxTries)
          throw InvariantViolation("conditioned product move rejected " +
                                   std::to_string(kMaxTries) + " times at step " +
                                   std::to_string(k));
        next_lam = kernel->draw(rng);
      } while (!cw_dominated(next_nu, next_lam));
    }
    lam = next_lam;
    nu = next_nu;
    if (!rs.is_dominant(lam))
      throw InvariantViolation("product chain left the dominance cone at step " +
                               std::to_string(k));
    const std::int64_t h = height(lam);
    const std::int64_t d = h - height(nu);
    if (d < 0)
      throw InvariantViolation("corner sum overtook the product chain at step " +
                               std::to_string(k));
    // d > h^epsilon, compared exactly as d^b > h^a for epsilon = a/b
    const bool violation =
        z_pow(ZZ(static_cast<long>(d)), b) > z_pow(ZZ(static_cast<long>(h)), a);
    if (violation) {
      ++run.violations;
      run.last_violation_k = static_cast<std::int64_t>(k);
      if (static_cast<std::int64_t>(k) > k0) ++run.violations_after_k0;
    }
    run.traj.lambda.push_back(lam);
    run.traj.nu.push_back(nu);
  }
  return run;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Summary statistics for one scalar functional of the terminal state:
// finals[m] is its value after K steps in run m, m_step and v_step are the
// exact per-step mean and variance of its increment.
CoordStat scalar_stat(const std::vector<double>& finals, std::size_t K,
                      const QQ& m_step, const QQ& v_step) {
  CoordStat st;
  st.exact_mean = m_step.get_d();
  st.exact_var = v_step.get_d();
  const std::size_t M = finals.size();
  const QQ km_exact = QQ(static_cast<long>(K)) * m_step;
  const double km = km_exact.get_d();
  const double sqrtK = std::sqrt(static_cast<double>(K));
  double total = 0;
  for (double f : finals) total += f;
  st.empirical_mean = total / (static_cast<double>(M) * static_cast<double>(K));
  const double sd = std::sqrt(st.exact_var);
  if (sd == 0) {
    st.mean_z = (st.empirical_mean == st.exact_mean) ? 0 : kInf;
  } else {
    st.mean_z = (st.empirical_mean - st.exact_mean) *
                std::sqrt(static_cast<double>(M) * static_cast<double>(K)) / sd;
  }
  std::vector<double> fluct(M);
  for (std::size_t m = 0; m < M; ++m) fluct[m] = (finals[m] - km) / sqrtK;
  double fmean = 0;
  for (double g : fluct) fmean += g;
  fmean /= static_cast<double>(M);
  double ss = 0;
  for (double g : fluct) ss += (g - fmean) * (g - fmean);
  st.fluct_var = (M > 1) ? ss / static_cast<double>(M - 1) : 0;
  if (sd == 0) {
    st.anderson_darling = 0;
    st.ad_pass = (ss == 0 && fmean == 0);
  } else {
    std::vector<double> scaled(M);
    for (std::size_t m = 0; m < M; ++m) scaled[m] = fluct[m] / sd;
    st.anderson_darling = anderson_darling_stat(std::move(scaled));
    st.ad_pass = st.anderson_darling < kAndersonDarlingCritical1pc;
  }
  return st;
}

// Exact per-step mean vector and covariance matrix of a lattice law.
void law_moments(const LatticeDistribution& law, std::vector<QQ>& mean,
                 std::vector<std::vector<QQ>>& cov) {
  const std::size_t n = law.rank();
  mean.assign(n, QQ(0));
  cov.assign(n, std::vector<QQ>(n, QQ(0)));
  for (const auto& [nu, p] : law.support())
    for (std::size_t i = 0; i < n; ++i) {
      mean[i] += p * QQ(static_cast<long>(nu[i]));
      for (std::size_t j = 0; j < n; ++j)
        cov[i][j] += p * QQ(static_cast<long>(nu[i])) * QQ(static_cast<long>(nu[j]));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cov[i][j] -= mean[i] * mean[j];
}

AsymptoticsReport asymptotics_from_finals(const RootSystem& rs,
                                          const std::vector<Coweight>& finals,
                                          const LatticeDistribution& step_moments,
                                          const SimOptions& opt, const char* chain) {
  const std::size_t n = rs.rank();
  const std::size_t M = finals.size();
  const std::size_t K = opt.K;
  std::vector<QQ> mean;
  std::vector<std::vector<QQ>> cov;
  law_moments(step_moments, mean, cov);

  AsymptoticsReport rep;
  rep.K = K;
  rep.M = M;
  rep.seed = opt.seed;
  rep.chain = chain;

  std::vector<std::vector<double>> coord_finals(n, std::vector<double>(M));
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t j = 0; j < n; ++j)
      coord_finals[j][m] = static_cast<double>(finals[m][j]);
  for (std::size_t j = 0; j < n; ++j)
    rep.coords.push_back(scalar_stat(coord_finals[j], K, mean[j], cov[j][j]));

  const CartanMatrix& cm = rs.cartan();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> vals(M, 0.0);
    for (std::size_t m = 0; m < M; ++m) {
      double acc = 0;
      for (std::size_t j = 0; j < n; ++j)
        acc += static_cast<double>(cm[i][j]) * static_cast<double>(finals[m][j]);
      vals[m] = acc;
    }
    QQ pm(0), pv(0);
    for (std::size_t j = 0; j < n; ++j) {
      pm += QQ(static_cast<long>(cm[i][j])) * mean[j];
      for (std::size_t l = 0; l < n; ++l)
        pv += QQ(static_cast<long>(cm[i][j])) * QQ(static_cast<long>(cm[i][l])) *
              cov[j][l];
    }
    rep.pairings.push_back(scalar_stat(vals, K, pm, pv));
  }

  // Cross-covariances of the coordinate fluctuations against the exact matrix.
  const double sqrtK = std::sqrt(static_cast<double>(K));
  std::vector<std::vector<double>> fluct(n, std::vector<double>(M));
  for (std::size_t j = 0; j < n; ++j) {
    const QQ km_exact = QQ(static_cast<long>(K)) * mean[j];
    const double km = km_exact.get_d();
    for (std::size_t m = 0; m < M; ++m)
      fluct[j][m] = (coord_finals[j][m] - km) / sqrtK;
  }
  std::vector<double> fmean(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (double g : fluct[j]) fmean[j] += g;
    fmean[j] /= static_cast<double>(M);
  }
  rep.cov_z.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t m = 0; m < M; ++m)
        s += (fluct[i][m] - fmean[i]) * (fluct[j][m] - fmean[j]);
      s /= static_cast<double>(M - 1);
      const double cij = cov[i][j].get_d();
      const double cii = cov[i][i].get_d();
      const double cjj = cov[j][j].get_d();
      const double denom = std::sqrt((cii * cjj + cij * cij) /
                                     static_cast<double>(M - 1));
      rep.cov_z[i * n + j] = (denom == 0) ? (s == cij ? 0 : kInf) : (s - cij) / denom;
    }

  for (const auto& st : rep.coords) {
    rep.max_abs_mean_z = std::max(rep.max_abs_mean_z, std::fabs(st.mean_z));
    rep.max_anderson_darling = std::max(rep.max_anderson_darling, st.anderson_darling);
    rep.ad_all_pass = rep.ad_all_pass && st.ad_pass;
  }
  for (const auto& st : rep.pairings) {
    rep.max_abs_mean_z = std::max(rep.max_abs_mean_z, std::fabs(st.mean_z));
    rep.max_anderson_darling = std::max(rep.max_anderson_darling, st.anderson_darling);
    rep.ad_all_pass = rep.ad_all_pass && st.ad_pass;
  }
  for (double z : rep.cov_z) rep.max_abs_cov_z = std::max(rep.max_abs_cov_z, std::fabs(z));
  return rep;
}

}  // namespace

AsymptoticsReport lln_clt_report(KernelCache& kc, const StepSequence& steps,
                                 const SimOptions& opt) {
  if (!steps.is_iid())
    throw ConfigError("asymptotic reports need a single repeated step law");
  if (opt.M < 2) throw ConfigError("need at least 2 trajectories");
  const RootSystem& rs = kc.ctx().rs();
  const LatticeDistribution mixed = mixed_corner_law(kc.ctx(), steps.law(1));

  std::vector<Coweight> finals(opt.M);
  std::vector<Trajectory> kept(opt.keep_trajectories ? opt.M : 0);
  parallel_indexed(opt.M, opt.threads, [&](std::size_t i) {
    Rng rng(derive_seed(opt.seed, i));
    Trajectory t = simulate_product_chain(kc, steps, opt.K, rng);
    t.seed = opt.seed;
    finals[i] = t.lambda.back();
    if (opt.keep_trajectories) kept[i] = std::move(t);
  });

  AsymptoticsReport rep = asymptotics_from_finals(rs, finals, mixed, opt, "product");
  rep.trajectories = std::move(kept);
  return rep;
}

AsymptoticsReport corner_sum_report(KernelCache& kc, const StepSequence& steps,
                                    const SimOptions& opt) {
  if (!steps.is_iid())
    throw ConfigError("asymptotic reports need a single repeated step law");
  if (opt.M < 2) throw ConfigError("need at least 2 trajectories");
  const RootSystem& rs = kc.ctx().rs();
  const LatticeDistribution mixed = mixed_corner_law(kc.ctx(), steps.law(1));

  std::vector<Coweight> finals(opt.M);
  std::vector<Trajectory> kept(opt.keep_trajectories ? opt.M : 0);
  parallel_indexed(opt.M, opt.threads, [&](std::size_t i) {
    Rng rng(derive_seed(opt.seed, i));
    Trajectory t = simulate_corner_sum(kc, steps, opt.K, rng);
    t.seed = opt.seed;
    finals[i] = t.nu.back();
    if (opt.keep_trajectories) kept[i] = std::move(t);
  });

  AsymptoticsReport rep = asymptotics_from_finals(rs, finals, mixed, opt, "corner-sum");
  rep.trajectories = std::move(kept);
  return rep;
}

DiscrepancyReport discrepancy_report(KernelCache& kc, const StepSequence& steps,
                                     const SimOptions& opt) {
  DiscrepancyReport rep;
  rep.K = opt.K;
  rep.M = opt.M;
  rep.seed = opt.seed;
  rep.epsilon = rat_str(opt.epsilon);
  rep.k0 = opt.k0;

  std::vector<DiscrepancyRun> runs(opt.M);
  parallel_indexed(opt.M, opt.threads, [&](std::size_t i) {
    Rng rng(derive_seed(opt.seed, i));
    runs[i] = joint_discrepancy_run(kc, steps, opt.K, rng, opt.epsilon, opt.k0);
    runs[i].traj.seed = opt.seed;
  });

  for (auto& r : runs) {
    rep.total_violations += r.violations;
    if (r.violations_after_k0 > 0) ++rep.trajectories_with_late_violation;
    rep.max_last_violation_k = std::max(rep.max_last_violation_k, r.last_violation_k);
    if (opt.keep_trajectories) rep.trajectories.push_back(std::move(r.traj));
  }
  rep.late_violation_fraction =
      static_cast<double>(rep.trajectories_with_late_violation) /
      static_cast<double>(opt.M);
  return rep;
}

LatticeDistribution convolve(const LatticeDistribution& a, const LatticeDistribution& b) {
  LatticeDistribution::Map out;
  for (const auto& [x, px] : a.support())
    for (const auto& [y, py] : b.support()) out[cw_add(x, y)] += px * py;
  return LatticeDistribution(std::move(out));
}

LatticeDistribution mixed_corner_law(ProbabilityContext& ctx,
                                     const LatticeDistribution& step) {
  LatticeDistribution::Map out;
  for (const auto& [s, ps] : step.support()) {
    const LatticeDistribution corners = ctx.corners_distribution(s);
    for (const auto& [nu, p] : corners.support()) out[nu] += ps * p;
  }
  return LatticeDistribution(std::move(out));
}

LatticeDistribution product_chain_marginal(KernelCache& kc, const StepSequence& steps,
                                           std::size_t k) {
  steps.require_steps(k);
  const std::size_t n = kc.ctx().rs().rank();
  LatticeDistribution::Map cur;
  cur.emplace(cw_zero(n), QQ(1));
  for (std::size_t j = 1; j <= k; ++j) {
    LatticeDistribution::Map next;
    for (const auto& [state, pst] : cur)
      for (const auto& [s, ps] : steps.law(j).support())
        for (const auto& [lam, p] : kc.product_law(state, s)->support())
          next[lam] += pst * ps * p;
    cur = std::move(next);
  }
  return LatticeDistribution(std::move(cur));
}

LatticeDistribution chain_corner_mixture(KernelCache& kc, const StepSequence& steps,
                                         std::size_t k) {
  const LatticeDistribution marginal = product_chain_marginal(kc, steps, k);
  LatticeDistribution::Map out;
  for (const auto& [state, pst] : marginal.support())
    for (const auto& [nu, p] : kc.corner_law(state)->support()) out[nu] += pst * p;
  return LatticeDistribution(std::move(out));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double anderson_darling_stat(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const std::size_t n = sample.size();
  if (n == 0) return 0;
  constexpr double kFloor = 1e-300;
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = std::max(normal_cdf(sample[i]), kFloor);
    // upper tail of the largest-complement order statistic, computed
    // directly from erfc for accuracy far out in the tail
    const double hi =
        std::max(0.5 * std::erfc(sample[n - 1 - i] / std::sqrt(2.0)), kFloor);
    acc += (2.0 * static_cast<double>(i + 1) - 1.0) * (std::log(lo) + std::log(hi));
  }
  return -static_cast<double>(n) - acc / static_cast<double>(n);
}

}  // namespace hallwalk
