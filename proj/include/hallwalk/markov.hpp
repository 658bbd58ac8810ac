#ifndef HALLWALK_MARKOV_HPP
#define HALLWALK_MARKOV_HPP

// Random walks driven by the exact transition kernels: the product chain
// lambda(k) (singular numbers of growing matrix products), the additive
// corner-sum chain nu(k), and the coupled pair used to monitor the
// discrepancy h(lambda) - h(nu). Sampling is exact (integer thresholds
// over a common denominator); only the summary statistics use doubles.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hallwalk/coweight.hpp"
#include "hallwalk/rng.hpp"
#include "hallwalk/satake.hpp"

namespace hallwalk {

// Draws from a fixed LatticeDistribution by exact inversion: probabilities
// are scaled to a common denominator and a uniform integer below the total
// picks the atom.
class ExactSampler {
 public:
  explicit ExactSampler(const LatticeDistribution& dist);
  const Coweight& draw(Rng& rng) const;
  std::size_t size() const { return atoms_.size(); }

 private:
  std::vector<Coweight> atoms_;
  std::vector<ZZ> cum_;
  ZZ total_;
};

// Step laws for the driving sequence: one law used for every step, or an
// explicit per-step list (k = 1 uses laws[0]). Every atom must be dominant.
class StepSequence {
 public:
  static StepSequence iid(const RootSystem& rs, LatticeDistribution law);
  static StepSequence per_step(const RootSystem& rs, std::vector<LatticeDistribution> laws);

  bool is_iid() const { return iid_; }
  std::size_t explicit_steps() const { return laws_.size(); }
  const LatticeDistribution& law(std::size_t k) const;   // k >= 1
  const ExactSampler& sampler(std::size_t k) const;      // k >= 1
  // Throws unless the sequence provides laws for steps 1..K.
  void require_steps(std::size_t K) const;

 private:
  StepSequence() = default;
  bool iid_ = true;
  std::vector<LatticeDistribution> laws_;
  std::vector<ExactSampler> samplers_;
};

// Memo of samplers for the two kernels, keyed by the exact inputs. Shared
// across worker threads; throws CapExceeded if the reachable state set
// grows past the cap.
class KernelCache {
 public:
  explicit KernelCache(ProbabilityContext& ctx, std::size_t cap = 1000000);
  ProbabilityContext& ctx() { return ctx_; }

  // Law of lambda(k) given lambda(k-1) = state and step s.
  std::shared_ptr<const ExactSampler> product_kernel(const Coweight& state,
                                                     const Coweight& step);
  // Law of one corner increment for step s.
  std::shared_ptr<const ExactSampler> corner_kernel(const Coweight& step);
  // Same laws as distributions, for exact reference computations.
  std::shared_ptr<const LatticeDistribution> product_law(const Coweight& state,
                                                         const Coweight& step);
  std::shared_ptr<const LatticeDistribution> corner_law(const Coweight& step);
  // True when the product transition at (state, step) is exactly the corner
  // law of the step translated by state, i.e. the state is deep enough in
  // the cone that the two kernels coincide. Memoized per pair.
  bool product_matches_shifted_corners(const Coweight& state, const Coweight& step);

 private:
  struct Entry {
    std::shared_ptr<const LatticeDistribution> law;
    std::shared_ptr<const ExactSampler> sampler;
    int shifted_corners = -1;  // -1 unknown, else 0/1
  };
  Entry& product_entry(const Coweight& state, const Coweight& step);
  Entry& corner_entry(const Coweight& step);

  ProbabilityContext& ctx_;
  std::size_t cap_;
  std::mutex mutex_;
  std::map<std::pair<Coweight, Coweight>, Entry> product_;
  std::map<Coweight, Entry, GradedLess> corner_;
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<Coweight> lambda;  // product-chain states, index k-1 holds lambda(k)
  std::vector<Coweight> nu;      // corner sums, same indexing
};

// Coupled run: at step k one corner increment is drawn from corners(s_k)
// and added to nu. Deep in the cone the product transition at
// (lambda(k-1), s_k) is exactly that corner law translated by lambda(k-1),
// and there lambda moves by the same draw, so the gap lambda - nu only
// changes while lambda is near a wall. Near walls the product move is drawn
// from its own kernel conditioned on staying coordinatewise above the new
// corner sum. The cone relation nu(k) <= lambda(k) is asserted every step.
struct DiscrepancyRun {
  Trajectory traj;
  std::size_t violations = 0;          // steps with d^b > h^a for epsilon = a/b
  std::int64_t last_violation_k = 0;   // 0 when none
  std::size_t violations_after_k0 = 0;
};

Trajectory simulate_product_chain(KernelCache& kc, const StepSequence& steps,
                                  std::size_t K, Rng& rng);
Trajectory simulate_corner_sum(KernelCache& kc, const StepSequence& steps,
                               std::size_t K, Rng& rng);
DiscrepancyRun joint_discrepancy_run(KernelCache& kc, const StepSequence& steps,
                                     std::size_t K, Rng& rng, const QQ& epsilon,
                                     std::int64_t k0 = 100);

struct SimOptions {
  std::size_t K = 100;
  std::size_t M = 100;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool keep_trajectories = false;
  QQ epsilon = QQ(1, 2);
  std::int64_t k0 = 100;
};

struct CoordStat {
  double exact_mean = 0;      // per step
  double exact_var = 0;       // per step
  double empirical_mean = 0;  // per step, from the K-th state over M runs
  double mean_z = 0;          // (empirical - exact) normalized by exact sd
  double fluct_var = 0;       // empirical variance of (x(K) - K m)/sqrt(K)
  double anderson_darling = 0;
  bool ad_pass = true;        // below the 1% critical value 3.857
};

struct AsymptoticsReport {
  std::size_t K = 0, M = 0;
  std::uint64_t seed = 0;
  std::string chain;                    // "product" or "corner-sum"
  std::vector<CoordStat> coords;        // per lattice coordinate
  std::vector<CoordStat> pairings;      // per simple-root pairing <x, alpha_i>
  // Fluctuation cross-covariance z-scores, row-major over coordinates.
  std::vector<double> cov_z;
  double max_abs_mean_z = 0;
  double max_abs_cov_z = 0;
  double max_anderson_darling = 0;
  bool ad_all_pass = true;
  std::vector<Trajectory> trajectories;  // only when keep_trajectories
};

struct DiscrepancyReport {
  std::size_t K = 0, M = 0;
  std::uint64_t seed = 0;
  std::string epsilon;
  std::int64_t k0 = 0;
  std::size_t trajectories_with_late_violation = 0;  // violation at some k > k0
  std::size_t total_violations = 0;
  std::int64_t max_last_violation_k = 0;
  double late_violation_fraction = 0;
  std::vector<Trajectory> trajectories;  // only when keep_trajectories
};

// M independent product-chain trajectories; exact step statistics come from
// the mixed corner law, empirical ones from the terminal states. Requires an
// iid step sequence (the normalization below assumes it).
AsymptoticsReport lln_clt_report(KernelCache& kc, const StepSequence& steps,
                                 const SimOptions& opt);
// Same report shape for the corner-sum chain.
AsymptoticsReport corner_sum_report(KernelCache& kc, const StepSequence& steps,
                                    const SimOptions& opt);
DiscrepancyReport discrepancy_report(KernelCache& kc, const StepSequence& steps,
                                     const SimOptions& opt);

// Exact reference laws for small k.
LatticeDistribution convolve(const LatticeDistribution& a, const LatticeDistribution& b);
// Corner increment law averaged over the step law.
LatticeDistribution mixed_corner_law(ProbabilityContext& ctx, const LatticeDistribution& step);
// Exact law of lambda(k) (product chain) from lambda(0) = 0.
LatticeDistribution product_chain_marginal(KernelCache& kc, const StepSequence& steps,
                                           std::size_t k);
// Exact law of a fresh corner draw from lambda(k): sum over the chain marginal.
LatticeDistribution chain_corner_mixture(KernelCache& kc, const StepSequence& steps,
                                         std::size_t k);

double normal_cdf(double x);
// Anderson-Darling statistic against the standard normal.
double anderson_darling_stat(std::vector<double> sample);
// 1% critical value for the fully specified normal case.
inline constexpr double kAndersonDarlingCritical1pc = 3.857;

}  // namespace hallwalk

#endif
