#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dyson/couplings.hpp"
#include "dyson/interaction.hpp"
#include "dyson/local_function.hpp"
#include "dyson/rng.hpp"
#include "dyson/spin_config.hpp"

namespace dyson {

// Single-spin-flip heat-bath chain targeting the same finite-volume Gibbs
// weights the exact module enumerates, for volumes where enumeration is out
// of reach.  Local fields are cached and updated incrementally on every
// accepted flip; a periodic full recomputation keeps rounding drift bounded.
inline constexpr int kMaxChainSites = 100000;

class ChainState {
 public:
  // cutoff == 0 keeps exact O(n) field updates; cutoff > 0 drops couplings
  // beyond that distance everywhere and reports the discarded tail weight.
  ChainState(SiteInterval volume, double beta, InteractionMask mask,
             BoundaryCondition bc, CouplingFamily couplings,
             std::uint64_t seed, int cutoff = 0);

  // Replaces the all-plus start with fair coin spins drawn from the stream.
  void randomize();

  // One heat-bath update at the given site; returns the spin drawn.  The
  // stream advances exactly once whether or not the spin changes.
  int step_site(int site);

  // count full sweeps in site order, with automatic field resyncs.
  void sweep(std::size_t count = 1);

  int spin(int site) const;
  double magnetization() const;          // volume-averaged spin
  double pair_product(int a, int b) const;
  // sigma_mid * sum_j sigma_j, the per-configuration term whose mean is the
  // centered-site correlation sum; mid is the middle site of the volume.
  double center_correlation_sum() const;
  int center_site() const;
  double eval_local(const LocalFunction& f) const;

  double cached_field(int site) const;
  double recompute_field(int site) const;  // fresh sum, the drift oracle
  double max_field_deviation() const;
  void resync_fields();
  // Sweeps between automatic resyncs (default 1000); 0 disables them.
  void set_resync_interval(std::size_t sweeps_between) { resync_interval_ = sweeps_between; }

  const SiteInterval& volume() const { return volume_; }
  double beta() const { return beta_; }
  int site_count() const { return n_; }
  int cutoff() const { return cutoff_; }
  // Per-site coupling weight ignored by a positive cutoff; zero when exact.
  double cutoff_remainder() const { return cutoff_remainder_; }
  std::uint64_t steps() const { return steps_; }

 private:
  SiteInterval volume_;
  double beta_;
  InteractionMask mask_;
  BoundaryCondition bc_;
  CouplingFamily couplings_;
  CounterRng rng_;
  int cutoff_;
  int n_;
  bool mask_full_;
  double cutoff_remainder_ = 0.0;
  std::vector<signed char> sigma_;
  std::vector<double> jtab_;            // jtab_[d] = J(d), distances within reach
  std::vector<double> boundary_field_;  // frozen exterior contribution per site
  std::vector<double> field_;           // cached interior + boundary field
  std::uint64_t steps_ = 0;
  std::size_t resync_interval_ = 1000;
  std::size_t sweeps_since_resync_ = 0;

  double coupling_between(int idx_a, int idx_b) const;
};

// Batch-means error bars.  tau is the integrated autocorrelation time in
// units of samples, normalized so that independent samples give tau = 1/2.
struct EstimateWithError {
  double mean = 0.0;
  double stderr_value = 0.0;
  int batches = 0;
  std::size_t batch_size = 1;
  double tau = 0.0;
  // Batch size doubling reached a lag-1 batch autocorrelation below 0.05.
  bool resolved = false;
  // burnin >= 10 * tau held for the run that produced this estimate.
  bool burnin_adequate = true;
};

// Needs at least 40 samples so that one doubling is always possible.
EstimateWithError batch_means(const std::vector<double>& series);

// Each estimator below runs `burnin` discarded sweeps, then `sweeps` recorded
// ones with one sample per sweep.
EstimateWithError estimate_mean(ChainState& chain, const LocalFunction& f,
                                std::size_t burnin, std::size_t sweeps);
EstimateWithError magnetization_mc(ChainState& chain, std::size_t burnin,
                                   std::size_t sweeps);
EstimateWithError susceptibility_mc(ChainState& chain, std::size_t burnin,
                                    std::size_t sweeps);

struct TailRow {
  double t = 0.0;
  double probability = 0.0;   // estimated P(F - empirical mean >= t)
  double stderr_value = 0.0;
  double bound = 0.0;         // exp(-2 t^2 / (D * osc^2))
};

struct TailTable {
  double f_mean = 0.0;
  double oscillation_sq = 0.0;
  double d_constant = 0.0;
  std::vector<TailRow> rows;
};

TailTable empirical_tail(ChainState& chain, const LocalFunction& f,
                         const std::vector<double>& t_grid, std::size_t samples,
                         double d_constant, std::size_t burnin);

}  // namespace dyson
