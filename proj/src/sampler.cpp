#include "dyson/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "dyson/reduction.hpp"

namespace dyson {

ChainState::ChainState(SiteInterval volume, double beta, InteractionMask mask,
                       BoundaryCondition bc, CouplingFamily couplings,
                       std::uint64_t seed, int cutoff)
    : volume_(volume),
      beta_(beta),
      mask_(std::move(mask)),
      bc_(std::move(bc)),
      couplings_(std::move(couplings)),
      rng_(seed),
      cutoff_(cutoff),
      n_(volume.size()) {
  if (n_ < 1) throw std::invalid_argument("ChainState: empty volume");
  if (n_ > kMaxChainSites)
    throw std::invalid_argument("ChainState: volume has " + std::to_string(n_) +
                                " sites, limit is " + std::to_string(kMaxChainSites));
  if (!(beta_ >= 0.0)) throw std::invalid_argument("ChainState: beta must be >= 0");
  if (cutoff_ < 0) throw std::invalid_argument("ChainState: cutoff must be >= 0");
  // Couplings are nonnegative by the family's own construction, so the
  // ferromagnetic assumption needs no separate check here.
  mask_full_ = mask_.mode() == InteractionMask::Mode::full;

  int max_ext = std::max(bc_.left_extent(), bc_.right_extent());
  jtab_.assign(static_cast<std::size_t>(n_ + max_ext), 0.0);
  for (std::size_t d = 1; d < jtab_.size(); ++d)
    jtab_[d] = couplings_.j(static_cast<int>(d));
  if (cutoff_ > 0) cutoff_remainder_ = couplings_.tail(cutoff_ + 1).hi;

  sigma_.assign(static_cast<std::size_t>(n_), 1);

  boundary_field_.assign(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    int site = volume_.lo + i;
    double acc = 0.0;
    for (int t = 0; t < bc_.left_extent(); ++t) {
      int e = volume_.lo - 1 - t;
      int d = site - e;
      if (cutoff_ > 0 && d > cutoff_) continue;
      if (mask_full_ || mask_.active(site, e))
        acc += bc_.exterior_spin(e, volume_) * jtab_[static_cast<std::size_t>(d)];
    }
    for (int t = 0; t < bc_.right_extent(); ++t) {
      int e = volume_.hi + 1 + t;
      int d = e - site;
      if (cutoff_ > 0 && d > cutoff_) continue;
      if (mask_full_ || mask_.active(site, e))
        acc += bc_.exterior_spin(e, volume_) * jtab_[static_cast<std::size_t>(d)];
    }
    boundary_field_[static_cast<std::size_t>(i)] = acc;
  }

  field_.assign(static_cast<std::size_t>(n_), 0.0);
  resync_fields();
}

double ChainState::coupling_between(int idx_a, int idx_b) const {
  int d = std::abs(idx_a - idx_b);
  if (d == 0) return 0.0;
  if (cutoff_ > 0 && d > cutoff_) return 0.0;
  if (!mask_full_ && !mask_.active(volume_.lo + idx_a, volume_.lo + idx_b)) return 0.0;
  return jtab_[static_cast<std::size_t>(d)];
}

void ChainState::randomize() {
  for (int i = 0; i < n_; ++i)
    sigma_[static_cast<std::size_t>(i)] = static_cast<signed char>(rng_.sign());
  resync_fields();
}

int ChainState::step_site(int site) {
  if (!volume_.contains(site))
    throw std::invalid_argument("step_site: site outside the volume");
  int idx = site - volume_.lo;
  double h = field_[static_cast<std::size_t>(idx)];
  // Heat-bath rule: draw the new spin from the exact one-site conditional,
  // P(+1 | rest) = 1 / (1 + exp(-2 beta h)).  At beta = 0 this is a fair coin.
  double p_plus = 1.0 / (1.0 + std::exp(-2.0 * beta_ * h));
  int drawn = rng_.uniform() < p_plus ? 1 : -1;
  int old = sigma_[static_cast<std::size_t>(idx)];
  if (drawn != old) {
    sigma_[static_cast<std::size_t>(idx)] = static_cast<signed char>(drawn);
    double delta = 2.0 * static_cast<double>(drawn);
    int lo_j = cutoff_ > 0 ? std::max(0, idx - cutoff_) : 0;
    int hi_j = cutoff_ > 0 ? std::min(n_ - 1, idx + cutoff_) : n_ - 1;
    if (mask_full_) {
      for (int j = lo_j; j < idx; ++j)
        field_[static_cast<std::size_t>(j)] += delta * jtab_[static_cast<std::size_t>(idx - j)];
      for (int j = idx + 1; j <= hi_j; ++j)
        field_[static_cast<std::size_t>(j)] += delta * jtab_[static_cast<std::size_t>(j - idx)];
    } else {
      for (int j = lo_j; j <= hi_j; ++j) {
        if (j == idx) continue;
        if (!mask_.active(site, volume_.lo + j)) continue;
        field_[static_cast<std::size_t>(j)] += delta * jtab_[static_cast<std::size_t>(std::abs(j - idx))];
      }
    }
  }
  ++steps_;
  return drawn;
}

void ChainState::sweep(std::size_t count) {
  for (std::size_t s = 0; s < count; ++s) {
    for (int i = 0; i < n_; ++i) step_site(volume_.lo + i);
    if (resync_interval_ > 0 && ++sweeps_since_resync_ >= resync_interval_)
      resync_fields();
  }
}

int ChainState::spin(int site) const {
  if (!volume_.contains(site))
    throw std::invalid_argument("spin: site outside the volume");
  return sigma_[static_cast<std::size_t>(site - volume_.lo)];
}

double ChainState::magnetization() const {
  long sum = 0;
  for (int i = 0; i < n_; ++i) sum += sigma_[static_cast<std::size_t>(i)];
  return static_cast<double>(sum) / static_cast<double>(n_);
}

double ChainState::pair_product(int a, int b) const {
  return static_cast<double>(spin(a)) * static_cast<double>(spin(b));
}

int ChainState::center_site() const { return volume_.lo + n_ / 2; }

double ChainState::center_correlation_sum() const {
  long sum = 0;
  for (int i = 0; i < n_; ++i) sum += sigma_[static_cast<std::size_t>(i)];
  return static_cast<double>(sigma_[static_cast<std::size_t>(n_ / 2)]) *
         static_cast<double>(sum);
}

double ChainState::eval_local(const LocalFunction& f) const {
  std::uint32_t bits = 0;
  const auto& dom = f.domain();
  for (std::size_t t = 0; t < dom.size(); ++t) {
    if (!volume_.contains(dom[t]))
      throw std::invalid_argument("eval_local: function domain leaves the volume");
    if (spin(dom[t]) > 0) bits |= std::uint32_t(1) << t;
  }
  return f.eval_bits(bits);
}

double ChainState::cached_field(int site) const {
  if (!volume_.contains(site))
    throw std::invalid_argument("cached_field: site outside the volume");
  return field_[static_cast<std::size_t>(site - volume_.lo)];
}

double ChainState::recompute_field(int site) const {
  if (!volume_.contains(site))
    throw std::invalid_argument("recompute_field: site outside the volume");
  int idx = site - volume_.lo;
  int lo_j = cutoff_ > 0 ? std::max(0, idx - cutoff_) : 0;
  int hi_j = cutoff_ > 0 ? std::min(n_ - 1, idx + cutoff_) : n_ - 1;
  double acc = 0.0;
  for (int j = lo_j; j <= hi_j; ++j)
    acc += coupling_between(idx, j) * static_cast<double>(sigma_[static_cast<std::size_t>(j)]);
  return acc + boundary_field_[static_cast<std::size_t>(idx)];
}

double ChainState::max_field_deviation() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    worst = std::max(worst, std::abs(field_[static_cast<std::size_t>(i)] -
                                     recompute_field(volume_.lo + i)));
  return worst;
}

void ChainState::resync_fields() {
  for (int i = 0; i < n_; ++i)
    field_[static_cast<std::size_t>(i)] = recompute_field(volume_.lo + i);
  sweeps_since_resync_ = 0;
}

namespace {

double sample_variance(const std::vector<double>& x, double mean) {
  if (x.size() < 2) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(x.size() - 1);
}

double lag1_autocorrelation(const std::vector<double>& x, double mean) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double c = x[i] - mean;
    den += c * c;
    if (i + 1 < x.size()) num += c * (x[i + 1] - mean);
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

std::vector<double> batch_averages(const std::vector<double>& x, std::size_t L) {
  std::size_t nb = x.size() / L;
  std::vector<double> b(nb, 0.0);
  for (std::size_t k = 0; k < nb; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < L; ++i) acc += x[k * L + i];
    b[k] = acc / static_cast<double>(L);
  }
  return b;
}

}  // namespace

EstimateWithError batch_means(const std::vector<double>& series) {
  if (series.size() < 40)
    throw std::invalid_argument("batch_means: need at least 40 samples");

  // Double the batch size until the batch means decorrelate, keeping at
  // least 20 batches.  The largest usable size wins if nothing decorrelates.
  std::size_t L = 1;
  std::size_t chosen = 1;
  bool resolved = false;
  while (series.size() / L >= 20) {
    auto b = batch_averages(series, L);
    double m = 0.0;
    for (double v : b) m += v;
    m /= static_cast<double>(b.size());
    chosen = L;
    if (std::abs(lag1_autocorrelation(b, m)) < 0.05) {
      resolved = true;
      break;
    }
    L *= 2;
  }

  auto b = batch_averages(series, chosen);
  std::size_t used = b.size() * chosen;
  double mean = 0.0;
  for (std::size_t i = 0; i < used; ++i) mean += series[i];
  mean /= static_cast<double>(used);
  double batch_mean = 0.0;
  for (double v : b) batch_mean += v;
  batch_mean /= static_cast<double>(b.size());

  double var_b = sample_variance(b, batch_mean);
  double var_raw = sample_variance(series, mean);

  EstimateWithError est;
  est.mean = mean;
  est.stderr_value = std::sqrt(var_b / static_cast<double>(b.size()));
  est.batches = static_cast<int>(b.size());
  est.batch_size = chosen;
  est.tau = var_raw > 0.0
                ? static_cast<double>(chosen) * var_b / (2.0 * var_raw)
                : 0.0;
  est.resolved = resolved;
  return est;
}

namespace {

template <typename Observable>
EstimateWithError run_estimator(ChainState& chain, std::size_t burnin,
                                std::size_t sweeps, Observable&& value) {
  chain.sweep(burnin);
  std::vector<double> series;
  series.reserve(sweeps);
  for (std::size_t s = 0; s < sweeps; ++s) {
    chain.sweep(1);
    series.push_back(value(chain));
  }
  auto est = batch_means(series);
  est.burnin_adequate = static_cast<double>(burnin) >= 10.0 * est.tau;
  return est;
}

}  // namespace

EstimateWithError estimate_mean(ChainState& chain, const LocalFunction& f,
                                std::size_t burnin, std::size_t sweeps) {
  return run_estimator(chain, burnin, sweeps,
                       [&f](const ChainState& c) { return c.eval_local(f); });
}

EstimateWithError magnetization_mc(ChainState& chain, std::size_t burnin,
                                   std::size_t sweeps) {
  return run_estimator(chain, burnin, sweeps,
                       [](const ChainState& c) { return c.magnetization(); });
}

EstimateWithError susceptibility_mc(ChainState& chain, std::size_t burnin,
                                    std::size_t sweeps) {
  return run_estimator(chain, burnin, sweeps, [](const ChainState& c) {
    return c.center_correlation_sum();
  });
}

TailTable empirical_tail(ChainState& chain, const LocalFunction& f,
                         const std::vector<double>& t_grid, std::size_t samples,
                         double d_constant, std::size_t burnin) {
  if (!(d_constant > 0.0))
    throw std::invalid_argument("empirical_tail: d_constant must be positive");
  chain.sweep(burnin);
  std::vector<double> series;
  series.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    chain.sweep(1);
    series.push_back(chain.eval_local(f));
  }
  double mean = pairwise_sum(series) / static_cast<double>(series.size());
  double osc_sq = f.total_oscillation_sq();

  TailTable table;
  table.f_mean = mean;
  table.oscillation_sq = osc_sq;
  table.d_constant = d_constant;
  table.rows.reserve(t_grid.size());
  std::vector<double> indicator(series.size());
  for (double t : t_grid) {
    for (std::size_t i = 0; i < series.size(); ++i)
      indicator[i] = series[i] - mean >= t ? 1.0 : 0.0;
    auto est = batch_means(indicator);
    TailRow row;
    row.t = t;
    row.probability = est.mean;
    row.stderr_value = est.stderr_value;
    row.bound = osc_sq > 0.0
                    ? std::exp(-2.0 * t * t / (d_constant * osc_sq))
                    : (t > 0.0 ? 0.0 : 1.0);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace dyson
