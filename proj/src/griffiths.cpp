#include "dyson/griffiths.hpp"

#include <algorithm>
#include <stdexcept>

namespace dyson {

namespace {

struct SpinSet {
  std::vector<int> sites;
  int a, b;
};

}  // namespace

GriffithsReport griffiths_suite(const CouplingFamily& J, const SiteInterval& volume,
                                const std::vector<double>& beta_grid,
                                double tolerance, const BoundaryCondition& bc) {
  if (volume.size() < 1 || volume.size() > kDefaultEnumerationLimit)
    throw std::invalid_argument("griffiths_suite: volume size out of range");
  if (beta_grid.empty())
    throw std::invalid_argument("griffiths_suite: empty beta grid");
  for (std::size_t i = 0; i < beta_grid.size(); ++i) {
    if (beta_grid[i] < 0.0)
      throw std::invalid_argument("griffiths_suite: negative beta");
    if (i > 0 && beta_grid[i] <= beta_grid[i - 1])
      throw std::invalid_argument("griffiths_suite: beta grid must increase");
  }
  if (tolerance < 0.0)
    throw std::invalid_argument("griffiths_suite: negative tolerance");

  // Every single-spin and every pair expectation gets checked.
  std::vector<SpinSet> sets;
  for (int a = volume.lo; a <= volume.hi; ++a) sets.push_back({{a}, a, a});
  for (int a = volume.lo; a <= volume.hi; ++a)
    for (int b = a + 1; b <= volume.hi; ++b) sets.push_back({{a, b}, a, b});

  // Mask chain: the intermediate family from the product interaction up to
  // radius R covers every cross pair the volume can host, so its last
  // element agrees with the full mask on this volume.
  int radius = std::max(-volume.lo, volume.hi);
  std::int64_t k_max = static_cast<std::int64_t>(radius) * (radius + 1);
  std::vector<InteractionMask> masks;
  for (std::int64_t k = 0; k <= k_max; ++k)
    masks.push_back(InteractionMask::intermediate(k));
  std::size_t chain_len = masks.size();
  masks.push_back(InteractionMask::full());
  masks.push_back(InteractionMask::half_right());
  masks.push_back(InteractionMask::half_left());
  std::size_t full_at = chain_len;

  // corr[mask][beta][set]
  std::vector<std::vector<std::vector<double>>> corr(
      masks.size(), std::vector<std::vector<double>>(beta_grid.size()));
  for (std::size_t mi = 0; mi < masks.size(); ++mi) {
    for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
      ExactMeasure m = boltzmann(volume, beta_grid[bi], masks[mi], bc, J);
      auto& row = corr[mi][bi];
      row.reserve(sets.size());
      for (const auto& s : sets) row.push_back(correlation(m, s.sites));
    }
  }

  GriffithsReport report;
  report.tolerance = tolerance;
  auto flag = [&](const std::string& kind, std::size_t mi, std::size_t bi,
                  std::int64_t k, std::size_t si, double lhs, double rhs) {
    ++report.checks;
    if (lhs < rhs - tolerance)
      report.violations.push_back({kind, masks[mi].id(), beta_grid[bi], k,
                                   sets[si].a, sets[si].b, lhs, rhs});
  };

  for (std::size_t mi = 0; mi < masks.size(); ++mi)
    for (std::size_t bi = 0; bi < beta_grid.size(); ++bi)
      for (std::size_t si = 0; si < sets.size(); ++si)
        flag("positivity", mi, bi, -1, si, corr[mi][bi][si], 0.0);

  for (std::size_t mi = 0; mi < masks.size(); ++mi)
    for (std::size_t bi = 1; bi < beta_grid.size(); ++bi)
      for (std::size_t si = 0; si < sets.size(); ++si)
        flag("beta-monotone", mi, bi, -1, si, corr[mi][bi][si],
             corr[mi][bi - 1][si]);

  for (std::size_t bi = 0; bi < beta_grid.size(); ++bi)
    for (std::size_t si = 0; si < sets.size(); ++si) {
      for (std::size_t mi = 0; mi + 1 < chain_len; ++mi)
        flag("mask-monotone", mi + 1, bi, static_cast<std::int64_t>(mi), si,
             corr[mi + 1][bi][si], corr[mi][bi][si]);
      flag("mask-monotone", full_at, bi, k_max, si, corr[full_at][bi][si],
           corr[chain_len - 1][bi][si]);
    }

  return report;
}

}  // namespace dyson
