#include "dyson/densities.hpp"

#include <cmath>
#include <stdexcept>

#include "dyson/interaction.hpp"
#include "dyson/reduction.hpp"

namespace dyson {

DensityTable flip_density(const ExactMeasure& m, int site) {
  if (!m.volume.contains(site))
    throw std::invalid_argument("flip_density: site outside volume");
  std::uint32_t bit = 1u << (site - m.volume.lo);
  DensityTable d;
  d.values.resize(m.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(m.size()); ++c)
    d.values[c] = m.p[c ^ bit] / m.p[c];
  d.integral = pairwise_sum_indexed(m.size(),
                                    [&](std::size_t c) { return m.p[c] * d.values[c]; });
  return d;
}

IntermediateDensity intermediate_density(int radius, std::int64_t k, double beta,
                                         const CouplingFamily& J) {
  if (radius < 1) throw std::invalid_argument("intermediate_density: need radius >= 1");
  std::int64_t k_max = static_cast<std::int64_t>(radius) * (radius + 1);
  if (k < 0 || k > k_max)
    throw std::invalid_argument(
        "intermediate_density: k must lie in [0, N(N+1)] so every kept cross pair "
        "fits the volume; got k=" + std::to_string(k) + " for N=" + std::to_string(radius));
  SiteInterval vol{-radius, radius};
  auto bc = BoundaryCondition::free_bc();

  IntermediateDensity out;
  out.radius = radius;
  out.k = k;
  out.beta = beta;
  out.base = boltzmann(vol, beta, InteractionMask::intermediate(0), bc, J);
  out.target = k == 0 ? out.base
                      : boltzmann(vol, beta, InteractionMask::intermediate(k), bc, J);

  auto pairs = cross_pairs(k);
  auto w_of = [&](std::uint32_t c) {
    SpinConfig s(vol, c);
    double w = 0.0;
    for (const auto& pr : pairs)
      w += -beta * J.j(pr.left_depth + pr.right_site) * s.spin(-pr.left_depth) *
           s.spin(pr.right_site);
    return w;
  };

  std::size_t count = out.base.size();
  out.density.resize(count);
  for (std::size_t c = 0; c < count; ++c)
    out.density[c] = std::exp(-w_of(static_cast<std::uint32_t>(c)));
  double norm = pairwise_sum_indexed_serial(
      count, [&](std::size_t c) { return out.base.p[c] * out.density[c]; });
  for (double& v : out.density) v /= norm;
  out.log_normalizer = std::log(norm);

  out.entropy = pairwise_sum_indexed_serial(count, [&](std::size_t c) {
    double f = out.density[c];
    return f > 0.0 ? out.base.p[c] * f * std::log(f) : 0.0;
  });
  out.w_mean = pairwise_sum_indexed_serial(count, [&](std::size_t c) {
    return out.target.p[c] * w_of(static_cast<std::uint32_t>(c));
  });

  // one factor per restored pair, each against the previous measure
  out.telescoping_factors.reserve(k);
  for (std::int64_t iota = 1; iota <= k; ++iota) {
    const ExactMeasure prev =
        iota == 1 ? out.base
                  : boltzmann(vol, beta, InteractionMask::intermediate(iota - 1), bc, J);
    const CrossPair pr = pairs[iota - 1];
    double factor = pairwise_sum_indexed_serial(count, [&](std::size_t c) {
      SpinConfig s(vol, static_cast<std::uint32_t>(c));
      double phi = -J.j(pr.left_depth + pr.right_site) * s.spin(-pr.left_depth) *
                   s.spin(pr.right_site);
      return prev.p[c] * std::exp(-beta * phi);
    });
    out.telescoping_factors.push_back(factor);
  }
  return out;
}

HalfLineDensity half_line_density(int cross_range, int depth, double beta,
                                  const CouplingFamily& J, int left_window) {
  if (cross_range < 1 || depth < 1 || left_window < 1)
    throw std::invalid_argument("half_line_density: need cross_range, depth, left_window >= 1");
  int right_sites = std::max(cross_range + 1, depth);  // window [0, R]
  if (right_sites > kDefaultEnumerationLimit || left_window > kDefaultEnumerationLimit)
    throw std::invalid_argument("half_line_density: window too large to enumerate");

  auto bc = BoundaryCondition::free_bc();
  auto full = InteractionMask::full();
  ExactMeasure nu_minus = boltzmann({-left_window, -1}, beta, full, bc, J);
  ExactMeasure nu_plus = boltzmann({0, right_sites - 1}, beta, full, bc, J);

  int n_cross = std::min(cross_range, left_window);  // left depths actually present
  int jmax = cross_range;                            // right sites 0..N
  std::size_t xi_count = nu_minus.size();
  std::size_t eta_count = nu_plus.size();

  // c[xi][j] = -beta sum_i J(i+j) xi_{-i}; then W(xi, eta) = sum_j eta_j c_j(xi)
  std::vector<double> cvals(xi_count * (jmax + 1));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(xi_count); ++x) {
    for (int j = 0; j <= jmax; ++j) {
      double s = 0.0;
      for (int i = 1; i <= n_cross; ++i) {
        double xi = (x >> (left_window - i)) & 1 ? 1.0 : -1.0;  // site -i
        s += J.j(i + j) * xi;
      }
      cvals[static_cast<std::size_t>(x) * (jmax + 1) + j] = -beta * s;
    }
  }

  HalfLineDensity out;
  out.cross_range = cross_range;
  out.depth = depth;
  out.left_window = left_window;
  out.beta = beta;
  out.right_window = right_sites;
  out.full_values.resize(eta_count);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(eta_count); ++e) {
    double acc = 0.0;
    for (std::size_t x = 0; x < xi_count; ++x) {
      double w = 0.0;
      const double* cv = &cvals[x * (jmax + 1)];
      for (int j = 0; j <= jmax; ++j) w += ((e >> j) & 1 ? 1.0 : -1.0) * cv[j];
      acc += nu_minus.p[x] * std::exp(-w);
    }
    out.full_values[e] = acc;
  }

  out.denom = pairwise_sum_indexed(
      eta_count, [&](std::size_t e) { return nu_plus.p[e] * out.full_values[e]; });
  for (double& v : out.full_values) v /= out.denom;
  out.min_full = min_value(out.full_values.data(), eta_count);
  out.max_full = max_value(out.full_values.data(), eta_count);

  // int W(., eta) d nu_minus vanishes by spin-flip symmetry of nu_minus;
  // report how far the computed means are from that
  double defect = 0.0;
  for (int j = 0; j <= jmax; ++j) {
    double ec = pairwise_sum_indexed_serial(xi_count, [&](std::size_t x) {
      return nu_minus.p[x] * cvals[x * (jmax + 1) + j];
    });
    defect += std::abs(ec);
  }
  out.symmetry_defect = defect;

  // conditional average over the coordinates beyond the cylinder head
  std::size_t heads = std::size_t{1} << depth;
  std::uint32_t head_mask = static_cast<std::uint32_t>(heads - 1);
  out.cylinder_values.assign(heads, 0.0);
  std::vector<double> head_weight(heads, 0.0);
  for (std::size_t e = 0; e < eta_count; ++e) {
    std::size_t h = e & head_mask;
    head_weight[h] += nu_plus.p[e];
    out.cylinder_values[h] += nu_plus.p[e] * out.full_values[e];
  }
  for (std::size_t h = 0; h < heads; ++h) out.cylinder_values[h] /= head_weight[h];
  return out;
}

std::vector<double> variation_profile(const std::vector<double>& values, int depth) {
  if (values.size() != (std::size_t{1} << depth))
    throw std::invalid_argument("variation_profile: need 2^depth values");
  std::vector<double> var(depth + 1, 0.0);
  for (int d = 0; d <= depth; ++d) {
    std::size_t groups = std::size_t{1} << d;
    double worst = 0.0;
    for (std::size_t g = 0; g < groups; ++g) {
      double lo = 1.0 / 0.0, hi = -1.0 / 0.0;
      for (std::size_t rest = 0; rest < (values.size() >> d); ++rest) {
        double v = values[(rest << d) | g];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      worst = std::max(worst, hi - lo);
    }
    var[d] = worst;
  }
  return var;
}

}  // namespace dyson
