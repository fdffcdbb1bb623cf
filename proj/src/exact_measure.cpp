#include "dyson/exact_measure.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "dyson/digest.hpp"
#include "dyson/reduction.hpp"

namespace dyson {

namespace {

void check_size(const SiteInterval& volume, int enumeration_limit) {
  int n = volume.size();
  if (n < 1) throw std::invalid_argument("boltzmann: empty volume");
  if (enumeration_limit > 30)
    throw std::invalid_argument("boltzmann: enumeration limit above 30 sites");
  if (n > enumeration_limit)
    throw std::invalid_argument("boltzmann: volume " + volume.describe() + " has " +
                                std::to_string(n) + " sites, limit is " +
                                std::to_string(enumeration_limit) +
                                "; use the Monte Carlo sampler for larger volumes");
}

// Pair weights and exterior field seen by each site, with the mask applied.
struct EnergyTables {
  int n = 0;
  std::vector<double> w;  // n*n, w[i*n+j] = J(|i-j|) if active else 0
  std::vector<double> h;  // boundary field
};

EnergyTables energy_tables(const SiteInterval& vol, const InteractionMask& mask,
                           const BoundaryCondition& bc, const CouplingFamily& J) {
  EnergyTables t;
  int n = vol.size();
  t.n = n;
  t.w.assign(static_cast<std::size_t>(n) * n, 0.0);
  t.h.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int a = vol.lo + i, b = vol.lo + j;
      if (!mask.active(a, b)) continue;
      double v = J.j(b - a);
      t.w[static_cast<std::size_t>(i) * n + j] = v;
      t.w[static_cast<std::size_t>(j) * n + i] = v;
    }
  if (bc.kind() != BoundaryCondition::Kind::free) {
    for (int i = 0; i < n; ++i) {
      int a = vol.lo + i;
      for (int s = 0; s < bc.left_extent(); ++s) {
        int b = vol.lo - 1 - s;
        if (mask.active(a, b)) t.h[i] += J.j(a - b) * bc.exterior_spin(b, vol);
      }
      for (int s = 0; s < bc.right_extent(); ++s) {
        int b = vol.hi + 1 + s;
        if (mask.active(a, b)) t.h[i] += J.j(b - a) * bc.exterior_spin(b, vol);
      }
    }
  }
  return t;
}

double full_energy(const EnergyTables& t, double beta, std::uint32_t g) {
  int n = t.n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double si = (g >> i) & 1u ? 1.0 : -1.0;
    double row = t.h[i];
    for (int j = i + 1; j < n; ++j)
      row += ((g >> j) & 1u ? 1.0 : -1.0) * t.w[static_cast<std::size_t>(i) * n + j];
    // h[i] belongs to site i once; the inner j-loop covers each pair once
    s += si * row;
  }
  return -beta * s;
}

// Shared tail: energies -> probabilities with a deterministic partition sum.
template <class Sum>
void normalize(ExactMeasure& m, Sum&& sum) {
  std::size_t count = m.p.size();
  double emin = min_value(m.p.data(), count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(count); ++c)
    m.p[c] = std::exp(-(m.p[c] - emin));
  double z = sum(m.p.data(), count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(count); ++c) m.p[c] /= z;
  m.log_partition = std::log(z) - emin;
}

double bc_truncation_bound(const SiteInterval& vol, const BoundaryCondition& bc,
                           double beta, const CouplingFamily& J) {
  if (bc.kind() == BoundaryCondition::Kind::free) return 0.0;
  double b = 0.0;
  for (int a = vol.lo; a <= vol.hi; ++a)
    b += beta * (J.tail(a - vol.lo + bc.left_extent() + 1).hi +
                 J.tail(vol.hi + bc.right_extent() + 1 - a).hi);
  return b;
}

}  // namespace

ExactMeasure boltzmann(const SiteInterval& volume, double beta,
                       const InteractionMask& mask, const BoundaryCondition& bc,
                       const CouplingFamily& J, int enumeration_limit) {
  check_size(volume, enumeration_limit);
  if (!(beta >= 0.0)) throw std::invalid_argument("boltzmann: need beta >= 0");
  int n = volume.size();
  EnergyTables t = energy_tables(volume, mask, bc, J);

  ExactMeasure m{volume, beta, mask, bc, J, {}, 0.0, 0.0};
  std::size_t count = std::size_t{1} << n;
  m.p.resize(count);

  // With free boundaries the energy is even under a global spin flip, term
  // by term, so only the half space with the top spin down is walked and the
  // rest is mirrored.  That keeps the symmetry exact in floating point.
  bool mirror = bc.kind() == BoundaryCondition::Kind::free && n > 1;
  std::size_t walk = mirror ? count / 2 : count;

  // Walk configurations in Gray-code order: step s flips bit ctz(s) of the
  // code, so each energy is an O(n) update on the previous one.  Chunks keep
  // the walk parallel and bound rounding drift.
  std::size_t chunk = std::min<std::size_t>(walk, kReduceBlock);
  std::size_t chunks = walk / chunk;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t cidx = 0; cidx < static_cast<std::ptrdiff_t>(chunks); ++cidx) {
    std::size_t s0 = static_cast<std::size_t>(cidx) * chunk;
    std::uint32_t g = static_cast<std::uint32_t>(s0 ^ (s0 >> 1));
    double e = full_energy(t, beta, g);
    m.p[g] = e;
    for (std::size_t s = s0 + 1; s < s0 + chunk; ++s) {
      int flip = std::countr_zero(s);
      double si = (g >> flip) & 1u ? 1.0 : -1.0;
      double local = t.h[flip];
      for (int j = 0; j < n; ++j)
        if (j != flip)
          local += ((g >> j) & 1u ? 1.0 : -1.0) *
                   t.w[static_cast<std::size_t>(flip) * n + j];
      e += 2.0 * beta * si * local;
      g ^= 1u << flip;
      m.p[g] = e;
    }
  }
  if (mirror) {
    std::uint32_t all = static_cast<std::uint32_t>(count - 1);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(walk); ++c)
      m.p[static_cast<std::uint32_t>(c) ^ all] = m.p[c];
  }

  normalize(m, [](const double* x, std::size_t c) { return pairwise_sum(x, c); });
  m.truncation_bound = bc_truncation_bound(volume, bc, beta, J);
  return m;
}

ExactMeasure boltzmann_reference(const SiteInterval& volume, double beta,
                                 const InteractionMask& mask, const BoundaryCondition& bc,
                                 const CouplingFamily& J, int enumeration_limit) {
  check_size(volume, enumeration_limit);
  if (!(beta >= 0.0)) throw std::invalid_argument("boltzmann: need beta >= 0");
  ExactMeasure m{volume, beta, mask, bc, J, {}, 0.0, 0.0};
  std::size_t count = std::size_t{1} << volume.size();
  m.p.resize(count);
  for (std::size_t c = 0; c < count; ++c)
    m.p[c] = hamiltonian(SpinConfig(volume, static_cast<std::uint32_t>(c)), bc, mask,
                         beta, J)
                 .value;
  normalize(m, [](const double* x, std::size_t c) { return pairwise_sum_serial(x, c); });
  m.truncation_bound = bc_truncation_bound(volume, bc, beta, J);
  return m;
}

ExactMeasure measure_from_matrix(const SiteInterval& volume, double beta,
                                 const SquareMatrix& a, int enumeration_limit) {
  check_size(volume, enumeration_limit);
  if (a.n != volume.size())
    throw std::invalid_argument("measure_from_matrix: matrix size must match volume");
  ExactMeasure m{volume, beta, InteractionMask::full(), BoundaryCondition::free_bc(),
                 CouplingFamily::table({}), {}, 0.0, 0.0};
  std::size_t count = std::size_t{1} << volume.size();
  m.p.resize(count);
  int n = a.n;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(count); ++c) {
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
      double si = (c >> i) & 1 ? 1.0 : -1.0;
      q += a.at(i, i);
      for (int j = i + 1; j < n; ++j)
        q += 2.0 * si * ((c >> j) & 1 ? 1.0 : -1.0) * a.at(i, j);
    }
    m.p[c] = 0.5 * beta * q;  // energy of the quadratic form
  }
  normalize(m, [](const double* x, std::size_t c) { return pairwise_sum(x, c); });
  return m;
}

double expectation(const ExactMeasure& m, const LocalFunction& f) {
  std::vector<int> pos;
  pos.reserve(f.domain().size());
  for (int site : f.domain()) {
    if (!m.volume.contains(site))
      throw std::invalid_argument("expectation: function site " + std::to_string(site) +
                                  " outside volume " + m.volume.describe());
    pos.push_back(site - m.volume.lo);
  }
  return pairwise_sum_indexed(m.size(), [&](std::size_t c) {
    std::uint32_t bits = 0;
    for (std::size_t t = 0; t < pos.size(); ++t)
      bits |= ((static_cast<std::uint32_t>(c) >> pos[t]) & 1u) << t;
    return m.p[c] * f.eval_bits(bits);
  });
}

double expectation_serial(const ExactMeasure& m, const LocalFunction& f) {
  std::vector<int> pos;
  for (int site : f.domain()) {
    if (!m.volume.contains(site))
      throw std::invalid_argument("expectation: function site outside volume");
    pos.push_back(site - m.volume.lo);
  }
  return pairwise_sum_indexed_serial(m.size(), [&](std::size_t c) {
    std::uint32_t bits = 0;
    for (std::size_t t = 0; t < pos.size(); ++t)
      bits |= ((static_cast<std::uint32_t>(c) >> pos[t]) & 1u) << t;
    return m.p[c] * f.eval_bits(bits);
  });
}

double correlation(const ExactMeasure& m, const std::vector<int>& sites) {
  std::uint32_t sm = 0;
  for (int site : sites) {
    if (!m.volume.contains(site))
      throw std::invalid_argument("correlation: site outside volume");
    sm ^= 1u << (site - m.volume.lo);  // even repetitions cancel, sigma^2 = 1
  }
  int bits_in_mask = std::popcount(sm);
  return pairwise_sum_indexed(m.size(), [&](std::size_t c) {
    int minus = bits_in_mask - std::popcount(static_cast<std::uint32_t>(c) & sm);
    return m.p[c] * (minus & 1 ? -1.0 : 1.0);
  });
}

double susceptibility_row(const ExactMeasure& m, int j) {
  if (!m.volume.contains(j))
    throw std::invalid_argument("susceptibility_row: site outside volume");
  int pj = j - m.volume.lo;
  int n = m.sites();
  return pairwise_sum_indexed(m.size(), [&](std::size_t c) {
    double sj = (c >> pj) & 1 ? 1.0 : -1.0;
    double mag = 2.0 * std::popcount(static_cast<std::uint32_t>(c)) - n;
    return m.p[c] * sj * mag;
  });
}

double susceptibility_fv(const ExactMeasure& m) {
  double best = 0.0;
  for (int j = m.volume.lo; j <= m.volume.hi; ++j)
    best = std::max(best, susceptibility_row(m, j));
  return best;
}

std::uint64_t ExactMeasure::digest() const {
  std::uint64_t h = fnv1a64("measure");
  h = fnv1a64_bytes(&volume.lo, sizeof volume.lo, h);
  h = fnv1a64_bytes(&volume.hi, sizeof volume.hi, h);
  h = fnv1a64_bytes(&beta, sizeof beta, h);
  std::uint64_t parts[3] = {mask.digest(), bc.digest(), couplings.digest()};
  h = fnv1a64_bytes(parts, sizeof parts, h);
  return h;
}

}  // namespace dyson
