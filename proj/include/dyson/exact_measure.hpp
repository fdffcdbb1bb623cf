#pragma once

#include <cstdint>
#include <vector>

#include "dyson/coupling_matrix.hpp"
#include "dyson/couplings.hpp"
#include "dyson/interaction.hpp"
#include "dyson/local_function.hpp"
#include "dyson/spin_config.hpp"

namespace dyson {

inline constexpr int kDefaultEnumerationLimit = 24;

// Finite-volume Boltzmann measure, fully enumerated.  p[c] is the
// probability of the configuration whose packed bits equal c.
struct ExactMeasure {
  SiteInterval volume;
  double beta = 0.0;
  InteractionMask mask = InteractionMask::full();
  BoundaryCondition bc = BoundaryCondition::free_bc();
  CouplingFamily couplings = CouplingFamily::table({});
  std::vector<double> p;
  double log_partition = 0.0;
  double truncation_bound = 0.0;  // from the boundary condition, 0 when free

  int sites() const { return volume.size(); }
  std::size_t size() const { return p.size(); }
  SpinConfig config(std::uint32_t c) const { return SpinConfig(volume, c); }
  std::uint64_t digest() const;
};

// Gray-code walk per 4096-configuration chunk: one full Hamiltonian per
// chunk, O(n) increments inside, deterministic pairwise normalization.
ExactMeasure boltzmann(const SiteInterval& volume, double beta,
                       const InteractionMask& mask, const BoundaryCondition& bc,
                       const CouplingFamily& J,
                       int enumeration_limit = kDefaultEnumerationLimit);

// Serial oracle: evaluates every configuration from scratch.
ExactMeasure boltzmann_reference(const SiteInterval& volume, double beta,
                                 const InteractionMask& mask, const BoundaryCondition& bc,
                                 const CouplingFamily& J,
                                 int enumeration_limit = kDefaultEnumerationLimit);

// Boltzmann measure of the quadratic energy (beta/2) (sigma, A sigma).
ExactMeasure measure_from_matrix(const SiteInterval& volume, double beta,
                                 const SquareMatrix& a,
                                 int enumeration_limit = kDefaultEnumerationLimit);

double expectation(const ExactMeasure& m, const LocalFunction& f);
double expectation_serial(const ExactMeasure& m, const LocalFunction& f);

// <prod over listed sites of sigma_s>
double correlation(const ExactMeasure& m, const std::vector<int>& sites);

// sum_i <sigma_i sigma_j> over the volume, for one j / maximized over j
double susceptibility_row(const ExactMeasure& m, int j);
double susceptibility_fv(const ExactMeasure& m);

}  // namespace dyson
