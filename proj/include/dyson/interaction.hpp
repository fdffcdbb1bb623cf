#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dyson/couplings.hpp"
#include "dyson/interval.hpp"
#include "dyson/spin_config.hpp"

namespace dyson {

// Pair of sites {-i, j} straddling the origin cut, with i >= 1 and j >= 0.
// The canonical enumeration sorts by radius max(i, j) ascending, breaking
// ties by i then j.  Radius r contributes 2r pairs, so the first r(r+1)
// pairs are exactly those with radius <= r.
struct CrossPair {
  int left_depth = 0;  // i, site -i
  int right_site = 0;  // j
  bool operator==(const CrossPair&) const = default;
};

std::vector<CrossPair> cross_pairs(std::int64_t count);
std::int64_t cross_pair_rank(int i, int j);  // 1-based position
CrossPair cross_pair_at(std::int64_t rank);

// Which pair interactions are switched on.  The intermediate family keeps
// all pairs on one side of the origin cut plus the first k cross pairs in
// canonical order; k = 0 is the product-type interaction.
class InteractionMask {
 public:
  enum class Mode { full, half_right, half_left, intermediate, pair_list };

  static InteractionMask full() { return InteractionMask(Mode::full); }
  static InteractionMask half_right() { return InteractionMask(Mode::half_right); }
  static InteractionMask half_left() { return InteractionMask(Mode::half_left); }
  static InteractionMask intermediate(std::int64_t k);
  static InteractionMask pair_list(std::vector<std::pair<int, int>> pairs);

  bool active(int a, int b) const;

  Mode mode() const { return mode_; }
  std::int64_t cross_count() const { return k_; }
  std::vector<std::pair<int, int>> pairs() const;  // pair_list contents

  std::string id() const;
  std::uint32_t dump_id() const;
  std::uint64_t digest() const;

 private:
  explicit InteractionMask(Mode m) : mode_(m) {}
  Mode mode_;
  std::int64_t k_ = 0;
  std::vector<std::uint64_t> pairs_;  // pair_list, encoded sorted (a,b) keys
};

// Spins outside the volume.  free declares none; plus/minus/fixed declare
// them on a finite extent on each side, and everything further out is
// dropped and covered by a truncation bound.
class BoundaryCondition {
 public:
  enum class Kind { free, plus, minus, fixed };

  static BoundaryCondition free_bc() { return BoundaryCondition(Kind::free); }
  static BoundaryCondition all_plus(int extent);
  static BoundaryCondition all_minus(int extent);
  // left[t] is the spin at site volume.lo - 1 - t, right[t] at volume.hi + 1 + t.
  static BoundaryCondition fixed(std::vector<int> left, std::vector<int> right);

  Kind kind() const { return kind_; }
  int left_extent() const { return static_cast<int>(left_.size()); }
  int right_extent() const { return static_cast<int>(right_.size()); }

  // Spin at an exterior site; throws if the site is interior or uncovered.
  int exterior_spin(int site, const SiteInterval& volume) const;

  std::string id() const;
  std::uint64_t digest() const;

 private:
  explicit BoundaryCondition(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<int> left_, right_;  // spins, +-1
};

struct HamiltonianValue {
  double value = 0.0;
  // Certified bound on the total weight of interactions between the volume
  // and sites beyond the declared boundary extent.  Zero for free boundaries.
  double truncation_bound = 0.0;
};

// H = -beta * sum over active pairs {a,b} meeting the window of
// J(|a-b|) sigma_a sigma_b, exterior spins taken from the boundary condition.
HamiltonianValue hamiltonian(const SpinConfig& sigma, const BoundaryCondition& bc,
                             const InteractionMask& mask, double beta,
                             const CouplingFamily& J);

struct PotentialValue {
  double value = 0.0;
  double tail_bound = 0.0;  // certified bound on the ignored tail
};

// Half-line potential phi(x) = sum_{n>=1} J(n) x_0 x_n evaluated through the
// window of x, which must start at site 0.
PotentialValue potential_phi(const SpinConfig& x, const CouplingFamily& J);

// Interaction norm sup_i sum_{V contains i} sup|beta Psi_V|.  Equals
// 2 beta sum_k J(k) for the full, half-line and intermediate masks (the sup
// is approached deep in the interior); computed exactly for pair lists.
Interval suac_norm(const InteractionMask& mask, double beta, const CouplingFamily& J);

}  // namespace dyson
