#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dyson/exact_measure.hpp"

namespace dyson {

// One failed correlation inequality; the check expected lhs >= rhs - tol.
struct GriffithsViolation {
  std::string kind;  // positivity | beta-monotone | mask-monotone
  std::string mask;
  double beta = 0.0;
  std::int64_t k = -1;  // cross-pair count for mask-monotone rows, else -1
  int site_a = 0;
  int site_b = 0;  // equals site_a for single-spin checks
  double lhs = 0.0;
  double rhs = 0.0;
};

struct GriffithsReport {
  long long checks = 0;
  double tolerance = 0.0;
  std::vector<GriffithsViolation> violations;
  bool pass() const { return violations.empty(); }
};

// Exhaustive ferromagnetic correlation checks on one volume over a beta
// grid: every single-spin and pair expectation stays nonnegative for every
// mask, grows with beta, and grows along the intermediate-mask chain
// (product interaction, one cross pair at a time, up to the full mask).
GriffithsReport griffiths_suite(const CouplingFamily& J, const SiteInterval& volume,
                                const std::vector<double>& beta_grid,
                                double tolerance = 1e-12,
                                const BoundaryCondition& bc = BoundaryCondition::free_bc());

}  // namespace dyson
