#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyson/interval.hpp"

namespace dyson {

// Certified enclosure of the tail sum  sum_{k >= i} k^(-a)  for a > 1.
// Exact partial sum out to an adaptive cutoff M, then the convexity bracket
//   f(M+1)/2 + int_{M+1}^inf f   <=   remainder   <=   int_{M+1/2}^inf f
// for the decreasing convex integrand f(x) = x^(-a).
Interval power_sum_tail(double a, std::int64_t i, double tol = 1e-10);

// Translation-invariant nonnegative pair couplings J(1), J(2), ...
// Either the power law J(k) = k^(-alpha) with alpha > 1, or a finite table
// with zero tail.
class CouplingFamily {
 public:
  static CouplingFamily power_law(double alpha);
  static CouplingFamily table(std::vector<double> values);

  // Text format: optional '#' comments, a header line "tail zero", then
  // "k value" pairs (k >= 1, value >= 0).  Unlisted k are zero.
  static CouplingFamily load(const std::string& path);
  void save(const std::string& path) const;

  double j(std::int64_t k) const;

  bool is_power_law() const { return power_; }
  double alpha() const;

  // Smallest m with J(k) = 0 for all k > m.  Power laws have no such m.
  std::int64_t finite_range() const;

  // J(1..m) as a dense table for hot loops.
  std::vector<double> prefix_table(std::int64_t m) const;

  // Certified enclosure of T(i) = sum_{k >= i} J(k).
  Interval tail(std::int64_t i, double tol = 1e-10) const;
  Interval total(double tol = 1e-10) const { return tail(1, tol); }

  std::string describe() const;
  std::uint64_t digest() const;

 private:
  CouplingFamily() = default;
  bool power_ = true;
  double alpha_ = 0.0;
  std::vector<double> table_;  // table_[k-1] = J(k)
};

// Certificate that the partial sums sum_{i<=n} T(i)^2 exceed `threshold`:
// a closed-form lower bound evaluated at a concrete index, found by block
// doubling.  `index` is returned as double because the crossing point can
// exceed the exact-integer range (it does for alpha = 1.5).
struct DivergenceCertificate {
  double threshold = 0.0;
  double index = 0.0;
  double lower_bound = 0.0;
};

// Values behind the three summability conditions used throughout:
//   (i)   sum_k k J(k)^2 < inf
//   (ii)  sup_p p J(p) < inf
//   (iii) C1 = sum_{i>=1} (sum_{k>=i} J(k))^2 < inf
struct SummabilityReport {
  Interval total;            // sum_k J(k)
  Interval kappa;            // 2 sum_k J(k)
  Interval weighted_square;  // sum_k k J(k)^2
  double sup_p_pj = 0.0;
  bool cond_square_summable = false;       // (i)
  bool cond_linear_decay = false;          // (ii)
  bool cond_tail_square_summable = false;  // (iii)
  Interval c1;                             // valid iff (iii) holds
  std::optional<DivergenceCertificate> divergence;
};

SummabilityReport summability_report(const CouplingFamily& J,
                                     double divergence_threshold = 1e3);

}  // namespace dyson
