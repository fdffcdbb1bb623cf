#pragma once

#include <cstdint>
#include <vector>

#include "dyson/rng.hpp"
#include "dyson/spin_config.hpp"

namespace dyson {

// Function of finitely many spins, stored as a value table over the 2^d
// configurations of its domain.  Bit t of a table index is the spin at
// domain()[t] (set = +1).  Domain sites are strictly increasing.
class LocalFunction {
 public:
  LocalFunction(std::vector<int> sites, std::vector<double> table);

  static LocalFunction constant(double c);
  static LocalFunction spin(int site);
  static LocalFunction pair(int a, int b, double coeff = 1.0);  // coeff * s_a s_b
  static LocalFunction linear(std::vector<int> sites, std::vector<double> coeffs);

  // Random table on a random subset of candidate_sites (support size 1 to
  // max_support), entries uniform in [-amplitude, amplitude].
  static LocalFunction random_sparse(CounterRng& rng, const std::vector<int>& candidate_sites,
                                     int max_support, double amplitude);

  double eval_bits(std::uint32_t domain_bits) const { return table_[domain_bits]; }
  double eval(const SpinConfig& sigma) const;

  // sup over configurations of |F(w) - F(w with `site` flipped)|
  double oscillation(int site) const;
  // sum over sites of oscillation^2, the squared discrete gradient norm
  double total_oscillation_sq() const;

  const std::vector<int>& domain() const { return sites_; }
  const std::vector<double>& table() const { return table_; }

  LocalFunction shifted(double c) const;  // F + c
  LocalFunction scaled(double c) const;   // c F

 private:
  std::vector<int> sites_;
  std::vector<double> table_;
};

}  // namespace dyson
