#pragma once

#include <cstdint>
#include <vector>

#include "dyson/exact_measure.hpp"

namespace dyson {

// Density of the site-flip pushforward with respect to the measure itself:
// values[c] = p(c with `site` flipped) / p(c).
struct DensityTable {
  std::vector<double> values;
  double integral = 0.0;  // sum p * value, 1 up to rounding
};

DensityTable flip_density(const ExactMeasure& m, int site);

// The chain nu^(0), ..., nu^(k) of measures on [-N, N] where nu^(iota) keeps
// the first iota cross pairs, together with the density f^(k) of nu^(k) with
// respect to the product-type nu^(0) and the pieces of the entropy identity
//   int f log f d nu0 = -int W_k d nu^(k) - log int e^(-W_k) d nu0
// and of the telescoped normalizer
//   int e^(-W_k) d nu0 = prod_iota int e^(-beta Phi_iota) d nu^(iota-1).
struct IntermediateDensity {
  int radius = 0;  // N, volume [-N, N]
  std::int64_t k = 0;
  double beta = 0.0;
  ExactMeasure base;    // nu^(0)
  ExactMeasure target;  // nu^(k)
  std::vector<double> density;
  double entropy = 0.0;
  double w_mean = 0.0;          // int W_k d nu^(k)
  double log_normalizer = 0.0;  // log int e^(-W_k) d nu0
  std::vector<double> telescoping_factors;
};

IntermediateDensity intermediate_density(int radius, std::int64_t k, double beta,
                                         const CouplingFamily& J);

// Two-sided construction of the right-half-line eigenfunction candidate:
// integrate e^(-W) over the left window against its free Boltzmann measure,
// normalize by the double integral, then project to depth-d cylinders by
// conditional averaging under the right-window measure.
struct HalfLineDensity {
  int cross_range = 0;  // N: cross pairs use i in 1..N, j in 0..N
  int depth = 0;
  int left_window = 0;
  double beta = 0.0;
  std::vector<double> cylinder_values;  // 2^depth
  std::vector<double> full_values;      // over the right window [0, R]
  int right_window = 0;                 // R + 1 sites
  double denom = 0.0;
  double min_full = 0.0, max_full = 0.0;
  double symmetry_defect = 0.0;  // max over eta of |int W(.,eta) d nu_minus|
};

HalfLineDensity half_line_density(int cross_range, int depth, double beta,
                                  const CouplingFamily& J, int left_window);

// var_d = sup{|f(x)-f(y)| : x, y agree on coordinates 0..d-1}, d = 0..depth.
std::vector<double> variation_profile(const std::vector<double>& values, int depth);

}  // namespace dyson
