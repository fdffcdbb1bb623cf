#pragma once

#include <cstdint>

#include "dyson/exact_measure.hpp"
#include "dyson/local_function.hpp"

namespace dyson {

// Ent(f^2) = E[f^2 log f^2] - E[f^2] log E[f^2]
double entropy_functional(const ExactMeasure& m, const LocalFunction& f);

// E[ sum_i (f(w) - f(w with site i flipped))^2 ], sites running over the
// domain of f (other flips contribute nothing).
double dirichlet_form(const ExactMeasure& m, const LocalFunction& f);

struct LsiWitness {
  LocalFunction f = LocalFunction::constant(0.0);
  double entropy = 0.0;
  double dirichlet = 0.0;
  double ratio = 0.0;  // entropy / (2 dirichlet)
};

// Randomized lower bound for the best constant D in
// Ent(f^2) <= 2 D E[sum_i (f - f o flip_i)^2]: max ratio over random sparse
// tables plus a few structured candidates.
LsiWitness lsi_constant_search(const ExactMeasure& m, int trials, std::uint64_t seed,
                               int max_support = 5);

}  // namespace dyson
