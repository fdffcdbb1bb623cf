#include "dyson/local_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dyson {

LocalFunction::LocalFunction(std::vector<int> sites, std::vector<double> table)
    : sites_(std::move(sites)), table_(std::move(table)) {
  if (sites_.size() > 24)
    throw std::invalid_argument("LocalFunction: domain larger than 24 sites");
  if (!std::is_sorted(sites_.begin(), sites_.end()) ||
      std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end())
    throw std::invalid_argument("LocalFunction: domain must be strictly increasing");
  if (table_.size() != (std::size_t{1} << sites_.size()))
    throw std::invalid_argument("LocalFunction: table size must be 2^domain");
}

LocalFunction LocalFunction::constant(double c) { return LocalFunction({}, {c}); }

LocalFunction LocalFunction::spin(int site) {
  return LocalFunction({site}, {-1.0, 1.0});
}

LocalFunction LocalFunction::pair(int a, int b, double coeff) {
  if (a == b) throw std::invalid_argument("LocalFunction::pair: need distinct sites");
  if (a > b) std::swap(a, b);
  // index bit 0 = spin at a, bit 1 = spin at b
  return LocalFunction({a, b}, {coeff, -coeff, -coeff, coeff});
}

LocalFunction LocalFunction::linear(std::vector<int> sites, std::vector<double> coeffs) {
  if (sites.size() != coeffs.size())
    throw std::invalid_argument("LocalFunction::linear: sites/coeffs size mismatch");
  std::vector<double> table(std::size_t{1} << sites.size());
  for (std::uint32_t idx = 0; idx < table.size(); ++idx) {
    double v = 0.0;
    for (std::size_t t = 0; t < coeffs.size(); ++t)
      v += coeffs[t] * (((idx >> t) & 1u) ? 1.0 : -1.0);
    table[idx] = v;
  }
  return LocalFunction(std::move(sites), std::move(table));
}

LocalFunction LocalFunction::random_sparse(CounterRng& rng,
                                           const std::vector<int>& candidate_sites,
                                           int max_support, double amplitude) {
  if (candidate_sites.empty() || max_support < 1)
    throw std::invalid_argument("LocalFunction::random_sparse: empty candidate set");
  int d = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(
              max_support, candidate_sites.size())));
  std::vector<int> pool = candidate_sites;
  std::vector<int> chosen;
  for (int t = 0; t < d; ++t) {
    std::size_t pick = rng.below(pool.size());
    chosen.push_back(pool[pick]);
    pool.erase(pool.begin() + pick);
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<double> table(std::size_t{1} << d);
  for (double& v : table) v = amplitude * (2.0 * rng.uniform() - 1.0);
  return LocalFunction(std::move(chosen), std::move(table));
}

double LocalFunction::eval(const SpinConfig& sigma) const {
  std::uint32_t bits = 0;
  for (std::size_t t = 0; t < sites_.size(); ++t)
    if (sigma.spin(sites_[t]) > 0) bits |= 1u << t;
  return table_[bits];
}

double LocalFunction::oscillation(int site) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), site);
  if (it == sites_.end() || *it != site) return 0.0;
  std::uint32_t bit = 1u << (it - sites_.begin());
  double m = 0.0;
  for (std::uint32_t idx = 0; idx < table_.size(); ++idx)
    if (!(idx & bit)) m = std::max(m, std::abs(table_[idx] - table_[idx | bit]));
  return m;
}

double LocalFunction::total_oscillation_sq() const {
  double s = 0.0;
  for (int site : sites_) {
    double o = oscillation(site);
    s += o * o;
  }
  return s;
}

LocalFunction LocalFunction::shifted(double c) const {
  LocalFunction f = *this;
  for (double& v : f.table_) v += c;
  return f;
}

LocalFunction LocalFunction::scaled(double c) const {
  LocalFunction f = *this;
  for (double& v : f.table_) v *= c;
  return f;
}

}  // namespace dyson
