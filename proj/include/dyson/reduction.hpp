#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

// Deterministic reductions.  All sums over large arrays go through a pairwise
// tree whose shape depends only on the length, never on the thread count, so
// parallel and serial runs produce bit-identical results.  Leaves are fixed
// 4096-element blocks accumulated left to right; block sums are combined by
// recursive halving.

namespace dyson {

inline constexpr std::size_t kReduceBlock = 4096;

namespace detail {

inline double block_sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

inline double combine(const double* s, std::size_t nb) {
  if (nb == 1) return s[0];
  std::size_t half = nb / 2;
  return combine(s, half) + combine(s + half, nb - half);
}

}  // namespace detail

// Serial reference, same tree shape as the parallel version.
inline double pairwise_sum_serial(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  std::size_t nb = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> bs(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    std::size_t lo = b * kReduceBlock;
    bs[b] = detail::block_sum(x + lo, std::min(kReduceBlock, n - lo));
  }
  return detail::combine(bs.data(), nb);
}

inline double pairwise_sum(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  std::size_t nb = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> bs(nb);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
    std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
    bs[b] = detail::block_sum(x + lo, std::min(kReduceBlock, n - lo));
  }
  return detail::combine(bs.data(), nb);
}

inline double pairwise_sum(const std::vector<double>& x) {
  return pairwise_sum(x.data(), x.size());
}

// Sum of f(0), ..., f(n-1) without materializing the values.  Each block is
// accumulated serially by one thread, so the result matches what a serial
// run of the same code produces.
template <class F>
double pairwise_sum_indexed(std::size_t n, F&& f) {
  if (n == 0) return 0.0;
  std::size_t nb = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> bs(nb);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
    std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
    std::size_t hi = std::min(lo + kReduceBlock, n);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    bs[b] = s;
  }
  return detail::combine(bs.data(), nb);
}

template <class F>
double pairwise_sum_indexed_serial(std::size_t n, F&& f) {
  if (n == 0) return 0.0;
  std::size_t nb = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> bs(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    std::size_t lo = b * kReduceBlock;
    std::size_t hi = std::min(lo + kReduceBlock, n);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    bs[b] = s;
  }
  return detail::combine(bs.data(), nb);
}

// Max is associative, so a plain OpenMP reduction is already deterministic.
inline double max_value(const double* x, std::size_t n) {
  double m = -1.0 / 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    m = std::max(m, x[i]);
  return m;
}

inline double min_value(const double* x, std::size_t n) {
  double m = 1.0 / 0.0;
#pragma omp parallel for reduction(min : m) schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    m = std::min(m, x[i]);
  return m;
}

inline double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    m = std::max(m, std::abs(x[i]));
  return m;
}

}  // namespace dyson
