#include "dyson/transfer.hpp"

#include <cmath>
#include <stdexcept>

#include "dyson/reduction.hpp"

namespace dyson {

TransferTruncation::TransferTruncation(int depth, double beta, const CouplingFamily& J)
    : depth_(depth), beta_(beta) {
  if (depth < 1 || depth > 26)
    throw std::invalid_argument("TransferTruncation: depth must be 1..26");
  if (!(beta >= 0.0)) throw std::invalid_argument("TransferTruncation: need beta >= 0");
  tail_bound_ = J.tail(depth + 1).hi;
  std::vector<double> j = J.prefix_table(depth);
  std::size_t n = states();
  wp_.resize(n);
  wm_.resize(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(n); ++x) {
    double s = 0.0;
    for (int t = 0; t < depth_; ++t)
      s += j[t] * ((x >> t) & 1 ? 1.0 : -1.0);  // coordinate t pairs with J(t+1)
    wp_[x] = std::exp(beta * s);
    wm_[x] = std::exp(-beta * s);
  }
}

namespace {

template <bool Parallel>
void apply_impl(int depth, const std::vector<double>& wp, const std::vector<double>& wm,
                const std::vector<double>& f, std::vector<double>& out) {
  std::size_t n = std::size_t{1} << depth;
  if (f.size() != n) throw std::invalid_argument("transfer apply: wrong vector length");
  out.resize(n);
  std::uint32_t mask = static_cast<std::uint32_t>(n - 1);
#pragma omp parallel for schedule(static) if (Parallel)
  for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(n); ++x) {
    std::uint32_t shifted = (static_cast<std::uint32_t>(x) << 1) & mask;
    out[x] = wp[x] * f[shifted | 1u] + wm[x] * f[shifted];
  }
}

template <bool Parallel>
void adjoint_impl(int depth, const std::vector<double>& wp, const std::vector<double>& wm,
                  const std::vector<double>& nu, std::vector<double>& out) {
  std::size_t n = std::size_t{1} << depth;
  if (nu.size() != n) throw std::invalid_argument("transfer apply: wrong vector length");
  out.resize(n);
  std::uint32_t high = 1u << (depth - 1);
#pragma omp parallel for schedule(static) if (Parallel)
  for (std::ptrdiff_t y = 0; y < static_cast<std::ptrdiff_t>(n); ++y) {
    // predecessors of y drop its oldest bit and could have had either spin
    // there; the branch weight depends on the new bit a = y & 1
    std::uint32_t x0 = static_cast<std::uint32_t>(y) >> 1;
    std::uint32_t x1 = x0 | high;
    const std::vector<double>& w = (y & 1) ? wp : wm;
    out[y] = w[x0] * nu[x0] + w[x1] * nu[x1];
  }
}

}  // namespace

void TransferTruncation::apply(const std::vector<double>& f, std::vector<double>& out) const {
  apply_impl<true>(depth_, wp_, wm_, f, out);
}
void TransferTruncation::apply_serial(const std::vector<double>& f,
                                      std::vector<double>& out) const {
  apply_impl<false>(depth_, wp_, wm_, f, out);
}
void TransferTruncation::apply_adjoint(const std::vector<double>& nu,
                                       std::vector<double>& out) const {
  adjoint_impl<true>(depth_, wp_, wm_, nu, out);
}
void TransferTruncation::apply_adjoint_serial(const std::vector<double>& nu,
                                              std::vector<double>& out) const {
  adjoint_impl<false>(depth_, wp_, wm_, nu, out);
}

namespace {

void symmetrize(std::vector<double>& v) {
  std::uint32_t all = static_cast<std::uint32_t>(v.size() - 1);
  for (std::uint32_t x = 0; x < v.size() / 2; ++x) {
    double m = 0.5 * (v[x] + v[x ^ all]);
    v[x] = m;
    v[x ^ all] = m;
  }
}

}  // namespace

EigenData principal_eigen(const TransferTruncation& t, double tol, int max_iterations) {
  std::size_t n = t.states();
  EigenData e;
  e.h.assign(n, 1.0);
  e.nu.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> scratch;

  double lam_lo = 0.0, lam_hi = 0.0;
  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    t.apply(e.h, scratch);
    symmetrize(scratch);
    lam_lo = 1.0 / 0.0;
    lam_hi = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      double r = scratch[x] / e.h[x];
      lam_lo = std::min(lam_lo, r);
      lam_hi = std::max(lam_hi, r);
    }
    double sup = max_abs(scratch.data(), n);
    for (std::size_t x = 0; x < n; ++x) e.h[x] = scratch[x] / sup;
    if (lam_hi - lam_lo <= tol * lam_hi) break;
  }
  if (lam_hi - lam_lo > tol * lam_hi)
    throw std::runtime_error("principal_eigen: power iteration did not converge");
  e.lambda = 0.5 * (lam_lo + lam_hi);
  e.log_lambda = std::log(e.lambda);
  e.collatz_width = lam_hi - lam_lo;
  e.iterations = iter + 1;

  // adjoint iteration, normalized to a probability vector each step
  for (int k = 0; k < max_iterations; ++k) {
    t.apply_adjoint(e.nu, scratch);
    symmetrize(scratch);
    double z = pairwise_sum(scratch);
    double drift = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      double next = scratch[x] / z;
      drift = std::max(drift, std::abs(next - e.nu[x]));
      e.nu[x] = next;
    }
    if (drift <= tol / static_cast<double>(n)) break;
  }

  // <nu, h> = 1 fixes the joint scale
  double inner = pairwise_sum_indexed(n, [&](std::size_t x) { return e.nu[x] * e.h[x]; });
  for (std::size_t x = 0; x < n; ++x) e.h[x] /= inner;

  e.residual_h = eigen_residual(e.h, e.lambda, t) / e.lambda;
  t.apply_adjoint(e.nu, scratch);
  double l1 = pairwise_sum_indexed(
      n, [&](std::size_t x) { return std::abs(scratch[x] - e.lambda * e.nu[x]); });
  e.residual_nu = l1 / e.lambda;
  return e;
}

std::vector<PressureRow> pressure_table(int depth_lo, int depth_hi, double beta,
                                        const CouplingFamily& J, double tol) {
  if (depth_lo < 1 || depth_hi < depth_lo)
    throw std::invalid_argument("pressure_table: bad depth range");
  std::vector<PressureRow> rows;
  double prev = 0.0;
  for (int m = depth_lo; m <= depth_hi; ++m) {
    auto e = principal_eigen(TransferTruncation(m, beta, J), tol);
    PressureRow r;
    r.depth = m;
    r.log_lambda = e.log_lambda;
    r.gap_to_previous = rows.empty() ? 0.0 : std::abs(e.log_lambda - prev);
    prev = e.log_lambda;
    rows.push_back(r);
  }
  return rows;
}

double eigen_residual(const std::vector<double>& f, double lambda,
                      const TransferTruncation& t) {
  std::vector<double> lf;
  t.apply(f, lf);
  double worst = 0.0, sup = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    worst = std::max(worst, std::abs(lf[x] - lambda * f[x]));
    sup = std::max(sup, std::abs(f[x]));
  }
  return worst / sup;
}

RouteComparison eigenfunction_density_route(int cross_range, int depth, double beta,
                                            const CouplingFamily& J, int left_window,
                                            double tol) {
  RouteComparison rc;
  TransferTruncation t(depth, beta, J);
  rc.eigen = principal_eigen(t, tol);
  rc.density = half_line_density(cross_range, depth, beta, J, left_window);

  rc.route_values = rc.density.cylinder_values;
  double inner = pairwise_sum_indexed(rc.route_values.size(), [&](std::size_t x) {
    return rc.eigen.nu[x] * rc.route_values[x];
  });
  for (double& v : rc.route_values) v /= inner;

  double sup_h = 0.0, dist = 0.0;
  for (std::size_t x = 0; x < rc.route_values.size(); ++x) {
    sup_h = std::max(sup_h, std::abs(rc.eigen.h[x]));
    dist = std::max(dist, std::abs(rc.route_values[x] - rc.eigen.h[x]));
  }
  rc.rel_sup_distance = dist / sup_h;
  rc.route_residual = eigen_residual(rc.route_values, rc.eigen.lambda, t);
  return rc;
}

}  // namespace dyson
