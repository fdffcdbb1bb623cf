#pragma once

#include <cstdint>
#include <vector>

#include "dyson/couplings.hpp"
#include "dyson/densities.hpp"

namespace dyson {

// Depth-m truncation of the half-line transfer operator
//   (Lf)(x) = sum_{a = +-1} exp(beta a S(x)) f(ax),
// where S(x) = sum_{n=1}^{m} J(n) x_{n-1} and ax shifts x right and
// prepends a.  States are m-bit words, bit t = coordinate t, set = +1.
class TransferTruncation {
 public:
  TransferTruncation(int depth, double beta, const CouplingFamily& J);

  int depth() const { return depth_; }
  double beta() const { return beta_; }
  std::size_t states() const { return std::size_t{1} << depth_; }
  double tail_bound() const { return tail_bound_; }  // couplings past the depth

  void apply(const std::vector<double>& f, std::vector<double>& out) const;
  void apply_adjoint(const std::vector<double>& nu, std::vector<double>& out) const;
  void apply_serial(const std::vector<double>& f, std::vector<double>& out) const;
  void apply_adjoint_serial(const std::vector<double>& nu, std::vector<double>& out) const;

 private:
  int depth_;
  double beta_;
  double tail_bound_;
  std::vector<double> wp_, wm_;  // exp(+-beta S(x)) per state
};

struct EigenData {
  double lambda = 0.0;
  double log_lambda = 0.0;
  std::vector<double> h;   // right eigenfunction, <nu, h> = 1
  std::vector<double> nu;  // adjoint eigenprobability, sums to 1
  double residual_h = 0.0;   // sup|Lh - lambda h| / (lambda sup|h|)
  double residual_nu = 0.0;  // l1|L*nu - lambda nu| / lambda
  double collatz_width = 0.0;
  int iterations = 0;
};

// Power iteration with explicit flip symmetrization; the Collatz-Wielandt
// ratios of the positive operator bracket lambda and drive the stop rule.
EigenData principal_eigen(const TransferTruncation& t, double tol = 1e-12,
                          int max_iterations = 200000);

struct PressureRow {
  int depth = 0;
  double log_lambda = 0.0;
  double gap_to_previous = 0.0;  // |log lambda_m - log lambda_{m-1}|
};

std::vector<PressureRow> pressure_table(int depth_lo, int depth_hi, double beta,
                                        const CouplingFamily& J, double tol = 1e-12);

// sup|Lf - lambda f| / sup|f| for an externally produced candidate.
double eigen_residual(const std::vector<double>& f, double lambda,
                      const TransferTruncation& t);

// Culmination of the two constructions: the two-sided density route
// projected to depth-d cylinders, renormalized against the truncation's
// eigenprobability, side by side with the power-iteration eigenfunction.
struct RouteComparison {
  EigenData eigen;
  HalfLineDensity density;
  std::vector<double> route_values;  // <nu, f> = 1 normalization
  double rel_sup_distance = 0.0;     // sup|f - h| / sup|h|
  double route_residual = 0.0;       // eigen_residual of the route values
};

RouteComparison eigenfunction_density_route(int cross_range, int depth, double beta,
                                            const CouplingFamily& J, int left_window,
                                            double tol = 1e-12);

}  // namespace dyson
