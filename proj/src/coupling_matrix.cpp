#include "dyson/coupling_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dyson {

SquareMatrix coupling_matrix(const SiteInterval& volume, const InteractionMask& mask,
                             const CouplingFamily& J) {
  int n = volume.size();
  if (n < 1) throw std::invalid_argument("coupling_matrix: empty volume");
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int a = volume.lo + i, b = volume.lo + j;
      if (!mask.active(a, b)) continue;
      double v = -J.j(b - a);
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  return m;
}

SquareMatrix rescale_bd(const SquareMatrix& a, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("rescale_bd: need kappa > 0");
  SquareMatrix out = a;
  double inv = 1.0 / (2.0 * kappa);
  for (double& v : out.a) v *= inv;
  for (int i = 0; i < out.n; ++i) out.at(i, i) += 0.5;
  return out;
}

std::vector<double> symmetric_eigenvalues(SquareMatrix m) {
  int n = m.n;
  if (n == 0) return {};
  double scale = 0.0;
  for (double v : m.a) scale += v * v;
  if (scale == 0.0) return std::vector<double>(n, 0.0);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += m.at(p, q) * m.at(p, q);
    if (off <= 1e-30 * scale) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = m.at(p, q);
        if (apq == 0.0) continue;
        double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double app = m.at(p, p), aqq = m.at(q, q);
        m.at(p, p) = app - t * apq;
        m.at(q, q) = aqq + t * apq;
        m.at(p, q) = 0.0;
        m.at(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          double akp = m.at(k, p), akq = m.at(k, q);
          m.at(k, p) = c * akp - s * akq;
          m.at(p, k) = m.at(k, p);
          m.at(k, q) = s * akp + c * akq;
          m.at(q, k) = m.at(k, q);
        }
      }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = m.at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

MatrixConditionReport check_bd_conditions(const SquareMatrix& a, double sym_tol) {
  for (int i = 0; i < a.n; ++i)
    for (int j = i + 1; j < a.n; ++j)
      if (std::abs(a.at(i, j) - a.at(j, i)) > sym_tol)
        throw std::invalid_argument("check_bd_conditions: matrix is not symmetric");
  MatrixConditionReport r;
  r.offdiag_nonpositive = true;
  for (int i = 0; i < a.n && r.offdiag_nonpositive; ++i)
    for (int j = 0; j < a.n; ++j)
      if (i != j && a.at(i, j) > 0.0) {
        r.offdiag_nonpositive = false;
        break;
      }
  auto eig = symmetric_eigenvalues(a);
  r.min_eigenvalue = eig.front();
  r.spectral_radius = std::max(std::abs(eig.front()), std::abs(eig.back()));
  r.positive_definite = r.min_eigenvalue > 0.0;
  r.radius_at_most_one = r.spectral_radius <= 1.0 + 1e-12;
  return r;
}

}  // namespace dyson
