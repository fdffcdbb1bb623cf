#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyson/couplings.hpp"
#include "dyson/densities.hpp"
#include "dyson/exact_measure.hpp"
#include "dyson/functionals.hpp"
#include "dyson/interaction.hpp"
#include "dyson/local_function.hpp"

namespace dyson {

// Where a susceptibility value came from.  The constants below want the
// infinite-volume value, which no finite computation delivers; the tag keeps
// every report honest about the finite-volume or sampled stand-in.
enum class ChiSource { exact_fv, mc, user };
const char* chi_source_name(ChiSource source);

struct ConstantBundle {
  double beta = 0.0;
  double chi = 1.0;
  ChiSource chi_source = ChiSource::user;
  int chi_volume = 0;  // sites behind an exact-fv or mc chi, 0 for user input
  double kappa = 0.0;  // diagonal shift 2 sum_k J(k) used by the matrix route
  double sup_pj = 0.0;  // sup_p p J(p), the correlation-sum weight
  double suac = 0.0;    // sup-norm budget 2 beta sum J over the given mask
  double d_lsi_bound = 0.0;  // 1/4 + (beta/2) e^{2 beta chi}
  double d_gcb = 0.0;        // (1/8)(1 + 2 beta e^{2 beta chi})(e^{4 beta sum J} + 1)
  double d_herbst = 0.0;     // input D * (e^{2 suac} + 1)/2
  // Constant for the tail and moment forms of the concentration bound.
  // d_gcb certifies the exponential-moment form log E e^{f - Ef} <= D osc;
  // pushing that through Chernoff and the tail integral multiplies the
  // constant by 8.  The moment display with d_gcb itself is false near
  // beta = 0 (product measure, 4 sites, 8th moment: 8320 vs a claimed 768).
  double d_tail = 0.0;  // 8 d_gcb
  std::optional<Interval> c1;
  std::optional<DivergenceCertificate> c1_divergence;
};

// d_lsi_input defaults to the bundle's own d_lsi_bound, which closes the
// chain d_herbst == d_gcb for the full interaction.
ConstantBundle constants(double beta, double chi, ChiSource source, int chi_volume,
                         const CouplingFamily& J, const InteractionMask& mask,
                         std::optional<double> d_lsi_input = std::nullopt);

double herbst_transfer(double d_lsi, double suac);

enum class CheckKind { lsi, gcb, mcb, tail };
const char* check_kind_name(CheckKind kind);

struct WitnessRecord {
  std::string description;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct ConcentrationReport {
  CheckKind kind = CheckKind::lsi;
  double constant_used = 0.0;
  int trials = 0;
  double worst_ratio = 0.0;
  WitnessRecord worst;
  bool pass = false;  // worst_ratio <= 1 + 1e-9
  std::vector<double> margins;  // rhs - lhs, one entry per evaluated trial
};

// Ent(f^2) <= 2 D * dirichlet(f) over random sparse tables plus the
// adversarial candidates from lsi_constant_search.
ConcentrationReport verify_lsi(const ExactMeasure& m, double d_constant,
                               int trials, std::uint64_t seed);

// log int e^{F - int F} dm <= D ||delta F||_2^2 over linear forms and random
// sparse tables at several amplitudes.
ConcentrationReport verify_gcb(const ExactMeasure& m, double d_constant,
                               int trials, std::uint64_t seed);

// int |F - int F|^m dm <= (D ||delta F||_2^2 / 2)^{m/2} m Gamma(m/2).
ConcentrationReport verify_mcb(const ExactMeasure& m, double d_constant,
                               const LocalFunction& f,
                               const std::vector<int>& moments);

struct HerbstRow {
  double lambda = 0.0;
  double u = 0.0;           // (1/lambda) log int e^{lambda F} dm
  double du = 0.0;          // centered difference, one Richardson refinement
  bool violates_bound = false;
};

struct HerbstScan {
  double f_mean = 0.0;      // the lambda -> 0 limit of u
  double slope_bound = 0.0; // D (e^{2 suac} + 1)/2 * ||delta F||_2^2
  std::vector<HerbstRow> rows;
  bool any_violation = false;
};

// Grid must lie in (0, 1].
HerbstScan herbst_scan(const ExactMeasure& m, const LocalFunction& f,
                       const std::vector<double>& lambda_grid, double d_lsi,
                       double suac);

struct UniformIntegrabilityRow {
  int radius = 0;
  int k = 0;
  double entropy = 0.0;   // int f^(k) log f^(k) dnu0
  double w_term = 0.0;    // -int W_k dnu^(k)
  double log_term = 0.0;  // -log int e^{-W_k} dnu0
  bool exceeds_bound = false;
};

struct UniformIntegrabilityTable {
  double beta = 0.0;
  double chi = 1.0;        // finite-volume susceptibility of the full measure
  int chi_volume = 0;
  double sup_pj = 0.0;
  double bound = 0.0;      // beta * sup_p pJ(p) * chi
  std::vector<UniformIntegrabilityRow> rows;
  bool any_exceeds = false;
};

// Every k from 0 to k_N in steps of k_stride for each radius in the range.
UniformIntegrabilityTable uniform_integrability_diag(int radius_lo, int radius_hi,
                                                     int k_stride, double beta,
                                                     const CouplingFamily& J);

// Raised when a computation needs C1 = sum_i (sum_{k>=i} J(k))^2 but the
// series is certified divergent.
class DivergentC1Error : public std::runtime_error {
 public:
  DivergentC1Error(std::string message, DivergenceCertificate certificate)
      : std::runtime_error(std::move(message)), certificate(certificate) {}
  DivergenceCertificate certificate;
};

struct ModulusRow {
  int n = 0;
  double u_n = 0.0;      // 16 beta^2 sum_{m>n} tail(m)^2, upper end
  double v_n = 0.0;      // sqrt(D u_n / 2)
  double modulus = 0.0;  // C2 ((6 v^2 + 8 v) e^{v^2})^{1/2}, C2 = e^{8 D beta^2 C1}
};

std::vector<ModulusRow> continuity_modulus(int n_lo, int n_hi, double d_constant,
                                           double beta, const CouplingFamily& J);

}  // namespace dyson
