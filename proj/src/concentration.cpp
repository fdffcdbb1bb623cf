#include "dyson/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace dyson {

namespace {

constexpr double kRatioSlack = 1e-9;

bool ratio_passes(double worst) { return worst <= 1.0 + kRatioSlack; }

// Same-domain function with every table entry transformed.
template <typename Fn>
LocalFunction transform_table(const LocalFunction& f, Fn&& fn) {
  std::vector<double> t = f.table();
  for (double& v : t) v = fn(v);
  return LocalFunction(f.domain(), std::move(t));
}

double exp_moment(const ExactMeasure& m, const LocalFunction& f, double shift) {
  auto g = transform_table(f, [shift](double v) { return std::exp(v - shift); });
  return expectation(m, g);
}

std::vector<int> site_list(const ExactMeasure& m) {
  std::vector<int> s;
  s.reserve(static_cast<std::size_t>(m.sites()));
  for (int i = m.volume.lo; i <= m.volume.hi; ++i) s.push_back(i);
  return s;
}

}  // namespace

const char* chi_source_name(ChiSource source) {
  switch (source) {
    case ChiSource::exact_fv: return "exact-fv";
    case ChiSource::mc: return "mc";
    case ChiSource::user: return "user";
  }
  return "unknown";
}

const char* check_kind_name(CheckKind kind) {
  switch (kind) {
    case CheckKind::lsi: return "lsi";
    case CheckKind::gcb: return "gcb";
    case CheckKind::mcb: return "mcb";
    case CheckKind::tail: return "tail";
  }
  return "unknown";
}

double herbst_transfer(double d_lsi, double suac) {
  return d_lsi * (std::exp(2.0 * suac) + 1.0) / 2.0;
}

ConstantBundle constants(double beta, double chi, ChiSource source, int chi_volume,
                         const CouplingFamily& J, const InteractionMask& mask,
                         std::optional<double> d_lsi_input) {
  if (!(beta >= 0.0)) throw std::invalid_argument("constants: beta must be >= 0");
  if (!(chi >= 1.0))
    throw std::invalid_argument("constants: chi must be >= 1 (it is 1 plus "
                                "a sum of ferromagnetic correlations)");

  auto series = summability_report(J);

  ConstantBundle b;
  b.beta = beta;
  b.chi = chi;
  b.chi_source = source;
  b.chi_volume = chi_volume;
  b.kappa = series.kappa.hi;
  b.sup_pj = series.sup_p_pj;
  b.suac = suac_norm(mask, beta, J).hi;

  double e2bx = std::exp(2.0 * beta * chi);
  b.d_lsi_bound = 0.25 + 0.5 * beta * e2bx;
  double sum_j = J.total(1e-13).hi;
  b.d_gcb = 0.125 * (1.0 + 2.0 * beta * e2bx) * (std::exp(4.0 * beta * sum_j) + 1.0);
  b.d_herbst = herbst_transfer(d_lsi_input.value_or(b.d_lsi_bound), b.suac);
  b.d_tail = 8.0 * b.d_gcb;

  if (series.cond_tail_square_summable) {
    b.c1 = series.c1;
  } else {
    b.c1_divergence = series.divergence;
  }
  return b;
}

ConcentrationReport verify_lsi(const ExactMeasure& m, double d_constant,
                               int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("verify_lsi: trials must be >= 1");
  if (!(d_constant > 0.0))
    throw std::invalid_argument("verify_lsi: constant must be positive");

  const auto sites = site_list(m);
  // One extra slot for the adversarial candidate from the constant search.
  int total = trials + 1;
  std::vector<double> ratios(static_cast<std::size_t>(total), 0.0);
  std::vector<double> lhs(static_cast<std::size_t>(total), 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(total), 0.0);
  std::vector<char> evaluated(static_cast<std::size_t>(total), 0);

#pragma omp parallel for schedule(static)
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    auto f = LocalFunction::random_sparse(rng, sites, 5, 2.0);
    double ent = entropy_functional(m, f);
    double dir = dirichlet_form(m, f);
    if (dir == 0.0) continue;  // constant functions carry no information
    std::size_t i = static_cast<std::size_t>(t);
    lhs[i] = ent;
    rhs[i] = 2.0 * d_constant * dir;
    ratios[i] = ent / (2.0 * d_constant * dir);
    evaluated[i] = 1;
  }

  auto witness = lsi_constant_search(m, 400, seed ^ 0x5eedu);
  if (witness.dirichlet > 0.0) {
    std::size_t i = static_cast<std::size_t>(trials);
    lhs[i] = witness.entropy;
    rhs[i] = 2.0 * d_constant * witness.dirichlet;
    ratios[i] = witness.ratio / d_constant;
    evaluated[i] = 1;
  }

  ConcentrationReport report;
  report.kind = CheckKind::lsi;
  report.constant_used = d_constant;
  int worst_index = -1;
  for (int t = 0; t < total; ++t) {
    std::size_t i = static_cast<std::size_t>(t);
    if (!evaluated[i]) continue;
    ++report.trials;
    report.margins.push_back(rhs[i] - lhs[i]);
    if (worst_index < 0 || ratios[i] > report.worst_ratio) {
      report.worst_ratio = ratios[i];
      worst_index = t;
    }
  }
  if (worst_index >= 0) {
    report.worst.lhs = lhs[static_cast<std::size_t>(worst_index)];
    report.worst.rhs = rhs[static_cast<std::size_t>(worst_index)];
    report.worst.ratio = report.worst_ratio;
    report.worst.description =
        worst_index == trials
            ? "adversarial witness from lsi_constant_search"
            : "random sparse table, trial " + std::to_string(worst_index);
  }
  report.pass = ratio_passes(report.worst_ratio);
  return report;
}

namespace {

// Trial t cycles through three families; amplitude sweeps a log scale so the
// exponential inequality is probed both in its quadratic regime and beyond.
LocalFunction gcb_trial_function(const ExactMeasure& m, std::uint64_t seed, int t) {
  CounterRng rng(seed, static_cast<std::uint64_t>(t));
  const auto sites = site_list(m);
  double amplitude = std::exp(std::log(0.25) + rng.uniform() * std::log(16.0));
  switch (t % 3) {
    case 0: {
      std::vector<double> coeffs(sites.size());
      for (auto& c : coeffs) c = amplitude * (2.0 * rng.uniform() - 1.0);
      return LocalFunction::linear(sites, coeffs);
    }
    case 1:
      return LocalFunction::random_sparse(rng, sites, 5, amplitude);
    default: {
      // Linear form on a sparse random subset with sign flips only.
      std::vector<int> chosen;
      std::vector<double> coeffs;
      for (int s : sites)
        if (rng.uniform() < 0.4) {
          chosen.push_back(s);
          coeffs.push_back(amplitude * rng.sign());
        }
      if (chosen.empty()) return LocalFunction::spin(sites.front()).scaled(amplitude);
      return LocalFunction::linear(chosen, coeffs);
    }
  }
}

}  // namespace

ConcentrationReport verify_gcb(const ExactMeasure& m, double d_constant,
                               int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("verify_gcb: trials must be >= 1");
  if (!(d_constant > 0.0))
    throw std::invalid_argument("verify_gcb: constant must be positive");

  std::vector<double> ratios(static_cast<std::size_t>(trials), 0.0);
  std::vector<double> lhs(static_cast<std::size_t>(trials), 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(trials), 0.0);
  std::vector<char> evaluated(static_cast<std::size_t>(trials), 0);

#pragma omp parallel for schedule(static)
  for (int t = 0; t < trials; ++t) {
    auto f = gcb_trial_function(m, seed, t);
    double osc = f.total_oscillation_sq();
    if (osc == 0.0) continue;
    double mean = expectation(m, f);
    double l = std::log(exp_moment(m, f, mean));
    std::size_t i = static_cast<std::size_t>(t);
    lhs[i] = l;
    rhs[i] = d_constant * osc;
    ratios[i] = l / (d_constant * osc);
    evaluated[i] = 1;
  }

  ConcentrationReport report;
  report.kind = CheckKind::gcb;
  report.constant_used = d_constant;
  int worst_index = -1;
  for (int t = 0; t < trials; ++t) {
    std::size_t i = static_cast<std::size_t>(t);
    if (!evaluated[i]) continue;
    ++report.trials;
    report.margins.push_back(rhs[i] - lhs[i]);
    if (worst_index < 0 || ratios[i] > report.worst_ratio) {
      report.worst_ratio = ratios[i];
      worst_index = t;
    }
  }
  if (worst_index >= 0) {
    report.worst.lhs = lhs[static_cast<std::size_t>(worst_index)];
    report.worst.rhs = rhs[static_cast<std::size_t>(worst_index)];
    report.worst.ratio = report.worst_ratio;
    const char* family = worst_index % 3 == 0   ? "full linear form"
                         : worst_index % 3 == 1 ? "random sparse table"
                                                : "sparse signed linear form";
    report.worst.description =
        std::string(family) + ", trial " + std::to_string(worst_index);
  }
  report.pass = ratio_passes(report.worst_ratio);
  return report;
}

ConcentrationReport verify_mcb(const ExactMeasure& m, double d_constant,
                               const LocalFunction& f,
                               const std::vector<int>& moments) {
  if (moments.empty()) throw std::invalid_argument("verify_mcb: no moments given");
  if (!(d_constant > 0.0))
    throw std::invalid_argument("verify_mcb: constant must be positive");

  double mean = expectation(m, f);
  double osc = f.total_oscillation_sq();

  ConcentrationReport report;
  report.kind = CheckKind::mcb;
  report.constant_used = d_constant;
  int worst_index = -1;
  for (std::size_t i = 0; i < moments.size(); ++i) {
    int mom = moments[i];
    if (mom < 1)
      throw std::invalid_argument("verify_mcb: moments must be positive integers");
    auto abs_pow = transform_table(f, [mean, mom](double v) {
      return std::pow(std::abs(v - mean), static_cast<double>(mom));
    });
    double l = expectation(m, abs_pow);
    double r = std::pow(d_constant * osc / 2.0, 0.5 * mom) *
               static_cast<double>(mom) * std::tgamma(0.5 * mom);
    double ratio = r > 0.0 ? l / r : (l <= 1e-15 ? 0.0 : HUGE_VAL);
    ++report.trials;
    report.margins.push_back(r - l);
    if (worst_index < 0 || ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      worst_index = static_cast<int>(i);
      report.worst.lhs = l;
      report.worst.rhs = r;
      report.worst.ratio = ratio;
      report.worst.description = "moment m = " + std::to_string(mom);
    }
  }
  report.pass = ratio_passes(report.worst_ratio);
  return report;
}

HerbstScan herbst_scan(const ExactMeasure& m, const LocalFunction& f,
                       const std::vector<double>& lambda_grid, double d_lsi,
                       double suac) {
  for (double l : lambda_grid)
    if (!(l > 0.0) || l > 1.0)
      throw std::invalid_argument("herbst_scan: lambda grid must lie in (0, 1]");

  double mean = expectation(m, f);
  auto u_of = [&](double lambda) {
    // log of the centered moment generating function keeps the exponentials
    // tame; adding back lambda*mean restores u for the raw function.
    auto g = transform_table(
        f, [lambda, mean](double v) { return lambda * (v - mean); });
    return std::log(exp_moment(m, g, 0.0)) / lambda + mean;
  };

  HerbstScan scan;
  scan.f_mean = mean;
  scan.slope_bound = herbst_transfer(d_lsi, suac) * f.total_oscillation_sq();
  scan.rows.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    HerbstRow row;
    row.lambda = lambda;
    row.u = u_of(lambda);
    double h = std::min(1e-4, 0.5 * lambda);
    double d1 = (u_of(lambda + h) - u_of(lambda - h)) / (2.0 * h);
    double d2 = (u_of(lambda + 0.5 * h) - u_of(lambda - 0.5 * h)) / h;
    row.du = (4.0 * d2 - d1) / 3.0;
    row.violates_bound =
        row.du > scan.slope_bound + kRatioSlack * (1.0 + std::abs(scan.slope_bound));
    scan.any_violation = scan.any_violation || row.violates_bound;
    scan.rows.push_back(row);
  }
  return scan;
}

UniformIntegrabilityTable uniform_integrability_diag(int radius_lo, int radius_hi,
                                                     int k_stride, double beta,
                                                     const CouplingFamily& J) {
  if (radius_lo < 1 || radius_hi < radius_lo)
    throw std::invalid_argument("uniform_integrability_diag: bad radius range");
  if (k_stride < 1)
    throw std::invalid_argument("uniform_integrability_diag: stride must be >= 1");

  UniformIntegrabilityTable table;
  table.beta = beta;

  // The bound's chi is the finite-volume susceptibility of the full-coupling
  // measure on the largest window in play.
  SiteInterval widest{-radius_hi, radius_hi};
  auto full = boltzmann(widest, beta, InteractionMask::full(),
                        BoundaryCondition::free_bc(), J);
  table.chi = susceptibility_fv(full);
  table.chi_volume = widest.size();
  table.sup_pj = summability_report(J).sup_p_pj;
  table.bound = beta * table.sup_pj * table.chi;

  for (int radius = radius_lo; radius <= radius_hi; ++radius) {
    int k_max = radius * (radius + 1);
    int k = 0;
    while (true) {
      auto d = intermediate_density(radius, k, beta, J);
      UniformIntegrabilityRow row;
      row.radius = radius;
      row.k = k;
      row.entropy = d.entropy;
      row.w_term = -d.w_mean;
      row.log_term = -d.log_normalizer;
      row.exceeds_bound =
          row.entropy > table.bound + kRatioSlack * (1.0 + table.bound);
      table.any_exceeds = table.any_exceeds || row.exceeds_bound;
      table.rows.push_back(row);
      if (k == k_max) break;
      k = std::min(k + k_stride, k_max);
    }
  }
  return table;
}

std::vector<ModulusRow> continuity_modulus(int n_lo, int n_hi, double d_constant,
                                           double beta, const CouplingFamily& J) {
  if (n_lo < 0 || n_hi < n_lo)
    throw std::invalid_argument("continuity_modulus: bad n range");
  if (!(d_constant > 0.0))
    throw std::invalid_argument("continuity_modulus: constant must be positive");
  if (!(beta >= 0.0))
    throw std::invalid_argument("continuity_modulus: beta must be >= 0");

  auto series = summability_report(J);
  if (!series.cond_tail_square_summable) {
    std::string msg = "continuity_modulus: the squared coupling-tail series "
                      "is certified divergent";
    if (series.divergence) {
      char detail[128];
      std::snprintf(detail, sizeof detail, " (partial sums exceed %g by index %.0f)",
                    series.divergence->threshold, series.divergence->index);
      msg += detail;
    }
    DivergenceCertificate cert =
        series.divergence ? *series.divergence : DivergenceCertificate{};
    throw DivergentC1Error(msg, cert);
  }

  Interval c1 = series.c1;
  double c2 = std::exp(8.0 * d_constant * beta * beta * c1.hi);

  std::vector<ModulusRow> rows;
  rows.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
  // Running bracket for sum_{m<=n} tail(m)^2, peeled off the total.
  double part_lo = 0.0, part_hi = 0.0;
  for (int n = 0; n <= n_hi; ++n) {
    if (n >= 1) {
      Interval t = J.tail(n);
      part_lo += t.lo * t.lo;
      part_hi += t.hi * t.hi;
    }
    if (n < n_lo) continue;
    double remainder = std::max(0.0, c1.hi - part_lo);
    ModulusRow row;
    row.n = n;
    row.u_n = 16.0 * beta * beta * remainder;
    row.v_n = std::sqrt(d_constant * row.u_n / 2.0);
    double v = row.v_n;
    row.modulus = c2 * std::sqrt((6.0 * v * v + 8.0 * v) * std::exp(v * v));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dyson
