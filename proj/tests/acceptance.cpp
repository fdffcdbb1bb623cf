// Acceptance gate: ten criteria, each printed as one PASS/FAIL line with its
// runtime against a budget.  Exit 0 only if every criterion passes.  Run a
// subset by listing criterion numbers as arguments.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "dyson/concentration.hpp"
#include "dyson/couplings.hpp"
#include "dyson/densities.hpp"
#include "dyson/exact_measure.hpp"
#include "dyson/griffiths.hpp"
#include "dyson/interaction.hpp"
#include "dyson/local_function.hpp"
#include "dyson/sampler.hpp"
#include "dyson/transfer.hpp"

using namespace dyson;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& text) {
    if (!detail.empty()) detail += "; ";
    detail += text;
  }
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Everything collapses to the free case at beta = 0.

Outcome beta_zero_suite() {
  Outcome out;
  auto J_pow = CouplingFamily::power_law(2.0);
  auto J_tab = CouplingFamily::table({1.0, 0.5, 0.25});

  struct Inst {
    SiteInterval vol;
    InteractionMask mask;
    BoundaryCondition bc;
  };
  std::vector<Inst> instances{
      {{0, 7}, InteractionMask::full(), BoundaryCondition::free_bc()},
      {{-3, 3}, InteractionMask::intermediate(3), BoundaryCondition::free_bc()},
      {{-2, 2}, InteractionMask::full(), BoundaryCondition::all_plus(2)},
      {{0, 5}, InteractionMask::half_right(), BoundaryCondition::free_bc()},
  };
  for (const auto& J : {J_pow, J_tab}) {
    for (const auto& inst : instances) {
      auto m = boltzmann(inst.vol, 0.0, inst.mask, inst.bc, J);
      double uniform = 1.0 / static_cast<double>(m.p.size());
      double worst_p = 0.0, worst_corr = 0.0;
      for (double p : m.p) worst_p = std::max(worst_p, std::abs(p - uniform));
      for (int a = inst.vol.lo; a <= inst.vol.hi; ++a)
        for (int b = a + 1; b <= inst.vol.hi; ++b)
          worst_corr = std::max(worst_corr, std::abs(correlation(m, {a, b})));
      out.check(worst_p <= 1e-12, "nonuniform p, dev " + fmt("%.2e", worst_p));
      out.check(worst_corr <= 1e-12,
                "nonzero correlation " + fmt("%.2e", worst_corr));
      out.check(std::abs(susceptibility_fv(m) - 1.0) <= 1e-12,
                "chi != 1: " + fmt("%.15f", susceptibility_fv(m)));
    }
  }
  for (int depth : {1, 4, 8, 12}) {
    TransferTruncation t(depth, 0.0, J_pow);
    EigenData e = principal_eigen(t);
    out.check(std::abs(e.log_lambda - std::log(2.0)) <= 1e-12,
              "pressure != log 2 at depth " + std::to_string(depth));
    double flat_h = 0.0, flat_nu = 0.0;
    for (double v : e.h) flat_h = std::max(flat_h, std::abs(v - e.h[0]));
    for (double v : e.nu)
      flat_nu = std::max(flat_nu, std::abs(v - 1.0 / t.states()));
    out.check(flat_h <= 1e-12, "eigenfunction not constant");
    out.check(flat_nu <= 1e-12, "eigenprobability not uniform");
  }
  auto bundle = constants(0.0, 1.0, ChiSource::exact_fv, 8, J_pow,
                          InteractionMask::full());
  out.check(std::abs(bundle.d_lsi_bound - 0.25) <= 1e-12, "d_lsi != 1/4");
  out.check(std::abs(bundle.d_gcb - 0.25) <= 1e-12, "d_gcb != 1/4");
  out.check(std::abs(bundle.d_herbst - 0.25) <= 1e-12, "d_herbst != 1/4");
  if (out.ok) out.note("8 measures, 4 depths, constants at 1/4");
  return out;
}

// ---------------------------------------------------------------------------
// 2. Depth-1 truncation against the closed form log(2 cosh(beta J(1))).

Outcome nearest_neighbor_anchor() {
  Outcome out;
  double worst = 0.0;
  for (const auto& J :
       {CouplingFamily::power_law(2.0), CouplingFamily::table({0.7, 0.2})}) {
    for (int i = 1; i <= 10; ++i) {
      double beta = 0.1 * i;
      TransferTruncation t(1, beta, J);
      EigenData e = principal_eigen(t);
      double exact = std::log(2.0 * std::cosh(beta * J.j(1)));
      worst = std::max(worst, std::abs(e.log_lambda - exact));
    }
  }
  out.check(worst <= 1e-12, "depth-1 anchor residual " + fmt("%.2e", worst));
  out.note("worst residual " + fmt("%.2e", worst) + " over 20 points");
  return out;
}

// ---------------------------------------------------------------------------
// 3. Griffiths suite across alpha, volumes up to 8 sites, beta to 0.6.

Outcome griffiths_criterion() {
  Outcome out;
  std::vector<double> betas;
  for (int i = 0; i <= 6; ++i) betas.push_back(0.1 * i);
  long long checks = 0;
  for (double alpha : {1.2, 1.5, 2.0, 3.0}) {
    auto J = CouplingFamily::power_law(alpha);
    for (int n = 2; n <= 8; ++n) {
      SiteInterval vol{-(n / 2), n - 1 - n / 2};
      auto report = griffiths_suite(J, vol, betas, 1e-12);
      checks += report.checks;
      if (!report.violations.empty()) {
        const auto& v = report.violations.front();
        out.check(false, "alpha " + fmt("%.1f", alpha) + " n " +
                             std::to_string(n) + ": " + v.kind + " at beta " +
                             fmt("%.2f", v.beta));
      }
    }
  }
  out.note(std::to_string(checks) + " inequalities checked");
  return out;
}

// ---------------------------------------------------------------------------
// 4. Entropy identity, telescoping product, and the cross-pair indexation.

Outcome exact_identities() {
  Outcome out;
  auto J = CouplingFamily::power_law(2.0);
  double worst_identity = 0.0, worst_telescope = 0.0;
  for (int radius = 1; radius <= 3; ++radius) {
    std::int64_t k_max = static_cast<std::int64_t>(radius) * (radius + 1);
    for (std::int64_t k = 0; k <= k_max; ++k) {
      IntermediateDensity d = intermediate_density(radius, k, 0.3, J);
      double identity =
          std::abs(d.entropy - (-d.w_mean - d.log_normalizer));
      double prod = 1.0;
      for (double f : d.telescoping_factors) prod *= f;
      double telescope = std::abs(prod - std::exp(d.log_normalizer));
      worst_identity = std::max(worst_identity, identity);
      worst_telescope = std::max(worst_telescope, telescope);
    }
  }
  out.check(worst_identity <= 1e-10,
            "entropy identity residual " + fmt("%.2e", worst_identity));
  out.check(worst_telescope <= 1e-10,
            "telescoping residual " + fmt("%.2e", worst_telescope));

  // Indexation: the first N(N+1) cross pairs are exactly those of radius
  // <= N, in every N up to 8.  Integer arithmetic, no tolerance.
  for (int N = 1; N <= 8; ++N) {
    std::int64_t k_n = static_cast<std::int64_t>(N) * (N + 1);
    for (std::int64_t rank = 1; rank <= k_n; ++rank) {
      CrossPair p = cross_pair_at(rank);
      if (std::max(p.left_depth, p.right_site) > N)
        out.check(false, "rank " + std::to_string(rank) + " exceeds radius " +
                             std::to_string(N));
    }
    CrossPair beyond = cross_pair_at(k_n + 1);
    out.check(std::max(beyond.left_depth, beyond.right_site) == N + 1,
              "rank k_N + 1 not at radius N + 1 for N = " + std::to_string(N));
  }
  out.note("identity " + fmt("%.1e", worst_identity) + ", telescope " +
           fmt("%.1e", worst_telescope));
  return out;
}

// ---------------------------------------------------------------------------
// 5. Log-Sobolev inequality with the derived constant, random + adversarial.

Outcome lsi_verification() {
  Outcome out;
  auto J = CouplingFamily::power_law(2.0);
  double worst_ratio = 0.0;
  int total_trials = 0;
  std::uint64_t seed = 0x51a0;
  for (int n : {2, 3, 4}) {
    for (double beta : {0.1, 0.3, 0.6}) {
      auto m = boltzmann(SiteInterval{0, n - 1}, beta, InteractionMask::full(),
                         BoundaryCondition::free_bc(), J);
      double chi = susceptibility_fv(m);
      auto bundle =
          constants(beta, chi, ChiSource::exact_fv, n, J, InteractionMask::full());
      auto report = verify_lsi(m, bundle.d_lsi_bound, 10000, seed++);
      total_trials += report.trials;
      worst_ratio = std::max(worst_ratio, report.worst_ratio);
      out.check(report.pass, "violated at n " + std::to_string(n) + " beta " +
                                 fmt("%.1f", beta) + ": " +
                                 report.worst.description);
    }
  }
  out.note(std::to_string(total_trials) + " candidates, worst ratio " +
           fmt("%.4f", worst_ratio));
  return out;
}

// ---------------------------------------------------------------------------
// 6. Herbst chain: LSI constant -> GCB, cumulant slopes, and moments.

Outcome herbst_chain() {
  Outcome out;
  auto J = CouplingFamily::power_law(2.0);
  std::vector<double> lambda_grid;
  for (int i = 1; i <= 20; ++i) lambda_grid.push_back(0.05 * i);
  double worst_gcb = 0.0, worst_mcb = 0.0;
  std::uint64_t seed = 0x6e8b;
  for (int n : {2, 3, 4}) {
    std::vector<int> sites;
    for (int s = 0; s < n; ++s) sites.push_back(s);
    auto F = LocalFunction::linear(sites, std::vector<double>(sites.size(), 1.0));
    for (double beta : {0.1, 0.3, 0.6}) {
      auto m = boltzmann(SiteInterval{0, n - 1}, beta, InteractionMask::full(),
                         BoundaryCondition::free_bc(), J);
      double chi = susceptibility_fv(m);
      auto bundle =
          constants(beta, chi, ChiSource::exact_fv, n, J, InteractionMask::full());

      auto gcb = verify_gcb(m, bundle.d_herbst, 5000, seed++);
      worst_gcb = std::max(worst_gcb, gcb.worst_ratio);
      out.check(gcb.pass, "gcb violated at n " + std::to_string(n) + " beta " +
                              fmt("%.1f", beta));

      auto scan = herbst_scan(m, F, lambda_grid, bundle.d_lsi_bound, bundle.suac);
      out.check(!scan.any_violation, "cumulant slope exceeded at n " +
                                         std::to_string(n) + " beta " +
                                         fmt("%.1f", beta));

      // The certified constant enters the moment display in its tail form:
      // the exponential-moment bound converts with a factor 8 (see d_tail).
      auto mcb = verify_mcb(m, bundle.d_tail, F, {2, 4, 6, 8});
      worst_mcb = std::max(worst_mcb, mcb.worst_ratio);
      out.check(mcb.pass, "moment bound violated at n " + std::to_string(n) +
                              " beta " + fmt("%.1f", beta));
    }
  }
  out.note("worst gcb ratio " + fmt("%.4f", worst_gcb) + ", worst mcb ratio " +
           fmt("%.4f", worst_mcb));
  return out;
}

// ---------------------------------------------------------------------------
// 7. Spin-flip densities against the oscillation budget e^{2 beta |Psi_i|}.

double site_budget(const ExactMeasure& m, int i) {
  double b = 0.0;
  for (int j = m.volume.lo; j <= m.volume.hi; ++j)
    if (j != i && m.mask.active(i, j)) b += m.couplings.j(std::abs(i - j));
  if (m.bc.kind() != BoundaryCondition::Kind::free) {
    for (int t = 0; t < m.bc.left_extent(); ++t) {
      int e = m.volume.lo - 1 - t;
      if (m.mask.active(i, e)) b += m.couplings.j(i - e);
    }
    for (int t = 0; t < m.bc.right_extent(); ++t) {
      int e = m.volume.hi + 1 + t;
      if (m.mask.active(i, e)) b += m.couplings.j(e - i);
    }
  }
  return b;
}

Outcome flip_density_bound() {
  Outcome out;
  struct Inst {
    SiteInterval vol;
    InteractionMask mask;
    BoundaryCondition bc;
  };
  std::vector<Inst> instances{
      {{0, 5}, InteractionMask::full(), BoundaryCondition::free_bc()},
      {{-2, 2}, InteractionMask::full(), BoundaryCondition::all_plus(2)},
      {{-2, 3}, InteractionMask::intermediate(4), BoundaryCondition::free_bc()},
      {{0, 4}, InteractionMask::half_right(), BoundaryCondition::free_bc()},
      {{-3, 2}, InteractionMask::full(), BoundaryCondition::all_minus(3)},
  };
  int densities = 0;
  double worst_slack = -1e300;
  for (double alpha : {1.5, 2.0}) {
    auto J = CouplingFamily::power_law(alpha);
    for (double beta : {0.3, 0.6}) {
      for (const auto& inst : instances) {
        auto m = boltzmann(inst.vol, beta, inst.mask, inst.bc, J);
        for (int i = inst.vol.lo; i <= inst.vol.hi; ++i) {
          DensityTable d = flip_density(m, i);
          double sup = *std::max_element(d.values.begin(), d.values.end());
          double bound = std::exp(2.0 * beta * site_budget(m, i));
          worst_slack = std::max(worst_slack, sup - bound);
          out.check(sup <= bound + 1e-9,
                    "site " + std::to_string(i) + " density " +
                        fmt("%.6f", sup) + " above " + fmt("%.6f", bound));
          out.check(std::abs(d.integral - 1.0) <= 1e-12,
                    "flip density does not integrate to 1");
          ++densities;
        }
      }
    }
  }
  out.note(std::to_string(densities) + " densities, worst sup-minus-bound " +
           fmt("%.2e", worst_slack));
  return out;
}

// ---------------------------------------------------------------------------
// 8. Half-line density route vs power iteration, plus the uniform bracket.

Outcome eigenfunction_cross_validation() {
  Outcome out;
  auto J = CouplingFamily::power_law(2.0);
  double beta = 0.3;
  RouteComparison rc = eigenfunction_density_route(12, 8, beta, J, 12);
  out.check(rc.rel_sup_distance <= 5e-2,
            "rel sup distance " + fmt("%.4f", rc.rel_sup_distance));

  auto window = boltzmann(SiteInterval{-3, 3}, beta, InteractionMask::full(),
                          BoundaryCondition::free_bc(), J);
  auto bundle = constants(beta, susceptibility_fv(window), ChiSource::exact_fv,
                          window.sites(), J, InteractionMask::full());
  double c1_hi = summability_report(J).c1.hi;
  double bracket = std::exp(8.0 * bundle.d_gcb * beta * beta * c1_hi);
  out.check(rc.density.min_full >= 1.0 / bracket - 1e-12,
            "density " + fmt("%.4f", rc.density.min_full) + " below bracket");
  out.check(rc.density.max_full <= bracket + 1e-12,
            "density " + fmt("%.4f", rc.density.max_full) + " above bracket");
  out.note("distance " + fmt("%.4f", rc.rel_sup_distance) + ", density in [" +
           fmt("%.4f", rc.density.min_full) + ", " +
           fmt("%.4f", rc.density.max_full) + "], bracket e^" +
           fmt("%.1f", std::log(bracket)));
  return out;
}

// ---------------------------------------------------------------------------
// 9. Heat-bath sampler against exact enumeration at 14 sites.

Outcome mc_vs_exact() {
  Outcome out;
  auto J = CouplingFamily::power_law(2.0);
  double beta = 0.3;
  SiteInterval vol{0, 13};
  auto m = boltzmann(vol, beta, InteractionMask::full(),
                     BoundaryCondition::free_bc(), J);

  ChainState pair_chain(vol, beta, InteractionMask::full(),
                        BoundaryCondition::free_bc(), J, 13);
  auto pair_est = estimate_mean(pair_chain, LocalFunction::pair(0, 1), 500, 6000);
  double pair_exact = correlation(m, {0, 1});
  double z_pair = std::abs(pair_est.mean - pair_exact) / pair_est.stderr_value;
  out.check(pair_est.resolved && pair_est.burnin_adequate,
            "pair estimate unresolved");
  out.check(z_pair <= 3.0, "pair correlation off by " + fmt("%.2f", z_pair) +
                               " stderr");

  ChainState chi_chain(vol, beta, InteractionMask::full(),
                       BoundaryCondition::free_bc(), J, 1013);
  auto chi_est = susceptibility_mc(chi_chain, 500, 6000);
  double chi_exact = susceptibility_row(m, chi_chain.center_site());
  double z_chi = std::abs(chi_est.mean - chi_exact) / chi_est.stderr_value;
  out.check(chi_est.resolved && chi_est.burnin_adequate,
            "chi estimate unresolved");
  out.check(z_chi <= 3.0,
            "susceptibility off by " + fmt("%.2f", z_chi) + " stderr");
  out.note("pair z = " + fmt("%.2f", z_pair) + ", chi z = " +
           fmt("%.2f", z_chi));
  return out;
}

// ---------------------------------------------------------------------------
// 10. Summability classification and the equicontinuity modulus.

Outcome summability_classifier() {
  Outcome out;
  auto r2 = summability_report(CouplingFamily::power_law(2.0));
  out.check(r2.cond_square_summable && r2.cond_linear_decay &&
                r2.cond_tail_square_summable,
            "alpha 2 should satisfy (i), (ii), (iii)");

  auto r16 = summability_report(CouplingFamily::power_law(1.6));
  out.check(r16.cond_tail_square_summable, "alpha 1.6 should satisfy (iii)");

  auto r14 = summability_report(CouplingFamily::power_law(1.4));
  out.check(!r14.cond_tail_square_summable, "alpha 1.4 must fail (iii)");
  out.check(r14.divergence.has_value(), "alpha 1.4 lacks a certificate");
  if (r14.divergence) {
    out.check(r14.divergence->lower_bound > r14.divergence->threshold,
              "certificate bound does not clear its threshold");
    out.check(r14.divergence->threshold >= 1e3, "certificate threshold too low");
  }

  auto J2 = CouplingFamily::power_law(2.0);
  double beta = 0.3;
  auto window = boltzmann(SiteInterval{-3, 3}, beta, InteractionMask::full(),
                          BoundaryCondition::free_bc(), J2);
  auto bundle = constants(beta, susceptibility_fv(window), ChiSource::exact_fv,
                          window.sites(), J2, InteractionMask::full());
  auto rows = continuity_modulus(0, 15000, bundle.d_gcb, beta, J2);
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    decreasing = decreasing && rows[i].u_n < rows[i - 1].u_n;
  out.check(decreasing, "u_n not strictly decreasing");
  out.check(rows.back().u_n < 1e-4,
            "u_n stuck at " + fmt("%.2e", rows.back().u_n));

  bool threw = false;
  try {
    continuity_modulus(0, 10, bundle.d_gcb, beta, CouplingFamily::power_law(1.4));
  } catch (const DivergentC1Error& e) {
    threw = true;
    out.check(e.certificate.lower_bound > e.certificate.threshold,
              "thrown certificate does not clear its threshold");
  }
  out.check(threw, "alpha 1.4 modulus did not raise the structured error");
  out.note("u_15000 = " + fmt("%.2e", rows.back().u_n) +
           ", alpha 1.4 certified divergent at index " +
           fmt("%.0f", r14.divergence ? r14.divergence->index : 0.0));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> body;
  };
  std::vector<Criterion> criteria{
      {"beta-zero suite", 5.0, beta_zero_suite},
      {"nearest-neighbor anchor", 1.0, nearest_neighbor_anchor},
      {"griffiths suite", 120.0, griffiths_criterion},
      {"exact identities", 60.0, exact_identities},
      {"lsi verification", 300.0, lsi_verification},
      {"herbst chain", 300.0, herbst_chain},
      {"flip-density bound", 60.0, flip_density_bound},
      {"eigenfunction cross-validation", 120.0, eigenfunction_cross_validation},
      {"mc vs exact", 120.0, mc_vs_exact},
      {"summability classifier", 30.0, summability_classifier},
  };

  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int passed = 0, ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int number = static_cast<int>(i) + 1;
    if (!wanted.empty() && !wanted.count(number)) continue;
    ++ran;
    auto t0 = std::chrono::steady_clock::now();
    Outcome out = criteria[i].body();
    double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    bool in_budget = dt <= criteria[i].budget_s;
    bool ok = out.ok && in_budget;
    passed += ok;
    std::printf("[%2d/10] %-32s %s %7.2fs / %.0fs\n", number, criteria[i].name,
                ok ? "PASS" : "FAIL", dt, criteria[i].budget_s);
    if (!out.detail.empty()) std::printf("        %s\n", out.detail.c_str());
    if (!in_budget) std::printf("        over budget\n");
  }
  std::printf("acceptance: %d/%d criteria passed\n", passed, ran);
  return passed == ran ? 0 : 1;
}
