#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dyson/concentration.hpp"

using namespace dyson;

namespace {

ExactMeasure small_measure(int n, double beta) {
    return boltzmann(SiteInterval{0, n - 1}, beta, InteractionMask::full(),
                     BoundaryCondition::free_bc(), CouplingFamily::power_law(2.0));
}

}  // namespace

TEST_CASE("constant bundle formulas at beta = 0 and argument guards") {
    auto J = CouplingFamily::power_law(2.0);
    auto b0 = constants(0.0, 1.0, ChiSource::user, 0, J, InteractionMask::full());
    CHECK(b0.d_lsi_bound == 0.25);
    CHECK(b0.d_gcb == 0.25);
    CHECK(b0.d_herbst == 0.25);
    CHECK(b0.suac == 0.0);
    CHECK(b0.c1.has_value());

    CHECK_THROWS_AS(constants(-0.1, 1.0, ChiSource::user, 0, J, InteractionMask::full()),
                    std::invalid_argument);
    CHECK_THROWS_AS(constants(0.3, 0.5, ChiSource::user, 0, J, InteractionMask::full()),
                    std::invalid_argument);
}

TEST_CASE("bundle matches an independent rewrite of the three formulas") {
    auto J = CouplingFamily::power_law(2.0);
    double zeta2 = 1.6449340668482264;
    for (double beta : {0.1, 0.3, 0.7}) {
        double chi = 2.5;
        auto c = constants(beta, chi, ChiSource::user, 0, J, InteractionMask::full());
        double lsi = 1.0 / 4.0 + beta / 2.0 * std::exp(2.0 * beta * chi);
        double gcb = (1.0 + 2.0 * beta * std::exp(2.0 * beta * chi)) *
                     (std::exp(4.0 * beta * zeta2) + 1.0) / 8.0;
        double herbst = lsi * (std::exp(2.0 * c.suac) + 1.0) / 2.0;
        CHECK(c.d_lsi_bound == doctest::Approx(lsi).epsilon(1e-14));
        CHECK(c.d_gcb == doctest::Approx(gcb).epsilon(1e-12));
        CHECK(c.d_herbst == doctest::Approx(herbst).epsilon(1e-14));
        // Feeding the bundle's own LSI bound into the transfer lands exactly
        // on the GCB constant for the full interaction.
        CHECK(c.d_gcb == c.d_herbst);
        CHECK(c.suac == doctest::Approx(2.0 * beta * zeta2).epsilon(1e-12));
        CHECK(c.kappa == doctest::Approx(2.0 * zeta2).epsilon(1e-12));
        CHECK(c.sup_pj == 1.0);
    }
}

TEST_CASE("bundle carries chi provenance and an optional external LSI input") {
    auto J = CouplingFamily::power_law(2.0);
    auto c = constants(0.3, 1.7, ChiSource::exact_fv, 14, J,
                       InteractionMask::full(), 0.25);
    CHECK(chi_source_name(c.chi_source) == std::string("exact-fv"));
    CHECK(c.chi_volume == 14);
    CHECK(c.d_herbst == doctest::Approx(herbst_transfer(0.25, c.suac)));
    CHECK(c.d_herbst < c.d_gcb);  // the external input is smaller than the bound

    auto div = constants(0.3, 1.7, ChiSource::user, 0,
                         CouplingFamily::power_law(1.4), InteractionMask::full());
    CHECK_FALSE(div.c1.has_value());
    REQUIRE(div.c1_divergence.has_value());
    CHECK(div.c1_divergence->lower_bound > div.c1_divergence->threshold);

    auto fine = constants(0.3, 1.7, ChiSource::mc, 200, J, InteractionMask::full());
    CHECK(chi_source_name(fine.chi_source) == std::string("mc"));
    REQUIRE(fine.c1.has_value());
    CHECK(fine.c1->contains(3.6061707094786));
}

TEST_CASE("LSI verification passes with the bundle constant and fails below the search bound") {
    for (double beta : {0.1, 0.3, 0.6}) {
        auto m = small_measure(3, beta);
        double chi = susceptibility_fv(m);
        auto c = constants(beta, chi, ChiSource::exact_fv, 3,
                           CouplingFamily::power_law(2.0), InteractionMask::full());
        auto report = verify_lsi(m, c.d_lsi_bound, 2000, 99);
        CHECK(report.pass);
        CHECK(report.worst_ratio > 0.0);
        CHECK(report.worst_ratio < 1.0);
        CHECK(report.trials == 2001);  // the search witness rides along
        CHECK(report.margins.size() == 2001);
        for (double margin : report.margins) CHECK(margin >= 0.0);

        auto witness = lsi_constant_search(m, 400, 7);
        auto failing = verify_lsi(m, 0.9 * witness.ratio, 200, 99);
        CHECK_FALSE(failing.pass);
        CHECK(failing.worst_ratio > 1.0);
        CHECK_FALSE(failing.worst.description.empty());
        CHECK(failing.worst.lhs > failing.worst.rhs);
    }
}

TEST_CASE("GCB verification in the product and interacting regimes") {
    // beta = 0 with D = 1/4: the Hoeffding regime, every trial well inside.
    auto product = small_measure(4, 0.0);
    auto hoeffding = verify_gcb(product, 0.25, 600, 11);
    CHECK(hoeffding.pass);
    CHECK(hoeffding.worst_ratio <= 0.5 + 1e-9);
    CHECK(hoeffding.worst_ratio > 0.3);  // small-amplitude linear forms approach 1/2

    auto m = small_measure(4, 0.3);
    double chi = susceptibility_fv(m);
    auto c = constants(0.3, chi, ChiSource::exact_fv, 4,
                       CouplingFamily::power_law(2.0), InteractionMask::full());
    auto report = verify_gcb(m, c.d_herbst, 2000, 1234);
    CHECK(report.pass);
    CHECK(report.trials == 2000);
    // A constant far too small is caught.
    auto failing = verify_gcb(m, 0.01, 500, 1234);
    CHECK_FALSE(failing.pass);
}

TEST_CASE("moment bounds reach the variance equality boundary at beta = 0") {
    auto product = small_measure(4, 0.0);
    auto F = LocalFunction::linear({0, 1, 2, 3}, {0.9, -0.4, 1.1, 0.2});
    // m = 2 with D = 1/4: lhs = sum a_i^2 and rhs = 4 D sum a_i^2 coincide.
    auto at_boundary = verify_mcb(product, 0.25, F, {2});
    CHECK(at_boundary.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(at_boundary.pass);

    auto m = small_measure(4, 0.3);
    double chi = susceptibility_fv(m);
    auto c = constants(0.3, chi, ChiSource::exact_fv, 4,
                       CouplingFamily::power_law(2.0), InteractionMask::full());
    auto report = verify_mcb(m, c.d_herbst, F, {2, 4, 6, 8});
    CHECK(report.pass);
    CHECK(report.trials == 4);
    CHECK(report.margins.size() == 4);

    auto constant_f = LocalFunction::constant(3.0);
    auto trivial = verify_mcb(m, 0.25, constant_f, {2, 4});
    CHECK(trivial.pass);
    CHECK(trivial.worst_ratio == 0.0);

    CHECK_THROWS_AS(verify_mcb(m, 0.25, F, {0}), std::invalid_argument);
    CHECK_THROWS_AS(verify_mcb(m, 0.25, F, {}), std::invalid_argument);
}

TEST_CASE("the exponential-moment constant does not enter the moment display unchanged") {
    // The exponential-moment form log E e^{f - Ef} <= D osc converts to the
    // moment display through Chernoff and the tail integral, which multiplies
    // the constant by 8 (d_tail).  Feeding the unconverted D into the display
    // is wrong, and the product measure shows it with integers: for the sum
    // of four independent spins, E X^8 = 8320 while the display with D = 1/4
    // claims (1/4 * 16 / 2)^4 * 8 * Gamma(4) = 768.  Freeze the counterexample
    // so the call-site conversion cannot be silently dropped.
    auto product = small_measure(4, 0.0);
    auto X = LocalFunction::linear({0, 1, 2, 3}, {1.0, 1.0, 1.0, 1.0});

    auto unconverted = verify_mcb(product, 0.25, X, {2, 4, 6, 8});
    CHECK_FALSE(unconverted.pass);
    CHECK(unconverted.worst_ratio == doctest::Approx(8320.0 / 768.0).epsilon(1e-12));
    CHECK(unconverted.worst.description == "moment m = 8");

    auto b0 = constants(0.0, 1.0, ChiSource::exact_fv, 4,
                        CouplingFamily::power_law(2.0), InteractionMask::full());
    CHECK(b0.d_tail == 2.0);  // 8 * 1/4
    auto converted = verify_mcb(product, b0.d_tail, X, {2, 4, 6, 8});
    CHECK(converted.pass);
    // With the converted constant the binding moment drops back to m = 2:
    // Var X = 4 against a display value of 32.
    CHECK(converted.worst.description == "moment m = 2");
    CHECK(converted.worst_ratio == doctest::Approx(0.125).epsilon(1e-12));

    // The weak-interaction regime that first exposed the gap: beta small
    // enough that the constant has no slack to absorb the missing factor.
    auto weak = small_measure(4, 0.1);
    double chi = susceptibility_fv(weak);
    auto c = constants(0.1, chi, ChiSource::exact_fv, 4,
                       CouplingFamily::power_law(2.0), InteractionMask::full());
    CHECK(c.d_tail == 8.0 * c.d_gcb);
    CHECK_FALSE(verify_mcb(weak, c.d_herbst, X, {2, 4, 6, 8}).pass);
    CHECK(verify_mcb(weak, c.d_tail, X, {2, 4, 6, 8}).pass);
}

TEST_CASE("Herbst scan endpoints, slope bound and validation") {
    auto m = small_measure(5, 0.3);
    auto F = LocalFunction::linear({0, 2, 4}, {1.0, -0.7, 0.4});
    double chi = susceptibility_fv(m);
    auto c = constants(0.3, chi, ChiSource::exact_fv, 5,
                       CouplingFamily::power_law(2.0), InteractionMask::full());

    auto scan = herbst_scan(m, F, {1e-4, 0.05, 0.2, 0.5, 1.0}, c.d_lsi_bound, c.suac);
    CHECK_FALSE(scan.any_violation);
    CHECK(scan.f_mean == doctest::Approx(expectation(m, F)));

    // Taylor anchors at the small end: u -> mean and u' -> Var/2.
    auto centered_sq = LocalFunction(F.domain(), [&] {
        std::vector<double> t = F.table();
        for (double& v : t) v = (v - scan.f_mean) * (v - scan.f_mean);
        return t;
    }());
    double variance = expectation(m, centered_sq);
    CHECK(std::fabs(scan.rows[0].u - scan.f_mean) <= 1e-4 * variance);
    CHECK(scan.rows[0].du == doctest::Approx(variance / 2.0).epsilon(1e-4));

    // u is convex increasing in lambda for a nonconstant F.
    for (std::size_t i = 1; i < scan.rows.size(); ++i)
        CHECK(scan.rows[i].u >= scan.rows[i - 1].u);

    auto flat = herbst_scan(m, LocalFunction::constant(2.0), {0.1, 1.0},
                            c.d_lsi_bound, c.suac);
    CHECK_FALSE(flat.any_violation);
    for (const auto& row : flat.rows) {
        CHECK(row.u == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(std::fabs(row.du) < 1e-8);
    }

    CHECK_THROWS_AS(herbst_scan(m, F, {0.0}, 0.25, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(herbst_scan(m, F, {1.2}, 0.25, 0.0), std::invalid_argument);
}

TEST_CASE("uniform integrability entries respect the correlation-sum bound") {
    auto J = CouplingFamily::power_law(2.0);
    auto table = uniform_integrability_diag(1, 3, 1, 0.3, J);
    CHECK(table.chi_volume == 7);
    CHECK(table.sup_pj == 1.0);
    CHECK(table.bound == doctest::Approx(0.3 * table.chi));
    CHECK_FALSE(table.any_exceeds);
    // 2 + 6 + 12 cross pairs plus one k = 0 row per radius.
    CHECK(table.rows.size() == 23);

    for (const auto& row : table.rows) {
        if (row.k == 0) CHECK(std::fabs(row.entropy) <= 1e-12);
        CHECK(row.entropy ==
              doctest::Approx(row.w_term + row.log_term).epsilon(1e-10));
        CHECK(row.entropy <= table.bound + 1e-9);
        CHECK(row.entropy >= -1e-12);
    }

    // Stride policy still lands on the final index k_N.
    auto strided = uniform_integrability_diag(3, 3, 5, 0.3, J);
    std::vector<int> ks;
    for (const auto& row : strided.rows) ks.push_back(row.k);
    CHECK(ks == std::vector<int>{0, 5, 10, 12});

    CHECK_THROWS_AS(uniform_integrability_diag(0, 3, 1, 0.3, J), std::invalid_argument);
    CHECK_THROWS_AS(uniform_integrability_diag(2, 1, 1, 0.3, J), std::invalid_argument);
}

TEST_CASE("continuity modulus decreases and flags divergent couplings") {
    auto J = CouplingFamily::power_law(2.0);
    auto rows = continuity_modulus(0, 40, 4.714096, 0.3, J);
    REQUIRE(rows.size() == 41);
    CHECK(rows[0].u_n == doctest::Approx(1.44 * 3.6061707094786).epsilon(1e-9));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].u_n < rows[i - 1].u_n);
        CHECK(rows[i].modulus < rows[i - 1].modulus);
    }
    // Independent recomputation of one row from its own u.
    const auto& r = rows[17];
    double v = std::sqrt(4.714096 * r.u_n / 2.0);
    CHECK(r.v_n == doctest::Approx(v).epsilon(1e-13));

    auto zero = continuity_modulus(0, 3, 1.0, 0.0, J);
    for (const auto& row : zero) {
        CHECK(row.u_n == 0.0);
        CHECK(row.modulus == 0.0);
    }

    try {
        continuity_modulus(0, 5, 1.0, 0.3, CouplingFamily::power_law(1.4));
        FAIL("expected DivergentC1Error");
    } catch (const DivergentC1Error& e) {
        CHECK(e.certificate.lower_bound > e.certificate.threshold);
        CHECK(e.certificate.index >= 1e6);
        CHECK(std::string(e.what()).find("certified divergent") != std::string::npos);
    }

    CHECK_THROWS_AS(continuity_modulus(5, 2, 1.0, 0.3, J), std::invalid_argument);
    CHECK_THROWS_AS(continuity_modulus(0, 3, 0.0, 0.3, J), std::invalid_argument);
}
