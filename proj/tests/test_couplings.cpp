#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dyson/couplings.hpp"

using namespace dyson;

// Reference values computed independently with mpmath at 30 digits.
// C1 values come from a 400k-term partial sum plus integral envelopes for
// the remainder, so they are certified to the stated width.
namespace {
constexpr double kZeta2 = 1.6449340668482264;    // sum k^-2
constexpr double kZeta3 = 1.2020569031595943;    // sum k^-3
constexpr double kZeta22 = 1.4905432565068935;   // sum k^-2.2
constexpr double kTail10Alpha2 = 0.10516633568168575;  // sum_{k>=10} k^-2
constexpr double kTail5Alpha15 = 0.9413718683623393;   // sum_{k>=5} k^-1.5
constexpr double kC1Alpha2 = 3.6061707094786;          // +- 4e-12
constexpr double kC1Alpha16 = 18.9201077782;           // +- 3e-7
constexpr double kC1Alpha3 = 1.4945485503500774;
}  // namespace

TEST_CASE("power_sum_tail matches reference zeta values") {
  auto z2 = power_sum_tail(2.0, 1);
  CHECK(z2.contains(kZeta2));
  CHECK(z2.width() <= 1e-10);

  auto z3 = power_sum_tail(3.0, 1);
  CHECK(z3.contains(kZeta3));

  auto z22 = power_sum_tail(2.2, 1);
  CHECK(z22.contains(kZeta22));

  CHECK(power_sum_tail(2.0, 10).contains(kTail10Alpha2));
  CHECK(power_sum_tail(1.5, 5).contains(kTail5Alpha15));
}

TEST_CASE("power_sum_tail honors a tighter tolerance") {
  auto z = power_sum_tail(2.0, 1, 1e-13);
  CHECK(z.width() <= 1e-13 + 1e-13);  // requested width plus rounding slack
  CHECK(z.contains(kZeta2));
}

TEST_CASE("power_sum_tail rejects bad arguments") {
  CHECK_THROWS_AS(power_sum_tail(1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(power_sum_tail(0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(power_sum_tail(2.0, 0), std::invalid_argument);
}

TEST_CASE("power law family evaluates k^-alpha and validates alpha") {
  auto J = CouplingFamily::power_law(2.0);
  CHECK(J.j(1) == 1.0);
  CHECK(J.j(2) == 0.25);
  CHECK(J.j(10) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(J.is_power_law());
  CHECK(J.alpha() == 2.0);
  CHECK_THROWS_AS(J.j(0), std::invalid_argument);
  CHECK_THROWS_AS(CouplingFamily::power_law(1.0), std::invalid_argument);
  CHECK_THROWS_AS(CouplingFamily::power_law(0.3), std::invalid_argument);
}

TEST_CASE("finite tables have exact tails and zero beyond range") {
  auto J = CouplingFamily::table({1.0, 0.5, 0.25});
  CHECK(J.finite_range() == 3);
  CHECK(J.j(2) == 0.5);
  CHECK(J.j(4) == 0.0);
  CHECK(J.j(1000) == 0.0);
  CHECK(J.tail(1).contains(1.75));
  CHECK(J.tail(2).contains(0.75));
  CHECK(J.tail(4).contains(0.0));
  CHECK(J.tail(1).width() < 1e-12);
  CHECK_THROWS_AS(CouplingFamily::table({1.0, -0.5}), std::invalid_argument);

  // trailing zeros are not part of the range
  auto K = CouplingFamily::table({1.0, 0.0, 0.0});
  CHECK(K.finite_range() == 1);
}

TEST_CASE("tail brackets are consistent with removing one term") {
  auto J = CouplingFamily::power_law(1.7);
  for (std::int64_t i : {1, 2, 7, 40}) {
    auto ti = J.tail(i, 1e-12);
    auto tn = J.tail(i + 1, 1e-12);
    double jk = J.j(i);
    // T(i) - T(i+1) = J(i) must be compatible with the brackets
    CHECK(ti.lo - tn.hi <= jk + 1e-12);
    CHECK(ti.hi - tn.lo >= jk - 1e-12);
  }
}

TEST_CASE("coupling table files round-trip and reject malformed input") {
  const char* path = "test_couplings_roundtrip.txt";
  auto J = CouplingFamily::table({0.5, 0.0, 0.125});
  J.save(path);
  auto K = CouplingFamily::load(path);
  CHECK(K.finite_range() == 3);
  CHECK(K.j(1) == 0.5);
  CHECK(K.j(2) == 0.0);
  CHECK(K.j(3) == 0.125);
  std::remove(path);

  auto write_and_try = [&](const char* text) {
    const char* bad = "test_couplings_bad.txt";
    std::ofstream(bad) << text;
    bool threw = false;
    try {
      CouplingFamily::load(bad);
    } catch (const std::runtime_error&) {
      threw = true;
    }
    std::remove(bad);
    return threw;
  };
  CHECK(write_and_try("1 0.5\n"));                 // missing header
  CHECK(write_and_try("tail nonzero\n1 0.5\n"));   // wrong header
  CHECK(write_and_try("tail zero\n0 0.5\n"));      // k < 1
  CHECK(write_and_try("tail zero\n1 -0.5\n"));     // negative value
  CHECK(write_and_try("tail zero\n1 0.5 extra\n"));
  CHECK(write_and_try("tail zero\n1\n"));          // missing value
  CHECK_THROWS_AS(CouplingFamily::load("no_such_file_here.txt"), std::runtime_error);

  // comments and blank lines are fine
  const char* ok = "test_couplings_ok.txt";
  std::ofstream(ok) << "# couplings\n\ntail zero\n2 0.25  # inline\n1 1.0\n";
  auto L = CouplingFamily::load(ok);
  CHECK(L.j(1) == 1.0);
  CHECK(L.j(2) == 0.25);
  std::remove(ok);
}

TEST_CASE("summability report for alpha = 2") {
  auto r = summability_report(CouplingFamily::power_law(2.0));
  CHECK(r.total.contains(kZeta2));
  CHECK(r.kappa.contains(2.0 * kZeta2));
  CHECK(r.weighted_square.contains(kZeta3));
  CHECK(r.sup_p_pj == 1.0);
  CHECK(r.cond_square_summable);
  CHECK(r.cond_linear_decay);
  CHECK(r.cond_tail_square_summable);
  CHECK(r.c1.contains(kC1Alpha2));
  CHECK(r.c1.width() < 1e-9);
  CHECK(!r.divergence.has_value());
}

TEST_CASE("summability report for alpha = 1.6 and 3") {
  auto r = summability_report(CouplingFamily::power_law(1.6));
  CHECK(r.cond_tail_square_summable);
  CHECK(r.c1.contains(kC1Alpha16));
  CHECK(r.c1.width() < 1e-4);
  CHECK(r.weighted_square.contains(kZeta22));

  auto r3 = summability_report(CouplingFamily::power_law(3.0));
  CHECK(r3.c1.contains(kC1Alpha3));
  CHECK(r3.c1.width() < 1e-10);
}

TEST_CASE("summability report certifies divergence below the 3/2 line") {
  for (double alpha : {1.4, 1.5, 1.2}) {
    auto r = summability_report(CouplingFamily::power_law(alpha));
    CHECK(r.cond_square_summable);
    CHECK(r.cond_linear_decay);
    CHECK(!r.cond_tail_square_summable);
    REQUIRE(r.divergence.has_value());
    CHECK(r.divergence->threshold == 1e3);
    CHECK(r.divergence->lower_bound > r.divergence->threshold);
    CHECK(r.divergence->index >= 1.0);
    CHECK(std::isfinite(r.divergence->index));
  }
  // the partial sums grow like n^(3-2*alpha): crossing 1e3 at alpha = 1.4
  // takes tens of millions of terms, certified without summing them
  auto r = summability_report(CouplingFamily::power_law(1.4));
  CHECK(r.divergence->index > 1e6);
}

TEST_CASE("summability report for a finite table is exact") {
  auto r = summability_report(CouplingFamily::table({1.0, 0.5, 0.25}));
  CHECK(r.total.contains(1.75));
  CHECK(r.weighted_square.contains(1.0 + 2.0 * 0.25 + 3.0 * 0.0625));
  CHECK(r.sup_p_pj == 1.0);
  // T(1)^2 + T(2)^2 + T(3)^2 = 1.75^2 + 0.75^2 + 0.25^2
  CHECK(r.c1.contains(3.6875));
  CHECK(r.c1.width() < 1e-12);
  CHECK(r.cond_tail_square_summable);
}

TEST_CASE("digests distinguish families") {
  auto a = CouplingFamily::power_law(2.0);
  auto b = CouplingFamily::power_law(2.5);
  auto c = CouplingFamily::table({1.0});
  CHECK(a.digest() == CouplingFamily::power_law(2.0).digest());
  CHECK(a.digest() != b.digest());
  CHECK(a.digest() != c.digest());
}
