#include <array>
#include <cmath>

#include "doctest.h"
#include "ghzlab/hvm.hpp"
#include "ghzlab/rng.hpp"

using namespace ghzlab;
using hvm::AtomDistribution;
using hvm::FVector;
using hvm::Rational;
using hvm::Valuation;

namespace {

AtomDistribution random_distribution(std::uint64_t seed) {
  rng::Stream stream(seed);
  std::array<double, 64> w{};
  double sum = 0.0;
  for (double& x : w) {
    x = stream.next_double() + 1e-6;
    sum += x;
  }
  for (double& x : w) x /= sum;
  return AtomDistribution(w);
}

}  // namespace

TEST_SUITE("hvm") {

TEST_CASE("valuation bit layout") {
  const Valuation all_plus = Valuation::from_index(0);
  for (int particle = 1; particle <= 3; ++particle)
    for (ghz::Axis axis : {ghz::Axis::X, ghz::Axis::Y})
      CHECK(all_plus.sign(particle, axis) == 1);
  const Valuation flipped = Valuation::from_index(1);  // bit 0 = s1x
  CHECK(flipped.sign(1, ghz::Axis::X) == -1);
  CHECK(flipped.sign(1, ghz::Axis::Y) == 1);
  CHECK(Valuation::from_index(32).sign(3, ghz::Axis::Y) == -1);
  CHECK_THROWS_AS(Valuation::from_index(64), ValidationError);
}

TEST_CASE("oriented product signs for hand-picked valuations") {
  // All +1: agrees with the three positive products, disagrees with the
  // anti-correlated one.
  CHECK(hvm::f_values(Valuation::from_index(0)).values ==
        std::array<int, 4>{-1, 1, 1, 1});
  // Flipping s1x flips the two products that involve it.
  CHECK(hvm::f_values(Valuation::from_index(1)).values ==
        std::array<int, 4>{1, -1, 1, 1});
  // All -1.
  CHECK(hvm::f_values(Valuation::from_index(63)).values ==
        std::array<int, 4>{1, -1, -1, -1});
}

TEST_CASE("every valuation has oriented product -1") {
  const hvm::ParityReport report = hvm::parity_exhaustive();
  CHECK(report.total == 64);
  CHECK(report.every_product_is_minus_one);
  CHECK(report.valuations_with_four_agreements == 0);
  CHECK(report.valuations_with_three_agreements == 32);
}

TEST_CASE("valuations split into eight equal sign patterns") {
  const hvm::ParityReport report = hvm::parity_exhaustive();
  REQUIRE(report.patterns.size() == 8);
  for (int count : report.pattern_counts) CHECK(count == 8);
  // Patterns carry an odd number of disagreements.
  for (const FVector& pattern : report.patterns) {
    int minus = 0;
    for (int v : pattern.values)
      if (v == -1) ++minus;
    CHECK((minus == 1 || minus == 3));
  }
}

TEST_CASE("distribution constructor validates") {
  std::array<double, 64> w{};
  w[0] = 0.5;
  CHECK_THROWS_AS(static_cast<void>(AtomDistribution(w)),
                  ValidationError);  // sums to 0.5
  w[0] = 1.5;
  w[1] = -0.5;
  CHECK_THROWS_AS(static_cast<void>(AtomDistribution(w)),
                  ValidationError);  // negative weight
}

TEST_CASE("uniform distribution is unbiased") {
  const hvm::ModelReport report =
      hvm::model_report(AtomDistribution::uniform());
  for (double e : report.expectations) CHECK(std::abs(e) < 1e-15);
  for (double mass : report.agreement_mass)
    CHECK(mass == doctest::Approx(0.5));
  CHECK(report.joint_agreement_mass == 0.0);
}

TEST_CASE("expectation equals twice agreement mass minus one") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const hvm::ModelReport report = hvm::model_report(random_distribution(seed));
    for (std::size_t a = 0; a < 4; ++a)
      CHECK(std::abs(report.expectations[a] -
                     (2.0 * report.agreement_mass[a] - 1.0)) < 1e-12);
  }
}

TEST_CASE("point masses always disagree somewhere") {
  for (int v = 0; v < 64; ++v) {
    const hvm::ModelReport report =
        hvm::model_report(AtomDistribution::point_mass(v));
    double min_e = 2.0;
    for (double e : report.expectations) min_e = std::min(min_e, e);
    CHECK(min_e == doctest::Approx(-1.0));
    CHECK(report.joint_agreement_mass == 0.0);
  }
}

TEST_CASE("no distribution pushes the sum of expectations past two") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const hvm::ModelReport report = hvm::model_report(random_distribution(seed));
    double sum = 0.0;
    for (double e : report.expectations) sum += e;
    CHECK(sum <= 2.0 + 1e-12);
  }
}

TEST_CASE("rational arithmetic is exact and reduced") {
  const Rational half = Rational::of(1, 2);
  const Rational third = Rational::of(2, 6);
  CHECK(third.num == 1);
  CHECK(third.den == 3);
  CHECK((half + third) == Rational::of(5, 6));
  CHECK((half - third) == Rational::of(1, 6));
  CHECK((half * third) == Rational::of(1, 6));
  CHECK((half / third) == Rational::of(3, 2));
  CHECK(Rational::of(-2, -4) == half);
  CHECK(Rational::of(1, -2).str() == "-1/2");
  CHECK(Rational::of(3).str() == "3");
  CHECK(Rational::of(1, 3) < half);
}

TEST_CASE("max-min optimum is exactly one half") {
  const hvm::MaxMinResult result = hvm::max_min_correlation();
  CHECK(result.value == Rational::of(1, 2));
  CHECK(result.dual_value == Rational::of(1, 2));
  CHECK(result.value_double == doctest::Approx(0.5).epsilon(1e-12));
  for (const Rational& y : result.dual_multipliers)
    CHECK(y == Rational::of(1, 4));
  for (const Rational& w : result.witness_pattern_weights)
    CHECK(w == Rational::of(1, 4));
  CHECK(result.certificate.find("1/2") != std::string::npos);
}

TEST_CASE("max-min witness achieves the optimum") {
  const hvm::MaxMinResult result = hvm::max_min_correlation();
  const hvm::ModelReport report = hvm::model_report(result.witness);
  for (double e : report.expectations)
    CHECK(std::abs(e - 0.5) < 1e-15);
  for (double mass : report.agreement_mass)
    CHECK(mass == doctest::Approx(0.75));
  CHECK(report.joint_agreement_mass == 0.0);
}

TEST_CASE("random distributions never beat the witness") {
  const double optimum = hvm::max_min_correlation().value_double;
  for (std::uint64_t seed = 30; seed < 60; ++seed) {
    const hvm::ModelReport report = hvm::model_report(random_distribution(seed));
    double min_e = 2.0;
    for (double e : report.expectations) min_e = std::min(min_e, e);
    CHECK(min_e <= optimum + 1e-12);
  }
}

TEST_CASE("verdict splits strictly at one half") {
  ghz::EpsilonReport below{};
  below.per_combo = {0.1, 0.2, 0.3, 0.3};
  below.eps = 0.3;
  const hvm::VerdictReport impossible = hvm::contradiction_verdict(below);
  CHECK(impossible.verdict == hvm::Verdict::ImpossibleForProductModels);
  CHECK(impossible.slack == doctest::Approx(0.2));
  CHECK(std::string(impossible.name()) == "IMPOSSIBLE-FOR-PRODUCT-MODELS");

  ghz::EpsilonReport at{};
  at.per_combo = {0.5, 0.0, 0.0, 0.0};
  at.eps = 0.5;
  CHECK(hvm::contradiction_verdict(at).verdict ==
        hvm::Verdict::UndecidedByThisTest);
  CHECK(hvm::contradiction_verdict(at).slack == doctest::Approx(0.0));

  ghz::EpsilonReport above{};
  above.per_combo = {0.9, 0.0, 0.0, 0.0};
  above.eps = 0.9;
  const hvm::VerdictReport undecided = hvm::contradiction_verdict(above);
  CHECK(undecided.verdict == hvm::Verdict::UndecidedByThisTest);
  CHECK(undecided.slack == doctest::Approx(-0.4));
}

TEST_CASE("measure bound chain at the boundary deviation") {
  const hvm::MaxMinResult maxmin = hvm::max_min_correlation();
  const hvm::MeasureBoundReport report =
      hvm::measure_bound_check(maxmin.witness, 0.5);
  CHECK(report.premise_holds);        // E_a = 1/2 >= 1 - 1/2
  CHECK(report.agreement_floor == doctest::Approx(0.75));
  CHECK(report.agreement_bounds_hold);  // mu(A_a) = 3/4 >= 3/4
  CHECK(report.joint_floor == doctest::Approx(0.0));
  CHECK(report.joint_actual == 0.0);
  CHECK_FALSE(report.joint_bound_violated);
  CHECK(report.premise_feasible);
}

TEST_CASE("measure bound premise is infeasible below one half") {
  const hvm::MaxMinResult maxmin = hvm::max_min_correlation();
  const hvm::MeasureBoundReport report =
      hvm::measure_bound_check(maxmin.witness, 0.2);
  CHECK_FALSE(report.premise_holds);  // witness only reaches E_a = 1/2
  CHECK_FALSE(report.premise_feasible);
  CHECK(report.certificate.find("1/2") != std::string::npos);
  CHECK(report.joint_actual == 0.0);
}

TEST_CASE("measure bound check validates eps") {
  CHECK_THROWS_AS(
      hvm::measure_bound_check(AtomDistribution::uniform(), -0.1),
      ValidationError);
  CHECK_THROWS_AS(
      hvm::measure_bound_check(AtomDistribution::uniform(), 2.5),
      ValidationError);
}

}  // TEST_SUITE
