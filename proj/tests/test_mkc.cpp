#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "doctest.h"
#include "ghzlab/mkc.hpp"
#include "ghzlab/tolerances.hpp"

using namespace ghzlab;
using ghz::Direction;
using mkc::RationalDirection;

TEST_SUITE("mkc") {

TEST_CASE("rational direction invariants are enforced") {
  CHECK_NOTHROW(RationalDirection(1, 2, 2, 3));
  CHECK_THROWS_AS(RationalDirection(1, 1, 1, 2), ValidationError);
  CHECK_THROWS_AS(RationalDirection(2, 0, 0, 2), ValidationError);  // not primitive
  CHECK_THROWS_AS(RationalDirection(1, 0, 0, -1), ValidationError);
  CHECK(RationalDirection(1, 2, 2, 3).str() == "1/3,2/3,2/3");
}

TEST_CASE("bound one gives exactly the six signed axes") {
  const auto axes = mkc::rational_directions(1);
  REQUIRE(axes.size() == 6);
  CHECK(axes.front() == RationalDirection(-1, 0, 0, 1));
  CHECK(std::count(axes.begin(), axes.end(), RationalDirection(0, 0, 1, 1)) ==
        1);
  CHECK(std::count(axes.begin(), axes.end(), RationalDirection(1, 0, 0, 1)) ==
        1);
}

TEST_CASE("scan results are canonical, sorted, and exact") {
  const auto directions = mkc::rational_directions(15);
  CHECK(directions.size() > 6);
  CHECK(std::is_sorted(directions.begin(), directions.end()));
  for (const RationalDirection& d : directions) {
    CHECK(d.p1 * d.p1 + d.p2 * d.p2 + d.p3 * d.p3 == d.q * d.q);
    CHECK(std::gcd(std::gcd(std::abs(d.p1), std::abs(d.p2)),
                   std::gcd(std::abs(d.p3), d.q)) == 1);
  }
  // The classic small quadruples show up.
  CHECK(std::count(directions.begin(), directions.end(),
                   RationalDirection(1, 2, 2, 3)) == 1);
  CHECK(std::count(directions.begin(), directions.end(),
                   RationalDirection(3, 4, 0, 5)) == 1);
  CHECK(std::count(directions.begin(), directions.end(),
                   RationalDirection(2, 3, 6, 7)) == 1);
}

TEST_CASE("scan validates its bound") {
  CHECK_THROWS_AS(mkc::rational_directions(0), ValidationError);
  CHECK_THROWS_AS(mkc::rational_directions(501), ValidationError);
}

TEST_CASE("nearest rational to an axis is the axis itself") {
  const auto nearest = mkc::nearest_rational(Direction::x_axis(), 5);
  CHECK(nearest.direction == RationalDirection(1, 0, 0, 1));
  CHECK(nearest.angle < 1e-12);
}

TEST_CASE("nearest rational breaks ties canonically") {
  const double r = 1.0 / std::sqrt(3.0);
  const auto nearest =
      mkc::nearest_rational(Direction::from_cartesian(r, r, r), 3);
  // (1,2,2)/3, (2,1,2)/3 and (2,2,1)/3 are equidistant; canonical order
  // selects the first.
  CHECK(nearest.direction == RationalDirection(1, 2, 2, 3));
}

TEST_CASE("nearest rational improves with the bound") {
  const Direction target = Direction::from_cartesian(0.3, 0.5, 0.9);
  const auto coarse = mkc::nearest_rational(target, 10);
  const auto fine = mkc::nearest_rational(target, 60);
  CHECK(fine.angle <= coarse.angle);
  CHECK(fine.angle < 0.05);
}

TEST_CASE("parametric search finds tight rational approximations") {
  for (const Direction& target :
       {Direction::x_axis(), Direction::y_axis(),
        Direction::from_cartesian(0.6, -0.64, 0.48)}) {
    const auto found = mkc::rational_directions_near(target, 0.005, 20);
    CHECK(!found.empty());
    double previous = 0.0;
    for (const RationalDirection& d : found) {
      const double angle = mkc::angle_to_target(d, target);
      CHECK(angle <= 0.005);
      CHECK(angle >= previous - 1e-15);  // sorted by angle
      previous = angle;
    }
    // No duplicates.
    for (std::size_t i = 0; i < found.size(); ++i)
      for (std::size_t j = i + 1; j < found.size(); ++j)
        CHECK_FALSE(found[i] == found[j]);
  }
}

TEST_CASE("best approximation respects the parameter limit") {
  const Direction target = Direction::from_cartesian(0.3, 0.5, 0.9);
  CHECK_THROWS_AS(mkc::best_rational_approximation(target, 1e-8, 3),
                  ValidationError);
  const RationalDirection d = mkc::best_rational_approximation(target, 1e-4);
  CHECK(mkc::angle_to_target(d, target) <= 1e-4);
}

TEST_CASE("product sets pass the cartesian check") {
  const std::vector<Direction> f1 = {Direction::x_axis(), Direction::y_axis()};
  const std::vector<Direction> f2 = {Direction::z_axis(),
                                     Direction::from_cartesian(1, 1, 0)};
  const std::vector<Direction> f3 = {Direction::from_cartesian(1, 2, 2)};
  const mkc::TripletSet set = mkc::TripletSet::product(f1, f2, f3);
  CHECK(set.size() == 4);
  const mkc::ProductCheck check = mkc::is_cartesian_product(set);
  CHECK(check.is_product);
  CHECK(check.factor_sizes == std::array<std::size_t, 3>{2, 2, 1});
  CHECK_FALSE(check.missing_combination.has_value());
}

TEST_CASE("removing one member breaks the product structure") {
  const std::vector<Direction> f1 = {Direction::x_axis(), Direction::y_axis()};
  const std::vector<Direction> f2 = {Direction::z_axis(),
                                     Direction::from_cartesian(1, 1, 0)};
  const std::vector<Direction> f3 = {Direction::from_cartesian(1, 2, 2),
                                     Direction::from_cartesian(2, 1, 2)};
  auto members = mkc::TripletSet::product(f1, f2, f3).members();
  members.pop_back();
  const mkc::ProductCheck check = mkc::is_cartesian_product(
      mkc::TripletSet::explicit_members(members));
  CHECK_FALSE(check.is_product);
  REQUIRE(check.missing_combination.has_value());
  // The missing combination is exactly the member we removed.
  CHECK(ghz::angle_between(check.missing_combination->third,
                           Direction::from_cartesian(2, 1, 2)) < 1e-9);
}

TEST_CASE("correlated set members stay inside the delta ball") {
  const double delta = 0.05;
  const auto set = mkc::correlated_triplet_set(delta, 8, 42);
  REQUIRE(set.members.size() == 8);
  const ghz::AlignmentSextet exact = ghz::AlignmentSextet::exact();
  for (const mkc::CorrelatedMember& member : set.members) {
    const auto& axes = ghz::kComboAxes[static_cast<std::size_t>(member.combo)];
    for (int r = 0; r < 3; ++r) {
      const double angle = mkc::angle_to_target(
          member.alignment[r], exact.at(r + 1, axes[r]));
      CHECK(angle < delta);
      CHECK(angle > 0.0);
    }
  }
}

TEST_CASE("correlated set is never a cartesian product") {
  for (std::uint64_t seed : {1ULL, 7ULL, 12345ULL}) {
    const auto set = mkc::correlated_triplet_set(0.05, 8, seed);
    const mkc::ProductCheck check =
        mkc::is_cartesian_product(set.as_triplet_set());
    CHECK_FALSE(check.is_product);
    CHECK(check.missing_combination.has_value());
  }
}

TEST_CASE("correlated set covers all four combos and is deterministic") {
  const auto a = mkc::correlated_triplet_set(0.02, 8, 5);
  const auto b = mkc::correlated_triplet_set(0.02, 8, 5);
  REQUIRE(a.members.size() == b.members.size());
  std::array<int, 4> combo_count{};
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    CHECK(a.members[i].combo == b.members[i].combo);
    for (int r = 0; r < 3; ++r)
      CHECK(a.members[i].alignment[r] == b.members[i].alignment[r]);
    ++combo_count[static_cast<std::size_t>(a.members[i].combo)];
  }
  for (int count : combo_count) CHECK(count == 2);
}

TEST_CASE("correlated set validates inputs") {
  CHECK_THROWS_AS(mkc::correlated_triplet_set(0.0, 8, 1), ValidationError);
  CHECK_THROWS_AS(mkc::correlated_triplet_set(0.05, 1, 1), ValidationError);
}

TEST_CASE("conjugated observables commute within a combo") {
  for (ghz::Combo combo : ghz::kCombos) {
    const mkc::CommutingTriplet triplet =
        mkc::perturbed_commuting_triplet(combo, 0.2, 11);
    CHECK(triplet.combo == combo);
    CHECK(triplet.max_pairwise_commutator <= tol::kCommuting);
    CHECK(triplet.max_distance_to_ideal > 0.0);
    for (const auto& tau : triplet.observables)
      CHECK(linalg::is_hermitian(tau, tol::kHermiticity));
  }
}

TEST_CASE("conjugation strength controls the distance to the ideal") {
  const mkc::NonlocalModel small(0.01, 3);
  const mkc::NonlocalModel large(0.5, 3);
  CHECK(small.max_distance_to_ideal() < 0.05);
  CHECK(large.max_distance_to_ideal() > small.max_distance_to_ideal());
  CHECK(small.max_within_combo_commutator() <= tol::kCommuting);
  CHECK(large.max_within_combo_commutator() <= tol::kCommuting);
}

TEST_CASE("conjugation preserves the plus-minus-one spectra") {
  for (std::uint64_t seed : {0ULL, 2ULL, 9ULL}) {
    const mkc::NonlocalModel model(0.3, seed);
    CHECK(model.spectra_are_plus_minus_one());
  }
}

TEST_CASE("each slot is measured by one shared operator") {
  const mkc::NonlocalModel model(0.25, 4);
  // Combos xxx and xyy share the particle-1 x-axis observable.
  const auto xxx = model.triplet(ghz::Combo::Xxx);
  const auto xyy = model.triplet(ghz::Combo::Xyy);
  CHECK(linalg::max_entry_norm(xxx.observables[0] - xyy.observables[0]) ==
        0.0);
  // Combos yxy and xxx share the particle-2 x-axis observable.
  const auto yxy = model.triplet(ghz::Combo::Yxy);
  CHECK(linalg::max_entry_norm(xxx.observables[1] - yxy.observables[1]) ==
        0.0);
}

TEST_CASE("small conjugation keeps the deviation far below the bound") {
  const ghz::EpsilonReport report = mkc::nonlocal_epsilon_report(0.01, 3);
  CHECK(report.eps > 0.0);
  CHECK(report.eps < 1e-3);
}

TEST_CASE("large conjugation can push the deviation past the bound") {
  // Frozen seed scan at eta = 0.5: seed 1 exceeds 1/2, seed 0 stays below.
  CHECK(mkc::nonlocal_epsilon_report(0.5, 1).eps > 0.5);
  CHECK(mkc::nonlocal_epsilon_report(0.5, 0).eps < 0.5);
}

TEST_CASE("conjugation strength is validated") {
  CHECK_THROWS_AS(mkc::NonlocalModel(0.0, 1), ValidationError);
  CHECK_THROWS_AS(mkc::NonlocalModel(-0.1, 1), ValidationError);
  CHECK_THROWS_AS(mkc::NonlocalModel(4.0, 1), ValidationError);
}

}  // TEST_SUITE
