#include <cmath>

#include "doctest.h"
#include "ghzlab/ghz.hpp"
#include "ghzlab/rng.hpp"
#include "ghzlab/tolerances.hpp"

using namespace ghzlab;
using ghz::AlignmentSextet;
using ghz::Axis;
using ghz::Combo;
using ghz::DetectorTriplet;
using ghz::Direction;

namespace {

constexpr double kPi = 3.14159265358979323846;

Direction random_direction(rng::Stream& stream) {
  // Uniform on the sphere: z uniform in [-1, 1], azimuth uniform.
  const double z = 2.0 * stream.next_double() - 1.0;
  const double phi = 2.0 * kPi * stream.next_double() - kPi;
  return Direction(std::acos(std::min(1.0, std::max(-1.0, z))), phi);
}

DetectorTriplet random_triplet(rng::Stream& stream) {
  const Direction d1 = random_direction(stream);
  const Direction d2 = random_direction(stream);
  const Direction d3 = random_direction(stream);
  return DetectorTriplet{d1, d2, d3};
}

}  // namespace

TEST_SUITE("ghz") {

TEST_CASE("state amplitudes") {
  const linalg::StateVector psi = ghz::ghz_state();
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(psi.amp(0) - linalg::Complex(r, 0.0)) < 1e-15);
  CHECK(std::abs(psi.amp(7) - linalg::Complex(-r, 0.0)) < 1e-15);
  for (int i = 1; i < 7; ++i) CHECK(std::abs(psi.amp(i)) == 0.0);
}

TEST_CASE("exact-axis correlations hit the parity values") {
  const AlignmentSextet exact = AlignmentSextet::exact();
  const double expected[] = {-1.0, 1.0, 1.0, 1.0};
  for (Combo combo : ghz::kCombos) {
    const DetectorTriplet t = exact.triplet(combo);
    const double want = expected[static_cast<int>(combo)];
    CHECK(std::abs(ghz::correlation(t) - want) < 1e-12);
    CHECK(std::abs(ghz::correlation_closed_form(t) - want) < 1e-12);
  }
}

TEST_CASE("all-z correlation vanishes") {
  const Direction z = Direction::z_axis();
  const DetectorTriplet t{z, z, z};
  CHECK(std::abs(ghz::correlation(t)) < 1e-12);
  CHECK(ghz::correlation_closed_form(t) == 0.0);
}

TEST_CASE("closed form equals the matrix path on random triplets") {
  rng::Stream stream(101);
  for (int i = 0; i < 200; ++i) {
    const DetectorTriplet t = random_triplet(stream);
    CHECK(std::abs(ghz::correlation(t) - ghz::correlation_closed_form(t)) <
          tol::kClosedFormMatch);
  }
}

TEST_CASE("outcome probabilities for the anti-correlated combo") {
  const DetectorTriplet t = AlignmentSextet::exact().triplet(Combo::Xxx);
  const auto probs = ghz::outcome_probabilities(t);
  // Product -1 outcomes carry weight 1/4 each, product +1 outcomes none.
  for (int idx = 0; idx < 8; ++idx) {
    const int product = ((idx & 4) ? -1 : 1) * ((idx & 2) ? -1 : 1) *
                        ((idx & 1) ? -1 : 1);
    if (product == -1)
      CHECK(probs[idx] == doctest::Approx(0.25));
    else
      CHECK(probs[idx] < 1e-15);
  }
}

TEST_CASE("probability closed form equals the projector route") {
  rng::Stream stream(77);
  for (int i = 0; i < 25; ++i) {
    const DetectorTriplet t = random_triplet(stream);
    const auto fast = ghz::outcome_probabilities(t);
    const auto slow = ghz::outcome_probabilities_matrix(t);
    for (int idx = 0; idx < 8; ++idx)
      CHECK(std::abs(fast[idx] - slow[idx]) < 1e-10);
  }
}

TEST_CASE("probabilities recover the correlation") {
  rng::Stream stream(78);
  for (int i = 0; i < 25; ++i) {
    const DetectorTriplet t = random_triplet(stream);
    const auto probs = ghz::outcome_probabilities(t);
    double corr = 0.0;
    for (int idx = 0; idx < 8; ++idx) {
      const int product = ((idx & 4) ? -1 : 1) * ((idx & 2) ? -1 : 1) *
                          ((idx & 1) ? -1 : 1);
      corr += product * probs[idx];
    }
    CHECK(std::abs(corr - ghz::correlation_closed_form(t)) < 1e-12);
  }
}

TEST_CASE("epsilon report at exact alignment is zero") {
  const auto report = ghz::epsilon_report(AlignmentSextet::exact());
  CHECK(report.eps < 1e-12);
  const auto closed = ghz::epsilon_report_closed_form(AlignmentSextet::exact());
  CHECK(closed.eps < 1e-12);
}

TEST_CASE("epsilon report rejects out-of-range correlations") {
  CHECK_THROWS_AS(
      ghz::EpsilonReport::from_correlations({1.5, 0.0, 0.0, 0.0}),
      ValidationError);
}

TEST_CASE("epsilon report orients each combo") {
  // eps_a = 1 - ideal_a * E_a: full agreement gives 0, full reversal 2.
  const auto report =
      ghz::EpsilonReport::from_correlations({1.0, -1.0, 1.0, 0.5});
  CHECK(report.per_combo[0] == doctest::Approx(2.0));
  CHECK(report.per_combo[1] == doctest::Approx(2.0));
  CHECK(report.per_combo[2] == doctest::Approx(0.0));
  CHECK(report.per_combo[3] == doctest::Approx(0.5));
  CHECK(report.eps == doctest::Approx(2.0));
}

TEST_CASE("rotation moves a direction by exactly the requested angle") {
  rng::Stream stream(5);
  for (const Direction& base :
       {Direction::x_axis(), Direction::y_axis(), Direction::z_axis()}) {
    for (double angle : {1e-4, 0.01, 0.3, 1.5}) {
      double tx = 0.0, ty = 0.0;
      stream.next_gaussian_pair(tx, ty);
      const Direction moved = base.rotated(angle, tx, ty);
      CHECK(std::abs(ghz::angle_between(base, moved) - angle) < 1e-12);
    }
  }
}

TEST_CASE("azimuth shift preserves polar angle") {
  const Direction d = Direction::x_axis().azimuth_shifted(0.2);
  CHECK(d.theta() == doctest::Approx(kPi / 2.0));
  CHECK(std::abs(ghz::angle_between(Direction::x_axis(), d) - 0.2) < 1e-12);
}

TEST_CASE("direction validation") {
  CHECK_THROWS_AS(Direction(-0.1, 0.0), ValidationError);
  CHECK_THROWS_AS(Direction::from_cartesian(0.0, 0.0, 0.0), ValidationError);
  const Direction d = Direction::from_cartesian(3.0, 0.0, 4.0);
  CHECK(d.x() == doctest::Approx(0.6));
  CHECK(d.z() == doctest::Approx(0.8));
}

TEST_CASE("perturbed sextet keeps every slot on the delta sphere") {
  rng::Stream stream(11);
  const double delta = 0.05;
  const AlignmentSextet sextet = ghz::perturbed_sextet(delta, stream);
  const AlignmentSextet exact = AlignmentSextet::exact();
  for (int particle = 1; particle <= 3; ++particle)
    for (Axis axis : {Axis::X, Axis::Y})
      CHECK(std::abs(ghz::angle_between(exact.at(particle, axis),
                                        sextet.at(particle, axis)) -
                     delta) < 1e-12);
}

TEST_CASE("axial shift of one combo realizes the worst-case deviation") {
  for (double delta : {0.005, 0.05, 0.2}) {
    for (Combo combo : ghz::kCombos) {
      const auto report =
          ghz::epsilon_report_closed_form(ghz::axial_worst_sextet(combo, delta));
      CHECK(std::abs(report.per_combo[static_cast<int>(combo)] -
                     (1.0 - std::cos(3.0 * delta))) < 1e-12);
    }
  }
}

TEST_CASE("sweep starts at zero and grows monotonically") {
  const auto points = ghz::epsilon_sweep(0.2, 10, 17);
  REQUIRE(points.size() == 11);
  CHECK(points[0].delta == 0.0);
  CHECK(points[0].worst_eps < 1e-12);
  for (std::size_t i = 1; i < points.size(); ++i)
    CHECK(points[i - 1].worst_eps <= points[i].worst_eps + 1e-9);
}

TEST_CASE("sweep worst case matches the axial supremum") {
  // Random perturbations of the same radius can never beat the axial shift,
  // so the curve equals 1 - cos(3 delta) exactly.
  const auto points = ghz::epsilon_sweep(0.1, 4, 23);
  for (const auto& point : points)
    CHECK(std::abs(point.worst_eps - (1.0 - std::cos(3.0 * point.delta))) <
          1e-12);
}

TEST_CASE("sweep is identical under both execution policies") {
  ghz::SweepOptions serial;
  serial.samples = 40;
  serial.policy = ExecPolicy::Serial;
  ghz::SweepOptions parallel = serial;
  parallel.policy = ExecPolicy::Parallel;
  const auto a = ghz::epsilon_sweep(0.15, 6, 99, serial);
  const auto b = ghz::epsilon_sweep(0.15, 6, 99, parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].delta == b[i].delta);
    CHECK(a[i].worst_eps == b[i].worst_eps);
  }
}

TEST_CASE("sweep validates its inputs") {
  CHECK_THROWS_AS(ghz::epsilon_sweep(0.0, 5, 1), ValidationError);
  CHECK_THROWS_AS(ghz::epsilon_sweep(1.0, 5, 1), ValidationError);
  CHECK_THROWS_AS(ghz::epsilon_sweep(0.1, 0, 1), ValidationError);
}

TEST_CASE("combo names round-trip") {
  for (Combo combo : ghz::kCombos)
    CHECK(ghz::combo_from_name(ghz::combo_name(combo)) == combo);
  CHECK_THROWS_AS(ghz::combo_from_name("zzz"), ValidationError);
}

}  // TEST_SUITE
