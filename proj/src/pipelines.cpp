#include <cmath>

#include "ghzlab/experiment.hpp"
#include "ghzlab/rng.hpp"
#include "ghzlab/tolerances.hpp"

namespace ghzlab::harness {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kSaltSextet = 0x73657874ULL;

}  // namespace

Section2Report pipeline_section2(double delta, long long parameter_limit,
                                 std::uint64_t seed) {
  require(std::isfinite(delta) && delta >= 1e-5 && delta <= kPi / 4.0,
          "delta must lie in [1e-5, pi/4]");

  Section2Report report{};
  report.delta = delta;
  report.seed = seed;
  report.parameter_limit = parameter_limit;

  // Six fixed detectors: rotate each nominal axis by delta/2 in a seeded
  // tangent direction, then snap to a rational direction within delta/4.
  const ghz::AlignmentSextet exact = ghz::AlignmentSextet::exact();
  std::array<ghz::Direction, 3> xs = {ghz::Direction::x_axis(),
                                      ghz::Direction::x_axis(),
                                      ghz::Direction::x_axis()};
  std::array<ghz::Direction, 3> ys = {ghz::Direction::y_axis(),
                                      ghz::Direction::y_axis(),
                                      ghz::Direction::y_axis()};
  int slot_index = 0;
  for (int particle = 1; particle <= 3; ++particle) {
    for (ghz::Axis axis : {ghz::Axis::X, ghz::Axis::Y}) {
      rng::Stream stream(seed, {kSaltSextet,
                                static_cast<std::uint64_t>(slot_index)});
      double tx = 0.0, ty = 0.0;
      stream.next_gaussian_pair(tx, ty);
      const ghz::Direction& nominal = exact.at(particle, axis);
      const ghz::Direction rotated = nominal.rotated(delta * 0.5, tx, ty);
      const mkc::RationalDirection snapped = mkc::best_rational_approximation(
          rotated, delta * 0.25, parameter_limit);
      const double angle = mkc::angle_to_target(snapped, nominal);
      internal_check(angle < delta, "detector drifted out of the delta ball");

      SlotReport& slot = report.slots[static_cast<std::size_t>(slot_index)];
      slot.particle = particle;
      slot.axis = axis;
      slot.alignment = snapped;
      slot.angle_to_axis = angle;
      if (axis == ghz::Axis::X)
        xs[static_cast<std::size_t>(particle - 1)] = snapped.to_direction();
      else
        ys[static_cast<std::size_t>(particle - 1)] = snapped.to_direction();
      ++slot_index;
    }
  }

  const ghz::AlignmentSextet sextet(xs, ys);
  report.epsilon = ghz::epsilon_report(sextet);
  const ghz::EpsilonReport closed = ghz::epsilon_report_closed_form(sextet);
  for (std::size_t a = 0; a < 4; ++a)
    report.closed_form_deviation =
        std::max(report.closed_form_deviation,
                 std::abs(report.epsilon.per_combo[a] - closed.per_combo[a]));
  internal_check(report.closed_form_deviation <= tol::kClosedFormMatch,
                 "matrix and closed-form correlations disagree");

  const hvm::MaxMinResult maxmin = hvm::max_min_correlation();
  report.maxmin_value = maxmin.value.to_double();
  report.maxmin_exact = maxmin.value.str();
  report.dual_certificate = maxmin.certificate;

  const double eps = report.epsilon.eps;
  report.agreement_floor = 1.0 - eps / 2.0;
  report.joint_floor = 1.0 - 2.0 * eps;
  const hvm::MeasureBoundReport bound =
      hvm::measure_bound_check(maxmin.witness, eps);
  report.joint_actual = bound.joint_actual;
  report.premise_feasible = bound.premise_feasible;
  report.feasibility_certificate = bound.certificate;
  report.verdict = hvm::contradiction_verdict(report.epsilon);
  return report;
}

Section3Report pipeline_section3(double eta, std::uint64_t seed) {
  const mkc::NonlocalModel model(eta, seed);
  Section3Report report{};
  report.eta = eta;
  report.seed = seed;
  report.max_commutator = model.max_within_combo_commutator();
  report.max_distance = model.max_distance_to_ideal();
  report.distance_ratio = report.max_distance / eta;
  report.spectra_ok = model.spectra_are_plus_minus_one();
  report.epsilon = model.epsilon_report();
  report.verdict = hvm::contradiction_verdict(report.epsilon);
  return report;
}

}  // namespace ghzlab::harness
