#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ghzlab/common.hpp"
#include "ghzlab/linalg.hpp"
#include "ghzlab/rng.hpp"

// Three spin-1/2 particles prepared in the entangled state
//   (|+1,+1,+1> - |-1,-1,-1>) / sqrt(2),
// each measured along a detector direction that nominally points along the
// local x or y axis. Basis ordering: index = 4*b1 + 2*b2 + b3 with b_r = 0
// for outcome +1 on particle r, so |+1,+1,+1> is index 0.

namespace ghzlab::ghz {

enum class Axis { X, Y };

// The four measured observable products. Xxx is the anti-correlated one: its
// ideal product value is -1, the other three are +1.
enum class Combo { Xxx = 0, Xyy = 1, Yxy = 2, Yyx = 3 };

inline constexpr std::array<Combo, 4> kCombos = {Combo::Xxx, Combo::Xyy,
                                                 Combo::Yxy, Combo::Yyx};
inline constexpr std::array<std::array<Axis, 3>, 4> kComboAxes = {{
    {Axis::X, Axis::X, Axis::X},
    {Axis::X, Axis::Y, Axis::Y},
    {Axis::Y, Axis::X, Axis::Y},
    {Axis::Y, Axis::Y, Axis::X},
}};
inline constexpr std::array<double, 4> kComboIdealProduct = {-1.0, 1.0, 1.0,
                                                             1.0};

const char* combo_name(Combo combo);
Combo combo_from_name(const std::string& name);

// Unit vector on the sphere, stored as (theta, phi) plus the Cartesian form.
// theta in [0, pi], phi in (-pi, pi].
class Direction {
 public:
  Direction(double theta, double phi);

  static Direction from_cartesian(double x, double y, double z);
  static Direction x_axis() { return from_cartesian(1.0, 0.0, 0.0); }
  static Direction y_axis() { return from_cartesian(0.0, 1.0, 0.0); }
  static Direction z_axis() { return from_cartesian(0.0, 0.0, 1.0); }

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

  // Rotate by exactly `angle` toward the tangent direction selected by the
  // (not necessarily normalized) tangent-plane coefficients (tx, ty).
  Direction rotated(double angle, double tx, double ty) const;
  // Rotate by shifting the azimuth, keeping theta fixed.
  Direction azimuth_shifted(double delta_phi) const;

 private:
  double theta_;
  double phi_;
  double x_;
  double y_;
  double z_;
};

// Angle between two unit vectors, in [0, pi].
double angle_between(const Direction& a, const Direction& b);

struct DetectorTriplet {
  Direction first;
  Direction second;
  Direction third;

  const Direction& at(int particle) const;
};

// One direction per (particle, nominal axis) slot; six in total. A detector
// measuring "x" on particle r actually measures along at(r, Axis::X).
class AlignmentSextet {
 public:
  AlignmentSextet(std::array<Direction, 3> x_directions,
                  std::array<Direction, 3> y_directions);

  // All six slots exactly on their nominal axes.
  static AlignmentSextet exact();

  const Direction& at(int particle, Axis axis) const;
  DetectorTriplet triplet(Combo combo) const;

 private:
  std::array<Direction, 3> x_;
  std::array<Direction, 3> y_;
};

// Deviation of each measured product from its ideal value:
//   eps_a = 1 - ideal_a * E_a,
// clamped to [0, 2]. eps is the maximum over the four combos.
struct EpsilonReport {
  std::array<double, 4> per_combo;
  double eps;

  static EpsilonReport from_correlations(const std::array<double, 4>& corr);
};

linalg::StateVector ghz_state();

// n . sigma for particle `particle` (1-based), embedded in the 8-dimensional
// product space.
linalg::OperatorMatrix spin_observable(const Direction& n, int particle);

// Projector onto the joint outcome (s1, s2, s3), each +-1, for the given
// detector directions.
linalg::OperatorMatrix joint_projection(const DetectorTriplet& triplet,
                                        const std::array<int, 3>& signs);

// <psi| (n1.sigma)(n2.sigma)(n3.sigma) |psi> by explicit matrix arithmetic.
double correlation(const DetectorTriplet& triplet);

// Same value in closed form:
//   -sin(t1) sin(t2) sin(t3) cos(p1 + p2 + p3).
double correlation_closed_form(const DetectorTriplet& triplet);

// Probability of each joint outcome, indexed like the basis states.
std::array<double, 8> outcome_probabilities(const DetectorTriplet& triplet);
std::array<double, 8> outcome_probabilities_matrix(
    const DetectorTriplet& triplet);

EpsilonReport epsilon_report(const AlignmentSextet& sextet);
EpsilonReport epsilon_report_closed_form(const AlignmentSextet& sextet);

// Each slot rotated by exactly `angle` in an independent random tangent
// direction. Draw order is fixed: particles 1..3, axis X then Y.
AlignmentSextet perturbed_sextet(double angle, rng::Stream& stream);

// Worst case over the four combos when only combo `combo`'s three slots are
// azimuth-shifted by `angle`; realizes the misalignment-ball supremum
// 1 - cos(3 * angle).
AlignmentSextet axial_worst_sextet(Combo combo, double angle);

struct SweepPoint {
  double delta;
  double worst_eps;
};

struct SweepOptions {
  int samples = 256;  // random perturbations per grid point
  ExecPolicy policy = ExecPolicy::Parallel;
};

// Worst observed eps over sextets whose slots are all rotated by exactly
// delta, for delta on a uniform grid of `steps + 1` points from 0 to
// delta_max. Random tangent directions plus the four axial worst cases.
std::vector<SweepPoint> epsilon_sweep(double delta_max, int steps,
                                      std::uint64_t seed,
                                      const SweepOptions& options = {});

}  // namespace ghzlab::ghz
