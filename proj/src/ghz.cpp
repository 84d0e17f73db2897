#include "ghzlab/ghz.hpp"

#include <algorithm>
#include <cmath>

#include "ghzlab/tolerances.hpp"

namespace ghzlab::ghz {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp(double x, double lo, double hi) {
  return std::min(hi, std::max(lo, x));
}

}  // namespace

const char* combo_name(Combo combo) {
  switch (combo) {
    case Combo::Xxx: return "xxx";
    case Combo::Xyy: return "xyy";
    case Combo::Yxy: return "yxy";
    case Combo::Yyx: return "yyx";
  }
  throw InternalError("unknown combo");
}

Combo combo_from_name(const std::string& name) {
  for (Combo combo : kCombos)
    if (name == combo_name(combo)) return combo;
  throw ValidationError("unknown combo name: " + name);
}

Direction::Direction(double theta, double phi) {
  require(std::isfinite(theta) && std::isfinite(phi),
          "direction angles must be finite");
  require(theta >= 0.0 && theta <= kPi, "theta must lie in [0, pi]");
  // Normalize phi to (-pi, pi].
  phi = std::remainder(phi, 2.0 * kPi);
  if (phi <= -kPi) phi = kPi;
  theta_ = theta;
  phi_ = phi;
  const double st = std::sin(theta);
  x_ = st * std::cos(phi);
  y_ = st * std::sin(phi);
  z_ = std::cos(theta);
}

Direction Direction::from_cartesian(double x, double y, double z) {
  require(std::isfinite(x) && std::isfinite(y) && std::isfinite(z),
          "direction components must be finite");
  const double norm = std::sqrt(x * x + y * y + z * z);
  require(norm > 1e-12, "direction vector must be nonzero");
  const double cz = clamp(z / norm, -1.0, 1.0);
  const double theta = std::acos(cz);
  const double phi = (x == 0.0 && y == 0.0) ? 0.0 : std::atan2(y, x);
  return Direction(theta, phi);
}

Direction Direction::rotated(double angle, double tx, double ty) const {
  require(std::isfinite(angle) && angle >= 0.0 && angle <= kPi,
          "rotation angle must lie in [0, pi]");
  require(std::isfinite(tx) && std::isfinite(ty),
          "tangent coefficients must be finite");
  // Orthonormal tangent basis at this point. The reference axis just needs
  // to be non-parallel to the direction itself.
  double ax = 0.0, ay = 0.0, az = 1.0;
  if (std::abs(z_) > 0.9) {
    ax = 1.0;
    az = 0.0;
  }
  double ux = ay * z_ - az * y_;
  double uy = az * x_ - ax * z_;
  double uz = ax * y_ - ay * x_;
  const double un = std::sqrt(ux * ux + uy * uy + uz * uz);
  ux /= un;
  uy /= un;
  uz /= un;
  const double vx = y_ * uz - z_ * uy;
  const double vy = z_ * ux - x_ * uz;
  const double vz = x_ * uy - y_ * ux;

  double wn = std::hypot(tx, ty);
  if (wn < 1e-300) {
    tx = 1.0;
    ty = 0.0;
    wn = 1.0;
  }
  const double cx = tx / wn;
  const double cy = ty / wn;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return from_cartesian(c * x_ + s * (cx * ux + cy * vx),
                        c * y_ + s * (cx * uy + cy * vy),
                        c * z_ + s * (cx * uz + cy * vz));
}

Direction Direction::azimuth_shifted(double delta_phi) const {
  require(std::isfinite(delta_phi), "azimuth shift must be finite");
  return Direction(theta_, phi_ + delta_phi);
}

double angle_between(const Direction& a, const Direction& b) {
  const double dot = a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
  const double cx = a.y() * b.z() - a.z() * b.y();
  const double cy = a.z() * b.x() - a.x() * b.z();
  const double cz = a.x() * b.y() - a.y() * b.x();
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

const Direction& DetectorTriplet::at(int particle) const {
  require(particle >= 1 && particle <= 3, "particle index must be 1, 2 or 3");
  switch (particle) {
    case 1: return first;
    case 2: return second;
    default: return third;
  }
}

AlignmentSextet::AlignmentSextet(std::array<Direction, 3> x_directions,
                                 std::array<Direction, 3> y_directions)
    : x_(std::move(x_directions)), y_(std::move(y_directions)) {}

AlignmentSextet AlignmentSextet::exact() {
  const Direction x = Direction::x_axis();
  const Direction y = Direction::y_axis();
  return AlignmentSextet({x, x, x}, {y, y, y});
}

const Direction& AlignmentSextet::at(int particle, Axis axis) const {
  require(particle >= 1 && particle <= 3, "particle index must be 1, 2 or 3");
  const auto& slots = (axis == Axis::X) ? x_ : y_;
  return slots[static_cast<std::size_t>(particle - 1)];
}

DetectorTriplet AlignmentSextet::triplet(Combo combo) const {
  const auto& axes = kComboAxes[static_cast<std::size_t>(combo)];
  return DetectorTriplet{at(1, axes[0]), at(2, axes[1]), at(3, axes[2])};
}

EpsilonReport EpsilonReport::from_correlations(
    const std::array<double, 4>& corr) {
  EpsilonReport report{};
  report.eps = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    require(std::isfinite(corr[a]) && std::abs(corr[a]) <= 1.0 + 1e-9,
            "correlation value outside [-1, 1]");
    report.per_combo[a] = clamp(1.0 - kComboIdealProduct[a] * corr[a], 0.0,
                                2.0);
    report.eps = std::max(report.eps, report.per_combo[a]);
  }
  return report;
}

linalg::StateVector ghz_state() {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<linalg::Complex> amps(8, linalg::Complex(0.0, 0.0));
  amps[0] = r;
  amps[7] = -r;
  return linalg::StateVector(std::move(amps));
}

namespace {

linalg::OperatorMatrix spin_matrix_2x2(const Direction& n) {
  const double ct = std::cos(n.theta());
  const double st = std::sin(n.theta());
  const linalg::Complex off =
      st * std::exp(linalg::Complex(0.0, -n.phi()));
  return linalg::OperatorMatrix::from_rows(
      2, {ct, off, std::conj(off), -ct});
}

}  // namespace

linalg::OperatorMatrix spin_observable(const Direction& n, int particle) {
  require(particle >= 1 && particle <= 3, "particle index must be 1, 2 or 3");
  const linalg::OperatorMatrix id = linalg::OperatorMatrix::identity(2);
  const linalg::OperatorMatrix s = spin_matrix_2x2(n);
  const linalg::OperatorMatrix& m1 = (particle == 1) ? s : id;
  const linalg::OperatorMatrix& m2 = (particle == 2) ? s : id;
  const linalg::OperatorMatrix& m3 = (particle == 3) ? s : id;
  return linalg::tensor(m1, linalg::tensor(m2, m3));
}

linalg::OperatorMatrix joint_projection(const DetectorTriplet& triplet,
                                        const std::array<int, 3>& signs) {
  std::array<linalg::OperatorMatrix, 3> factors = {
      linalg::OperatorMatrix(2), linalg::OperatorMatrix(2),
      linalg::OperatorMatrix(2)};
  for (int r = 0; r < 3; ++r) {
    require(signs[static_cast<std::size_t>(r)] == 1 ||
                signs[static_cast<std::size_t>(r)] == -1,
            "outcome signs must be +1 or -1");
    const linalg::OperatorMatrix s = spin_matrix_2x2(triplet.at(r + 1));
    factors[static_cast<std::size_t>(r)] =
        (linalg::OperatorMatrix::identity(2) +
         s * linalg::Complex(signs[static_cast<std::size_t>(r)], 0.0)) *
        linalg::Complex(0.5, 0.0);
  }
  linalg::OperatorMatrix p =
      linalg::tensor(factors[0], linalg::tensor(factors[1], factors[2]));
  internal_check(linalg::max_entry_norm(p * p - p) <= tol::kIdempotency,
                 "joint projection is not idempotent");
  return p;
}

double correlation(const DetectorTriplet& triplet) {
  const linalg::OperatorMatrix product = linalg::tensor(
      spin_matrix_2x2(triplet.first),
      linalg::tensor(spin_matrix_2x2(triplet.second),
                     spin_matrix_2x2(triplet.third)));
  return linalg::expectation(ghz_state(), product);
}

double correlation_closed_form(const DetectorTriplet& triplet) {
  return -std::sin(triplet.first.theta()) * std::sin(triplet.second.theta()) *
         std::sin(triplet.third.theta()) *
         std::cos(triplet.first.phi() + triplet.second.phi() +
                  triplet.third.phi());
}

std::array<double, 8> outcome_probabilities(const DetectorTriplet& triplet) {
  const double c1 = std::cos(triplet.first.theta());
  const double c2 = std::cos(triplet.second.theta());
  const double c3 = std::cos(triplet.third.theta());
  const double e3 = correlation_closed_form(triplet);
  std::array<double, 8> probs{};
  double sum = 0.0;
  for (int idx = 0; idx < 8; ++idx) {
    const double s1 = (idx & 4) ? -1.0 : 1.0;
    const double s2 = (idx & 2) ? -1.0 : 1.0;
    const double s3 = (idx & 1) ? -1.0 : 1.0;
    double p = (1.0 + s1 * s2 * c1 * c2 + s1 * s3 * c1 * c3 +
                s2 * s3 * c2 * c3 + s1 * s2 * s3 * e3) /
               8.0;
    internal_check(p >= -tol::kProbabilityNormalization,
                   "negative outcome probability");
    p = std::max(p, 0.0);
    probs[static_cast<std::size_t>(idx)] = p;
    sum += p;
  }
  internal_check(std::abs(sum - 1.0) <= tol::kProbabilityNormalization,
                 "outcome probabilities do not sum to one");
  return probs;
}

std::array<double, 8> outcome_probabilities_matrix(
    const DetectorTriplet& triplet) {
  const linalg::StateVector psi = ghz_state();
  std::array<double, 8> probs{};
  double sum = 0.0;
  for (int idx = 0; idx < 8; ++idx) {
    const std::array<int, 3> signs = {(idx & 4) ? -1 : 1, (idx & 2) ? -1 : 1,
                                      (idx & 1) ? -1 : 1};
    double p = linalg::expectation(psi, joint_projection(triplet, signs));
    internal_check(p >= -tol::kProbabilityNormalization,
                   "negative outcome probability");
    p = std::max(p, 0.0);
    probs[static_cast<std::size_t>(idx)] = p;
    sum += p;
  }
  internal_check(std::abs(sum - 1.0) <= tol::kProbabilityNormalization,
                 "outcome probabilities do not sum to one");
  return probs;
}

namespace {

template <typename CorrelationFn>
EpsilonReport report_with(const AlignmentSextet& sextet, CorrelationFn&& fn) {
  std::array<double, 4> corr{};
  for (Combo combo : kCombos)
    corr[static_cast<std::size_t>(combo)] = fn(sextet.triplet(combo));
  return EpsilonReport::from_correlations(corr);
}

}  // namespace

EpsilonReport epsilon_report(const AlignmentSextet& sextet) {
  return report_with(sextet,
                     [](const DetectorTriplet& t) { return correlation(t); });
}

EpsilonReport epsilon_report_closed_form(const AlignmentSextet& sextet) {
  return report_with(sextet, [](const DetectorTriplet& t) {
    return correlation_closed_form(t);
  });
}

AlignmentSextet perturbed_sextet(double angle, rng::Stream& stream) {
  require(std::isfinite(angle) && angle >= 0.0 && angle <= kPi,
          "perturbation angle must lie in [0, pi]");
  const AlignmentSextet base = AlignmentSextet::exact();
  std::array<Direction, 3> xs = {Direction::x_axis(), Direction::x_axis(),
                                 Direction::x_axis()};
  std::array<Direction, 3> ys = {Direction::y_axis(), Direction::y_axis(),
                                 Direction::y_axis()};
  for (int r = 1; r <= 3; ++r) {
    for (Axis axis : {Axis::X, Axis::Y}) {
      double tx = 0.0, ty = 0.0;
      stream.next_gaussian_pair(tx, ty);
      const Direction rotated = base.at(r, axis).rotated(angle, tx, ty);
      if (axis == Axis::X)
        xs[static_cast<std::size_t>(r - 1)] = rotated;
      else
        ys[static_cast<std::size_t>(r - 1)] = rotated;
    }
  }
  return AlignmentSextet(xs, ys);
}

AlignmentSextet axial_worst_sextet(Combo combo, double angle) {
  require(std::isfinite(angle) && angle >= 0.0 && angle <= kPi,
          "perturbation angle must lie in [0, pi]");
  std::array<Direction, 3> xs = {Direction::x_axis(), Direction::x_axis(),
                                 Direction::x_axis()};
  std::array<Direction, 3> ys = {Direction::y_axis(), Direction::y_axis(),
                                 Direction::y_axis()};
  const auto& axes = kComboAxes[static_cast<std::size_t>(combo)];
  for (int r = 0; r < 3; ++r) {
    if (axes[static_cast<std::size_t>(r)] == Axis::X)
      xs[static_cast<std::size_t>(r)] =
          xs[static_cast<std::size_t>(r)].azimuth_shifted(angle);
    else
      ys[static_cast<std::size_t>(r)] =
          ys[static_cast<std::size_t>(r)].azimuth_shifted(angle);
  }
  return AlignmentSextet(xs, ys);
}

namespace {

double worst_eps_at(double delta, std::uint64_t seed, std::uint64_t grid_index,
                    int samples) {
  double worst = 0.0;
  for (Combo combo : kCombos)
    worst = std::max(
        worst, epsilon_report_closed_form(axial_worst_sextet(combo, delta)).eps);
  for (int k = 0; k < samples; ++k) {
    rng::Stream stream(seed, {grid_index, static_cast<std::uint64_t>(k)});
    worst = std::max(
        worst,
        epsilon_report_closed_form(perturbed_sextet(delta, stream)).eps);
  }
  return worst;
}

}  // namespace

std::vector<SweepPoint> epsilon_sweep(double delta_max, int steps,
                                      std::uint64_t seed,
                                      const SweepOptions& options) {
  require(std::isfinite(delta_max) && delta_max > 0.0 &&
              delta_max <= kPi / 4.0,
          "delta_max must lie in (0, pi/4]");
  require(steps >= 1, "steps must be at least 1");
  require(options.samples >= 0, "sample count must be non-negative");

  std::vector<SweepPoint> points(static_cast<std::size_t>(steps) + 1);
  const auto evaluate = [&](int i) {
    const double delta = delta_max * static_cast<double>(i) /
                         static_cast<double>(steps);
    points[static_cast<std::size_t>(i)] =
        SweepPoint{delta, worst_eps_at(delta, seed,
                                       static_cast<std::uint64_t>(i),
                                       options.samples)};
  };

  if (options.policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i <= steps; ++i) evaluate(i);
  } else {
    for (int i = 0; i <= steps; ++i) evaluate(i);
  }
  return points;
}

}  // namespace ghzlab::ghz
