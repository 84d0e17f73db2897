#include "ghzlab/mkc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "ghzlab/rng.hpp"
#include "ghzlab/tolerances.hpp"

namespace ghzlab::mkc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long long kScanBoundCap = 500;
constexpr long long kParameterCap = 1000000;

// Substream salts for the seeded constructions.
constexpr std::uint64_t kSaltCorrelated = 0x636f7272ULL;
constexpr std::uint64_t kSaltNonlocal = 0x6e6f6e6cULL;

long long floor_isqrt(long long x) {
  if (x < 0) return -1;
  long long r = std::llround(std::sqrt(static_cast<double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

bool perfect_square(long long x, long long& root) {
  if (x < 0) return false;
  root = floor_isqrt(x);
  return root * root == x;
}

long long gcd4(long long a, long long b, long long c, long long d) {
  return std::gcd(std::gcd(std::abs(a), std::abs(b)),
                  std::gcd(std::abs(c), std::abs(d)));
}

}  // namespace

RationalDirection::RationalDirection(long long p1, long long p2, long long p3,
                                     long long q)
    : p1(p1), p2(p2), p3(p3), q(q) {
  require(q >= 1, "denominator must be positive");
  const __int128 sum = static_cast<__int128>(p1) * p1 +
                       static_cast<__int128>(p2) * p2 +
                       static_cast<__int128>(p3) * p3;
  require(sum == static_cast<__int128>(q) * q,
          "components do not satisfy p1^2 + p2^2 + p3^2 = q^2");
  require(gcd4(p1, p2, p3, q) == 1, "components must be primitive");
}

ghz::Direction RationalDirection::to_direction() const {
  const double d = static_cast<double>(q);
  return ghz::Direction::from_cartesian(static_cast<double>(p1) / d,
                                        static_cast<double>(p2) / d,
                                        static_cast<double>(p3) / d);
}

std::string RationalDirection::str() const {
  std::ostringstream out;
  out << p1 << '/' << q << ',' << p2 << '/' << q << ',' << p3 << '/' << q;
  return out.str();
}

bool RationalDirection::operator==(const RationalDirection& other) const {
  return p1 == other.p1 && p2 == other.p2 && p3 == other.p3 && q == other.q;
}

bool RationalDirection::operator<(const RationalDirection& other) const {
  if (q != other.q) return q < other.q;
  if (p1 != other.p1) return p1 < other.p1;
  if (p2 != other.p2) return p2 < other.p2;
  return p3 < other.p3;
}

double angle_to_target(const RationalDirection& direction,
                       const ghz::Direction& target) {
  return ghz::angle_between(direction.to_direction(), target);
}

std::vector<RationalDirection> rational_directions(long long bound) {
  require(bound >= 1, "bound must be at least 1");
  require(bound <= kScanBoundCap,
          "bound exceeds the exhaustive-scan cap; use the parametric search");
  std::vector<RationalDirection> out;
  for (long long q = 1; q <= bound; ++q) {
    const long long qq = q * q;
    for (long long p1 = -q; p1 <= q; ++p1) {
      const long long rem1 = qq - p1 * p1;
      const long long p2_max = floor_isqrt(rem1);
      for (long long p2 = -p2_max; p2 <= p2_max; ++p2) {
        long long root = 0;
        if (!perfect_square(rem1 - p2 * p2, root)) continue;
        // p3 ascending keeps canonical order within (q, p1, p2).
        if (root != 0 && gcd4(p1, p2, -root, q) == 1)
          out.emplace_back(p1, p2, -root, q);
        if (gcd4(p1, p2, root, q) == 1) out.emplace_back(p1, p2, root, q);
      }
    }
  }
  return out;
}

NearestRational nearest_rational(const ghz::Direction& target,
                                 long long bound) {
  const std::vector<RationalDirection> all = rational_directions(bound);
  internal_check(!all.empty(), "rational direction scan came back empty");
  NearestRational best{all.front(), angle_to_target(all.front(), target)};
  for (std::size_t i = 1; i < all.size(); ++i) {
    const double angle = angle_to_target(all[i], target);
    if (angle < best.angle) best = NearestRational{all[i], angle};
  }
  return best;
}

namespace {

struct StereographicFrame {
  std::array<int, 3> slot;  // slot[i] = original component index in place i
  double u = 0.0;
  double v = 0.0;
};

// Permute coordinates so the component smallest in magnitude lands in the
// third slot; that keeps the projection point away from the pole and the
// preimage (u, v) bounded.
StereographicFrame make_frame(const ghz::Direction& target) {
  const std::array<double, 3> comp = {target.x(), target.y(), target.z()};
  int smallest = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(comp[static_cast<std::size_t>(i)]) <
        std::abs(comp[static_cast<std::size_t>(smallest)]))
      smallest = i;
  StereographicFrame frame{};
  int pos = 0;
  for (int i = 0; i < 3; ++i)
    if (i != smallest) frame.slot[static_cast<std::size_t>(pos++)] = i;
  frame.slot[2] = smallest;
  const double big_x = comp[static_cast<std::size_t>(frame.slot[0])];
  const double big_y = comp[static_cast<std::size_t>(frame.slot[1])];
  const double small_z = comp[static_cast<std::size_t>(frame.slot[2])];
  internal_check(1.0 - small_z > 0.25, "stereographic frame degenerated");
  frame.u = big_x / (1.0 - small_z);
  frame.v = big_y / (1.0 - small_z);
  return frame;
}

}  // namespace

std::vector<RationalDirection> rational_directions_near(
    const ghz::Direction& target, double max_angle, int max_count,
    long long parameter_limit) {
  require(std::isfinite(max_angle) && max_angle > 0.0 && max_angle <= kPi,
          "max_angle must lie in (0, pi]");
  require(max_count >= 1, "max_count must be at least 1");
  require(parameter_limit >= 0 && parameter_limit <= kParameterCap,
          "parameter_limit out of range");
  if (parameter_limit == 0) {
    const double suggested = std::ceil(64.0 / max_angle);
    parameter_limit = static_cast<long long>(
        std::min<double>(static_cast<double>(kParameterCap),
                         std::max(2048.0, suggested)));
  }

  const StereographicFrame frame = make_frame(target);
  std::set<std::array<long long, 4>> seen;
  std::vector<std::pair<double, RationalDirection>> hits;
  long long first_hit_parameter = 0;

  for (long long c = 1; c <= parameter_limit; ++c) {
    const long long a0 = std::llround(frame.u * static_cast<double>(c));
    const long long b0 = std::llround(frame.v * static_cast<double>(c));
    for (long long da = -1; da <= 1; ++da) {
      for (long long db = -1; db <= 1; ++db) {
        const long long a = a0 + da;
        const long long b = b0 + db;
        const long long big1 = 2 * a * c;
        const long long big2 = 2 * b * c;
        const long long big3 = a * a + b * b - c * c;
        const long long denom = a * a + b * b + c * c;
        const long long g = gcd4(big1, big2, big3, denom);
        std::array<long long, 3> components{};
        components[static_cast<std::size_t>(frame.slot[0])] = big1 / g;
        components[static_cast<std::size_t>(frame.slot[1])] = big2 / g;
        components[static_cast<std::size_t>(frame.slot[2])] = big3 / g;
        const RationalDirection candidate(components[0], components[1],
                                          components[2], denom / g);
        const double angle = angle_to_target(candidate, target);
        if (angle > max_angle) continue;
        if (!seen.insert({candidate.p1, candidate.p2, candidate.p3,
                          candidate.q})
                 .second)
          continue;
        hits.emplace_back(angle, candidate);
        if (first_hit_parameter == 0) first_hit_parameter = c;
      }
    }
    // Once enough candidates exist, scanning a few times past the first hit
    // only sharpens angles we do not need.
    if (first_hit_parameter > 0 &&
        hits.size() >= static_cast<std::size_t>(max_count) &&
        c >= 4 * first_hit_parameter)
      break;
  }

  std::sort(hits.begin(), hits.end(),
            [](const auto& lhs, const auto& rhs) {
              if (lhs.first != rhs.first) return lhs.first < rhs.first;
              return lhs.second < rhs.second;
            });
  if (hits.size() > static_cast<std::size_t>(max_count))
    hits.resize(static_cast<std::size_t>(max_count));
  std::vector<RationalDirection> out;
  out.reserve(hits.size());
  for (const auto& hit : hits) out.push_back(hit.second);
  return out;
}

RationalDirection best_rational_approximation(const ghz::Direction& target,
                                              double max_angle,
                                              long long parameter_limit) {
  const std::vector<RationalDirection> found =
      rational_directions_near(target, max_angle, 1, parameter_limit);
  require(!found.empty(),
          "no rational direction within max_angle; raise parameter_limit");
  return found.front();
}

TripletSet::TripletSet(bool product_kind,
                       std::vector<ghz::DetectorTriplet> members)
    : product_kind_(product_kind), members_(std::move(members)) {
  require(!members_.empty(), "triplet set must be non-empty");
}

TripletSet TripletSet::product(const std::vector<ghz::Direction>& first,
                               const std::vector<ghz::Direction>& second,
                               const std::vector<ghz::Direction>& third) {
  require(!first.empty() && !second.empty() && !third.empty(),
          "product factors must be non-empty");
  require(first.size() * second.size() * third.size() <= 1000000,
          "product set too large to materialize");
  std::vector<ghz::DetectorTriplet> members;
  members.reserve(first.size() * second.size() * third.size());
  for (const ghz::Direction& d1 : first)
    for (const ghz::Direction& d2 : second)
      for (const ghz::Direction& d3 : third)
        members.push_back(ghz::DetectorTriplet{d1, d2, d3});
  return TripletSet(true, std::move(members));
}

TripletSet TripletSet::explicit_members(
    std::vector<ghz::DetectorTriplet> members) {
  return TripletSet(false, std::move(members));
}

namespace {

bool same_direction(const ghz::Direction& a, const ghz::Direction& b) {
  return ghz::angle_between(a, b) < tol::kDirectionMatch;
}

std::vector<ghz::Direction> distinct_slot_directions(
    const std::vector<ghz::DetectorTriplet>& members, int slot) {
  std::vector<ghz::Direction> out;
  for (const ghz::DetectorTriplet& member : members) {
    const ghz::Direction& d = member.at(slot + 1);
    bool known = false;
    for (const ghz::Direction& existing : out)
      if (same_direction(existing, d)) {
        known = true;
        break;
      }
    if (!known) out.push_back(d);
  }
  return out;
}

bool contains_triplet(const std::vector<ghz::DetectorTriplet>& members,
                      const ghz::DetectorTriplet& candidate) {
  for (const ghz::DetectorTriplet& member : members)
    if (same_direction(member.first, candidate.first) &&
        same_direction(member.second, candidate.second) &&
        same_direction(member.third, candidate.third))
      return true;
  return false;
}

}  // namespace

ProductCheck is_cartesian_product(const TripletSet& set) {
  const std::vector<ghz::DetectorTriplet>& members = set.members();
  ProductCheck check{};
  const std::vector<ghz::Direction> f1 = distinct_slot_directions(members, 0);
  const std::vector<ghz::Direction> f2 = distinct_slot_directions(members, 1);
  const std::vector<ghz::Direction> f3 = distinct_slot_directions(members, 2);
  check.factor_sizes = {f1.size(), f2.size(), f3.size()};
  check.is_product = true;
  for (const ghz::Direction& d1 : f1) {
    for (const ghz::Direction& d2 : f2) {
      for (const ghz::Direction& d3 : f3) {
        const ghz::DetectorTriplet candidate{d1, d2, d3};
        if (!contains_triplet(members, candidate)) {
          check.is_product = false;
          check.missing_combination = candidate;
          return check;
        }
      }
    }
  }
  return check;
}

ghz::DetectorTriplet CorrelatedMember::triplet() const {
  return ghz::DetectorTriplet{alignment[0].to_direction(),
                              alignment[1].to_direction(),
                              alignment[2].to_direction()};
}

TripletSet CorrelatedTripletSet::as_triplet_set() const {
  std::vector<ghz::DetectorTriplet> triplets;
  triplets.reserve(members.size());
  for (const CorrelatedMember& member : members)
    triplets.push_back(member.triplet());
  return TripletSet::explicit_members(std::move(triplets));
}

CorrelatedTripletSet correlated_triplet_set(double delta, int count,
                                            std::uint64_t seed,
                                            long long parameter_limit) {
  require(std::isfinite(delta) && delta >= 1e-5 && delta <= kPi / 4.0,
          "delta must lie in [1e-5, pi/4]");
  require(count >= 2, "count must be at least 2");

  const ghz::AlignmentSextet exact = ghz::AlignmentSextet::exact();
  // Each detector direction is rotated by delta/2 and then snapped to a
  // rational within delta/4, keeping the member within delta of its target.
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    CorrelatedTripletSet set{delta, {}};
    set.members.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      const ghz::Combo combo =
          ghz::kCombos[static_cast<std::size_t>(k) % 4];
      const auto& axes = ghz::kComboAxes[static_cast<std::size_t>(combo)];
      CorrelatedMember member{combo, {}};
      rng::Stream stream(seed, {kSaltCorrelated, attempt,
                                static_cast<std::uint64_t>(k)});
      for (int r = 0; r < 3; ++r) {
        const ghz::Direction& nominal =
            exact.at(r + 1, axes[static_cast<std::size_t>(r)]);
        double tx = 0.0, ty = 0.0;
        stream.next_gaussian_pair(tx, ty);
        const ghz::Direction rotated = nominal.rotated(delta * 0.5, tx, ty);
        const RationalDirection snapped = best_rational_approximation(
            rotated, delta * 0.25, parameter_limit);
        internal_check(angle_to_target(snapped, nominal) <
                           delta - tol::kArithmeticSlack,
                       "member drifted out of the delta ball");
        member.alignment[static_cast<std::size_t>(r)] = snapped;
      }
      set.members.push_back(member);
    }
    if (!is_cartesian_product(set.as_triplet_set()).is_product) return set;
  }
  throw InternalError(
      "correlated set degenerated into a product on every attempt");
}

NonlocalModel::NonlocalModel(double eta, std::uint64_t seed)
    : eta_(eta), seed_(seed) {
  require(std::isfinite(eta) && eta > 0.0 && eta <= kPi,
          "eta must lie in (0, pi]");

  // Random Hermitian generator, entries O(1), max-entry norm exactly 1.
  rng::Stream stream(seed, {kSaltNonlocal});
  linalg::OperatorMatrix k(8);
  for (int i = 0; i < 8; ++i) {
    for (int j = i; j < 8; ++j) {
      double g1 = 0.0, g2 = 0.0;
      stream.next_gaussian_pair(g1, g2);
      if (i == j) {
        k.at(i, i) = g1;
      } else {
        const linalg::Complex z(g1 / std::sqrt(2.0), g2 / std::sqrt(2.0));
        k.at(i, j) = z;
        k.at(j, i) = std::conj(z);
      }
    }
  }
  const double scale = linalg::max_entry_norm(k);
  internal_check(scale > 0.0, "random Hermitian generator vanished");
  k = k * linalg::Complex(1.0 / scale, 0.0);

  const linalg::OperatorMatrix u = linalg::unitary_exp_i(k, eta);
  const linalg::OperatorMatrix u_dag = linalg::adjoint(u);

  const ghz::AlignmentSextet exact = ghz::AlignmentSextet::exact();
  tau_.reserve(6);
  ideal_.reserve(6);
  for (int particle = 1; particle <= 3; ++particle) {
    for (ghz::Axis axis : {ghz::Axis::X, ghz::Axis::Y}) {
      linalg::OperatorMatrix sigma =
          ghz::spin_observable(exact.at(particle, axis), particle);
      tau_.push_back(u * sigma * u_dag);
      ideal_.push_back(std::move(sigma));
    }
  }
}

const linalg::OperatorMatrix& NonlocalModel::observable(
    int particle, ghz::Axis axis) const {
  require(particle >= 1 && particle <= 3, "particle index must be 1, 2 or 3");
  return tau_[static_cast<std::size_t>(2 * (particle - 1) +
                                       (axis == ghz::Axis::X ? 0 : 1))];
}

CommutingTriplet NonlocalModel::triplet(ghz::Combo combo) const {
  const auto& axes = ghz::kComboAxes[static_cast<std::size_t>(combo)];
  std::array<linalg::OperatorMatrix, 3> observables = {
      observable(1, axes[0]), observable(2, axes[1]), observable(3, axes[2])};
  double max_comm = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      max_comm = std::max(max_comm,
                          linalg::commutator_norm(
                              observables[static_cast<std::size_t>(i)],
                              observables[static_cast<std::size_t>(j)]));
  double max_dist = 0.0;
  for (int r = 0; r < 3; ++r) {
    const ghz::AlignmentSextet exact = ghz::AlignmentSextet::exact();
    const linalg::OperatorMatrix ideal = ghz::spin_observable(
        exact.at(r + 1, axes[static_cast<std::size_t>(r)]), r + 1);
    max_dist = std::max(
        max_dist, linalg::max_entry_norm(
                      observables[static_cast<std::size_t>(r)] - ideal));
  }
  return CommutingTriplet{combo,    eta_,     seed_,
                          observables, max_comm, max_dist};
}

double NonlocalModel::max_distance_to_ideal() const {
  double best = 0.0;
  for (std::size_t i = 0; i < tau_.size(); ++i)
    best = std::max(best, linalg::max_entry_norm(tau_[i] - ideal_[i]));
  return best;
}

double NonlocalModel::max_within_combo_commutator() const {
  double best = 0.0;
  for (ghz::Combo combo : ghz::kCombos) {
    const auto& axes = ghz::kComboAxes[static_cast<std::size_t>(combo)];
    const std::array<const linalg::OperatorMatrix*, 3> obs = {
        &observable(1, axes[0]), &observable(2, axes[1]),
        &observable(3, axes[2])};
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        best = std::max(best,
                        linalg::commutator_norm(
                            *obs[static_cast<std::size_t>(i)],
                            *obs[static_cast<std::size_t>(j)]));
  }
  return best;
}

bool NonlocalModel::spectra_are_plus_minus_one() const {
  for (const linalg::OperatorMatrix& tau : tau_) {
    const std::vector<linalg::EigenPair> eigen =
        linalg::hermitian_eigensystem(tau);
    for (std::size_t i = 0; i < eigen.size(); ++i) {
      const double expected = i < 4 ? -1.0 : 1.0;
      if (std::abs(eigen[i].value - expected) > tol::kSquaresToIdentity)
        return false;
    }
  }
  return true;
}

ghz::EpsilonReport NonlocalModel::epsilon_report() const {
  const linalg::StateVector psi = ghz::ghz_state();
  std::array<double, 4> corr{};
  for (ghz::Combo combo : ghz::kCombos) {
    const auto& axes = ghz::kComboAxes[static_cast<std::size_t>(combo)];
    const linalg::OperatorMatrix product = observable(1, axes[0]) *
                                           observable(2, axes[1]) *
                                           observable(3, axes[2]);
    corr[static_cast<std::size_t>(combo)] = linalg::expectation(psi, product);
  }
  return ghz::EpsilonReport::from_correlations(corr);
}

CommutingTriplet perturbed_commuting_triplet(ghz::Combo combo, double eta,
                                             std::uint64_t seed) {
  return NonlocalModel(eta, seed).triplet(combo);
}

ghz::EpsilonReport nonlocal_epsilon_report(double eta, std::uint64_t seed) {
  return NonlocalModel(eta, seed).epsilon_report();
}

}  // namespace ghzlab::mkc
