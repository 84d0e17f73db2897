#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ghzlab/common.hpp"
#include "ghzlab/ghz.hpp"
#include "ghzlab/linalg.hpp"

// Rational detector directions and the two escape hatches they enable: a
// correlated (non-product) set of nearby alignments, and commuting but
// non-local observables obtained by conjugating the ideal spin observables
// with a single shared unitary close to the identity.

namespace ghzlab::mkc {

// Unit vector with exactly rational coordinates (p1/q, p2/q, p3/q): integer
// components satisfy p1^2 + p2^2 + p3^2 = q^2 with q >= 1 and
// gcd(p1, p2, p3, q) = 1. Exact by construction; never stored as floats.
struct RationalDirection {
  long long p1 = 0;
  long long p2 = 0;
  long long p3 = 1;
  long long q = 1;

  RationalDirection() = default;
  RationalDirection(long long p1, long long p2, long long p3, long long q);

  ghz::Direction to_direction() const;
  std::string str() const;  // "p1/q,p2/q,p3/q"

  bool operator==(const RationalDirection& other) const;
  // Canonical listing order: q, then components.
  bool operator<(const RationalDirection& other) const;
};

double angle_to_target(const RationalDirection& direction,
                       const ghz::Direction& target);

// Every rational direction with denominator q <= bound, in canonical order.
// Exhaustive cubic scan; bound is capped at 500, use the parametric search
// below for tight approximations.
std::vector<RationalDirection> rational_directions(long long bound);

struct NearestRational {
  RationalDirection direction;
  double angle;
};

// Closest direction (by angle) among rational_directions(bound); ties go to
// the canonically first candidate.
NearestRational nearest_rational(const ghz::Direction& target,
                                 long long bound);

// Rational directions within max_angle of the target, found by rounding the
// target's stereographic preimage: (a, b, c) maps to
// (2ac, 2bc, a^2 + b^2 - c^2) / (a^2 + b^2 + c^2), exactly rational for any
// integers. Scans c up to parameter_limit (0 picks a default adequate for
// max_angle), returns at most max_count results sorted by angle.
std::vector<RationalDirection> rational_directions_near(
    const ghz::Direction& target, double max_angle, int max_count,
    long long parameter_limit = 0);

// Best candidate from the parametric search. ValidationError if none found
// within max_angle at the given parameter limit.
RationalDirection best_rational_approximation(const ghz::Direction& target,
                                              double max_angle,
                                              long long parameter_limit = 0);

// A finite set of detector triplets, either a Cartesian product of three
// per-particle direction lists or an explicit member list.
class TripletSet {
 public:
  static TripletSet product(const std::vector<ghz::Direction>& first,
                            const std::vector<ghz::Direction>& second,
                            const std::vector<ghz::Direction>& third);
  static TripletSet explicit_members(std::vector<ghz::DetectorTriplet> members);

  bool built_as_product() const { return product_kind_; }
  const std::vector<ghz::DetectorTriplet>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  TripletSet(bool product_kind, std::vector<ghz::DetectorTriplet> members);

  bool product_kind_;
  std::vector<ghz::DetectorTriplet> members_;
};

struct ProductCheck {
  bool is_product;
  std::array<std::size_t, 3> factor_sizes;  // distinct directions per slot
  // A factor combination absent from the set (present iff not a product).
  std::optional<ghz::DetectorTriplet> missing_combination;
};

// Decides whether the member list equals the full Cartesian product of its
// per-slot direction sets. Directions closer than tol::kDirectionMatch count
// as equal.
ProductCheck is_cartesian_product(const TripletSet& set);

// One member of a correlated alignment set: a combo together with rational
// directions for its three detectors.
struct CorrelatedMember {
  ghz::Combo combo;
  std::array<RationalDirection, 3> alignment;

  ghz::DetectorTriplet triplet() const;
};

struct CorrelatedTripletSet {
  double delta;
  std::vector<CorrelatedMember> members;

  TripletSet as_triplet_set() const;
};

// `count` members cycling through the four combos; each member's three
// rational directions lie within delta of that combo's nominal axes, and the
// member list is never a Cartesian product (detector choices are coupled
// through the shared member index). parameter_limit as in
// rational_directions_near.
CorrelatedTripletSet correlated_triplet_set(double delta, int count,
                                            std::uint64_t seed,
                                            long long parameter_limit = 0);

// Three mutually commuting +-1 observables for one combo, conjugated away
// from the ideal tensor-product form.
struct CommutingTriplet {
  ghz::Combo combo;
  double eta;
  std::uint64_t seed;
  std::array<linalg::OperatorMatrix, 3> observables;
  double max_pairwise_commutator;   // max-entry norm over the three pairs
  double max_distance_to_ideal;     // max-entry norm of observable - ideal
};

// All six conjugated observables tau(r, axis) = U sigma(r, axis) U^dagger
// for one shared U = exp(i eta K), K a seeded random Hermitian matrix with
// unit max-entry norm. Sharing U keeps the four combos' triplets consistent:
// every slot is measured by one fixed operator.
class NonlocalModel {
 public:
  NonlocalModel(double eta, std::uint64_t seed);

  double eta() const { return eta_; }
  std::uint64_t seed() const { return seed_; }

  const linalg::OperatorMatrix& observable(int particle, ghz::Axis axis) const;
  CommutingTriplet triplet(ghz::Combo combo) const;

  double max_distance_to_ideal() const;
  double max_within_combo_commutator() const;
  // Every observable must keep the two fourfold eigenvalues -1 and +1.
  bool spectra_are_plus_minus_one() const;

  ghz::EpsilonReport epsilon_report() const;

 private:
  double eta_;
  std::uint64_t seed_;
  std::vector<linalg::OperatorMatrix> tau_;    // indexed 2*(particle-1)+axis
  std::vector<linalg::OperatorMatrix> ideal_;
};

CommutingTriplet perturbed_commuting_triplet(ghz::Combo combo, double eta,
                                             std::uint64_t seed);

ghz::EpsilonReport nonlocal_epsilon_report(double eta, std::uint64_t seed);

}  // namespace ghzlab::mkc
