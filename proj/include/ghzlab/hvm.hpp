#pragma once

#include <array>
#include <string>
#include <vector>

#include "ghzlab/common.hpp"
#include "ghzlab/ghz.hpp"

// Deterministic local models for the three-particle experiment. An atom
// assigns a definite +-1 outcome to each of the six (particle, axis) slots;
// a model is a probability distribution over the 64 atoms. The signs the
// four measured products would take are fixed per atom, and their product is
// always -1 while the observed products require +1, which is what the
// max-min analysis quantifies.

namespace ghzlab::hvm {

// One deterministic outcome assignment. Encoded in 6 bits: bit (2r + j) is
// set when particle r+1 gives -1 on axis j (0 = x, 1 = y). Atom 0 is all +1.
class Valuation {
 public:
  static Valuation from_index(int index);

  int index() const { return index_; }
  int sign(int particle, ghz::Axis axis) const;
  std::string describe() const;

 private:
  explicit Valuation(int index) : index_(index) {}
  int index_;
};

// The product sign each combo would produce under a valuation, oriented so
// that +1 means "agrees with the observed correlation". The orientation flips
// the xxx entry because its observed product is -1.
struct FVector {
  std::array<int, 4> values;

  int pattern_index() const;  // 4-bit key, bit a set when values[a] == -1
  bool operator==(const FVector& other) const { return values == other.values; }
};

FVector f_values(const Valuation& valuation);

// Exhaustive scan of all 64 valuations.
struct ParityReport {
  int total;                              // always 64
  bool every_product_is_minus_one;        // f0*f1*f2*f3 == -1 throughout
  int valuations_with_three_agreements;   // exactly three entries +1
  int valuations_with_four_agreements;    // all entries +1 (always 0)
  std::vector<FVector> patterns;          // distinct f-vectors, first-seen order
  std::vector<int> pattern_counts;        // valuations per pattern
};

ParityReport parity_exhaustive();

// Probability distribution over the 64 atoms.
class AtomDistribution {
 public:
  explicit AtomDistribution(std::array<double, 64> weights);

  static AtomDistribution point_mass(int index);
  static AtomDistribution uniform();

  double weight(int index) const;
  const std::array<double, 64>& weights() const { return weights_; }

 private:
  std::array<double, 64> weights_;
};

// Model-side analogue of the observed quantities: expectation of each
// oriented product, the probability mass where each product agrees, and the
// mass where all four agree at once (structurally zero).
struct ModelReport {
  std::array<double, 4> expectations;     // E_a = <f_a>
  std::array<double, 4> agreement_mass;   // mu(A_a) = P(f_a = +1)
  double joint_agreement_mass;            // mu(A_0 & .. & A_3), always 0
};

ModelReport model_report(const AtomDistribution& distribution);

// Exact rational, reduced form, positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational of(long long num, long long den = 1);
  double to_double() const;
  std::string str() const;

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const;
  bool operator<(const Rational& o) const;
};

// max over distributions of min_a E_a, solved exactly. The optimum is 1/2:
// no distribution can push all four oriented products above one half, and a
// four-atom mixture achieves exactly one half on each.
struct MaxMinResult {
  Rational value;                          // exact optimum
  double value_double;
  AtomDistribution witness;                // achieves min_a E_a = value
  std::array<Rational, 4> witness_pattern_weights;  // per optimal pattern
  std::array<Rational, 4> dual_multipliers;         // certificate y, sum 1
  Rational dual_value;                     // equals value (checked exactly)
  std::string certificate;                 // human-readable dual argument
};

MaxMinResult max_min_correlation();

enum class Verdict { ImpossibleForProductModels, UndecidedByThisTest };

struct VerdictReport {
  Verdict verdict;
  double eps;        // observed deviation
  double threshold;  // 0.5, the max-min gap
  double slack;      // threshold - eps; positive iff impossible

  const char* name() const;
};

// Strict comparison against the exact product-model bound: an observed
// deviation below 1/2 rules out every distribution over atoms.
VerdictReport contradiction_verdict(const ghz::EpsilonReport& report);

// Checks the measure-theoretic chain for a concrete model at deviation eps:
// if every E_a >= 1 - eps then every mu(A_a) >= 1 - eps/2 and the joint
// agreement mass must be >= 1 - 2*eps, yet it is exactly 0. Also answers
// whether ANY distribution could meet the premise (feasible iff eps >= 1/2).
struct MeasureBoundReport {
  double eps;
  std::array<double, 4> expectations;
  std::array<double, 4> agreement_mass;
  bool premise_holds;          // all E_a >= 1 - eps for this model
  double agreement_floor;      // 1 - eps/2
  bool agreement_bounds_hold;  // all mu(A_a) >= floor (when premise holds)
  double joint_floor;          // 1 - 2*eps
  double joint_actual;         // always 0
  bool joint_bound_violated;   // joint_floor > 0 while joint_actual == 0
  bool premise_feasible;       // some distribution satisfies the premise
  std::string certificate;     // exact infeasibility argument when not
};

MeasureBoundReport measure_bound_check(const AtomDistribution& distribution,
                                       double eps);

}  // namespace ghzlab::hvm
