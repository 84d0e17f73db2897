#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ghzlab/common.hpp"
#include "ghzlab/ghz.hpp"
#include "ghzlab/hvm.hpp"
#include "ghzlab/mkc.hpp"

// Round-by-round simulation of the experiment: each round picks a combo,
// assigns concrete (rational) detector directions, draws outcomes from the
// chosen model, and the summary compares empirical products against the
// model's expected values and against the product-model bound.

namespace ghzlab::harness {

enum class Model { Quantum, ProductHv, CorrelatedHv };

const char* model_name(Model model);
Model model_from_name(const std::string& name);

struct ExperimentConfig {
  Model model = Model::Quantum;
  long long rounds = 0;
  double delta = 0.0;       // alignment tolerance; 0 = exact axes
  std::uint64_t seed = 0;
  int correlated_members = 16;    // member count for the correlated set
  int pool_size = 8;              // per-axis pool size for the product model
  long long parameter_limit = 0;  // rational search depth, 0 = automatic

  void validate() const;
};

struct RoundRecord {
  long long round = 0;
  ghz::Combo combo = ghz::Combo::Xxx;
  std::array<mkc::RationalDirection, 3> alignment;
  std::array<int, 3> outcomes = {1, 1, 1};
  int product = 1;
};

struct ComboSummary {
  long long rounds = 0;
  long long product_sum = 0;
  double mean_product = 0.0;
  double standard_error = 0.0;
  double model_expectation = 0.0;  // limit of mean_product under the model
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::array<ComboSummary, 4> combos;  // indexed by combo
  ghz::EpsilonReport empirical;        // eps from the four mean products
  hvm::VerdictReport verdict;
};

// Runs the configured number of rounds. Results are identical for both
// execution policies and any thread count: every round draws from its own
// counter-derived stream and aggregation uses integer sums. When `records`
// is non-null it receives one entry per round.
ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 ExecPolicy policy = ExecPolicy::Parallel,
                                 std::vector<RoundRecord>* records = nullptr);

// End-to-end analysis with rational alignments within delta of the nominal
// axes: quantum correlations, the deviation eps, the exact product-model
// optimum, the measure chain it implies, and the verdict.
struct SlotReport {
  int particle = 1;
  ghz::Axis axis = ghz::Axis::X;
  mkc::RationalDirection alignment;
  double angle_to_axis = 0.0;
};

struct Section2Report {
  double delta = 0.0;
  std::uint64_t seed = 0;
  long long parameter_limit = 0;
  std::array<SlotReport, 6> slots;
  ghz::EpsilonReport epsilon;          // matrix-element path
  double closed_form_deviation = 0.0;  // max gap to the closed form
  double maxmin_value = 0.0;
  std::string maxmin_exact;
  std::string dual_certificate;
  // Bounds any product model satisfying E_a >= 1 - eps would have to meet.
  double agreement_floor = 0.0;   // mu(A_a) >= 1 - eps/2
  double joint_floor = 0.0;       // mu of the joint agreement >= 1 - 2 eps
  double joint_actual = 0.0;      // structurally 0 for every model
  bool premise_feasible = false;  // can any model reach E_a >= 1 - eps?
  std::string feasibility_certificate;
  hvm::VerdictReport verdict;
};

Section2Report pipeline_section2(double delta, long long parameter_limit,
                                 std::uint64_t seed);

// End-to-end analysis of the conjugated-observable model at strength eta.
struct Section3Report {
  double eta = 0.0;
  std::uint64_t seed = 0;
  double max_commutator = 0.0;  // within-combo pairs, all four combos
  double max_distance = 0.0;    // max-entry norm to the ideal observables
  double distance_ratio = 0.0;  // max_distance / eta
  bool spectra_ok = false;      // all spectra stay {-1 x4, +1 x4}
  ghz::EpsilonReport epsilon;
  hvm::VerdictReport verdict;
};

Section3Report pipeline_section3(double eta, std::uint64_t seed);

}  // namespace ghzlab::harness
