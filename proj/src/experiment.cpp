#include "ghzlab/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "ghzlab/rng.hpp"
#include "ghzlab/tolerances.hpp"

namespace ghzlab::harness {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kSaltPool = 0x706f6f6cULL;
constexpr std::uint64_t kSaltRound = 0x726f756eULL;

mkc::RationalDirection exact_axis_rational(ghz::Axis axis) {
  return axis == ghz::Axis::X ? mkc::RationalDirection(1, 0, 0, 1)
                              : mkc::RationalDirection(0, 1, 0, 1);
}

struct MemberData {
  std::array<mkc::RationalDirection, 3> alignment;
  std::array<double, 8> outcome_cdf;
  double correlation = 0.0;
};

MemberData make_member(const std::array<mkc::RationalDirection, 3>& alignment) {
  MemberData member{alignment, {}, 0.0};
  const ghz::DetectorTriplet triplet{alignment[0].to_direction(),
                                     alignment[1].to_direction(),
                                     alignment[2].to_direction()};
  const std::array<double, 8> probs = ghz::outcome_probabilities(triplet);
  double running = 0.0;
  for (std::size_t m = 0; m < 8; ++m) {
    running += probs[m];
    member.outcome_cdf[m] = running;
  }
  member.correlation = ghz::correlation_closed_form(triplet);
  return member;
}

struct Pools {
  // Quantum / CorrelatedHv: alignment members per combo.
  std::array<std::vector<MemberData>, 4> members;
  // ProductHv: per-axis direction pools plus the atom distribution CDF.
  std::array<std::vector<mkc::RationalDirection>, 2> axis_pool;
  std::array<double, 64> atom_cdf{};
  std::array<double, 4> model_expectation{};
};

Pools build_pools(const ExperimentConfig& config) {
  Pools pools{};
  const std::uint64_t pool_seed = rng::derive_seed(config.seed, kSaltPool);

  if (config.model == Model::ProductHv) {
    for (ghz::Axis axis : {ghz::Axis::X, ghz::Axis::Y}) {
      auto& pool = pools.axis_pool[axis == ghz::Axis::X ? 0 : 1];
      if (config.delta == 0.0) {
        pool.push_back(exact_axis_rational(axis));
      } else {
        const ghz::Direction target = axis == ghz::Axis::X
                                          ? ghz::Direction::x_axis()
                                          : ghz::Direction::y_axis();
        for (const mkc::RationalDirection& d : mkc::rational_directions_near(
                 target, config.delta, config.pool_size,
                 config.parameter_limit))
          pool.push_back(d);
        require(!pool.empty(),
                "no rational directions within delta of an axis");
      }
    }
    const hvm::MaxMinResult maxmin = hvm::max_min_correlation();
    const hvm::ModelReport model = hvm::model_report(maxmin.witness);
    double running = 0.0;
    for (int v = 0; v < 64; ++v) {
      running += maxmin.witness.weight(v);
      pools.atom_cdf[static_cast<std::size_t>(v)] = running;
    }
    for (std::size_t a = 0; a < 4; ++a)
      pools.model_expectation[a] =
          ghz::kComboIdealProduct[a] * model.expectations[a];
    return pools;
  }

  if (config.delta == 0.0) {
    // Exact nominal axes, one member per combo.
    for (ghz::Combo combo : ghz::kCombos) {
      const auto& axes = ghz::kComboAxes[static_cast<std::size_t>(combo)];
      pools.members[static_cast<std::size_t>(combo)].push_back(
          make_member({exact_axis_rational(axes[0]),
                       exact_axis_rational(axes[1]),
                       exact_axis_rational(axes[2])}));
    }
  } else {
    const mkc::CorrelatedTripletSet set = mkc::correlated_triplet_set(
        config.delta, config.correlated_members, pool_seed,
        config.parameter_limit);
    for (const mkc::CorrelatedMember& member : set.members)
      pools.members[static_cast<std::size_t>(member.combo)].push_back(
          make_member(member.alignment));
    for (ghz::Combo combo : ghz::kCombos)
      internal_check(
          !pools.members[static_cast<std::size_t>(combo)].empty(),
          "correlated set left a combo without members");
  }
  for (std::size_t a = 0; a < 4; ++a) {
    double sum = 0.0;
    for (const MemberData& member : pools.members[a])
      sum += member.correlation;
    pools.model_expectation[a] =
        sum / static_cast<double>(pools.members[a].size());
  }
  return pools;
}

int sample_cdf64(const std::array<double, 64>& cdf, double u) {
  for (int v = 0; v < 64; ++v)
    if (u < cdf[static_cast<std::size_t>(v)]) return v;
  return 63;
}

int sample_cdf8(const std::array<double, 8>& cdf, double u) {
  for (int m = 0; m < 8; ++m)
    if (u < cdf[static_cast<std::size_t>(m)]) return m;
  return 7;
}

RoundRecord simulate_round(const ExperimentConfig& config, const Pools& pools,
                           long long index) {
  // Fixed draw order per round: combo, then member/atom, then outcomes.
  rng::Stream stream(config.seed,
                     {kSaltRound, static_cast<std::uint64_t>(index)});
  RoundRecord record{};
  record.round = index;
  const ghz::Combo combo =
      ghz::kCombos[static_cast<std::size_t>(stream.next_below(4))];
  record.combo = combo;
  const auto& axes = ghz::kComboAxes[static_cast<std::size_t>(combo)];

  if (config.model == Model::ProductHv) {
    const int atom = sample_cdf64(pools.atom_cdf, stream.next_double());
    const hvm::Valuation valuation = hvm::Valuation::from_index(atom);
    for (int r = 0; r < 3; ++r) {
      const ghz::Axis axis = axes[static_cast<std::size_t>(r)];
      const auto& pool = pools.axis_pool[axis == ghz::Axis::X ? 0 : 1];
      const std::size_t pick = static_cast<std::size_t>(
          stream.next_below(static_cast<std::uint64_t>(pool.size())));
      record.alignment[static_cast<std::size_t>(r)] = pool[pick];
      record.outcomes[static_cast<std::size_t>(r)] =
          valuation.sign(r + 1, axis);
    }
  } else {
    const auto& members = pools.members[static_cast<std::size_t>(combo)];
    const std::size_t pick = static_cast<std::size_t>(
        stream.next_below(static_cast<std::uint64_t>(members.size())));
    const MemberData& member = members[pick];
    record.alignment = member.alignment;
    const int outcome = sample_cdf8(member.outcome_cdf, stream.next_double());
    record.outcomes = {(outcome & 4) ? -1 : 1, (outcome & 2) ? -1 : 1,
                       (outcome & 1) ? -1 : 1};
  }
  record.product = record.outcomes[0] * record.outcomes[1] *
                   record.outcomes[2];
  return record;
}

}  // namespace

const char* model_name(Model model) {
  switch (model) {
    case Model::Quantum: return "quantum";
    case Model::ProductHv: return "product-hv";
    case Model::CorrelatedHv: return "correlated-hv";
  }
  throw InternalError("unknown model");
}

Model model_from_name(const std::string& name) {
  for (Model model : {Model::Quantum, Model::ProductHv, Model::CorrelatedHv})
    if (name == model_name(model)) return model;
  throw ValidationError("unknown model name: " + name);
}

void ExperimentConfig::validate() const {
  require(rounds >= 1 && rounds <= 1000000000LL,
          "rounds must lie in [1, 1e9]");
  require(std::isfinite(delta) && delta >= 0.0, "delta must be non-negative");
  require(delta == 0.0 || (delta >= 1e-5 && delta <= kPi / 4.0),
          "non-zero delta must lie in [1e-5, pi/4]");
  if (model == Model::CorrelatedHv)
    require(delta > 0.0, "the correlated model needs delta > 0");
  if (model != Model::ProductHv && delta > 0.0)
    require(correlated_members >= 4,
            "need at least 4 correlated members to cover every combo");
  require(pool_size >= 1, "pool_size must be at least 1");
  require(parameter_limit >= 0, "parameter_limit must be non-negative");
}

ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 ExecPolicy policy,
                                 std::vector<RoundRecord>* records) {
  config.validate();
  const Pools pools = build_pools(config);
  if (records) records->assign(static_cast<std::size_t>(config.rounds),
                               RoundRecord{});

  std::array<long long, 4> counts{};
  std::array<long long, 4> sums{};

  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel
    {
      std::array<long long, 4> local_counts{};
      std::array<long long, 4> local_sums{};
#pragma omp for schedule(static) nowait
      for (long long i = 0; i < config.rounds; ++i) {
        const RoundRecord record = simulate_round(config, pools, i);
        const std::size_t a = static_cast<std::size_t>(record.combo);
        ++local_counts[a];
        local_sums[a] += record.product;
        if (records) (*records)[static_cast<std::size_t>(i)] = record;
      }
#pragma omp critical
      {
        for (std::size_t a = 0; a < 4; ++a) {
          counts[a] += local_counts[a];
          sums[a] += local_sums[a];
        }
      }
    }
  } else {
    for (long long i = 0; i < config.rounds; ++i) {
      const RoundRecord record = simulate_round(config, pools, i);
      const std::size_t a = static_cast<std::size_t>(record.combo);
      ++counts[a];
      sums[a] += record.product;
      if (records) (*records)[static_cast<std::size_t>(i)] = record;
    }
  }

  ExperimentSummary summary{config, {}, {}, {}};
  std::array<double, 4> means{};
  for (std::size_t a = 0; a < 4; ++a) {
    ComboSummary& combo = summary.combos[a];
    combo.rounds = counts[a];
    combo.product_sum = sums[a];
    combo.mean_product =
        counts[a] ? static_cast<double>(sums[a]) /
                        static_cast<double>(counts[a])
                  : 0.0;
    combo.standard_error =
        counts[a] ? std::sqrt(std::max(
                        0.0, (1.0 - combo.mean_product * combo.mean_product) /
                                 static_cast<double>(counts[a])))
                  : 0.0;
    combo.model_expectation = pools.model_expectation[a];
    means[a] = combo.mean_product;
  }
  summary.empirical = ghz::EpsilonReport::from_correlations(means);
  summary.verdict = hvm::contradiction_verdict(summary.empirical);
  return summary;
}

}  // namespace ghzlab::harness
