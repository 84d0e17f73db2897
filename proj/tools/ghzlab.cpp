// Command-line front end. Subcommands cover the quantum correlations, the
// misalignment sweep, the deterministic-model analysis, rational direction
// sets, the two end-to-end pipelines, and the round-level simulator.
//
// Exit codes: 0 success, 2 invalid input, 1 internal failure.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ghzlab/experiment.hpp"
#include "ghzlab/ghz.hpp"
#include "ghzlab/hvm.hpp"
#include "ghzlab/mkc.hpp"

namespace {

using nlohmann::json;
using namespace ghzlab;

ExecPolicy policy_from_name(const std::string& name) {
  if (name == "serial") return ExecPolicy::Serial;
  if (name == "openmp") return ExecPolicy::Parallel;
  throw ValidationError("unknown execution policy: " + name);
}

double parse_double(const std::string& text, const char* what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError(std::string("cannot parse ") + what + ": " + text);
  }
  if (used != text.size())
    throw ValidationError(std::string("trailing characters in ") + what +
                          ": " + text);
  return value;
}

ghz::DetectorTriplet parse_triplet(const std::string& spec) {
  std::vector<ghz::Direction> directions;
  std::istringstream stream(spec);
  std::string part;
  while (std::getline(stream, part, ';')) {
    const std::size_t comma = part.find(',');
    if (comma == std::string::npos)
      throw ValidationError("each triplet entry needs \"theta,phi\": " + part);
    const double theta = parse_double(part.substr(0, comma), "theta");
    const double phi = parse_double(part.substr(comma + 1), "phi");
    directions.emplace_back(theta, phi);
  }
  if (directions.size() != 3)
    throw ValidationError("triplet must have exactly three entries");
  return ghz::DetectorTriplet{directions[0], directions[1], directions[2]};
}

json epsilon_to_json(const ghz::EpsilonReport& report) {
  json per_combo;
  for (ghz::Combo combo : ghz::kCombos)
    per_combo[ghz::combo_name(combo)] =
        report.per_combo[static_cast<std::size_t>(combo)];
  return json{{"per_combo", per_combo}, {"eps", report.eps}};
}

json verdict_to_json(const hvm::VerdictReport& verdict) {
  return json{{"verdict", verdict.name()},
              {"eps", verdict.eps},
              {"threshold", verdict.threshold},
              {"slack", verdict.slack}};
}

json rational_to_json(const mkc::RationalDirection& direction) {
  return json{{"fraction", direction.str()},
              {"p", {direction.p1, direction.p2, direction.p3}},
              {"q", direction.q}};
}

void cmd_correlations(const std::string& triplet_spec) {
  const ghz::DetectorTriplet triplet = parse_triplet(triplet_spec);
  json out;
  out["triplet"] = json::array();
  for (int r = 1; r <= 3; ++r)
    out["triplet"].push_back(json{{"theta", triplet.at(r).theta()},
                                  {"phi", triplet.at(r).phi()}});
  out["matrix_value"] = ghz::correlation(triplet);
  out["closed_form_value"] = ghz::correlation_closed_form(triplet);
  std::cout << out.dump(2) << '\n';
}

void cmd_epsilon_sweep(double delta_max, int steps, std::uint64_t seed,
                       int samples, const std::string& exec,
                       const std::string& format) {
  ghz::SweepOptions options;
  options.samples = samples;
  options.policy = policy_from_name(exec);
  const std::vector<ghz::SweepPoint> points =
      ghz::epsilon_sweep(delta_max, steps, seed, options);
  if (format == "csv") {
    std::cout << "delta,worst_eps\n" << std::setprecision(17);
    for (const ghz::SweepPoint& point : points)
      std::cout << point.delta << ',' << point.worst_eps << '\n';
  } else {
    json out;
    out["delta_max"] = delta_max;
    out["steps"] = steps;
    out["seed"] = seed;
    out["samples"] = samples;
    out["points"] = json::array();
    for (const ghz::SweepPoint& point : points)
      out["points"].push_back(
          json{{"delta", point.delta}, {"worst_eps", point.worst_eps}});
    std::cout << out.dump(2) << '\n';
  }
}

void cmd_hvm_parity() {
  const hvm::ParityReport report = hvm::parity_exhaustive();
  json patterns = json::array();
  for (std::size_t p = 0; p < report.patterns.size(); ++p)
    patterns.push_back(
        json{{"f", report.patterns[p].values},
             {"valuations", report.pattern_counts[p]}});
  json out{{"total", report.total},
           {"every_product_is_minus_one", report.every_product_is_minus_one},
           {"valuations_with_three_agreements",
            report.valuations_with_three_agreements},
           {"valuations_with_four_agreements",
            report.valuations_with_four_agreements},
           {"patterns", patterns}};
  std::cout << out.dump(2) << '\n';
}

void cmd_hvm_maxmin() {
  const hvm::MaxMinResult result = hvm::max_min_correlation();
  const hvm::ModelReport model = hvm::model_report(result.witness);
  json witness = json::array();
  for (int v = 0; v < 64; ++v) {
    const double w = result.witness.weight(v);
    if (w == 0.0) continue;
    witness.push_back(json{{"atom", v},
                           {"valuation",
                            hvm::Valuation::from_index(v).describe()},
                           {"weight", w}});
  }
  json duals = json::array();
  for (const hvm::Rational& y : result.dual_multipliers)
    duals.push_back(y.str());
  json out{{"value", result.value_double},
           {"value_exact", result.value.str()},
           {"dual_value_exact", result.dual_value.str()},
           {"dual_multipliers", duals},
           {"certificate", result.certificate},
           {"witness", witness},
           {"witness_expectations", model.expectations},
           {"witness_agreement_mass", model.agreement_mass},
           {"witness_joint_agreement", model.joint_agreement_mass}};
  std::cout << out.dump(2) << '\n';
}

void cmd_mkc_rationals(long long bound, const std::string& format) {
  const std::vector<mkc::RationalDirection> directions =
      mkc::rational_directions(bound);
  if (format == "csv") {
    std::cout << "p1,p2,p3,q\n";
    for (const mkc::RationalDirection& d : directions)
      std::cout << d.p1 << ',' << d.p2 << ',' << d.p3 << ',' << d.q << '\n';
  } else {
    json out;
    out["bound"] = bound;
    out["count"] = directions.size();
    out["directions"] = json::array();
    for (const mkc::RationalDirection& d : directions)
      out["directions"].push_back(rational_to_json(d));
    std::cout << out.dump(2) << '\n';
  }
}

void cmd_section2(double delta, long long bound, std::uint64_t seed) {
  const harness::Section2Report report =
      harness::pipeline_section2(delta, bound, seed);
  json slots = json::array();
  for (const harness::SlotReport& slot : report.slots)
    slots.push_back(json{
        {"particle", slot.particle},
        {"axis", slot.axis == ghz::Axis::X ? "x" : "y"},
        {"alignment", rational_to_json(slot.alignment)},
        {"angle_to_axis", slot.angle_to_axis}});
  json out{{"delta", report.delta},
           {"seed", report.seed},
           {"slots", slots},
           {"epsilon", epsilon_to_json(report.epsilon)},
           {"closed_form_deviation", report.closed_form_deviation},
           {"maxmin", json{{"value", report.maxmin_value},
                           {"value_exact", report.maxmin_exact},
                           {"certificate", report.dual_certificate}}},
           {"measure_chain",
            json{{"agreement_floor", report.agreement_floor},
                 {"joint_floor", report.joint_floor},
                 {"joint_actual", report.joint_actual},
                 {"premise_feasible", report.premise_feasible},
                 {"certificate", report.feasibility_certificate}}},
           {"verdict", verdict_to_json(report.verdict)}};
  std::cout << out.dump(2) << '\n';
}

void cmd_section3(double eta, std::uint64_t seed) {
  const harness::Section3Report report = harness::pipeline_section3(eta, seed);
  json out{{"eta", report.eta},
           {"seed", report.seed},
           {"max_commutator", report.max_commutator},
           {"max_distance", report.max_distance},
           {"distance_ratio", report.distance_ratio},
           {"spectra_ok", report.spectra_ok},
           {"epsilon", epsilon_to_json(report.epsilon)},
           {"verdict", verdict_to_json(report.verdict)}};
  std::cout << out.dump(2) << '\n';
}

void cmd_simulate(const harness::ExperimentConfig& config,
                  const std::string& exec, const std::string& records_path) {
  std::vector<harness::RoundRecord> records;
  std::vector<harness::RoundRecord>* records_ptr =
      records_path.empty() ? nullptr : &records;
  const harness::ExperimentSummary summary =
      harness::run_experiment(config, policy_from_name(exec), records_ptr);

  if (records_ptr) {
    std::ofstream out(records_path);
    if (!out) throw ValidationError("cannot open records file: " + records_path);
    for (const harness::RoundRecord& record : records) {
      json line{{"round", record.round},
                {"combo", ghz::combo_name(record.combo)},
                {"alignment",
                 {record.alignment[0].str(), record.alignment[1].str(),
                  record.alignment[2].str()}},
                {"outcomes", record.outcomes},
                {"product", record.product}};
      out << line.dump() << '\n';
    }
  }

  json combos = json::array();
  for (ghz::Combo combo : ghz::kCombos) {
    const harness::ComboSummary& cs =
        summary.combos[static_cast<std::size_t>(combo)];
    combos.push_back(json{{"combo", ghz::combo_name(combo)},
                          {"rounds", cs.rounds},
                          {"product_sum", cs.product_sum},
                          {"mean_product", cs.mean_product},
                          {"standard_error", cs.standard_error},
                          {"model_expectation", cs.model_expectation}});
  }
  json out{{"model", harness::model_name(config.model)},
           {"rounds", config.rounds},
           {"delta", config.delta},
           {"seed", config.seed},
           {"combos", combos},
           {"empirical", epsilon_to_json(summary.empirical)},
           {"verdict", verdict_to_json(summary.verdict)}};
  if (!records_path.empty()) out["records"] = records_path;
  std::cout << out.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation laboratory for the three-particle experiment"};
  app.require_subcommand(1);

  // correlations
  auto* correlations = app.add_subcommand(
      "correlations", "Correlation value for one detector triplet");
  std::string triplet_spec;
  correlations
      ->add_option("--triplet", triplet_spec,
                   "three directions as \"t1,p1;t2,p2;t3,p3\" (radians)")
      ->required();

  // epsilon-sweep
  auto* sweep = app.add_subcommand(
      "epsilon-sweep", "Worst-case eps against misalignment radius");
  double sweep_delta_max = 0.0;
  int sweep_steps = 0;
  std::uint64_t sweep_seed = 0;
  int sweep_samples = 256;
  std::string sweep_exec = "openmp";
  std::string sweep_format = "csv";
  sweep->add_option("--delta-max", sweep_delta_max, "largest misalignment")
      ->required();
  sweep->add_option("--steps", sweep_steps, "grid steps")->required();
  sweep->add_option("--seed", sweep_seed, "random seed");
  sweep->add_option("--samples", sweep_samples,
                    "random perturbations per grid point");
  sweep->add_option("--exec", sweep_exec, "serial|openmp")
      ->check(CLI::IsMember({"serial", "openmp"}));
  sweep->add_option("--format", sweep_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // hvm parity / maxmin
  auto* hvm_cmd = app.add_subcommand("hvm", "Deterministic-model analysis");
  hvm_cmd->require_subcommand(1);
  auto* parity = hvm_cmd->add_subcommand(
      "parity", "Exhaustive scan of the 64 outcome assignments");
  auto* maxmin = hvm_cmd->add_subcommand(
      "maxmin", "Exact optimum of the worst oriented product");

  // mkc rationals
  auto* mkc_cmd = app.add_subcommand("mkc", "Rational direction tooling");
  mkc_cmd->require_subcommand(1);
  auto* rationals = mkc_cmd->add_subcommand(
      "rationals", "All rational directions up to a denominator bound");
  long long rationals_bound = 0;
  std::string rationals_format = "csv";
  rationals->add_option("--bound", rationals_bound, "denominator bound")
      ->required();
  rationals->add_option("--format", rationals_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // section2
  auto* section2 = app.add_subcommand(
      "section2", "Rational-alignment analysis pipeline");
  double section2_delta = 0.0;
  long long section2_bound = 0;
  std::uint64_t section2_seed = 0;
  section2->add_option("--delta", section2_delta, "alignment tolerance")
      ->required();
  section2->add_option("--bound", section2_bound,
                       "rational search depth (0 = automatic)");
  section2->add_option("--seed", section2_seed, "random seed");

  // section3
  auto* section3 = app.add_subcommand(
      "section3", "Conjugated-observable analysis pipeline");
  double section3_eta = 0.0;
  std::uint64_t section3_seed = 0;
  section3->add_option("--eta", section3_eta, "conjugation strength")
      ->required();
  section3->add_option("--seed", section3_seed, "random seed");

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Round-by-round experiment simulation");
  std::string sim_model = "quantum";
  harness::ExperimentConfig config;
  std::string sim_exec = "openmp";
  std::string sim_records;
  simulate
      ->add_option("--model", sim_model, "quantum|product-hv|correlated-hv")
      ->required()
      ->check(CLI::IsMember({"quantum", "product-hv", "correlated-hv"}));
  simulate->add_option("--rounds", config.rounds, "number of rounds")
      ->required();
  simulate->add_option("--delta", config.delta,
                       "alignment tolerance (0 = exact axes)");
  simulate->add_option("--seed", config.seed, "random seed");
  simulate->add_option("--records", sim_records,
                       "write one JSON line per round to this path");
  simulate->add_option("--members", config.correlated_members,
                       "correlated alignment set size");
  simulate->add_option("--pool-size", config.pool_size,
                       "per-axis pool size for the product model");
  simulate->add_option("--parameter-limit", config.parameter_limit,
                       "rational search depth (0 = automatic)");
  simulate->add_option("--exec", sim_exec, "serial|openmp")
      ->check(CLI::IsMember({"serial", "openmp"}));

  try {
    app.parse(argc, argv);

    if (correlations->parsed()) {
      cmd_correlations(triplet_spec);
    } else if (sweep->parsed()) {
      cmd_epsilon_sweep(sweep_delta_max, sweep_steps, sweep_seed,
                        sweep_samples, sweep_exec, sweep_format);
    } else if (hvm_cmd->parsed()) {
      if (parity->parsed()) cmd_hvm_parity();
      if (maxmin->parsed()) cmd_hvm_maxmin();
    } else if (mkc_cmd->parsed()) {
      if (rationals->parsed()) cmd_mkc_rationals(rationals_bound,
                                                 rationals_format);
    } else if (section2->parsed()) {
      cmd_section2(section2_delta, section2_bound, section2_seed);
    } else if (section3->parsed()) {
      cmd_section3(section3_eta, section3_seed);
    } else if (simulate->parsed()) {
      config.model = harness::model_from_name(sim_model);
      cmd_simulate(config, sim_exec, sim_records);
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
