#include "ghzlab/hvm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ghzlab/tolerances.hpp"

namespace ghzlab::hvm {

Valuation Valuation::from_index(int index) {
  require(index >= 0 && index < 64, "valuation index must lie in [0, 64)");
  return Valuation(index);
}

int Valuation::sign(int particle, ghz::Axis axis) const {
  require(particle >= 1 && particle <= 3, "particle index must be 1, 2 or 3");
  const int bit = 2 * (particle - 1) + (axis == ghz::Axis::X ? 0 : 1);
  return (index_ >> bit) & 1 ? -1 : 1;
}

std::string Valuation::describe() const {
  std::ostringstream out;
  for (int particle = 1; particle <= 3; ++particle) {
    for (ghz::Axis axis : {ghz::Axis::X, ghz::Axis::Y}) {
      if (particle != 1 || axis != ghz::Axis::X) out << ' ';
      out << 's' << particle << (axis == ghz::Axis::X ? 'x' : 'y') << '='
          << (sign(particle, axis) > 0 ? "+1" : "-1");
    }
  }
  return out.str();
}

int FVector::pattern_index() const {
  int key = 0;
  for (std::size_t a = 0; a < 4; ++a)
    if (values[a] == -1) key |= 1 << a;
  return key;
}

FVector f_values(const Valuation& valuation) {
  FVector f{};
  for (ghz::Combo combo : ghz::kCombos) {
    const auto& axes = ghz::kComboAxes[static_cast<std::size_t>(combo)];
    int product = 1;
    for (int r = 0; r < 3; ++r)
      product *= valuation.sign(r + 1, axes[static_cast<std::size_t>(r)]);
    // Orient so +1 means agreement with the observed product sign.
    const int oriented = static_cast<int>(
        ghz::kComboIdealProduct[static_cast<std::size_t>(combo)]) * product;
    f.values[static_cast<std::size_t>(combo)] = oriented;
  }
  int total = 1;
  for (int v : f.values) total *= v;
  internal_check(total == -1, "oriented product signs must multiply to -1");
  return f;
}

ParityReport parity_exhaustive() {
  ParityReport report{};
  report.total = 64;
  report.every_product_is_minus_one = true;
  report.valuations_with_three_agreements = 0;
  report.valuations_with_four_agreements = 0;
  for (int index = 0; index < 64; ++index) {
    const FVector f = f_values(Valuation::from_index(index));
    int product = 1;
    int agreements = 0;
    for (int v : f.values) {
      product *= v;
      if (v == 1) ++agreements;
    }
    if (product != -1) report.every_product_is_minus_one = false;
    if (agreements == 3) ++report.valuations_with_three_agreements;
    if (agreements == 4) ++report.valuations_with_four_agreements;
    const auto found = std::find(report.patterns.begin(),
                                 report.patterns.end(), f);
    if (found == report.patterns.end()) {
      report.patterns.push_back(f);
      report.pattern_counts.push_back(1);
    } else {
      ++report.pattern_counts[static_cast<std::size_t>(
          found - report.patterns.begin())];
    }
  }
  return report;
}

AtomDistribution::AtomDistribution(std::array<double, 64> weights)
    : weights_(weights) {
  double sum = 0.0;
  for (double& w : weights_) {
    require(std::isfinite(w) && w >= -tol::kArithmeticSlack,
            "atom weights must be non-negative");
    w = std::max(w, 0.0);
    sum += w;
  }
  require(std::abs(sum - 1.0) <= tol::kProbabilityNormalization,
          "atom weights must sum to one");
}

AtomDistribution AtomDistribution::point_mass(int index) {
  require(index >= 0 && index < 64, "valuation index must lie in [0, 64)");
  std::array<double, 64> w{};
  w[static_cast<std::size_t>(index)] = 1.0;
  return AtomDistribution(w);
}

AtomDistribution AtomDistribution::uniform() {
  std::array<double, 64> w{};
  w.fill(1.0 / 64.0);
  return AtomDistribution(w);
}

double AtomDistribution::weight(int index) const {
  require(index >= 0 && index < 64, "valuation index must lie in [0, 64)");
  return weights_[static_cast<std::size_t>(index)];
}

namespace {

struct FTable {
  std::array<FVector, 64> f;
  std::vector<FVector> patterns;        // first-seen order
  std::array<int, 64> pattern_of;
  std::vector<int> first_atom;          // lowest valuation index per pattern
};

const FTable& f_table() {
  static const FTable table = [] {
    FTable t{};
    for (int index = 0; index < 64; ++index) {
      const FVector f = f_values(Valuation::from_index(index));
      t.f[static_cast<std::size_t>(index)] = f;
      auto found = std::find(t.patterns.begin(), t.patterns.end(), f);
      if (found == t.patterns.end()) {
        t.patterns.push_back(f);
        t.first_atom.push_back(index);
        found = t.patterns.end() - 1;
      }
      t.pattern_of[static_cast<std::size_t>(index)] =
          static_cast<int>(found - t.patterns.begin());
    }
    internal_check(t.patterns.size() == 8, "expected 8 distinct sign patterns");
    return t;
  }();
  return table;
}

}  // namespace

ModelReport model_report(const AtomDistribution& distribution) {
  const FTable& table = f_table();
  ModelReport report{};
  for (int index = 0; index < 64; ++index) {
    const double w = distribution.weight(index);
    const FVector& f = table.f[static_cast<std::size_t>(index)];
    bool all_agree = true;
    for (std::size_t a = 0; a < 4; ++a) {
      report.expectations[a] += w * f.values[a];
      if (f.values[a] == 1)
        report.agreement_mass[a] += w;
      else
        all_agree = false;
    }
    if (all_agree) report.joint_agreement_mass += w;
  }
  internal_check(report.joint_agreement_mass == 0.0,
                 "no valuation can agree with all four products");
  return report;
}

// ---------------------------------------------------------------------------
// Exact rational arithmetic. Intermediates use __int128; results must reduce
// back into 64 bits, which the tiny systems solved here always do.

namespace {

using Wide = __int128;

Wide wide_abs(Wide x) { return x < 0 ? -x : x; }

Wide wide_gcd(Wide a, Wide b) {
  a = wide_abs(a);
  b = wide_abs(b);
  while (b != 0) {
    const Wide r = a % b;
    a = b;
    b = r;
  }
  return a;
}

long long narrow(Wide x) {
  internal_check(x <= 0x7fffffffffffffffLL && x >= -0x7fffffffffffffffLL - 1,
                 "rational arithmetic overflowed 64 bits");
  return static_cast<long long>(x);
}

Rational make_rational(Wide num, Wide den) {
  internal_check(den != 0, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Wide g = num == 0 ? den : wide_gcd(num, den);
  Rational out;
  out.num = narrow(num / g);
  out.den = narrow(den / g);
  return out;
}

}  // namespace

Rational Rational::of(long long num, long long den) {
  return make_rational(num, den);
}

double Rational::to_double() const {
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::operator+(const Rational& o) const {
  return make_rational(Wide(num) * o.den + Wide(o.num) * den,
                       Wide(den) * o.den);
}

Rational Rational::operator-(const Rational& o) const {
  return make_rational(Wide(num) * o.den - Wide(o.num) * den,
                       Wide(den) * o.den);
}

Rational Rational::operator*(const Rational& o) const {
  return make_rational(Wide(num) * o.num, Wide(den) * o.den);
}

Rational Rational::operator/(const Rational& o) const {
  internal_check(o.num != 0, "rational division by zero");
  return make_rational(Wide(num) * o.den, Wide(den) * o.num);
}

bool Rational::operator==(const Rational& o) const {
  return num == o.num && den == o.den;
}

bool Rational::operator<(const Rational& o) const {
  return Wide(num) * o.den < Wide(o.num) * den;
}

// ---------------------------------------------------------------------------
// Exact linear programming by basic-solution enumeration. The programs here
// have at most 9 variables and 12 inequality rows, so trying every choice of
// active rows (C(12, 8) or C(12, 4) = 495 candidate bases) is instantaneous
// and avoids any pivoting or tolerance question.

namespace {

using Row = std::vector<Rational>;   // coefficients then right-hand side
using System = std::vector<Row>;

// Gaussian elimination over the rationals. Returns false when the system is
// singular (no unique solution).
bool solve_exact(System system, std::vector<Rational>& solution) {
  const std::size_t n = system.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && system[pivot][col].num == 0) ++pivot;
    if (pivot == n) return false;
    std::swap(system[col], system[pivot]);
    const Rational inv = Rational::of(1) / system[col][col];
    for (std::size_t j = col; j <= n; ++j)
      system[col][j] = system[col][j] * inv;
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || system[row][col].num == 0) continue;
      const Rational factor = system[row][col];
      for (std::size_t j = col; j <= n; ++j)
        system[row][j] = system[row][j] - factor * system[col][j];
    }
  }
  solution.assign(n, Rational{});
  for (std::size_t i = 0; i < n; ++i) solution[i] = system[i][n];
  return true;
}

Rational dot_row(const Row& row, const std::vector<Rational>& x) {
  Rational sum = Rational::of(0);
  for (std::size_t i = 0; i + 1 < row.size(); ++i) sum = sum + row[i] * x[i];
  return sum;
}

struct LinearProgram {
  // One equality row plus a list of ">= 0" inequality rows, all with a
  // right-hand side in the last slot (inequalities compare lhs >= rhs).
  std::size_t variables = 0;
  Row equality;
  std::vector<Row> inequalities;
  std::size_t objective_index = 0;  // variable to optimize
  bool maximize = true;
};

struct LpSolution {
  std::vector<Rational> x;
  Rational objective;
};

// Enumerates bases in lexicographic order of the chosen inequality indices;
// among optimal vertices the first one found is returned, which makes the
// reported solution deterministic.
LpSolution solve_by_enumeration(const LinearProgram& lp) {
  const std::size_t n = lp.variables;
  const std::size_t active_needed = n - 1;  // equality row always active
  const std::size_t m = lp.inequalities.size();
  internal_check(m >= active_needed, "not enough rows to form a basis");

  std::vector<std::size_t> pick(active_needed);
  for (std::size_t i = 0; i < active_needed; ++i) pick[i] = i;

  bool found = false;
  LpSolution best;
  const auto consider = [&](const std::vector<std::size_t>& active) {
    System system;
    system.push_back(lp.equality);
    for (std::size_t idx : active) system.push_back(lp.inequalities[idx]);
    std::vector<Rational> x;
    if (!solve_exact(std::move(system), x)) return;
    for (const Row& row : lp.inequalities) {
      const Rational lhs = dot_row(row, x);
      if (lhs < row.back()) return;  // infeasible vertex
    }
    const Rational value = x[lp.objective_index];
    const bool better =
        !found || (lp.maximize ? best.objective < value : value < best.objective);
    if (better) {
      best.x = x;
      best.objective = value;
      found = true;
    }
  };

  // Standard lexicographic k-subset iteration.
  for (;;) {
    consider(pick);
    std::size_t i = active_needed;
    while (i > 0 && pick[i - 1] == m - active_needed + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < active_needed; ++j) pick[j] = pick[j - 1] + 1;
  }
  internal_check(found, "linear program had no feasible vertex");
  return best;
}

}  // namespace

MaxMinResult max_min_correlation() {
  const FTable& table = f_table();
  const std::size_t pattern_count = table.patterns.size();  // 8

  // Primal: maximize t subject to sum_p w_p = 1, w >= 0, and for each combo
  // sum_p f_a(p) w_p >= t. Variables: w_0..w_7, t.
  LinearProgram primal;
  primal.variables = pattern_count + 1;
  primal.objective_index = pattern_count;
  primal.maximize = true;
  primal.equality.assign(primal.variables + 1, Rational::of(0));
  for (std::size_t p = 0; p < pattern_count; ++p)
    primal.equality[p] = Rational::of(1);
  primal.equality.back() = Rational::of(1);
  for (std::size_t a = 0; a < 4; ++a) {
    Row row(primal.variables + 1, Rational::of(0));
    for (std::size_t p = 0; p < pattern_count; ++p)
      row[p] = Rational::of(table.patterns[p].values[a]);
    row[pattern_count] = Rational::of(-1);
    primal.inequalities.push_back(std::move(row));
  }
  for (std::size_t p = 0; p < pattern_count; ++p) {
    Row row(primal.variables + 1, Rational::of(0));
    row[p] = Rational::of(1);
    primal.inequalities.push_back(std::move(row));
  }
  const LpSolution primal_best = solve_by_enumeration(primal);

  // Dual: minimize z subject to sum_a y_a = 1, y >= 0, and for each pattern
  // z >= sum_a y_a f_a(p). Variables: y_0..y_3, z.
  LinearProgram dual;
  dual.variables = 5;
  dual.objective_index = 4;
  dual.maximize = false;
  dual.equality.assign(dual.variables + 1, Rational::of(0));
  for (std::size_t a = 0; a < 4; ++a) dual.equality[a] = Rational::of(1);
  dual.equality.back() = Rational::of(1);
  for (std::size_t p = 0; p < pattern_count; ++p) {
    Row row(dual.variables + 1, Rational::of(0));
    for (std::size_t a = 0; a < 4; ++a)
      row[a] = Rational::of(-table.patterns[p].values[a]);
    row[4] = Rational::of(1);
    dual.inequalities.push_back(std::move(row));
  }
  for (std::size_t a = 0; a < 4; ++a) {
    Row row(dual.variables + 1, Rational::of(0));
    row[a] = Rational::of(1);
    dual.inequalities.push_back(std::move(row));
  }
  const LpSolution dual_best = solve_by_enumeration(dual);

  internal_check(primal_best.objective == dual_best.objective,
                 "primal and dual optima disagree");

  MaxMinResult result{primal_best.objective,
                      primal_best.objective.to_double(),
                      AtomDistribution::uniform(),
                      {},
                      {},
                      dual_best.objective,
                      {}};

  // The optimal support sits on the four patterns that agree with exactly
  // three products; place each pattern's weight on its lowest-index atom.
  std::array<double, 64> witness{};
  for (std::size_t p = 0; p < pattern_count; ++p) {
    const Rational w = primal_best.x[p];
    if (w.num == 0) continue;
    const FVector& pattern = table.patterns[p];
    int disagreements = 0;
    std::size_t disagreeing_combo = 0;
    for (std::size_t a = 0; a < 4; ++a) {
      if (pattern.values[a] == -1) {
        ++disagreements;
        disagreeing_combo = a;
      }
    }
    internal_check(disagreements == 1,
                   "optimal support outside the three-agreement patterns");
    result.witness_pattern_weights[disagreeing_combo] = w;
    witness[static_cast<std::size_t>(
        table.first_atom[p])] = w.to_double();
  }
  result.witness = AtomDistribution(witness);

  for (std::size_t a = 0; a < 4; ++a)
    result.dual_multipliers[a] = dual_best.x[a];

  std::ostringstream cert;
  cert << "for any atom distribution, min_a E_a <= ";
  for (std::size_t a = 0; a < 4; ++a) {
    if (a) cert << " + ";
    cert << result.dual_multipliers[a].str() << "*E_" << a;
  }
  cert << " <= max over sign patterns of the same average = "
       << dual_best.objective.str();
  result.certificate = cert.str();
  return result;
}

const char* VerdictReport::name() const {
  return verdict == Verdict::ImpossibleForProductModels
             ? "IMPOSSIBLE-FOR-PRODUCT-MODELS"
             : "UNDECIDED-BY-THIS-TEST";
}

VerdictReport contradiction_verdict(const ghz::EpsilonReport& report) {
  static const double threshold = max_min_correlation().value.to_double();
  VerdictReport verdict{};
  verdict.eps = report.eps;
  verdict.threshold = threshold;
  verdict.slack = threshold - report.eps;
  verdict.verdict = report.eps < threshold
                        ? Verdict::ImpossibleForProductModels
                        : Verdict::UndecidedByThisTest;
  return verdict;
}

MeasureBoundReport measure_bound_check(const AtomDistribution& distribution,
                                       double eps) {
  require(std::isfinite(eps) && eps >= 0.0 && eps <= 2.0,
          "eps must lie in [0, 2]");
  const ModelReport model = model_report(distribution);
  const MaxMinResult maxmin = max_min_correlation();

  MeasureBoundReport report{};
  report.eps = eps;
  report.expectations = model.expectations;
  report.agreement_mass = model.agreement_mass;

  report.premise_holds = true;
  for (double e : model.expectations)
    if (e < 1.0 - eps - tol::kArithmeticSlack) report.premise_holds = false;

  report.agreement_floor = 1.0 - eps / 2.0;
  report.agreement_bounds_hold = report.premise_holds;
  if (report.premise_holds)
    for (double mass : model.agreement_mass)
      if (mass < report.agreement_floor - 2.0 * tol::kArithmeticSlack)
        report.agreement_bounds_hold = false;

  report.joint_floor = 1.0 - 2.0 * eps;
  report.joint_actual = model.joint_agreement_mass;
  report.joint_bound_violated =
      report.premise_holds &&
      report.joint_floor > report.joint_actual + tol::kArithmeticSlack;

  report.premise_feasible =
      1.0 - eps <= maxmin.value.to_double() + tol::kArithmeticSlack;
  std::ostringstream cert;
  if (report.premise_feasible) {
    cert << "demand min_a E_a >= " << 1.0 - eps
         << " is attainable: the exact max-min optimum is "
         << maxmin.value.str();
  } else {
    cert << "demand min_a E_a >= " << 1.0 - eps
         << " exceeds the exact max-min optimum " << maxmin.value.str()
         << "; " << maxmin.certificate;
  }
  report.certificate = cert.str();
  return report;
}

}  // namespace ghzlab::hvm
