#include "ghzlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ghzlab/tolerances.hpp"

namespace ghzlab::linalg {

namespace {

void check_dim(int dim) {
  require(dim >= 1 && dim <= kMaxDim, "matrix dimension must be in [1, 8]");
}

void check_finite(const Complex& z, const char* what) {
  require(std::isfinite(z.real()) && std::isfinite(z.imag()),
          std::string(what) + " contains a non-finite entry");
}

}  // namespace

OperatorMatrix::OperatorMatrix(int dim) : dim_(dim) {
  check_dim(dim);
  entries_.assign(static_cast<std::size_t>(dim) * dim, Complex(0.0, 0.0));
}

OperatorMatrix OperatorMatrix::identity(int dim) {
  OperatorMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

OperatorMatrix OperatorMatrix::from_rows(int dim,
                                         const std::vector<Complex>& entries) {
  check_dim(dim);
  require(entries.size() == static_cast<std::size_t>(dim) * dim,
          "entry count does not match matrix dimension");
  OperatorMatrix m(dim);
  for (const Complex& z : entries) check_finite(z, "matrix");
  std::copy(entries.begin(), entries.end(), m.entries_.begin());
  return m;
}

Complex& OperatorMatrix::at(int row, int col) {
  internal_check(row >= 0 && row < dim_ && col >= 0 && col < dim_,
                 "matrix index out of range");
  return entries_[static_cast<std::size_t>(row) * dim_ + col];
}

const Complex& OperatorMatrix::at(int row, int col) const {
  internal_check(row >= 0 && row < dim_ && col >= 0 && col < dim_,
                 "matrix index out of range");
  return entries_[static_cast<std::size_t>(row) * dim_ + col];
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& other) const {
  require(dim_ == other.dim_, "dimension mismatch in matrix addition");
  OperatorMatrix out(dim_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = entries_[i] + other.entries_[i];
  return out;
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& other) const {
  require(dim_ == other.dim_, "dimension mismatch in matrix subtraction");
  OperatorMatrix out(dim_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = entries_[i] - other.entries_[i];
  return out;
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& other) const {
  require(dim_ == other.dim_, "dimension mismatch in matrix product");
  OperatorMatrix out(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int k = 0; k < dim_; ++k) {
      const Complex aik = at(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < dim_; ++j) out.at(i, j) += aik * other.at(k, j);
    }
  }
  return out;
}

OperatorMatrix OperatorMatrix::operator*(Complex scalar) const {
  check_finite(scalar, "scalar");
  OperatorMatrix out(dim_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = entries_[i] * scalar;
  return out;
}

StateVector::StateVector(std::vector<Complex> amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  require(!amplitudes_.empty() &&
              amplitudes_.size() <= static_cast<std::size_t>(kMaxDim),
          "state dimension must be in [1, 8]");
  double norm_sq = 0.0;
  for (const Complex& z : amplitudes_) {
    check_finite(z, "state");
    norm_sq += std::norm(z);
  }
  require(std::abs(std::sqrt(norm_sq) - 1.0) <= tol::kUnitNorm,
          "state vector is not unit-norm");
}

StateVector StateVector::basis(int dim, int index) {
  check_dim(dim);
  require(index >= 0 && index < dim, "basis index out of range");
  std::vector<Complex> amps(static_cast<std::size_t>(dim), Complex(0.0, 0.0));
  amps[static_cast<std::size_t>(index)] = 1.0;
  return StateVector(std::move(amps));
}

const Complex& StateVector::amp(int index) const {
  internal_check(index >= 0 && index < dim(), "amplitude index out of range");
  return amplitudes_[static_cast<std::size_t>(index)];
}

OperatorMatrix pauli_x() {
  return OperatorMatrix::from_rows(2, {0.0, 1.0, 1.0, 0.0});
}

OperatorMatrix pauli_y() {
  return OperatorMatrix::from_rows(
      2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0});
}

OperatorMatrix pauli_z() {
  return OperatorMatrix::from_rows(2, {1.0, 0.0, 0.0, -1.0});
}

OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b) {
  const int da = a.dim();
  const int db = b.dim();
  require(da * db <= kMaxDim, "tensor product exceeds maximum dimension");
  OperatorMatrix out(da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l)
          out.at(i * db + k, j * db + l) = a.at(i, j) * b.at(k, l);
  return out;
}

OperatorMatrix adjoint(const OperatorMatrix& a) {
  OperatorMatrix out(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out.at(i, j) = std::conj(a.at(j, i));
  return out;
}

bool is_hermitian(const OperatorMatrix& a, double tolerance) {
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j)
      if (std::abs(a.at(i, j) - std::conj(a.at(j, i))) > tolerance)
        return false;
  return true;
}

double max_entry_norm(const OperatorMatrix& a) {
  double best = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      best = std::max(best, std::abs(a.at(i, j)));
  return best;
}

double commutator_norm(const OperatorMatrix& a, const OperatorMatrix& b) {
  return max_entry_norm(a * b - b * a);
}

Complex inner(const StateVector& bra, const StateVector& ket) {
  require(bra.dim() == ket.dim(), "dimension mismatch in inner product");
  Complex sum(0.0, 0.0);
  for (int i = 0; i < bra.dim(); ++i)
    sum += std::conj(bra.amp(i)) * ket.amp(i);
  return sum;
}

double expectation(const StateVector& psi, const OperatorMatrix& a) {
  require(a.dim() == psi.dim(), "dimension mismatch in expectation value");
  require(is_hermitian(a, tol::kHermiticity),
          "expectation value requires a Hermitian operator");
  Complex sum(0.0, 0.0);
  for (int i = 0; i < a.dim(); ++i) {
    Complex row(0.0, 0.0);
    for (int j = 0; j < a.dim(); ++j) row += a.at(i, j) * psi.amp(j);
    sum += std::conj(psi.amp(i)) * row;
  }
  internal_check(std::abs(sum.imag()) <= tol::kRealExpectation,
                 "Hermitian expectation value came out complex");
  return sum.real();
}

namespace {

// One cyclic Jacobi pass support: the 2x2 unitary
//   B = [ c        s*w ]
//       [ -s*conj(w)  c ]
// with w = a_pq / |a_pq| zeroes the (p, q) entry when tan(theta) = t solves
// t^2 + 2*tau*t - 1 = 0, tau = (a_qq - a_pp) / (2 |a_pq|). The smaller root
// keeps rotation angles below 45 degrees for stability.
struct JacobiWork {
  int n;
  std::vector<Complex> a;  // row-major, kept Hermitian
  std::vector<Complex> v;  // accumulated eigenvector columns

  Complex& A(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  Complex& V(int i, int j) { return v[static_cast<std::size_t>(i) * n + j]; }

  double off_diagonal_max() const {
    double best = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        best = std::max(best,
                        std::abs(a[static_cast<std::size_t>(p) * n + q]));
    return best;
  }

  void rotate(int p, int q) {
    const Complex apq = A(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;
    const Complex w = apq / r;
    const double tau = (A(q, q).real() - A(p, p).real()) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                     (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    // A <- B^dagger A B, applied as column then row updates.
    for (int i = 0; i < n; ++i) {
      const Complex aip = A(i, p);
      const Complex aiq = A(i, q);
      A(i, p) = c * aip - s * std::conj(w) * aiq;
      A(i, q) = s * w * aip + c * aiq;
    }
    for (int j = 0; j < n; ++j) {
      const Complex apj = A(p, j);
      const Complex aqj = A(q, j);
      A(p, j) = c * apj - s * w * aqj;
      A(q, j) = s * std::conj(w) * apj + c * aqj;
    }
    // Re-symmetrize the pivot entries; rounding can leave ~1e-17 residue.
    A(p, q) = Complex(0.0, 0.0);
    A(q, p) = Complex(0.0, 0.0);
    A(p, p) = Complex(A(p, p).real(), 0.0);
    A(q, q) = Complex(A(q, q).real(), 0.0);

    for (int i = 0; i < n; ++i) {
      const Complex vip = V(i, p);
      const Complex viq = V(i, q);
      V(i, p) = c * vip - s * std::conj(w) * viq;
      V(i, q) = s * w * vip + c * viq;
    }
  }
};

}  // namespace

std::vector<EigenPair> hermitian_eigensystem(const OperatorMatrix& input) {
  require(is_hermitian(input, tol::kHermiticity),
          "eigensystem requires a Hermitian matrix");
  const int n = input.dim();

  JacobiWork work;
  work.n = n;
  work.a.resize(static_cast<std::size_t>(n) * n);
  work.v.assign(static_cast<std::size_t>(n) * n, Complex(0.0, 0.0));
  // Work on the exactly Hermitian part (A + A^dagger) / 2.
  for (int i = 0; i < n; ++i) {
    work.V(i, i) = 1.0;
    for (int j = 0; j < n; ++j)
      work.A(i, j) = 0.5 * (input.at(i, j) + std::conj(input.at(j, i)));
  }

  constexpr int kMaxSweeps = 64;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (work.off_diagonal_max() < tol::kEigenOffDiagonal) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) work.rotate(p, q);
  }
  internal_check(sweep < kMaxSweeps, "Jacobi iteration failed to converge");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    return work.A(lhs, lhs).real() < work.A(rhs, rhs).real();
  });

  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const int col = order[static_cast<std::size_t>(k)];
    std::vector<Complex> column(static_cast<std::size_t>(n));
    double norm_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      column[static_cast<std::size_t>(i)] = work.V(i, col);
      norm_sq += std::norm(work.V(i, col));
    }
    const double norm = std::sqrt(norm_sq);
    internal_check(std::abs(norm - 1.0) <= tol::kOrthonormality,
                   "Jacobi produced a non-unit eigenvector");
    for (Complex& z : column) z /= norm;
    pairs.push_back(EigenPair{work.A(col, col).real(),
                              StateVector(std::move(column))});
  }

  // Residual and orthonormality gates.
  for (const EigenPair& pair : pairs) {
    double residual_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      Complex row(0.0, 0.0);
      for (int j = 0; j < n; ++j)
        row += 0.5 * (input.at(i, j) + std::conj(input.at(j, i))) *
               pair.vector.amp(j);
      residual_sq += std::norm(row - pair.value * pair.vector.amp(i));
    }
    internal_check(std::sqrt(residual_sq) <= tol::kEigenResidual,
                   "eigenpair residual exceeds tolerance");
  }
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      internal_check(
          std::abs(inner(pairs[i].vector, pairs[j].vector)) <=
              tol::kOrthonormality,
          "eigenvectors lost orthogonality");

  return pairs;
}

double hermitian_operator_norm(const OperatorMatrix& a) {
  double best = 0.0;
  for (const EigenPair& pair : hermitian_eigensystem(a))
    best = std::max(best, std::abs(pair.value));
  return best;
}

OperatorMatrix unitary_exp_i(const OperatorMatrix& a, double scale) {
  require(std::isfinite(scale), "exponent scale must be finite");
  const std::vector<EigenPair> eigen = hermitian_eigensystem(a);
  const int n = a.dim();
  OperatorMatrix out(n);
  for (const EigenPair& pair : eigen) {
    const Complex phase = std::exp(Complex(0.0, scale * pair.value));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.at(i, j) += phase * pair.vector.amp(i) *
                        std::conj(pair.vector.amp(j));
  }
  return out;
}

}  // namespace ghzlab::linalg
