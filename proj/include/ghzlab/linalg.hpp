#pragma once

#include <complex>
#include <vector>

#include "ghzlab/common.hpp"

// Dense complex linear algebra for small Hilbert spaces (dimension <= 8).
// Everything is value-based: operations return new objects, nothing mutates
// its arguments. No external linear-algebra dependency; the eigensolver is a
// cyclic Jacobi iteration specialized to Hermitian matrices.

namespace ghzlab::linalg {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 8;

class OperatorMatrix {
 public:
  explicit OperatorMatrix(int dim);

  static OperatorMatrix identity(int dim);
  static OperatorMatrix zero(int dim) { return OperatorMatrix(dim); }
  // Row-major entries; checks size and finiteness.
  static OperatorMatrix from_rows(int dim, const std::vector<Complex>& entries);

  int dim() const { return dim_; }
  Complex& at(int row, int col);
  const Complex& at(int row, int col) const;

  OperatorMatrix operator+(const OperatorMatrix& other) const;
  OperatorMatrix operator-(const OperatorMatrix& other) const;
  OperatorMatrix operator*(const OperatorMatrix& other) const;
  OperatorMatrix operator*(Complex scalar) const;

 private:
  int dim_;
  std::vector<Complex> entries_;
};

class StateVector {
 public:
  // Amplitudes must be finite and unit-norm; see tol::kUnitNorm.
  explicit StateVector(std::vector<Complex> amplitudes);

  static StateVector basis(int dim, int index);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Complex& amp(int index) const;
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }

 private:
  std::vector<Complex> amplitudes_;
};

// Pauli matrices in the basis where |+1> is the first basis state.
OperatorMatrix pauli_x();
OperatorMatrix pauli_y();
OperatorMatrix pauli_z();

OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix adjoint(const OperatorMatrix& a);

bool is_hermitian(const OperatorMatrix& a, double tolerance);
double max_entry_norm(const OperatorMatrix& a);
// ||AB - BA|| in the max-entry norm.
double commutator_norm(const OperatorMatrix& a, const OperatorMatrix& b);

Complex inner(const StateVector& bra, const StateVector& ket);

// <psi| A |psi> for Hermitian A. Rejects non-Hermitian input; fails an
// internal check if the result picks up an imaginary part.
double expectation(const StateVector& psi, const OperatorMatrix& a);

struct EigenPair {
  double value;
  StateVector vector;
};

// Full eigensystem of a Hermitian matrix, eigenvalues ascending. Eigenvectors
// are unit-norm and mutually orthogonal; residuals are checked before return.
std::vector<EigenPair> hermitian_eigensystem(const OperatorMatrix& a);

// Spectral norm bound for Hermitian input: max |eigenvalue|.
double hermitian_operator_norm(const OperatorMatrix& a);

// exp(i * scale * A) for Hermitian A, via the eigensystem.
OperatorMatrix unitary_exp_i(const OperatorMatrix& a, double scale);

}  // namespace ghzlab::linalg
