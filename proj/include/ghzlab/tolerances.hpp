#pragma once

// Central table of numeric tolerances. Every comparison threshold used by the
// library lives here so a tolerance change is a one-line edit.

namespace ghzlab::tol {

// State vectors must be normalized to unit length.
inline constexpr double kUnitNorm = 1e-12;

// Gate for treating an operator as Hermitian (max |A - A^dagger| entry).
inline constexpr double kHermiticity = 1e-10;

// Cyclic Jacobi terminates when the largest off-diagonal magnitude drops
// below this.
inline constexpr double kEigenOffDiagonal = 1e-12;

// Residual ||A v - lambda v|| accepted for a converged eigenpair.
inline constexpr double kEigenResidual = 1e-9;

// Pairwise orthonormality defect accepted for the eigenvector set.
inline constexpr double kOrthonormality = 1e-10;

// Expectation values of Hermitian operators must be real up to this.
inline constexpr double kRealExpectation = 1e-10;

// Agreement required between the matrix-element and closed-form correlation.
inline constexpr double kClosedFormMatch = 1e-10;

// Projection operators must satisfy P^2 = P to this accuracy.
inline constexpr double kIdempotency = 1e-10;

// Commutator norm below which two observables count as compatible.
inline constexpr double kCommuting = 1e-10;

// A +-1-valued observable must square to the identity within this.
inline constexpr double kSquaresToIdentity = 1e-9;

// Outcome probability vectors must sum to one within this.
inline constexpr double kProbabilityNormalization = 1e-12;

// Two unit vectors closer than this angle count as the same direction.
inline constexpr double kDirectionMatch = 1e-9;

// Accepted deviation of the max-min optimum from its exact rational value
// once converted to double.
inline constexpr double kMaxMin = 1e-9;

// Slack granted when checking floating-point inequalities that are exact in
// the underlying arithmetic.
inline constexpr double kArithmeticSlack = 1e-12;

}  // namespace ghzlab::tol
