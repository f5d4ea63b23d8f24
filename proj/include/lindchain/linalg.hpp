#pragma once

// Dense linear-algebra kernels shared by the spectral, dynamics and oracle
// modules.

#include <vector>

#include "lindchain/types.hpp"

namespace lindchain {

/// All eigenvalues of a general complex matrix (Hessenberg reduction followed
/// by shifted QR). Throws NumericalError on non-convergence; never returns a
/// partial spectrum.
std::vector<Complex> spectrum_numeric(const CMatrix& m);

/// Eigenvalues of a Hermitian matrix in ascending order (only the Hermitian
/// part of `m` is read).
RVector hermitian_eigenvalues(const CMatrix& m);

/// Right eigenpairs of a general complex matrix.
struct Eigensystem {
  CVector values;
  CMatrix vectors;
};
Eigensystem eigensystem(const CMatrix& m);

enum class ExpMethod {
  automatic,  // eigendecomposition if well conditioned, else Padé
  pade,       // scaling-and-squaring, degree-13 Padé
  eigen,      // V exp(Lambda) V^-1
};

/// Matrix exponential. Throws NumericalError if the result is not finite, or
/// if ExpMethod::eigen is forced on an ill-conditioned eigenbasis.
CMatrix matrix_exponential(const CMatrix& m, ExpMethod method = ExpMethod::automatic);

/// 2-norm condition number of a square matrix.
double condition_number(const CMatrix& m);

/// Largest distance from a point of one set to the nearest point of the other.
double hausdorff_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Max deviation after greedily pairing two equal-size multisets (each element
/// of `a` is matched to its nearest unused element of `b`). Returns +inf for
/// size mismatch.
double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Ordinary least squares. Columns of `design` are basis functions. Throws
/// NumericalError when the design matrix is rank deficient.
struct LeastSquares {
  RVector coefficients;
  double residual_rms = 0.0;
  double r_squared = 0.0;
};
LeastSquares least_squares(const RMatrix& design, const RVector& y);

}  // namespace lindchain
