#pragma once

// Tucker-structured rotation matrices R^ = (U kron V) diag(lambda) (U kron V)^H
// fitted to a correlation matrix R in closed form:
//
//   1. nearest Kronecker product R ~ B kron C via a rank-1 SVD of the block
//      rearrangement of R (B is n2 x n2, C is n1 x n1);
//   2. U, V are the eigenvectors of B and C;
//   3. lambda is the diagonal of (U kron V)^H R (U kron V), which is the exact
//      minimizer of ||R - R^||_F once U and V are fixed.

#include <cstddef>

#include "rotcb/linalg.hpp"

namespace rotcb {

struct KronFactors {
  ComplexMatrix b;   // n2 x n2, Hermitian PSD
  ComplexMatrix c;   // n1 x n1, Hermitian PSD, trace(c) == n1
  double rho = 0.0;  // square root of the leading singular value of rearrange(R)
};

struct DirectionalBases {
  ComplexMatrix u;  // eigenvectors of B
  ComplexMatrix v;  // eigenvectors of C
  RealVector lambda_b;
  RealVector lambda_c;
};

struct TuckerRotation {
  ComplexMatrix v;  // n1 x n1 unitary
  ComplexMatrix u;  // n2 x n2 unitary
  RealVector lambda;

  Index n1() const noexcept { return v.rows(); }
  Index n2() const noexcept { return u.rows(); }
  Index n_t() const noexcept { return lambda.size(); }

  /// Throws InvalidInput if the triple breaks the unitary/nonnegative invariants.
  void validate(double tolerance = 1e-9) const;
};

struct Mismatch {
  double absolute = 0.0;  // ||R - R^||_F
  double relative = 0.0;  // absolute / ||R||_F
};

KronFactors nkp_decompose(const ComplexMatrix& r, Index n1, Index n2);

DirectionalBases factors_to_unitaries(const KronFactors& factors);

/// Clamped real diagonal of (U kron V)^H R (U kron V).
RealVector optimal_core(const ComplexMatrix& r, const ComplexMatrix& u, const ComplexMatrix& v);

/// lambda_b kron lambda_c (clamped), i.e. the core for which R^ == B kron C.
RealVector structured_core(const DirectionalBases& bases);

ComplexMatrix build_rotation(const TuckerRotation& t);
/// R^{1/2} = (U kron V) diag(sqrt(lambda)) (U kron V)^H.
ComplexMatrix rotation_sqrt(const TuckerRotation& t);

Mismatch mismatch(const ComplexMatrix& r, const TuckerRotation& t);

TuckerRotation tucker_pipeline(const ComplexMatrix& r, Index n1, Index n2);

/// Real scalars needed to transmit (V, U, lambda): 2 n1^2 + 2 n2^2 + n1 n2.
std::size_t parameter_count(const TuckerRotation& t) noexcept;
/// Real scalars in a dense complex n_t x n_t matrix: 2 n_t^2.
std::size_t dense_parameter_count(Index n_t) noexcept;

}  // namespace rotcb
