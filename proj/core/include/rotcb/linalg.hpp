#pragma once

// Dense complex linear algebra shared by the channel, correlation, Tucker and
// codebook modules. Matrices are Eigen types; the vec/reshape pair uses the
// column-major convention so that vec(A X B^T) = (B kron A) vec(X).

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace rotcb {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-10;

struct EigenDecomposition {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns, unitary
};

struct SingularTriplet {
  double sigma = 0.0;
  ComplexVector u;
  ComplexVector v;
};

struct TripletOptions {
  /// Matrices whose larger side is below this use a full SVD; larger ones use
  /// power iteration on M^H M.
  Index full_decomposition_below = 256;
  double tolerance = 1e-12;
  int max_iterations = 10000;
};

bool all_finite(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double rel_tol = kHermitianTolerance);

/// Throws InvalidInput unless `m` is square, finite and Hermitian.
void require_hermitian(const ComplexMatrix& m, std::string_view what);
/// Additionally checks lambda_min >= -kPsdTolerance * lambda_max.
void require_hermitian_psd(const ComplexMatrix& m, std::string_view what);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Rotates `x` by a unit phase so that its first entry of largest modulus is
/// real and nonnegative. Returns the factor that was applied.
Complex fix_phase(ComplexVector& x);

EigenDecomposition hermitian_eig(const ComplexMatrix& a);

/// Principal square root; eigenvalues below zero are clamped before sqrt.
ComplexMatrix psd_sqrt(const ComplexMatrix& a);

/// Hermitian part of `a` with any negative eigenvalues clamped to zero.
ComplexMatrix clamp_psd(const ComplexMatrix& a);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix reshape(const ComplexVector& h, Index n1, Index n2);

/// Block rearrangement used by the nearest-Kronecker-product problem.
/// `r` (n1*n2 square) is viewed as n2 x n2 blocks of size n1 x n1; row
/// j*n2 + i of the n2^2 x n1^2 result is vec(R_{i,j})^T, so a separable
/// B kron C maps to vec(B) vec(C)^T.
ComplexMatrix rearrange(const ComplexMatrix& r, Index n1, Index n2);
/// Inverse index map of rearrange().
ComplexMatrix unrearrange(const ComplexMatrix& rt, Index n1, Index n2);

/// Leading singular triplet, M ~ sigma u v^H, with u phase-fixed.
SingularTriplet dominant_triplet(const ComplexMatrix& m, const TripletOptions& options = {});

/// Frobenius norm of Q^H Q - I.
double unitarity_residual(const ComplexMatrix& q);

}  // namespace rotcb
