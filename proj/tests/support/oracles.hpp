#pragma once

// Reference implementations used only by the tests. Each one is written from
// the defining formula with plain loops and shares no code with the library
// routine it checks.

#include <cstdint>
#include <vector>

#include "rotcb/rotcb.hpp"

namespace oracle {

using rotcb::Complex;
using rotcb::ComplexMatrix;
using rotcb::ComplexVector;
using rotcb::Index;
using rotcb::RandomSource;
using rotcb::RealVector;

ComplexMatrix random_matrix(RandomSource& rng, Index rows, Index cols);
ComplexVector random_unit_vector(RandomSource& rng, Index n);
/// X X^H with X n x (n + extra); full rank almost surely for extra >= 0.
ComplexMatrix random_psd(RandomSource& rng, Index n, Index extra = 1);
/// Haar-ish unitary from the QR of a Gaussian matrix with R's diagonal phases removed.
ComplexMatrix random_unitary(RandomSource& rng, Index n);

/// Entry-by-entry Kronecker product.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Column-major vectorization by explicit index arithmetic.
ComplexVector vec(const ComplexMatrix& m);
/// Block rearrangement written from the list vec(R_11), vec(R_21), ..., vec(R_N2N2).
ComplexMatrix rearrange(const ComplexMatrix& r, Index n1, Index n2);

/// URA response assembled directly from the element index (p, q).
ComplexVector ura_response(int n_h, int n_v, double d_h, double d_v, double theta_deg, double phi_deg);
/// UCCA response from the element index (j, l).
ComplexVector ucca_response(const std::vector<double>& radii, int per_ring, double theta_deg, double phi_deg);

/// Leading singular value from the largest eigenvalue of M^H M.
double leading_singular_value(const ComplexMatrix& m);
/// Second singular value by divide-and-conquer SVD.
double second_singular_value(const ComplexMatrix& m);

/// min ||R - B kron C||_F over B (n2 x n2), C (n1 x n1) by alternating least
/// squares from `restarts` random starts; returns the best residual.
double als_nkp_residual(const ComplexMatrix& r, Index n1, Index n2, int restarts, RandomSource& rng,
                        int iterations = 3000);

/// ||R - (U kron V) diag(lambda) (U kron V)^H||_F.
double tucker_objective(const ComplexMatrix& r, const ComplexMatrix& u, const ComplexMatrix& v,
                        const RealVector& lambda);

struct Pick {
  Index index = 0;
  double fidelity = 0.0;
};
/// Linear scan for argmax |f_i^H x|^2, first index on ties.
Pick linear_scan(const ComplexVector& x, const ComplexMatrix& codewords);
/// Best fidelity of c_v kron c_h over every pair.
Pick joint_exhaustive_iqc(const ComplexVector& x, const ComplexMatrix& cb_h, const ComplexMatrix& cb_v);

/// Mean and sample standard error.
struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};
Moments moments(const std::vector<double>& xs);

}  // namespace oracle
