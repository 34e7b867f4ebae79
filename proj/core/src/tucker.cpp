#include "rotcb/tucker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rotcb/error.hpp"

namespace rotcb {

void TuckerRotation::validate(double tolerance) const {
  if (v.rows() != v.cols() || u.rows() != u.cols() || v.rows() * u.rows() != lambda.size()) {
    fail(ErrorKind::InvalidInput, "Tucker rotation: inconsistent dimensions");
  }
  if (unitarity_residual(v) > tolerance || unitarity_residual(u) > tolerance) {
    fail(ErrorKind::InvalidInput, "Tucker rotation: V or U is not unitary");
  }
  if ((lambda.array() < 0.0).any() || !lambda.allFinite()) {
    fail(ErrorKind::InvalidInput, "Tucker rotation: core vector must be finite and nonnegative");
  }
}

KronFactors nkp_decompose(const ComplexMatrix& r, Index n1, Index n2) {
  require_hermitian(r, "nkp_decompose");
  const ComplexMatrix rearranged = rearrange(r, n1, n2);
  const SingularTriplet top = dominant_triplet(rearranged);

  // rearrange(B kron C) = vec(B) vec(C)^T, so with R~ ~ sigma u v^H the
  // factors are vec(B) = rho u and vec(C) = rho conj(v).
  KronFactors out;
  out.rho = std::sqrt(top.sigma);
  out.b = reshape(out.rho * top.u, n2, n2);
  out.c = reshape(out.rho * top.v.conjugate(), n1, n1);

  // Only B kron C is determined. Move the shared scalar so that trace(B) is
  // real positive and trace(C) == n1.
  const Complex trace_b = out.b.trace();
  if (std::abs(trace_b) > 0.0) {
    const Complex phase = std::conj(trace_b) / std::abs(trace_b);
    out.b *= phase;
    out.c /= phase;
  }
  const double trace_c = out.c.trace().real();
  if (trace_c > 0.0) {
    const double scale = trace_c / static_cast<double>(n1);
    out.b *= scale;
    out.c /= scale;
  }
  out.b = hermitian_part(out.b);
  out.c = hermitian_part(out.c);
  return out;
}

DirectionalBases factors_to_unitaries(const KronFactors& factors) {
  auto eb = hermitian_eig(factors.b);
  auto ec = hermitian_eig(factors.c);
  return DirectionalBases{std::move(eb.vectors), std::move(ec.vectors), std::move(eb.values), std::move(ec.values)};
}

RealVector optimal_core(const ComplexMatrix& r, const ComplexMatrix& u, const ComplexMatrix& v) {
  if (r.rows() != r.cols() || u.rows() * v.rows() != r.rows()) {
    fail(ErrorKind::InvalidInput, "optimal_core: unitary sizes do not match the correlation dimension");
  }
  const ComplexMatrix w = kron(u, v);
  const ComplexMatrix rw = r * w;
  RealVector core(w.cols());
  for (Index i = 0; i < w.cols(); ++i) core(i) = std::max(w.col(i).dot(rw.col(i)).real(), 0.0);
  return core;
}

RealVector structured_core(const DirectionalBases& bases) {
  const RealVector lb = bases.lambda_b.cwiseMax(0.0);
  const RealVector lc = bases.lambda_c.cwiseMax(0.0);
  RealVector out(lb.size() * lc.size());
  for (Index i = 0; i < lb.size(); ++i) out.segment(i * lc.size(), lc.size()) = lb(i) * lc;
  return out;
}

ComplexMatrix build_rotation(const TuckerRotation& t) {
  const ComplexMatrix w = kron(t.u, t.v);
  return hermitian_part(w * t.lambda.asDiagonal() * w.adjoint());
}

ComplexMatrix rotation_sqrt(const TuckerRotation& t) {
  const ComplexMatrix w = kron(t.u, t.v);
  const RealVector roots = t.lambda.cwiseMax(0.0).cwiseSqrt();
  return hermitian_part(w * roots.asDiagonal() * w.adjoint());
}

Mismatch mismatch(const ComplexMatrix& r, const TuckerRotation& t) {
  if (r.rows() != t.n_t() || r.cols() != t.n_t()) {
    fail(ErrorKind::InvalidInput, "mismatch: rotation dimension " + std::to_string(t.n_t()) +
                                      " does not match correlation dimension " + std::to_string(r.rows()));
  }
  Mismatch out;
  out.absolute = (r - build_rotation(t)).norm();
  const double scale = r.norm();
  out.relative = scale > 0.0 ? out.absolute / scale : out.absolute;
  return out;
}

TuckerRotation tucker_pipeline(const ComplexMatrix& r, Index n1, Index n2) {
  const KronFactors factors = nkp_decompose(r, n1, n2);
  DirectionalBases bases = factors_to_unitaries(factors);
  TuckerRotation out;
  out.lambda = optimal_core(r, bases.u, bases.v);
  out.u = std::move(bases.u);
  out.v = std::move(bases.v);
  return out;
}

std::size_t parameter_count(const TuckerRotation& t) noexcept {
  const auto n1 = static_cast<std::size_t>(t.n1());
  const auto n2 = static_cast<std::size_t>(t.n2());
  return 2 * n1 * n1 + 2 * n2 * n2 + n1 * n2;
}

std::size_t dense_parameter_count(Index n_t) noexcept {
  const auto n = static_cast<std::size_t>(n_t);
  return 2 * n * n;
}

}  // namespace rotcb
