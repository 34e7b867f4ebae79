#include "rotcb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "rotcb/error.hpp"

namespace rotcb {

namespace {

std::string dims(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

Index checked_product(Index a, Index b, std::string_view what) {
  if (a < 0 || b < 0 || (a != 0 && b > std::numeric_limits<Index>::max() / a)) {
    fail(ErrorKind::InvalidInput, std::string(what) + ": dimension overflow");
  }
  return a * b;
}

}  // namespace

bool all_finite(const ComplexMatrix& m) {
  return m.unaryExpr([](const Complex& z) {
            return std::isfinite(z.real()) && std::isfinite(z.imag()) ? 0.0 : 1.0;
          })
             .sum() == 0.0;
}

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.norm();
  return (m - m.adjoint()).norm() <= rel_tol * scale;
}

void require_hermitian(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    fail(ErrorKind::InvalidInput, std::string(what) + ": expected a nonempty square matrix, got " + dims(m));
  }
  if (!all_finite(m)) fail(ErrorKind::InvalidInput, std::string(what) + ": non-finite entries");
  if (!is_hermitian(m)) fail(ErrorKind::InvalidInput, std::string(what) + ": matrix is not Hermitian");
}

void require_hermitian_psd(const ComplexMatrix& m, std::string_view what) {
  require_hermitian(m, what);
  const auto eig = hermitian_eig(m);
  const double largest = std::max(eig.values(0), 0.0);
  if (eig.values(eig.values.size() - 1) < -kPsdTolerance * largest ||
      (largest == 0.0 && eig.values(eig.values.size() - 1) < 0.0)) {
    fail(ErrorKind::InvalidInput, std::string(what) + ": matrix is not positive semi-definite");
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

Complex fix_phase(ComplexVector& x) {
  if (x.size() == 0) return {1.0, 0.0};
  const double largest = x.cwiseAbs().maxCoeff();
  if (largest == 0.0) return {1.0, 0.0};
  Index pivot = 0;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) >= largest * (1.0 - 1e-12)) {
      pivot = i;
      break;
    }
  }
  const Complex factor = std::conj(x(pivot)) / std::abs(x(pivot));
  x *= factor;
  x(pivot) = Complex(std::abs(x(pivot)), 0.0);
  return factor;
}

EigenDecomposition hermitian_eig(const ComplexMatrix& a) {
  require_hermitian(a, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::NumericalFailure, "hermitian_eig: eigensolver did not converge");
  }
  const Index n = a.rows();
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Descending; equal eigenvalues keep the solver's column order.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return solver.eigenvalues()(i) > solver.eigenvalues()(j); });
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = solver.eigenvalues()(src);
    ComplexVector column = solver.eigenvectors().col(src);
    fix_phase(column);
    out.vectors.col(k) = column;
  }
  return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  const auto eig = hermitian_eig(a);
  const double largest = std::max(eig.values(0), 0.0);
  const double smallest = eig.values(eig.values.size() - 1);
  if (smallest < -kPsdTolerance * largest || (largest == 0.0 && smallest < 0.0)) {
    fail(ErrorKind::InvalidInput, "psd_sqrt: matrix is not positive semi-definite");
  }
  const RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix clamp_psd(const ComplexMatrix& a) {
  ComplexMatrix sym = hermitian_part(a);
  const auto eig = hermitian_eig(sym);
  if (eig.values(eig.values.size() - 1) >= 0.0) return sym;
  const RealVector clamped = eig.values.cwiseMax(0.0);
  sym = eig.vectors * clamped.asDiagonal() * eig.vectors.adjoint();
  return hermitian_part(sym);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Index rows = checked_product(a.rows(), b.rows(), "kron");
  const Index cols = checked_product(a.cols(), b.cols(), "kron");
  ComplexMatrix out(rows, cols);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector vec(const ComplexMatrix& m) {
  ComplexVector out(m.size());
  for (Index j = 0; j < m.cols(); ++j) {
    out.segment(j * m.rows(), m.rows()) = m.col(j);
  }
  return out;
}

ComplexMatrix reshape(const ComplexVector& h, Index n1, Index n2) {
  if (n1 <= 0 || n2 <= 0 || checked_product(n1, n2, "reshape") != h.size()) {
    fail(ErrorKind::InvalidInput, "reshape: length " + std::to_string(h.size()) + " does not match " +
                                      std::to_string(n1) + "x" + std::to_string(n2));
  }
  ComplexMatrix out(n1, n2);
  for (Index j = 0; j < n2; ++j) out.col(j) = h.segment(j * n1, n1);
  return out;
}

ComplexMatrix rearrange(const ComplexMatrix& r, Index n1, Index n2) {
  if (n1 <= 0 || n2 <= 0 || r.rows() != r.cols() || r.rows() != checked_product(n1, n2, "rearrange")) {
    fail(ErrorKind::InvalidInput, "rearrange: matrix " + dims(r) + " is not (n1*n2)-square for n1=" +
                                      std::to_string(n1) + ", n2=" + std::to_string(n2));
  }
  ComplexMatrix out(n2 * n2, n1 * n1);
  for (Index j = 0; j < n2; ++j) {
    for (Index i = 0; i < n2; ++i) {
      const Index row = j * n2 + i;
      for (Index b = 0; b < n1; ++b) {
        for (Index a = 0; a < n1; ++a) {
          out(row, b * n1 + a) = r(i * n1 + a, j * n1 + b);
        }
      }
    }
  }
  return out;
}

ComplexMatrix unrearrange(const ComplexMatrix& rt, Index n1, Index n2) {
  if (n1 <= 0 || n2 <= 0 || rt.rows() != n2 * n2 || rt.cols() != n1 * n1) {
    fail(ErrorKind::InvalidInput, "unrearrange: matrix " + dims(rt) + " does not match n1=" +
                                      std::to_string(n1) + ", n2=" + std::to_string(n2));
  }
  ComplexMatrix out(n1 * n2, n1 * n2);
  for (Index j = 0; j < n2; ++j) {
    for (Index i = 0; i < n2; ++i) {
      const Index row = j * n2 + i;
      for (Index b = 0; b < n1; ++b) {
        for (Index a = 0; a < n1; ++a) {
          out(i * n1 + a, j * n1 + b) = rt(row, b * n1 + a);
        }
      }
    }
  }
  return out;
}

namespace {

SingularTriplet triplet_by_svd(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SingularTriplet out;
  out.sigma = svd.singularValues()(0);
  out.u = svd.matrixU().col(0);
  out.v = svd.matrixV().col(0);
  return out;
}

SingularTriplet triplet_by_power_iteration(const ComplexMatrix& m, const TripletOptions& options) {
  // Start from the conjugated row of largest norm, i.e. M^H e_i.
  Index start_row = 0;
  m.rowwise().norm().maxCoeff(&start_row);
  ComplexVector v = m.row(start_row).adjoint();
  v.normalize();

  const ComplexMatrix gram = m.adjoint() * m;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    ComplexVector next = gram * v;
    const double norm = next.norm();
    if (norm == 0.0) break;
    next /= norm;
    const double change = (next - v).norm();
    v = next;
    if (change < options.tolerance) {
      SingularTriplet out;
      const ComplexVector mv = m * v;
      out.sigma = mv.norm();
      out.u = mv / out.sigma;
      out.v = v;
      return out;
    }
  }
  fail(ErrorKind::NumericalFailure, "dominant_triplet: power iteration did not converge in " +
                                        std::to_string(options.max_iterations) + " iterations");
}

}  // namespace

SingularTriplet dominant_triplet(const ComplexMatrix& m, const TripletOptions& options) {
  if (m.size() == 0) fail(ErrorKind::InvalidInput, "dominant_triplet: empty matrix");
  if (!all_finite(m)) fail(ErrorKind::InvalidInput, "dominant_triplet: non-finite entries");

  if (m.norm() == 0.0) {
    SingularTriplet zero;
    zero.u = ComplexVector::Unit(m.rows(), 0);
    zero.v = ComplexVector::Unit(m.cols(), 0);
    return zero;
  }

  SingularTriplet out = std::max(m.rows(), m.cols()) < options.full_decomposition_below
                            ? triplet_by_svd(m)
                            : triplet_by_power_iteration(m, options);
  // Same phase on both sides keeps sigma u v^H unchanged.
  const Complex factor = fix_phase(out.u);
  out.v *= factor;
  return out;
}

double unitarity_residual(const ComplexMatrix& q) {
  return (q.adjoint() * q - ComplexMatrix::Identity(q.cols(), q.cols())).norm();
}

}  // namespace rotcb
