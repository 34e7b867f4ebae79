#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace oracle {

namespace {
constexpr double kPi = std::numbers::pi;
double rad(double deg) { return deg * kPi / 180.0; }
}  // namespace

ComplexMatrix random_matrix(RandomSource& rng, Index rows, Index cols) {
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

ComplexVector random_unit_vector(RandomSource& rng, Index n) {
  ComplexVector x = random_matrix(rng, n, 1);
  return x / x.norm();
}

ComplexMatrix random_psd(RandomSource& rng, Index n, Index extra) {
  const ComplexMatrix x = random_matrix(rng, n, n + extra);
  ComplexMatrix a = x * x.adjoint();
  return 0.5 * (a + a.adjoint()).eval();
}

ComplexMatrix random_unitary(RandomSource& rng, Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, n, n));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

ComplexVector vec(const ComplexMatrix& m) {
  ComplexVector out(m.size());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out(j * m.rows() + i) = m(i, j);
  return out;
}

ComplexMatrix rearrange(const ComplexMatrix& r, Index n1, Index n2) {
  ComplexMatrix out(n2 * n2, n1 * n1);
  Index row = 0;
  for (Index j = 0; j < n2; ++j) {
    for (Index i = 0; i < n2; ++i) {
      const ComplexMatrix block = r.block(i * n1, j * n1, n1, n1);
      out.row(row++) = vec(block).transpose();
    }
  }
  return out;
}

ComplexVector ura_response(int n_h, int n_v, double d_h, double d_v, double theta_deg, double phi_deg) {
  ComplexVector a(n_h * n_v);
  for (int q = 0; q < n_v; ++q) {
    for (int p = 0; p < n_h; ++p) {
      const double phase = 2.0 * kPi * (d_h * p * std::cos(rad(theta_deg)) + d_v * q * std::cos(rad(phi_deg)));
      a(q * n_h + p) = std::polar(1.0, -phase);
    }
  }
  return a;
}

ComplexVector ucca_response(const std::vector<double>& radii, int per_ring, double theta_deg, double phi_deg) {
  const int rings = static_cast<int>(radii.size());
  ComplexVector a(rings * per_ring);
  for (int l = 1; l <= per_ring; ++l) {
    const double dir = 2.0 * kPi * l / per_ring;
    for (int j = 1; j <= rings; ++j) {
      const double phase = 2.0 * kPi * radii[static_cast<std::size_t>(j - 1)] * std::cos(rad(phi_deg) - dir) *
                           std::cos(rad(theta_deg));
      a((l - 1) * rings + (j - 1)) = std::polar(1.0, -phase);
    }
  }
  return a;
}

namespace {
RealVector gram_eigenvalues(const ComplexMatrix& m) {
  const ComplexMatrix g = m.cols() <= m.rows() ? ComplexMatrix(m.adjoint() * m) : ComplexMatrix(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}
}  // namespace

double leading_singular_value(const ComplexMatrix& m) {
  const RealVector ev = gram_eigenvalues(m);
  return std::sqrt(std::max(ev(ev.size() - 1), 0.0));
}

double second_singular_value(const ComplexMatrix& m) {
  // Small singular values need a direct SVD; the Gram route bottoms out near sqrt(eps).
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  const RealVector& s = svd.singularValues();
  return s.size() < 2 ? 0.0 : s(1);
}

double als_nkp_residual(const ComplexMatrix& r, Index n1, Index n2, int restarts, RandomSource& rng,
                        int iterations) {
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < restarts; ++s) {
    ComplexMatrix c = random_matrix(rng, n1, n1);
    ComplexMatrix b(n2, n2);
    for (int it = 0; it < iterations; ++it) {
      const double cc = c.squaredNorm();
      for (Index i = 0; i < n2; ++i)
        for (Index j = 0; j < n2; ++j)
          b(i, j) = c.conjugate().cwiseProduct(r.block(i * n1, j * n1, n1, n1)).sum() / cc;
      const double bb = b.squaredNorm();
      if (bb == 0.0) break;
      c.setZero();
      for (Index i = 0; i < n2; ++i)
        for (Index j = 0; j < n2; ++j) c += std::conj(b(i, j)) * r.block(i * n1, j * n1, n1, n1);
      c /= bb;
    }
    best = std::min(best, (r - kron(b, c)).norm());
  }
  return best;
}

double tucker_objective(const ComplexMatrix& r, const ComplexMatrix& u, const ComplexMatrix& v,
                        const RealVector& lambda) {
  const ComplexMatrix q = kron(u, v);
  return (r - q * lambda.cast<Complex>().asDiagonal() * q.adjoint()).norm();
}

Pick linear_scan(const ComplexVector& x, const ComplexMatrix& codewords) {
  Pick best{0, -1.0};
  for (Index i = 0; i < codewords.cols(); ++i) {
    Complex dot(0.0, 0.0);
    for (Index k = 0; k < x.size(); ++k) dot += std::conj(codewords(k, i)) * x(k);
    const double f = std::norm(dot);
    if (f > best.fidelity) best = {i, f};
  }
  return best;
}

Pick joint_exhaustive_iqc(const ComplexVector& x, const ComplexMatrix& cb_h, const ComplexMatrix& cb_v) {
  Pick best{0, -1.0};
  for (Index ih = 0; ih < cb_h.cols(); ++ih) {
    for (Index iv = 0; iv < cb_v.cols(); ++iv) {
      const ComplexVector w = kron(cb_v.col(iv), cb_h.col(ih));
      const double f = std::norm(w.dot(x));
      if (f > best.fidelity) best = {ih * cb_v.cols() + iv, f};
    }
  }
  return best;
}

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return m;
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return m;
}

}  // namespace oracle
