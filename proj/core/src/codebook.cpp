#include "rotcb/codebook.hpp"

#include <algorithm>
#include <string>

#include "rotcb/error.hpp"
#include "rotcb/random.hpp"

namespace rotcb {

namespace {

constexpr int kResampleAttempts = 16;
constexpr double kDegenerateNorm = 1e-14;

ComplexVector gaussian_unit_vector(RandomSource& rng, Index dim) {
  ComplexVector x(dim);
  do {
    for (Index k = 0; k < dim; ++k) x(k) = rng.complex_normal();
  } while (x.norm() == 0.0);
  return x / x.norm();
}

}  // namespace

std::string_view to_string(CodebookKind kind) noexcept {
  switch (kind) {
    case CodebookKind::base_rvq: return "base_rvq";
    case CodebookKind::rotated: return "rotated";
    case CodebookKind::tucker_rotated: return "tucker_rotated";
    case CodebookKind::product_iqc: return "product_iqc";
  }
  return "unknown";
}

CodebookKind parse_codebook_kind(std::string_view text) {
  for (auto kind : {CodebookKind::base_rvq, CodebookKind::rotated, CodebookKind::tucker_rotated,
                    CodebookKind::product_iqc}) {
    if (text == to_string(kind)) return kind;
  }
  fail(ErrorKind::InvalidInput, "unknown codebook kind '" + std::string(text) + "'");
}

Codebook rvq_codebook(std::uint64_t seed, Index dim, int bits) {
  if (bits < 0 || bits > kMaxCodebookBits) {
    fail(ErrorKind::ResourceLimit, "rvq_codebook: bits must be in [0, " + std::to_string(kMaxCodebookBits) +
                                       "], got " + std::to_string(bits));
  }
  if (dim < 1) fail(ErrorKind::InvalidInput, "rvq_codebook: dimension must be positive");
  Codebook cb;
  cb.dim = dim;
  cb.bits = bits;
  cb.kind = CodebookKind::base_rvq;
  cb.seed = seed;
  const Index count = Index{1} << bits;
  cb.codewords.resize(dim, count);
  RandomSource rng(seed);
  for (Index i = 0; i < count; ++i) cb.codewords.col(i) = gaussian_unit_vector(rng, dim);
  return cb;
}

Codebook rotate(const Codebook& base, const ComplexMatrix& r_sqrt, CodebookKind kind) {
  if (r_sqrt.rows() != base.dim || r_sqrt.cols() != base.dim) {
    fail(ErrorKind::InvalidInput, "rotate: rotation is " + std::to_string(r_sqrt.rows()) + "x" +
                                      std::to_string(r_sqrt.cols()) + " but codebook dimension is " +
                                      std::to_string(base.dim));
  }
  Codebook out = base;
  out.kind = kind;
  out.codewords.noalias() = r_sqrt * base.codewords;
  const double floor = kDegenerateNorm * std::max(r_sqrt.norm(), 1e-300);
  for (Index i = 0; i < out.size(); ++i) {
    double norm = out.codewords.col(i).norm();
    for (int attempt = 0; !(norm >= floor); ++attempt) {
      if (attempt == kResampleAttempts) {
        fail(ErrorKind::DegenerateCodeword,
             "rotate: codeword " + std::to_string(i) + " lies in the null space of the rotation");
      }
      RandomSource rng(derive_seed(base.seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(attempt)}));
      out.codewords.col(i) = r_sqrt * gaussian_unit_vector(rng, base.dim);
      norm = out.codewords.col(i).norm();
    }
    out.codewords.col(i) /= norm;
  }
  return out;
}

QuantizationResult quantize(const ComplexVector& cdi, const Codebook& cb) {
  if (cdi.size() != cb.dim) {
    fail(ErrorKind::InvalidInput, "quantize: CDI length " + std::to_string(cdi.size()) +
                                      " does not match codebook dimension " + std::to_string(cb.dim));
  }
  const ComplexVector scores = cb.codewords.adjoint() * cdi;
  Index best = 0;
  double best_fidelity = -1.0;
  for (Index i = 0; i < scores.size(); ++i) {
    const double fidelity = std::norm(scores(i));
    if (fidelity > best_fidelity) {
      best_fidelity = fidelity;
      best = i;
    }
  }
  return QuantizationResult{best, cb.codewords.col(best), std::min(best_fidelity, 1.0)};
}

QuantizationResult iqc_quantize(const ComplexVector& cdi, const Codebook& cb_h, const Codebook& cb_v) {
  if (cb_h.dim * cb_v.dim != cdi.size()) {
    fail(ErrorKind::InvalidInput, "iqc_quantize: codebook dimensions " + std::to_string(cb_h.dim) + " and " +
                                      std::to_string(cb_v.dim) + " do not factor CDI length " +
                                      std::to_string(cdi.size()));
  }
  const ComplexMatrix h = reshape(cdi, cb_h.dim, cb_v.dim);

  // ||H^H c_h|| for every horizontal codeword.
  const ComplexMatrix projected = h.adjoint() * cb_h.codewords;
  Index best_h = 0;
  double best_energy = -1.0;
  for (Index i = 0; i < projected.cols(); ++i) {
    const double energy = projected.col(i).squaredNorm();
    if (energy > best_energy) {
      best_energy = energy;
      best_h = i;
    }
  }

  // Effective vertical channel g = H^T conj(c_h), so |c_v^H g| = |f^H cdi|.
  const ComplexVector effective = h.transpose() * cb_h.codewords.col(best_h).conjugate();
  const QuantizationResult vertical = quantize(effective, cb_v);

  QuantizationResult out;
  out.index = best_h * cb_v.size() + vertical.index;
  out.codeword = kron(vertical.codeword, cb_h.codewords.col(best_h));
  out.fidelity = std::min(std::norm(out.codeword.dot(cdi)), 1.0);
  return out;
}

Codebook product_codebook(const Codebook& cb_h, const Codebook& cb_v) {
  Codebook out;
  out.dim = cb_h.dim * cb_v.dim;
  out.bits = cb_h.bits + cb_v.bits;
  out.kind = CodebookKind::product_iqc;
  out.seed = cb_h.seed;
  out.codewords.resize(out.dim, cb_h.size() * cb_v.size());
  for (Index i = 0; i < cb_h.size(); ++i) {
    for (Index j = 0; j < cb_v.size(); ++j) {
      out.codewords.col(i * cb_v.size() + j) = kron(cb_v.codewords.col(j), cb_h.codewords.col(i));
    }
  }
  return out;
}

std::pair<int, int> split_bits(int total_bits) noexcept {
  const int vertical = total_bits / 2;
  return {total_bits - vertical, vertical};
}

}  // namespace rotcb
