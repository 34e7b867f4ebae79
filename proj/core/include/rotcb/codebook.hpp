#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

#include "rotcb/linalg.hpp"

namespace rotcb {

enum class CodebookKind { base_rvq, rotated, tucker_rotated, product_iqc };

std::string_view to_string(CodebookKind kind) noexcept;
CodebookKind parse_codebook_kind(std::string_view text);

inline constexpr int kMaxCodebookBits = 20;

struct Codebook {
  Index dim = 0;
  int bits = 0;
  CodebookKind kind = CodebookKind::base_rvq;
  /// Seed of the base RVQ draw; used to resample degenerate codewords.
  std::uint64_t seed = 0;
  ComplexMatrix codewords;  // dim x 2^bits, unit-norm columns

  Index size() const noexcept { return codewords.cols(); }
  ComplexVector codeword(Index i) const { return codewords.col(i); }
};

struct QuantizationResult {
  Index index = 0;
  ComplexVector codeword;
  double fidelity = 0.0;  // |codeword^H cdi|^2
};

/// 2^bits normalized i.i.d. complex Gaussian vectors. Codewords are drawn in
/// index order from one stream, so a smaller book is a prefix of a larger one
/// with the same seed.
Codebook rvq_codebook(std::uint64_t seed, Index dim, int bits);

/// f_i = S c_i / ||S c_i||. A codeword annihilated by S is replaced by a fresh
/// Gaussian draw from the (seed, index) sub-stream; DegenerateCodeword is
/// thrown if that keeps failing.
Codebook rotate(const Codebook& base, const ComplexMatrix& r_sqrt, CodebookKind kind = CodebookKind::rotated);

/// argmax_i |f_i^H cdi|^2, lowest index on ties.
QuantizationResult quantize(const ComplexVector& cdi, const Codebook& cb);

/// Direction-wise quantization. H = reshape(cdi, n1, n2); c_h maximizes
/// ||H^H c_h||, then c_v maximizes |c_v^H H^T conj(c_h)|. The returned codeword
/// is vec(c_h c_v^T) = c_v kron c_h and the index is i_h * |cb_v| + i_v.
QuantizationResult iqc_quantize(const ComplexVector& cdi, const Codebook& cb_h, const Codebook& cb_v);

/// Dense product book with codeword i_h * |cb_v| + i_v equal to c_v kron c_h.
Codebook product_codebook(const Codebook& cb_h, const Codebook& cb_v);

/// Splits a total bit budget into (horizontal, vertical); the horizontal book
/// takes the extra bit when the total is odd.
std::pair<int, int> split_bits(int total_bits) noexcept;

}  // namespace rotcb
