#pragma once

// Plain-text numeric files: a magic/version line, a few "key value" header
// lines, then whitespace-separated decimals with complex entries written as
// interleaved real and imaginary parts. Doubles use 17 significant digits so
// files round-trip exactly.
//
//   rotcb-matrix 1          rotcb-codebook 1        rotcb-tucker 1
//   kind correlation        kind rotated            dims <n1> <n2>
//   dims <rows> <cols>      dims <dim> <bits>       V      (n1 rows)
//   <one row per line>      seed <u64>              U      (n2 rows)
//                           <one codeword per line> lambda (one line, reals)

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "rotcb/codebook.hpp"
#include "rotcb/linalg.hpp"
#include "rotcb/tucker.hpp"

namespace rotcb {

inline constexpr int kNumericFormatVersion = 1;

std::string format_double(double x);

struct MatrixFile {
  std::string kind;
  ComplexMatrix data;
};

void write_matrix(std::ostream& out, const ComplexMatrix& m, std::string_view kind = "matrix");
MatrixFile read_matrix(std::istream& in);

void write_codebook(std::ostream& out, const Codebook& cb);
Codebook read_codebook(std::istream& in);

void write_rotation(std::ostream& out, const TuckerRotation& t);
TuckerRotation read_rotation(std::istream& in);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace rotcb
