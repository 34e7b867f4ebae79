#include "rotcb/numeric_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "rotcb/error.hpp"

namespace rotcb {

namespace {

// Line-oriented token reader that keeps line numbers for error messages.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::vector<std::string> line_tokens(std::string_view expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      if (!tokens.empty()) return tokens;
    }
    error("unexpected end of file, expected " + std::string(expecting));
  }

  std::vector<std::string> keyed(std::string_view key, std::size_t values) {
    auto tokens = line_tokens(key);
    if (tokens.front() != key || tokens.size() != values + 1) {
      error("expected '" + std::string(key) + "' with " + std::to_string(values) + " value(s)");
    }
    tokens.erase(tokens.begin());
    return tokens;
  }

  void magic(std::string_view tag) {
    const auto tokens = line_tokens(tag);
    if (tokens.size() != 2 || tokens[0] != tag) error("expected header '" + std::string(tag) + " <version>'");
    if (tokens[1] != std::to_string(kNumericFormatVersion)) error("unsupported format version " + tokens[1]);
  }

  double number(const std::string& tok) {
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(x)) error("bad number '" + tok + "'");
    return x;
  }

  long long integer(const std::string& tok, long long lo, long long hi) {
    char* end = nullptr;
    const long long x = std::strtoll(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || x < lo || x > hi) error("bad integer '" + tok + "'");
    return x;
  }

  std::uint64_t unsigned_integer(const std::string& tok) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || tok.front() == '-') error("bad unsigned integer '" + tok + "'");
    return x;
  }

  std::vector<double> numbers(std::size_t count, std::string_view what) {
    const auto tokens = line_tokens(what);
    if (tokens.size() != count) {
      error("expected " + std::to_string(count) + " numbers for " + std::string(what) + ", got " +
            std::to_string(tokens.size()));
    }
    std::vector<double> out;
    out.reserve(count);
    for (const auto& t : tokens) out.push_back(number(t));
    return out;
  }

  ComplexMatrix complex_rows(Index rows, Index cols, std::string_view what) {
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      const auto values = numbers(static_cast<std::size_t>(2 * cols), what);
      for (Index j = 0; j < cols; ++j) {
        m(i, j) = Complex(values[static_cast<std::size_t>(2 * j)], values[static_cast<std::size_t>(2 * j + 1)]);
      }
    }
    return m;
  }

  [[noreturn]] void error(const std::string& message) const {
    fail(ErrorKind::InvalidInput, "line " + std::to_string(line_no_) + ": " + message);
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

constexpr long long kMaxDim = 1 << 16;

void write_complex_row(std::ostream& out, const ComplexMatrix& m, Index row) {
  for (Index j = 0; j < m.cols(); ++j) {
    if (j > 0) out << ' ';
    out << format_double(m(row, j).real()) << ' ' << format_double(m(row, j).imag());
  }
  out << '\n';
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_matrix(std::ostream& out, const ComplexMatrix& m, std::string_view kind) {
  out << "rotcb-matrix " << kNumericFormatVersion << '\n';
  out << "kind " << kind << '\n';
  out << "dims " << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) write_complex_row(out, m, i);
}

MatrixFile read_matrix(std::istream& in) {
  Reader reader(in);
  reader.magic("rotcb-matrix");
  MatrixFile out;
  out.kind = reader.keyed("kind", 1).front();
  const auto d = reader.keyed("dims", 2);
  const auto rows = static_cast<Index>(reader.integer(d[0], 1, kMaxDim));
  const auto cols = static_cast<Index>(reader.integer(d[1], 1, kMaxDim));
  out.data = reader.complex_rows(rows, cols, "matrix row");
  return out;
}

void write_codebook(std::ostream& out, const Codebook& cb) {
  out << "rotcb-codebook " << kNumericFormatVersion << '\n';
  out << "kind " << to_string(cb.kind) << '\n';
  out << "dims " << cb.dim << ' ' << cb.bits << '\n';
  out << "seed " << cb.seed << '\n';
  const ComplexMatrix rows = cb.codewords.transpose();
  for (Index i = 0; i < rows.rows(); ++i) write_complex_row(out, rows, i);
}

Codebook read_codebook(std::istream& in) {
  Reader reader(in);
  reader.magic("rotcb-codebook");
  Codebook cb;
  try {
    cb.kind = parse_codebook_kind(reader.keyed("kind", 1).front());
  } catch (const Error& e) {
    reader.error(e.message());
  }
  const auto d = reader.keyed("dims", 2);
  cb.dim = static_cast<Index>(reader.integer(d[0], 1, kMaxDim));
  cb.bits = static_cast<int>(reader.integer(d[1], 0, kMaxCodebookBits));
  cb.seed = reader.unsigned_integer(reader.keyed("seed", 1).front());
  const ComplexMatrix rows = reader.complex_rows(Index{1} << cb.bits, cb.dim, "codeword");
  cb.codewords = rows.transpose();
  for (Index i = 0; i < cb.size(); ++i) {
    if (std::abs(cb.codewords.col(i).norm() - 1.0) > 1e-12) {
      reader.error("codeword " + std::to_string(i) + " is not unit norm");
    }
  }
  return cb;
}

void write_rotation(std::ostream& out, const TuckerRotation& t) {
  out << "rotcb-tucker " << kNumericFormatVersion << '\n';
  out << "dims " << t.n1() << ' ' << t.n2() << '\n';
  out << "V\n";
  for (Index i = 0; i < t.v.rows(); ++i) write_complex_row(out, t.v, i);
  out << "U\n";
  for (Index i = 0; i < t.u.rows(); ++i) write_complex_row(out, t.u, i);
  out << "lambda\n";
  for (Index i = 0; i < t.lambda.size(); ++i) {
    if (i > 0) out << ' ';
    out << format_double(t.lambda(i));
  }
  out << '\n';
}

TuckerRotation read_rotation(std::istream& in) {
  Reader reader(in);
  reader.magic("rotcb-tucker");
  const auto d = reader.keyed("dims", 2);
  const auto n1 = static_cast<Index>(reader.integer(d[0], 1, 1 << 12));
  const auto n2 = static_cast<Index>(reader.integer(d[1], 1, 1 << 12));
  TuckerRotation t;
  reader.keyed("V", 0);
  t.v = reader.complex_rows(n1, n1, "V row");
  reader.keyed("U", 0);
  t.u = reader.complex_rows(n2, n2, "U row");
  reader.keyed("lambda", 0);
  const auto lambda = reader.numbers(static_cast<std::size_t>(n1 * n2), "lambda");
  t.lambda = Eigen::Map<const RealVector>(lambda.data(), static_cast<Index>(lambda.size()));
  try {
    t.validate();
  } catch (const Error& e) {
    reader.error(e.message());
  }
  return t;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::InvalidInput, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorKind::InvalidInput, "write to '" + path.string() + "' failed");
}

}  // namespace rotcb
