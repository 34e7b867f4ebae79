#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "process.hpp"
#include "rotcb/numeric_io.hpp"
#include "rotcb/tucker.hpp"

using namespace rotcb;
using oracle::quote;

namespace {

const std::string kCli = ROTCB_CLI_PATH;
const std::string kConfigs = ROTCB_CONFIG_DIR;

void save_matrix(const std::filesystem::path& p, const ComplexMatrix& m) {
  std::ofstream out(p);
  write_matrix(out, m, "correlation");
}

double field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  for (std::string k; in >> k;) {
    if (k == key) {
      double v = 0.0;
      in >> v;
      return v;
    }
  }
  FAIL("missing field " << key);
  return 0.0;
}

}  // namespace

TEST_CASE("usage errors exit with status 2") {
  oracle::Scratch s("rotcb_cli_usage");
  CHECK(s.run(kCli, "").exit_code == 2);
  CHECK(s.run(kCli, "frobnicate").exit_code == 2);
  CHECK(s.run(kCli, "decompose").exit_code == 2);
  CHECK(s.run(kCli, "simulate " + quote(kConfigs + "/reference.yaml") + " --threads 0").exit_code == 2);
  CHECK(s.run(kCli, "--help").exit_code == 0);

  const auto missing = s.run(kCli, "simulate " + quote((s / "absent.yaml").string()));
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("rotcb: ConfigError") != std::string::npos);

  std::ofstream(s / "bad.yaml") << "base:\n  geometry: ura:4x4\n  bitz: 3\n";
  const auto bad = s.run(kCli, "simulate " + quote((s / "bad.yaml").string()));
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("bitz") != std::string::npos);
  CHECK(bad.out.empty());
}

TEST_CASE("decompose: separable input is recovered exactly") {
  oracle::Scratch s("rotcb_cli_decompose");
  RandomSource rng(11);
  const ComplexMatrix r = kron(oracle::random_psd(rng, 2), oracle::random_psd(rng, 3));
  save_matrix(s / "r.txt", r);
  const auto res = s.run(kCli, "decompose " + quote((s / "r.txt").string()) + " --n1 3 --n2 2");
  REQUIRE(res.exit_code == 0);
  CHECK(field(res.out, "relative_mismatch") < 1e-12);
  CHECK(res.out.find("parameters 32 dense 72") != std::string::npos);
  CHECK(field(res.out, "reduction_ratio") == doctest::Approx(72.0 / 32.0));

  std::ifstream in(s / "r.txt.tucker");
  const TuckerRotation t = read_rotation(in);
  CHECK((build_rotation(t) - r).norm() < 1e-12 * r.norm());
}

TEST_CASE("decompose: identity and malformed inputs") {
  oracle::Scratch s("rotcb_cli_identity");
  save_matrix(s / "eye.txt", ComplexMatrix::Identity(4, 4));
  const auto res = s.run(kCli, "decompose " + quote((s / "eye.txt").string()) + " --n1 2 --n2 2 --out " +
                                   quote((s / "eye.rot").string()));
  REQUIRE(res.exit_code == 0);
  CHECK(field(res.out, "absolute_mismatch") < 1e-14);
  std::ifstream in(s / "eye.rot");
  const TuckerRotation t = read_rotation(in);
  CHECK((t.lambda.array() - 1.0).abs().maxCoeff() < 1e-14);

  CHECK(s.run(kCli, "decompose " + quote((s / "eye.txt").string()) + " --n1 3 --n2 2").exit_code == 2);
  std::ofstream(s / "junk.txt") << "rotcb-matrix 1\nkind x\ndims 2 2\n1 0 0\n";
  const auto junk = s.run(kCli, "decompose " + quote((s / "junk.txt").string()) + " --n1 1 --n2 2");
  CHECK(junk.exit_code == 2);
  CHECK(junk.err.find("line 4") != std::string::npos);
}

TEST_CASE("codebook: plain, rotated, and degenerate rotation") {
  oracle::Scratch s("rotcb_cli_codebook");
  const auto plain = s.run(kCli, "codebook --dim 4 --bits 3 --seed 5");
  REQUIRE(plain.exit_code == 0);
  std::istringstream in(plain.out);
  const Codebook cb = read_codebook(in);
  CHECK(cb.codewords == rvq_codebook(5, 4, 3).codewords);

  RandomSource rng(12);
  const ComplexMatrix r = oracle::random_psd(rng, 4);
  save_matrix(s / "r.txt", r);
  const auto rotated = s.run(kCli, "codebook --bits 3 --seed 5 --rotate-with " + quote((s / "r.txt").string()));
  REQUIRE(rotated.exit_code == 0);
  std::istringstream rin(rotated.out);
  CHECK((read_codebook(rin).codewords - rotate(cb, psd_sqrt(r)).codewords).norm() < 1e-12);

  save_matrix(s / "zero.txt", ComplexMatrix::Zero(4, 4));
  const auto zero = s.run(kCli, "codebook --bits 2 --rotate-with " + quote((s / "zero.txt").string()));
  CHECK(zero.exit_code == 3);
  CHECK(zero.err.find("DegenerateCodeword") != std::string::npos);
  CHECK(s.run(kCli, "codebook --bits 2").exit_code == 2);
}

TEST_CASE("gen-corr writes a Hermitian PSD correlation matrix") {
  oracle::Scratch s("rotcb_cli_gencorr");
  std::ofstream(s / "spec.yaml") << "base: {geometry: ura:2x3, scheduled_k: 2}\n";
  const auto res = s.run(kCli, "gen-corr " + quote((s / "spec.yaml").string()) + " --user 3");
  REQUIRE(res.exit_code == 0);
  std::istringstream in(res.out);
  const MatrixFile f = read_matrix(in);
  CHECK(f.kind == "correlation");
  CHECK(f.data.rows() == 6);
  CHECK_NOTHROW(require_hermitian_psd(f.data, "gen-corr output"));
  CHECK(s.run(kCli, "gen-corr " + quote((s / "spec.yaml").string()) + " --user 3").out == res.out);
  CHECK(s.run(kCli, "gen-corr " + quote((s / "spec.yaml").string()) + " --cell 1").exit_code == 2);
}

TEST_CASE("simulate: output independent of thread count") {
  oracle::Scratch s("rotcb_cli_simulate");
  const std::string spec = quote(kConfigs + "/reference.yaml");
  const auto one = s.run(kCli, "simulate " + spec + " --threads 1");
  const auto four = s.run(kCli, "simulate " + spec + " --threads 4");
  REQUIRE(one.exit_code == 0);
  REQUIRE(four.exit_code == 0);
  CHECK(one.out == four.out);
  CHECK(std::count(one.out.begin(), one.out.end(), '\n') == 9);

  const auto reseeded = s.run(kCli, "simulate " + spec + " --seed 1 --out " + quote((s / "r.csv").string()));
  REQUIRE(reseeded.exit_code == 0);
  CHECK(reseeded.out.empty());
  CHECK(oracle::slurp(s / "r.csv") != one.out);
}
