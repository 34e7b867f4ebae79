// rotcb: run sum-rate experiments and inspect the building blocks from the
// shell. Exit status 0 on success, 2 on configuration or input errors, 3 on
// numerical failures.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotcb/rotcb.hpp"

namespace {

using namespace rotcb;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Stream tags for gen-corr, disjoint from the simulator's.
constexpr std::uint64_t kTagCliUser = 16;
constexpr std::uint64_t kTagCliCorrelation = 17;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NumericalFailure:
    case ErrorKind::DegenerateCodeword:
    case ErrorKind::RankDeficient:
    case ErrorKind::AbortTrial:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(out_path, text);
  }
}

struct SimulateArgs {
  std::string spec;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  ExperimentSpec spec = load_spec(a.spec);
  if (a.seed) spec.base.seed = *a.seed;
  const std::string csv = run_experiment(spec, a.threads);
  std::string target = a.out;
  if (target.empty() && !spec.output.empty()) {
    target = (std::filesystem::path(a.spec).parent_path() / spec.output).string();
  }
  emit(csv, target);
  return 0;
}

struct DecomposeArgs {
  std::string matrix;
  Index n1 = 0;
  Index n2 = 0;
  std::string out;
};

int cmd_decompose(const DecomposeArgs& a) {
  std::istringstream in(read_text_file(a.matrix));
  const MatrixFile file = read_matrix(in);
  require_hermitian_psd(file.data, "decompose input");
  const TuckerRotation t = tucker_pipeline(file.data, a.n1, a.n2);
  const Mismatch m = mismatch(file.data, t);
  const std::size_t stored = parameter_count(t);
  const std::size_t dense = dense_parameter_count(t.n_t());

  std::ostringstream rot;
  write_rotation(rot, t);
  const std::string target = a.out.empty() ? a.matrix + ".tucker" : a.out;
  write_text_file(target, rot.str());

  std::cout << "absolute_mismatch " << format_double(m.absolute) << '\n'
            << "relative_mismatch " << format_double(m.relative) << '\n'
            << "parameters " << stored << " dense " << dense << '\n'
            << "reduction_ratio " << format_double(static_cast<double>(dense) / static_cast<double>(stored)) << '\n'
            << "rotation " << target << '\n';
  return 0;
}

struct GenCorrArgs {
  std::string spec;
  std::size_t cell = 0;
  std::uint64_t user = 0;
  std::optional<std::uint64_t> seed;
  std::string method = "quadrature";
  int draws = 1000;
  int samples = 10000;
  std::string out;
};

int cmd_gen_corr(const GenCorrArgs& a) {
  ExperimentSpec spec = load_spec(a.spec);
  if (a.seed) spec.base.seed = *a.seed;
  const std::vector<SimConfig> cells = expand_cells(spec);
  if (a.cell >= cells.size()) {
    fail(ErrorKind::ConfigError, "cell " + std::to_string(a.cell) + " out of range (spec has " +
                                     std::to_string(cells.size()) + " cells)");
  }
  const SimConfig& cfg = cells[a.cell];
  cfg.validate();

  RandomSource user_rng(derive_seed(cfg.seed, {kTagCliUser, a.user}));
  const UserGeometry user = draw_user(user_rng, cfg.profile);
  RandomSource rng(derive_seed(cfg.seed, {kTagCliCorrelation, a.user}));

  CorrelationEstimate est;
  if (a.method == "quadrature") {
    est = correlation_expected(cfg.geometry, cfg.profile, user, cfg.corr_quadrature_nodes);
  } else if (a.method == "monte_carlo") {
    est = correlation_analytic(rng, cfg.geometry, cfg.profile, user, a.draws);
  } else if (a.method == "sample_average") {
    std::vector<ChannelRealization> channels;
    channels.reserve(static_cast<std::size_t>(a.samples));
    for (int s = 0; s < a.samples; ++s) channels.push_back(sample_channel(rng, cfg.geometry, cfg.profile, user));
    est = correlation_sample_average(channels);
  } else {
    fail(ErrorKind::ConfigError, "unknown method '" + a.method + "'");
  }
  std::ostringstream out;
  write_matrix(out, est.r, "correlation");
  emit(out.str(), a.out);
  return 0;
}

struct CodebookArgs {
  Index dim = 0;
  int bits = 0;
  std::uint64_t seed = 1;
  std::string rotate_with;
  std::string tucker;
  std::string out;
};

int cmd_codebook(const CodebookArgs& a) {
  Codebook cb;
  if (!a.tucker.empty()) {
    std::istringstream in(read_text_file(a.tucker));
    const TuckerRotation t = read_rotation(in);
    cb = rotate(rvq_codebook(a.seed, t.n_t(), a.bits), rotation_sqrt(t), CodebookKind::tucker_rotated);
  } else if (!a.rotate_with.empty()) {
    std::istringstream in(read_text_file(a.rotate_with));
    const MatrixFile file = read_matrix(in);
    require_hermitian_psd(file.data, "rotation matrix");
    cb = rotate(rvq_codebook(a.seed, file.data.rows(), a.bits), psd_sqrt(file.data), CodebookKind::rotated);
  } else {
    if (a.dim < 1) fail(ErrorKind::ConfigError, "--dim is required without --rotate-with or --tucker");
    cb = rvq_codebook(a.seed, a.dim, a.bits);
  }
  std::ostringstream out;
  write_codebook(out, cb);
  emit(out.str(), a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tucker-structured rotated codebooks for 3D MIMO limited feedback"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run every cell of an experiment spec and emit CSV");
  simulate->add_option("spec", sim.spec, "Experiment spec (YAML)")->required();
  simulate->add_option("--seed", sim.seed, "Override the experiment seed");
  simulate->add_option("--threads", sim.threads, "Worker threads")->check(CLI::Range(1, 1024));
  simulate->add_option("--out", sim.out, "CSV path ('-' for stdout); defaults to the experiment's output key");

  DecomposeArgs dec;
  auto* decompose = app.add_subcommand("decompose", "Fit (V, U, lambda) to a correlation matrix file");
  decompose->add_option("matrix", dec.matrix, "Matrix file")->required();
  decompose->add_option("--n1", dec.n1, "Rows of the reshaped channel")->required()->check(CLI::PositiveNumber);
  decompose->add_option("--n2", dec.n2, "Columns of the reshaped channel")->required()->check(CLI::PositiveNumber);
  decompose->add_option("--out", dec.out, "Rotation file (default <matrix>.tucker)");

  GenCorrArgs gen;
  auto* gen_corr = app.add_subcommand("gen-corr", "Write the correlation matrix of one random user");
  gen_corr->add_option("spec", gen.spec, "Experiment spec (YAML)")->required();
  gen_corr->add_option("--cell", gen.cell, "Sweep cell index");
  gen_corr->add_option("--user", gen.user, "User index");
  gen_corr->add_option("--seed", gen.seed, "Override the experiment seed");
  gen_corr->add_option("--method", gen.method, "quadrature | monte_carlo | sample_average")
      ->check(CLI::IsMember({"quadrature", "monte_carlo", "sample_average"}));
  gen_corr->add_option("--draws", gen.draws, "Offset draws for monte_carlo")->check(CLI::PositiveNumber);
  gen_corr->add_option("--samples", gen.samples, "Channels for sample_average")->check(CLI::PositiveNumber);
  gen_corr->add_option("--out", gen.out, "Output file (default stdout)");

  CodebookArgs cba;
  auto* codebook = app.add_subcommand("codebook", "Write an RVQ codebook, optionally rotated");
  codebook->add_option("--dim", cba.dim, "Codeword dimension");
  codebook->add_option("--bits", cba.bits, "Codebook bits")->required()->check(CLI::Range(0, kMaxCodebookBits));
  codebook->add_option("--seed", cba.seed, "Base codebook seed");
  auto* rot = codebook->add_option("--rotate-with", cba.rotate_with, "Rotate by the square root of this matrix");
  codebook->add_option("--tucker", cba.tucker, "Rotate by this Tucker rotation's square root")->excludes(rot);
  codebook->add_option("--out", cba.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*decompose) return cmd_decompose(dec);
    if (*gen_corr) return cmd_gen_corr(gen);
    if (*codebook) return cmd_codebook(cba);
  } catch (const Error& e) {
    std::cerr << "rotcb: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "rotcb: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
