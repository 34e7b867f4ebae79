#pragma once

// Multi-user downlink evaluation: fresh users per trial, per-user correlation,
// limited feedback with one of the codebook schemes, zero-forcing on the
// fed-back directions and equal power split.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rotcb/channel.hpp"
#include "rotcb/codebook.hpp"
#include "rotcb/linalg.hpp"

namespace rotcb {

enum class Scheme { rc, tdc, iqc, perfect_cdi };

std::string_view to_string(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view text);

inline constexpr int kMaxTrialAttempts = 100;

/// How each user's correlation matrix is obtained.
enum class CorrelationPath { quadrature, monte_carlo };

std::string_view to_string(CorrelationPath path) noexcept;
CorrelationPath parse_correlation_path(std::string_view text);

struct SimConfig {
  ArrayGeometry geometry = ArrayGeometry::ura(8, 8);
  ChannelProfile profile;
  /// Users available to the scheduler each trial; 0 means scheduled_k.
  int users_pool = 0;
  int scheduled_k = 4;
  double snr_db = 10.0;
  int total_bits = 8;
  Scheme scheme = Scheme::tdc;
  /// Reshape split; 0 selects the geometry's natural split.
  Index n1 = 0;
  Index n2 = 0;
  int trials = 200;
  std::uint64_t seed = 1;
  CorrelationPath correlation = CorrelationPath::quadrature;
  /// Offset draws per ray for the Monte Carlo path.
  int corr_ray_draws = 1000;
  /// Gauss-Laguerre nodes per half-line for the quadrature path.
  int corr_quadrature_nodes = 16;
  /// Draw a separate base RVQ book per user instead of one shared book.
  bool per_user_base = false;

  std::pair<Index, Index> split() const;
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

struct SumRateResult {
  Scheme scheme = Scheme::tdc;
  double mean_sum_rate = 0.0;
  double std_error = 0.0;
  std::vector<double> per_trial;
  int rank_deficient_events = 0;
  SimConfig config_echo;
};

/// Base RVQ books: full-dimension for RC/TDC, per-direction for IQC.
struct BaseCodebooks {
  Codebook full;
  Codebook horizontal;
  Codebook vertical;
};

BaseCodebooks make_base_codebooks(std::uint64_t seed, Index n1, Index n2, int total_bits);

struct ScheduledUser {
  ComplexMatrix correlation;  // perfectly known at the transmitter
  ComplexVector channel;      // true channel for this trial
  std::shared_ptr<const BaseCodebooks> bases;
};

/// Fed-back unit direction for one user under `scheme`.
ComplexVector feedback_direction(const ScheduledUser& user, Scheme scheme, Index n1, Index n2);

/// W = Hq^H (Hq Hq^H)^{-1} with unit-norm columns, rows of Hq being q_k^H.
/// Throws RankDeficient when the stacked directions are (numerically) dependent.
ComplexMatrix zf_beamformers(std::span<const ComplexVector> quantized);

/// sum_k log2(1 + (rho/K)|h_k^H w_k|^2 / (1 + (rho/K) sum_{j!=k} |h_k^H w_j|^2)).
double sum_rate(std::span<const ComplexVector> channels, const ComplexMatrix& w, double snr_linear);

/// Sum rate of one scheduled group under one scheme.
double trial_sum_rate(std::span<const ScheduledUser> users, Scheme scheme, Index n1, Index n2, double snr_linear);

/// Draws the scheduled users of trial `trial`, attempt `attempt`.
std::vector<ScheduledUser> draw_trial_users(const SimConfig& cfg, int trial, int attempt,
                                            const std::shared_ptr<const BaseCodebooks>& shared_bases);

SumRateResult run_trials(const SimConfig& cfg, int threads = 1);

/// Evaluates several schemes on the same users and channels. Each entry is
/// identical to run_trials() with cfg.scheme set to that scheme.
std::vector<SumRateResult> run_trials(const SimConfig& cfg, std::span<const Scheme> schemes, int threads = 1);

}  // namespace rotcb
