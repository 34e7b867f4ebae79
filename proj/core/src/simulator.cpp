#include "rotcb/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "rotcb/correlation.hpp"
#include "rotcb/error.hpp"
#include "rotcb/random.hpp"
#include "rotcb/tucker.hpp"

namespace rotcb {

namespace {

// Sub-stream tags; changing them changes every simulated number.
enum StreamTag : std::uint64_t {
  kTagBase = 1,
  kTagSchedule = 2,
  kTagUser = 3,
  kTagCorrelation = 4,
  kTagChannel = 5,
};

constexpr double kRankTolerance = 1e-10;

}  // namespace

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::rc: return "rc";
    case Scheme::tdc: return "tdc";
    case Scheme::iqc: return "iqc";
    case Scheme::perfect_cdi: return "perfect_cdi";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view text) {
  for (auto s : {Scheme::rc, Scheme::tdc, Scheme::iqc, Scheme::perfect_cdi}) {
    if (text == to_string(s)) return s;
  }
  fail(ErrorKind::ConfigError, "unknown scheme '" + std::string(text) + "' (expected rc, tdc, iqc or perfect_cdi)");
}

std::string_view to_string(CorrelationPath path) noexcept {
  return path == CorrelationPath::quadrature ? "quadrature" : "monte_carlo";
}

CorrelationPath parse_correlation_path(std::string_view text) {
  if (text == "quadrature") return CorrelationPath::quadrature;
  if (text == "monte_carlo") return CorrelationPath::monte_carlo;
  fail(ErrorKind::ConfigError, "unknown correlation path '" + std::string(text) + "' (expected quadrature or monte_carlo)");
}

std::pair<Index, Index> SimConfig::split() const {
  if (n1 == 0 && n2 == 0) return geometry.natural_split();
  return {n1, n2};
}

void SimConfig::validate() const {
  try {
    profile.validate();
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, e.message());
  }
  const Index n_t = geometry.n_t();
  const auto [s1, s2] = split();
  if (s1 < 1 || s2 < 1 || s1 * s2 != n_t) {
    fail(ErrorKind::ConfigError, "n1*n2 must equal the number of antennas (" + std::to_string(n_t) + ")");
  }
  if (scheduled_k < 1 || scheduled_k > n_t) {
    fail(ErrorKind::ConfigError, "scheduled_k must be in [1, n_t]");
  }
  if (users_pool != 0 && users_pool < scheduled_k) {
    fail(ErrorKind::ConfigError, "users_pool must be 0 or at least scheduled_k");
  }
  if (trials < 1) fail(ErrorKind::ConfigError, "trials must be >= 1");
  if (corr_ray_draws < 1) fail(ErrorKind::ConfigError, "corr_ray_draws must be >= 1");
  if (corr_quadrature_nodes < 1 || corr_quadrature_nodes > 128) {
    fail(ErrorKind::ConfigError, "corr_quadrature_nodes must be in [1, 128]");
  }
  if (total_bits < 0 || total_bits > kMaxCodebookBits) {
    fail(ErrorKind::ConfigError, "total_bits must be in [0, " + std::to_string(kMaxCodebookBits) + "]");
  }
  if (!std::isfinite(snr_db)) fail(ErrorKind::ConfigError, "snr_db must be finite");
}

BaseCodebooks make_base_codebooks(std::uint64_t seed, Index n1, Index n2, int total_bits) {
  const auto [bits_h, bits_v] = split_bits(total_bits);
  return BaseCodebooks{rvq_codebook(derive_seed(seed, {0}), n1 * n2, total_bits),
                       rvq_codebook(derive_seed(seed, {1}), n1, bits_h),
                       rvq_codebook(derive_seed(seed, {2}), n2, bits_v)};
}

ComplexVector feedback_direction(const ScheduledUser& user, Scheme scheme, Index n1, Index n2) {
  const double norm = user.channel.norm();
  if (!(norm > 0.0)) fail(ErrorKind::NumericalFailure, "feedback_direction: zero channel");
  const ComplexVector cdi = user.channel / norm;
  const BaseCodebooks& bases = *user.bases;
  switch (scheme) {
    case Scheme::perfect_cdi:
      return cdi;
    case Scheme::rc: {
      const Codebook cb = rotate(bases.full, psd_sqrt(user.correlation), CodebookKind::rotated);
      return quantize(cdi, cb).codeword;
    }
    case Scheme::tdc: {
      const TuckerRotation t = tucker_pipeline(user.correlation, n1, n2);
      const Codebook cb = rotate(bases.full, rotation_sqrt(t), CodebookKind::tucker_rotated);
      return quantize(cdi, cb).codeword;
    }
    case Scheme::iqc: {
      const CorrelationEstimate estimate{user.correlation, 0, EstimateMethod::analytic};
      const DirectionalStats stats = directional_stats(estimate, n1, n2);
      const Codebook cb_h = rotate(bases.horizontal, psd_sqrt(stats.r_h), CodebookKind::rotated);
      const Codebook cb_v = rotate(bases.vertical, psd_sqrt(stats.r_v), CodebookKind::rotated);
      return iqc_quantize(cdi, cb_h, cb_v).codeword;
    }
  }
  fail(ErrorKind::InvalidInput, "feedback_direction: unknown scheme");
}

ComplexMatrix zf_beamformers(std::span<const ComplexVector> quantized) {
  if (quantized.empty()) fail(ErrorKind::InvalidInput, "zf_beamformers: no users");
  const auto k = static_cast<Index>(quantized.size());
  const Index n_t = quantized.front().size();
  if (k > n_t) fail(ErrorKind::RankDeficient, "zf_beamformers: more users than antennas");
  ComplexMatrix stacked(k, n_t);
  for (Index i = 0; i < k; ++i) {
    if (quantized[static_cast<std::size_t>(i)].size() != n_t) {
      fail(ErrorKind::InvalidInput, "zf_beamformers: direction lengths differ");
    }
    stacked.row(i) = quantized[static_cast<std::size_t>(i)].adjoint();
  }
  const Eigen::JacobiSVD<ComplexMatrix> svd(stacked);
  const RealVector& s = svd.singularValues();
  if (!(s(0) > 0.0) || s(k - 1) < kRankTolerance * s(0)) {
    fail(ErrorKind::RankDeficient, "zf_beamformers: fed-back directions are linearly dependent");
  }
  const ComplexMatrix gram = stacked * stacked.adjoint();
  ComplexMatrix w = stacked.adjoint() * gram.partialPivLu().inverse();
  for (Index i = 0; i < k; ++i) w.col(i).normalize();
  return w;
}

double sum_rate(std::span<const ComplexVector> channels, const ComplexMatrix& w, double snr_linear) {
  const auto k = static_cast<Index>(channels.size());
  if (w.cols() != k) fail(ErrorKind::InvalidInput, "sum_rate: beamformer count does not match user count");
  if (k == 0) return 0.0;
  const double power = snr_linear / static_cast<double>(k);
  double total = 0.0;
  for (Index i = 0; i < k; ++i) {
    const ComplexVector& h = channels[static_cast<std::size_t>(i)];
    if (h.size() != w.rows()) fail(ErrorKind::InvalidInput, "sum_rate: channel length mismatch");
    double signal = 0.0;
    double interference = 0.0;
    for (Index j = 0; j < k; ++j) {
      const double gain = std::norm(h.dot(w.col(j)));
      if (j == i) {
        signal = gain;
      } else {
        interference += gain;
      }
    }
    total += std::log2(1.0 + power * signal / (1.0 + power * interference));
  }
  return total;
}

double trial_sum_rate(std::span<const ScheduledUser> users, Scheme scheme, Index n1, Index n2, double snr_linear) {
  std::vector<ComplexVector> directions;
  std::vector<ComplexVector> channels;
  directions.reserve(users.size());
  channels.reserve(users.size());
  for (const auto& user : users) {
    directions.push_back(feedback_direction(user, scheme, n1, n2));
    channels.push_back(user.channel);
  }
  return sum_rate(channels, zf_beamformers(directions), snr_linear);
}

std::vector<ScheduledUser> draw_trial_users(const SimConfig& cfg, int trial, int attempt,
                                            const std::shared_ptr<const BaseCodebooks>& shared_bases) {
  const auto t = static_cast<std::uint64_t>(trial);
  const auto a = static_cast<std::uint64_t>(attempt);
  const int pool = cfg.users_pool > 0 ? cfg.users_pool : cfg.scheduled_k;

  std::vector<int> scheduled(static_cast<std::size_t>(pool));
  std::iota(scheduled.begin(), scheduled.end(), 0);
  if (pool > cfg.scheduled_k) {
    RandomSource picker(derive_seed(cfg.seed, {kTagSchedule, t, a}));
    // Partial Fisher-Yates with an explicit index draw keeps this portable.
    for (int i = 0; i < cfg.scheduled_k; ++i) {
      const int span = pool - i;
      int j = i + static_cast<int>(picker.uniform() * span);
      j = std::min(j, pool - 1);
      std::swap(scheduled[static_cast<std::size_t>(i)], scheduled[static_cast<std::size_t>(j)]);
    }
    scheduled.resize(static_cast<std::size_t>(cfg.scheduled_k));
  }

  const auto [n1, n2] = cfg.split();
  std::vector<ScheduledUser> users;
  users.reserve(scheduled.size());
  for (int index : scheduled) {
    const auto u = static_cast<std::uint64_t>(index);
    RandomSource user_rng(derive_seed(cfg.seed, {kTagUser, t, a, u}));
    const UserGeometry geometry = draw_user(user_rng, cfg.profile);

    RandomSource corr_rng(derive_seed(cfg.seed, {kTagCorrelation, t, a, u}));
    ScheduledUser user;
    user.correlation =
        cfg.correlation == CorrelationPath::quadrature
            ? correlation_expected(cfg.geometry, cfg.profile, geometry, cfg.corr_quadrature_nodes).r
            : correlation_analytic(corr_rng, cfg.geometry, cfg.profile, geometry, cfg.corr_ray_draws).r;

    RandomSource channel_rng(derive_seed(cfg.seed, {kTagChannel, t, a, u}));
    user.channel = sample_channel(channel_rng, cfg.geometry, cfg.profile, geometry).h;

    if (cfg.per_user_base) {
      user.bases = std::make_shared<const BaseCodebooks>(
          make_base_codebooks(derive_seed(cfg.seed, {kTagBase, t, a, u}), n1, n2, cfg.total_bits));
    } else {
      user.bases = shared_bases;
    }
    users.push_back(std::move(user));
  }
  return users;
}

namespace {

struct TrialOutcome {
  std::vector<double> rates;  // per scheme
  std::vector<int> rank_deficient_events;
};

TrialOutcome evaluate_trial(const SimConfig& cfg, int trial, std::span<const Scheme> schemes,
                            const std::shared_ptr<const BaseCodebooks>& shared_bases) {
  const auto [n1, n2] = cfg.split();
  const double snr_linear = std::pow(10.0, cfg.snr_db / 10.0);
  TrialOutcome out;
  out.rates.assign(schemes.size(), 0.0);
  out.rank_deficient_events.assign(schemes.size(), 0);
  std::vector<bool> done(schemes.size(), false);
  std::size_t remaining = schemes.size();
  for (int attempt = 0; attempt < kMaxTrialAttempts && remaining > 0; ++attempt) {
    const auto users = draw_trial_users(cfg, trial, attempt, shared_bases);
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      if (done[s]) continue;
      try {
        out.rates[s] = trial_sum_rate(users, schemes[s], n1, n2, snr_linear);
        done[s] = true;
        --remaining;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::RankDeficient) throw;
        ++out.rank_deficient_events[s];
      }
    }
  }
  if (remaining > 0) {
    fail(ErrorKind::AbortTrial, "trial " + std::to_string(trial) + " stayed rank deficient after " +
                                    std::to_string(kMaxTrialAttempts) + " redraws");
  }
  return out;
}

}  // namespace

std::vector<SumRateResult> run_trials(const SimConfig& cfg, std::span<const Scheme> schemes, int threads) {
  cfg.validate();
  if (schemes.empty()) return {};
  const auto [n1, n2] = cfg.split();
  const auto shared_bases =
      std::make_shared<const BaseCodebooks>(make_base_codebooks(derive_seed(cfg.seed, {kTagBase}), n1, n2,
                                                                cfg.total_bits));

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};
  std::mutex error_mutex;
  int failed_trial = cfg.trials;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const int trial = next.fetch_add(1);
      if (trial >= cfg.trials) return;
      try {
        outcomes[static_cast<std::size_t>(trial)] = evaluate_trial(cfg, trial, schemes, shared_bases);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        // Report the lowest failing trial so the error does not depend on scheduling.
        if (trial < failed_trial) {
          failed_trial = trial;
          failure = std::current_exception();
        }
      }
    }
  };

  const int workers = std::clamp(threads, 1, cfg.trials);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SumRateResult> results;
  results.reserve(schemes.size());
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    SumRateResult r;
    r.scheme = schemes[s];
    r.config_echo = cfg;
    r.config_echo.scheme = schemes[s];
    r.per_trial.reserve(outcomes.size());
    for (const auto& o : outcomes) {
      r.per_trial.push_back(o.rates[s]);
      r.rank_deficient_events += o.rank_deficient_events[s];
    }
    const double n = static_cast<double>(r.per_trial.size());
    r.mean_sum_rate = std::accumulate(r.per_trial.begin(), r.per_trial.end(), 0.0) / n;
    if (r.per_trial.size() > 1) {
      double ss = 0.0;
      for (double x : r.per_trial) ss += (x - r.mean_sum_rate) * (x - r.mean_sum_rate);
      r.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    results.push_back(std::move(r));
  }
  return results;
}

SumRateResult run_trials(const SimConfig& cfg, int threads) {
  const Scheme scheme = cfg.scheme;
  return run_trials(cfg, std::span<const Scheme>(&scheme, 1), threads).front();
}

}  // namespace rotcb
