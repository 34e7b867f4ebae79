#pragma once

#include <span>
#include <vector>

#include "rotcb/channel.hpp"
#include "rotcb/linalg.hpp"

namespace rotcb {

enum class EstimateMethod { analytic, quadrature, sample_average };

inline constexpr int kDefaultQuadratureNodes = 16;

struct CorrelationEstimate {
  ComplexMatrix r;
  Index sample_count = 0;
  EstimateMethod method = EstimateMethod::analytic;

  Index dim() const noexcept { return r.rows(); }
};

/// R = (1/S) sum h h^H, symmetrized and clamped to PSD.
CorrelationEstimate correlation_sample_average(std::span<const ChannelRealization> channels);

/// E{h h^H} with the i.i.d. zero-mean ray gains integrated out:
/// var_g * mean over `ray_draws` offset draws of sum_{n,m} a a^H. One pass is
/// exact when the profile has zero ray offsets. URA arrays use the
/// two-level Toeplitz structure of a a^H.
CorrelationEstimate correlation_analytic(RandomSource& rng, const ArrayGeometry& geom, const ChannelProfile& profile,
                                         const UserGeometry& user, int ray_draws);

/// Same expectation as correlation_analytic() with the Laplacian ray offsets
/// integrated by Gauss-Laguerre quadrature (`nodes` per half-line and per
/// direction) instead of Monte Carlo: var_g * M * sum_n E_offsets{a a^H}.
/// Deterministic. URA arrays factor into kron(E{a_v a_v^H}, E{a_h a_h^H}).
CorrelationEstimate correlation_expected(const ArrayGeometry& geom, const ChannelProfile& profile,
                                         const UserGeometry& user, int nodes = kDefaultQuadratureNodes);

/// Symmetric quadrature rule for E{f(x)}, x ~ Laplace with the given RMS.
struct LaplaceRule {
  std::vector<double> offsets_deg;
  std::vector<double> weights;  // sum to 1
};
LaplaceRule laplace_rule(double rms_deg, int nodes);

namespace detail {
/// Same estimator through explicit outer products for every geometry.
CorrelationEstimate correlation_analytic_dense(RandomSource& rng, const ArrayGeometry& geom,
                                               const ChannelProfile& profile, const UserGeometry& user,
                                               int ray_draws);
CorrelationEstimate correlation_expected_dense(const ArrayGeometry& geom, const ChannelProfile& profile,
                                               const UserGeometry& user, int nodes);
}  // namespace detail

/// Left/right directional correlations of H = reshape(h, n1, n2):
/// R_h = E{H H^H} = V diag(lambda_h) V^H, R_v = E{H^T H^*} = U diag(lambda_v) U^H.
struct DirectionalStats {
  ComplexMatrix r_h;
  ComplexMatrix r_v;
  ComplexMatrix v;
  ComplexMatrix u;
  RealVector lambda_h;
  RealVector lambda_v;
};

DirectionalStats directional_stats(std::span<const ChannelRealization> channels, Index n1, Index n2);
/// Block-trace contraction: R_h[a,b] = sum_k R[(k,a),(k,b)], R_v[c,d] = sum_a R[(c,a),(d,a)].
DirectionalStats directional_stats(const CorrelationEstimate& estimate, Index n1, Index n2);

/// Projected-gain correlation R_g = (U kron V)^H R (U kron V) and its
/// clamped real diagonal.
struct GainStats {
  ComplexMatrix r_g;
  RealVector core;
};

GainStats gain_stats(const CorrelationEstimate& estimate, const ComplexMatrix& v, const ComplexMatrix& u);

}  // namespace rotcb
