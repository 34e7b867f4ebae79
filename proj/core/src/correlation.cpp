#include "rotcb/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rotcb/error.hpp"

namespace rotcb {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;
constexpr Index kRankUpdateChunk = 512;

void check_user(const ChannelProfile& profile, const UserGeometry& user) {
  profile.validate();
  if (user.cluster_dev_h_deg.size() != static_cast<std::size_t>(profile.n_clusters) ||
      user.cluster_dev_v_deg.size() != static_cast<std::size_t>(profile.n_clusters)) {
    fail(ErrorKind::InvalidInput, "user geometry does not match the profile's cluster count");
  }
}

int effective_draws(const ChannelProfile& profile, int ray_draws) {
  if (ray_draws < 1) fail(ErrorKind::InvalidInput, "correlation_analytic: ray_draws must be >= 1");
  return profile.ray_offset_rms_deg == 0.0 ? 1 : ray_draws;
}

// Visits every ray angle pair in the fixed draw order shared by both paths.
template <typename Visit>
void for_each_ray(RandomSource& rng, const ChannelProfile& profile, const UserGeometry& user, int draws,
                  Visit&& visit) {
  const bool random_offsets = profile.ray_offset_rms_deg != 0.0;
  for (int d = 0; d < draws; ++d) {
    for (int n = 0; n < profile.n_clusters; ++n) {
      for (int m = 0; m < profile.rays_per_cluster; ++m) {
        double dh = 0.0;
        double dv = 0.0;
        if (random_offsets) {
          dh = laplacian_sample(rng, profile.ray_offset_rms_deg);
          dv = laplacian_sample(rng, profile.ray_offset_rms_deg);
        }
        const auto [theta, phi] = ray_angles(user, n, dh, dv);
        visit(theta, phi);
      }
    }
  }
}

CorrelationEstimate finish(ComplexMatrix r, Index samples, EstimateMethod method) {
  CorrelationEstimate out;
  out.r = clamp_psd(r);
  out.sample_count = samples;
  out.method = method;
  return out;
}

CorrelationEstimate correlation_analytic_ura(RandomSource& rng, const UraLayout& ura, const ChannelProfile& profile,
                                             const UserGeometry& user, int draws) {
  const int nh = ura.n_h;
  const int nv = ura.n_v;
  const int width = 2 * nh - 1;
  // acc(dv, dh + nh - 1) = sum over rays of e_v(dv) e_h(dh), dv >= 0.
  ComplexMatrix acc = ComplexMatrix::Zero(nv, width);
  std::vector<Complex> eh(static_cast<std::size_t>(nh));
  std::vector<Complex> ev(static_cast<std::size_t>(nv));
  const double two_pi = 2.0 * std::numbers::pi;

  for_each_ray(rng, profile, user, draws, [&](double theta, double phi) {
    const Complex step_h = std::polar(1.0, -two_pi * ura.spacing_h * std::cos(theta * kDegree));
    const Complex step_v = std::polar(1.0, -two_pi * ura.spacing_v * std::cos(phi * kDegree));
    eh[0] = 1.0;
    for (int p = 1; p < nh; ++p) eh[static_cast<std::size_t>(p)] = eh[static_cast<std::size_t>(p - 1)] * step_h;
    ev[0] = 1.0;
    for (int q = 1; q < nv; ++q) ev[static_cast<std::size_t>(q)] = ev[static_cast<std::size_t>(q - 1)] * step_v;
    for (int dv = 0; dv < nv; ++dv) {
      const Complex v = ev[static_cast<std::size_t>(dv)];
      for (int dh = 1; dh < nh; ++dh) acc(dv, nh - 1 - dh) += v * std::conj(eh[static_cast<std::size_t>(dh)]);
      for (int dh = 0; dh < nh; ++dh) acc(dv, nh - 1 + dh) += v * eh[static_cast<std::size_t>(dh)];
    }
  });

  const double scale = profile.ray_gain_variance() / draws;
  const Index n_t = static_cast<Index>(nh) * nv;
  ComplexMatrix r(n_t, n_t);
  for (int q = 0; q < nv; ++q) {
    for (int qq = 0; qq < nv; ++qq) {
      for (int p = 0; p < nh; ++p) {
        for (int pp = 0; pp < nh; ++pp) {
          const int dv = q - qq;
          const int dh = p - pp;
          const Complex value =
              dv >= 0 ? acc(dv, dh + nh - 1) : std::conj(acc(-dv, -dh + nh - 1));
          r(static_cast<Index>(q) * nh + p, static_cast<Index>(qq) * nh + pp) = scale * value;
        }
      }
    }
  }
  return finish(std::move(r), draws, EstimateMethod::analytic);
}

}  // namespace

namespace detail {

CorrelationEstimate correlation_analytic_dense(RandomSource& rng, const ArrayGeometry& geom,
                                               const ChannelProfile& profile, const UserGeometry& user,
                                               int ray_draws) {
  check_user(profile, user);
  const int draws = effective_draws(profile, ray_draws);
  const Index n_t = geom.n_t();
  ComplexMatrix r = ComplexMatrix::Zero(n_t, n_t);
  ComplexMatrix block(n_t, kRankUpdateChunk);
  Index filled = 0;
  auto flush = [&] {
    if (filled == 0) return;
    r.selfadjointView<Eigen::Lower>().rankUpdate(block.leftCols(filled), 1.0);
    filled = 0;
  };
  for_each_ray(rng, profile, user, draws, [&](double theta, double phi) {
    block.col(filled++) = array_response(geom, theta, phi);
    if (filled == kRankUpdateChunk) flush();
  });
  flush();
  ComplexMatrix full = r.selfadjointView<Eigen::Lower>();
  full *= profile.ray_gain_variance() / draws;
  return finish(std::move(full), draws, EstimateMethod::analytic);
}

CorrelationEstimate correlation_expected_dense(const ArrayGeometry& geom, const ChannelProfile& profile,
                                               const UserGeometry& user, int nodes) {
  check_user(profile, user);
  const LaplaceRule rule = laplace_rule(profile.ray_offset_rms_deg, nodes);
  const Index n_t = geom.n_t();
  ComplexMatrix r = ComplexMatrix::Zero(n_t, n_t);
  ComplexMatrix block(n_t, kRankUpdateChunk);
  Index filled = 0;
  auto flush = [&] {
    if (filled == 0) return;
    r.selfadjointView<Eigen::Lower>().rankUpdate(block.leftCols(filled), 1.0);
    filled = 0;
  };
  for (int n = 0; n < profile.n_clusters; ++n) {
    for (std::size_t i = 0; i < rule.weights.size(); ++i) {
      for (std::size_t k = 0; k < rule.weights.size(); ++k) {
        const auto [theta, phi] = ray_angles(user, n, rule.offsets_deg[i], rule.offsets_deg[k]);
        block.col(filled++) = std::sqrt(rule.weights[i] * rule.weights[k]) * array_response(geom, theta, phi);
        if (filled == kRankUpdateChunk) flush();
      }
    }
  }
  flush();
  ComplexMatrix full = r.selfadjointView<Eigen::Lower>();
  full *= profile.ray_gain_variance() * profile.rays_per_cluster;
  return finish(std::move(full), nodes, EstimateMethod::quadrature);
}

}  // namespace detail

LaplaceRule laplace_rule(double rms_deg, int nodes) {
  if (nodes < 1) fail(ErrorKind::InvalidInput, "laplace_rule: need at least one node");
  if (!(rms_deg >= 0.0)) fail(ErrorKind::InvalidInput, "laplace_rule: RMS must be nonnegative");
  LaplaceRule rule;
  if (rms_deg == 0.0) {
    rule.offsets_deg = {0.0};
    rule.weights = {1.0};
    return rule;
  }
  // Gauss-Laguerre by Golub-Welsch: E{f(x)} = 1/2 int_0^inf e^-t (f(bt) + f(-bt)) dt.
  Eigen::VectorXd diag(nodes);
  Eigen::VectorXd off(std::max(nodes - 1, 0));
  for (int i = 0; i < nodes; ++i) diag(i) = 2.0 * i + 1.0;
  for (int i = 0; i + 1 < nodes; ++i) off(i) = i + 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "laplace_rule: eigensolver failed");
  const double scale = rms_deg / std::numbers::sqrt2;
  for (int i = 0; i < nodes; ++i) {
    const double t = solver.eigenvalues()(i);
    const double w = solver.eigenvectors()(0, i) * solver.eigenvectors()(0, i);
    rule.offsets_deg.push_back(scale * t);
    rule.weights.push_back(0.5 * w);
    rule.offsets_deg.push_back(-scale * t);
    rule.weights.push_back(0.5 * w);
  }
  return rule;
}

CorrelationEstimate correlation_expected(const ArrayGeometry& geom, const ChannelProfile& profile,
                                         const UserGeometry& user, int nodes) {
  const auto* ura = geom.as_ura();
  if (ura == nullptr) return detail::correlation_expected_dense(geom, profile, user, nodes);

  check_user(profile, user);
  const LaplaceRule rule = laplace_rule(profile.ray_offset_rms_deg, nodes);
  const double two_pi = 2.0 * std::numbers::pi;
  // Hermitian Toeplitz matrix of E{exp(-j 2 pi d (p - p') cos(angle + offset))}.
  auto toeplitz = [&](int size, double spacing, double angle_deg) {
    std::vector<Complex> first(static_cast<std::size_t>(size), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < rule.weights.size(); ++i) {
      const Complex step = std::polar(1.0, -two_pi * spacing * std::cos((angle_deg + rule.offsets_deg[i]) * kDegree));
      Complex power(1.0, 0.0);
      for (int d = 0; d < size; ++d) {
        first[static_cast<std::size_t>(d)] += rule.weights[i] * power;
        power *= step;
      }
    }
    ComplexMatrix t(size, size);
    for (int p = 0; p < size; ++p) {
      for (int q = 0; q < size; ++q) {
        t(p, q) = p >= q ? first[static_cast<std::size_t>(p - q)] : std::conj(first[static_cast<std::size_t>(q - p)]);
      }
    }
    return t;
  };

  const Index n_t = geom.n_t();
  ComplexMatrix r = ComplexMatrix::Zero(n_t, n_t);
  for (int n = 0; n < profile.n_clusters; ++n) {
    const auto [theta, phi] = ray_angles(user, n, 0.0, 0.0);
    r += kron(toeplitz(ura->n_v, ura->spacing_v, phi), toeplitz(ura->n_h, ura->spacing_h, theta));
  }
  r *= profile.ray_gain_variance() * profile.rays_per_cluster;
  return finish(std::move(r), nodes, EstimateMethod::quadrature);
}

CorrelationEstimate correlation_sample_average(std::span<const ChannelRealization> channels) {
  if (channels.empty()) fail(ErrorKind::InvalidInput, "correlation_sample_average: no channel realizations");
  const Index n_t = channels.front().h.size();
  ComplexMatrix r = ComplexMatrix::Zero(n_t, n_t);
  for (const auto& c : channels) {
    if (c.h.size() != n_t) fail(ErrorKind::InvalidInput, "correlation_sample_average: channel lengths differ");
    r.selfadjointView<Eigen::Lower>().rankUpdate(c.h, 1.0);
  }
  ComplexMatrix full = r.selfadjointView<Eigen::Lower>();
  full /= static_cast<double>(channels.size());
  return finish(std::move(full), static_cast<Index>(channels.size()), EstimateMethod::sample_average);
}

CorrelationEstimate correlation_analytic(RandomSource& rng, const ArrayGeometry& geom, const ChannelProfile& profile,
                                         const UserGeometry& user, int ray_draws) {
  if (const auto* ura = geom.as_ura()) {
    check_user(profile, user);
    return correlation_analytic_ura(rng, *ura, profile, user, effective_draws(profile, ray_draws));
  }
  return detail::correlation_analytic_dense(rng, geom, profile, user, ray_draws);
}

namespace {

DirectionalStats decompose_directional(ComplexMatrix r_h, ComplexMatrix r_v) {
  DirectionalStats out;
  out.r_h = hermitian_part(r_h);
  out.r_v = hermitian_part(r_v);
  auto eh = hermitian_eig(out.r_h);
  auto ev = hermitian_eig(out.r_v);
  out.v = std::move(eh.vectors);
  out.u = std::move(ev.vectors);
  out.lambda_h = eh.values.cwiseMax(0.0);
  out.lambda_v = ev.values.cwiseMax(0.0);
  return out;
}

void check_split(Index n_t, Index n1, Index n2) {
  if (n1 <= 0 || n2 <= 0 || n1 * n2 != n_t) {
    fail(ErrorKind::InvalidInput, "directional_stats: n1*n2 = " + std::to_string(n1 * n2) +
                                      " does not match n_t = " + std::to_string(n_t));
  }
}

}  // namespace

DirectionalStats directional_stats(std::span<const ChannelRealization> channels, Index n1, Index n2) {
  if (channels.empty()) fail(ErrorKind::InvalidInput, "directional_stats: no channel realizations");
  check_split(channels.front().h.size(), n1, n2);
  ComplexMatrix r_h = ComplexMatrix::Zero(n1, n1);
  ComplexMatrix r_v = ComplexMatrix::Zero(n2, n2);
  for (const auto& c : channels) {
    check_split(c.h.size(), n1, n2);
    const ComplexMatrix h = reshape(c.h, n1, n2);
    r_h.noalias() += h * h.adjoint();
    r_v.noalias() += h.transpose() * h.conjugate();
  }
  const double inv = 1.0 / static_cast<double>(channels.size());
  return decompose_directional(r_h * inv, r_v * inv);
}

DirectionalStats directional_stats(const CorrelationEstimate& estimate, Index n1, Index n2) {
  const ComplexMatrix& r = estimate.r;
  if (r.rows() != r.cols()) fail(ErrorKind::InvalidInput, "directional_stats: correlation is not square");
  check_split(r.rows(), n1, n2);
  ComplexMatrix r_h = ComplexMatrix::Zero(n1, n1);
  for (Index k = 0; k < n2; ++k) r_h += r.block(k * n1, k * n1, n1, n1);
  ComplexMatrix r_v(n2, n2);
  for (Index c = 0; c < n2; ++c) {
    for (Index d = 0; d < n2; ++d) r_v(c, d) = r.block(c * n1, d * n1, n1, n1).trace();
  }
  return decompose_directional(std::move(r_h), std::move(r_v));
}

GainStats gain_stats(const CorrelationEstimate& estimate, const ComplexMatrix& v, const ComplexMatrix& u) {
  if (v.rows() != v.cols() || u.rows() != u.cols() || v.rows() * u.rows() != estimate.dim()) {
    fail(ErrorKind::InvalidInput, "gain_stats: unitary sizes do not match the correlation dimension");
  }
  const ComplexMatrix w = kron(u, v);
  GainStats out;
  out.r_g = w.adjoint() * estimate.r * w;
  out.core = out.r_g.diagonal().real().cwiseMax(0.0);
  return out;
}

}  // namespace rotcb
