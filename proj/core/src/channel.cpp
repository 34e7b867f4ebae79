#include "rotcb/channel.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "rotcb/error.hpp"

namespace rotcb {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

int parse_int(std::string_view s, std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorKind::InvalidInput, "geometry '" + std::string(text) + "': bad integer '" + std::string(s) + "'");
  }
  return value;
}

double parse_double(std::string_view s, std::string_view text) {
  try {
    std::size_t used = 0;
    const std::string copy(s);
    const double value = std::stod(copy, &used);
    if (used != copy.size()) throw std::invalid_argument("trailing");
    return value;
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidInput, "geometry '" + std::string(text) + "': bad number '" + std::string(s) + "'");
  }
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ArrayGeometry ArrayGeometry::ura(int n_h, int n_v, double spacing_h, double spacing_v) {
  if (n_h < 1 || n_v < 1) fail(ErrorKind::InvalidInput, "URA needs at least one element per direction");
  if (!(spacing_h > 0.0) || !(spacing_v > 0.0)) fail(ErrorKind::InvalidInput, "URA spacings must be positive");
  return ArrayGeometry(UraLayout{n_h, n_v, spacing_h, spacing_v});
}

ArrayGeometry ArrayGeometry::ucca(int rings, int per_ring, double radius_step) {
  if (rings < 1) fail(ErrorKind::InvalidInput, "UCCA needs at least one ring");
  std::vector<double> radii(static_cast<std::size_t>(rings));
  for (int j = 0; j < rings; ++j) radii[static_cast<std::size_t>(j)] = radius_step * (j + 1);
  return ucca(rings, per_ring, std::move(radii));
}

ArrayGeometry ArrayGeometry::ucca(int rings, int per_ring, std::vector<double> radii) {
  if (rings < 1 || per_ring < 1) fail(ErrorKind::InvalidInput, "UCCA needs at least one ring and one element");
  if (radii.size() != static_cast<std::size_t>(rings)) {
    fail(ErrorKind::InvalidInput, "UCCA radii count does not match ring count");
  }
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > 0.0) || (j > 0 && !(radii[j] > radii[j - 1]))) {
      fail(ErrorKind::InvalidInput, "UCCA radii must be positive and strictly increasing");
    }
  }
  return ArrayGeometry(UccaLayout{rings, per_ring, std::move(radii)});
}

ArrayGeometry ArrayGeometry::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() < 2) fail(ErrorKind::InvalidInput, "geometry '" + std::string(text) + "': expected kind:AxB");
  const auto size = split(parts[1], 'x');
  if (size.size() != 2) fail(ErrorKind::InvalidInput, "geometry '" + std::string(text) + "': expected AxB size");
  const int a = parse_int(size[0], text);
  const int b = parse_int(size[1], text);
  if (parts[0] == "ura") {
    if (parts.size() > 4) fail(ErrorKind::InvalidInput, "geometry '" + std::string(text) + "': too many fields");
    const double dh = parts.size() > 2 ? parse_double(parts[2], text) : 0.5;
    const double dv = parts.size() > 3 ? parse_double(parts[3], text) : dh;
    return ura(a, b, dh, dv);
  }
  if (parts[0] == "ucca") {
    if (parts.size() > 3) fail(ErrorKind::InvalidInput, "geometry '" + std::string(text) + "': too many fields");
    const double step = parts.size() > 2 ? parse_double(parts[2], text) : 0.5;
    return ucca(a, b, step);
  }
  fail(ErrorKind::InvalidInput, "geometry '" + std::string(text) + "': unknown kind '" + std::string(parts[0]) + "'");
}

std::string ArrayGeometry::to_string() const {
  if (const auto* u = as_ura()) {
    return "ura:" + std::to_string(u->n_h) + "x" + std::to_string(u->n_v) + ":" + format_number(u->spacing_h) +
           ":" + format_number(u->spacing_v);
  }
  const auto& c = std::get<UccaLayout>(layout_);
  return "ucca:" + std::to_string(c.rings) + "x" + std::to_string(c.per_ring) + ":" + format_number(c.radii.front());
}

Index ArrayGeometry::n_t() const noexcept {
  const auto [n1, n2] = natural_split();
  return n1 * n2;
}

std::pair<Index, Index> ArrayGeometry::natural_split() const noexcept {
  if (const auto* u = as_ura()) return {u->n_h, u->n_v};
  const auto& c = std::get<UccaLayout>(layout_);
  return {c.rings, c.per_ring};
}

double ChannelProfile::ray_gain_variance() const noexcept {
  return gain_variance.value_or(1.0 / (static_cast<double>(n_clusters) * rays_per_cluster));
}

void ChannelProfile::validate() const {
  if (n_clusters < 1 || rays_per_cluster < 1) {
    fail(ErrorKind::InvalidInput, "channel profile needs at least one cluster and one ray");
  }
  if (!(cluster_rms_deg >= 0.0) || !(ray_offset_rms_deg >= 0.0)) {
    fail(ErrorKind::InvalidInput, "channel profile RMS values must be nonnegative");
  }
  if (!(center_h_range_deg >= 0.0) || !(center_v_range_deg >= 0.0)) {
    fail(ErrorKind::InvalidInput, "channel profile centre ranges must be nonnegative");
  }
  if (gain_variance && !(*gain_variance > 0.0)) {
    fail(ErrorKind::InvalidInput, "channel profile gain variance must be positive");
  }
}

ComplexVector ChannelRealization::cdi() const {
  const double norm = h.norm();
  if (!(norm > 0.0)) fail(ErrorKind::NumericalFailure, "channel realization has zero norm");
  return h / norm;
}

ComplexVector array_response(const ArrayGeometry& geom, double theta_deg, double phi_deg) {
  const double theta = theta_deg * kDegree;
  const double phi = phi_deg * kDegree;
  constexpr double two_pi = 2.0 * std::numbers::pi;

  if (const auto* u = geom.as_ura()) {
    const double kh = two_pi * u->spacing_h * std::cos(theta);
    const double kv = two_pi * u->spacing_v * std::cos(phi);
    ComplexVector out(static_cast<Index>(u->n_h) * u->n_v);
    for (int q = 0; q < u->n_v; ++q) {
      for (int p = 0; p < u->n_h; ++p) {
        out(static_cast<Index>(q) * u->n_h + p) = std::polar(1.0, -(kh * p + kv * q));
      }
    }
    return out;
  }

  const auto& c = *geom.as_ucca();
  const double cos_theta = std::cos(theta);
  ComplexVector out(static_cast<Index>(c.rings) * c.per_ring);
  for (int l = 1; l <= c.per_ring; ++l) {
    const double radial = two_pi * l / c.per_ring;
    const double projection = std::cos(phi - radial) * cos_theta;
    for (int j = 0; j < c.rings; ++j) {
      out(static_cast<Index>(l - 1) * c.rings + j) =
          std::polar(1.0, -two_pi * c.radii[static_cast<std::size_t>(j)] * projection);
    }
  }
  return out;
}

UserGeometry draw_user(RandomSource& rng, const ChannelProfile& profile) {
  profile.validate();
  UserGeometry user;
  user.center_h_deg = rng.uniform(-profile.center_h_range_deg, profile.center_h_range_deg);
  user.center_v_deg = rng.uniform(-profile.center_v_range_deg, profile.center_v_range_deg);
  const auto n = static_cast<std::size_t>(profile.n_clusters);
  user.cluster_dev_h_deg.resize(n);
  user.cluster_dev_v_deg.resize(n);
  // Standard normals scaled afterwards, so sweeps over sigma stay paired.
  for (std::size_t k = 0; k < n; ++k) user.cluster_dev_h_deg[k] = profile.cluster_rms_deg * rng.normal();
  for (std::size_t k = 0; k < n; ++k) user.cluster_dev_v_deg[k] = profile.cluster_rms_deg * rng.normal();
  return user;
}

std::pair<double, double> ray_angles(const UserGeometry& user, int cluster, double offset_h_deg,
                                     double offset_v_deg) noexcept {
  const auto n = static_cast<std::size_t>(cluster);
  return {user.center_h_deg + user.cluster_dev_h_deg[n] + offset_h_deg,
          user.center_v_deg + user.cluster_dev_v_deg[n] + offset_v_deg};
}

ChannelRealization sample_channel(RandomSource& rng, const ArrayGeometry& geom, const ChannelProfile& profile,
                                  const UserGeometry& user) {
  profile.validate();
  if (user.cluster_dev_h_deg.size() != static_cast<std::size_t>(profile.n_clusters) ||
      user.cluster_dev_v_deg.size() != static_cast<std::size_t>(profile.n_clusters)) {
    fail(ErrorKind::InvalidInput, "user geometry does not match the profile's cluster count");
  }
  const double variance = profile.ray_gain_variance();
  ChannelRealization out{ComplexVector::Zero(geom.n_t())};
  for (int n = 0; n < profile.n_clusters; ++n) {
    for (int m = 0; m < profile.rays_per_cluster; ++m) {
      const double dh = laplacian_sample(rng, profile.ray_offset_rms_deg);
      const double dv = laplacian_sample(rng, profile.ray_offset_rms_deg);
      const Complex gain = rng.complex_normal(variance);
      const auto [theta, phi] = ray_angles(user, n, dh, dv);
      out.h += gain * array_response(geom, theta, phi);
    }
  }
  return out;
}

double laplace_quantile(double p, double rms_deg) {
  const double scale = rms_deg / std::numbers::sqrt2;
  if (p < 0.5) return scale * std::log(2.0 * p);
  return -scale * std::log(2.0 - 2.0 * p);
}

double laplacian_sample(RandomSource& rng, double rms_deg) {
  double p = rng.uniform();
  if (rms_deg == 0.0) return 0.0;
  // uniform() is [0, 1); keep the quantile finite at the left edge.
  if (p == 0.0) p = 0x1p-54;
  return laplace_quantile(p, rms_deg);
}

}  // namespace rotcb
