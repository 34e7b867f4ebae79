#pragma once

// Cluster/ray 3D MIMO channel synthesis for rectangular (URA) and concentric
// circular (UCCA) base-station arrays. Angles are degrees at this interface;
// spacings and radii are in carrier wavelengths.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rotcb/linalg.hpp"
#include "rotcb/random.hpp"

namespace rotcb {

struct UraLayout {
  int n_h = 8;
  int n_v = 8;
  double spacing_h = 0.5;
  double spacing_v = 0.5;

  bool operator==(const UraLayout&) const = default;
};

struct UccaLayout {
  int rings = 8;
  int per_ring = 8;
  std::vector<double> radii;  // one per ring, strictly increasing

  bool operator==(const UccaLayout&) const = default;
};

class ArrayGeometry {
 public:
  static ArrayGeometry ura(int n_h, int n_v, double spacing_h = 0.5, double spacing_v = 0.5);
  /// Ring j (1-based) gets radius radius_step * j.
  static ArrayGeometry ucca(int rings, int per_ring, double radius_step = 0.5);
  static ArrayGeometry ucca(int rings, int per_ring, std::vector<double> radii);

  /// Parses "ura:NHxNV[:dh[:dv]]" or "ucca:JxL[:step]".
  static ArrayGeometry parse(std::string_view text);
  /// Inverse of parse() for geometries built with uniform radii steps.
  std::string to_string() const;

  Index n_t() const noexcept;
  /// Natural (n1, n2) reshape split: (N_h, N_v) for URA, (J, L) for UCCA.
  std::pair<Index, Index> natural_split() const noexcept;

  const UraLayout* as_ura() const noexcept { return std::get_if<UraLayout>(&layout_); }
  const UccaLayout* as_ucca() const noexcept { return std::get_if<UccaLayout>(&layout_); }

  bool operator==(const ArrayGeometry&) const = default;

 private:
  explicit ArrayGeometry(std::variant<UraLayout, UccaLayout> layout) : layout_(std::move(layout)) {}

  std::variant<UraLayout, UccaLayout> layout_;
};

struct ChannelProfile {
  int n_clusters = 12;
  int rays_per_cluster = 20;
  /// Cluster centres are uniform in (-range, range).
  double center_h_range_deg = 60.0;
  double center_v_range_deg = 45.0;
  double cluster_rms_deg = 5.0;
  double ray_offset_rms_deg = 1.0;
  /// Per-ray complex gain variance; 1/(N*M) when unset so E||h||^2 ~ n_t.
  std::optional<double> gain_variance;

  double ray_gain_variance() const noexcept;
  void validate() const;

  bool operator==(const ChannelProfile&) const = default;
};

/// Cluster centres and per-cluster deviations; fixed for a user across
/// channel realizations.
struct UserGeometry {
  double center_h_deg = 0.0;
  double center_v_deg = 0.0;
  std::vector<double> cluster_dev_h_deg;
  std::vector<double> cluster_dev_v_deg;

  bool operator==(const UserGeometry&) const = default;
};

struct ChannelRealization {
  ComplexVector h;

  ComplexVector cdi() const;
};

/// URA: a_v(phi) kron a_h(theta). UCCA: stacked per radial direction phi_l,
/// entries exp(-j 2 pi d_j cos(phi - phi_l) cos(theta)) with theta the ray's
/// horizontal angle and phi its vertical angle, as the UCCA response is
/// conventionally written.
ComplexVector array_response(const ArrayGeometry& geom, double theta_deg, double phi_deg);

UserGeometry draw_user(RandomSource& rng, const ChannelProfile& profile);

ChannelRealization sample_channel(RandomSource& rng, const ArrayGeometry& geom, const ChannelProfile& profile,
                                  const UserGeometry& user);

/// Zero-mean Laplace deviate with standard deviation `rms_deg`.
double laplacian_sample(RandomSource& rng, double rms_deg);
/// Quantile function of the same distribution, p in (0, 1).
double laplace_quantile(double p, double rms_deg);

/// Ray angles (theta, phi) in degrees for cluster n given fresh offsets.
std::pair<double, double> ray_angles(const UserGeometry& user, int cluster, double offset_h_deg,
                                     double offset_v_deg) noexcept;

}  // namespace rotcb
