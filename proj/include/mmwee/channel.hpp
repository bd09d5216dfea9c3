// SPDX-License-Identifier: Apache-2.0
//
// Small-cell placement, pathloss and channel realizations: the pure LoS
// rank-one model and the clustered NLoS model with a Bernoulli-gated LoS ray.

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mmwee/mathcore.hpp"
#include "mmwee/sysparams.hpp"

namespace mmwee {

/// Angles and distances of the K small cells as seen from the BS.
struct Placement {
  int k = 0;
  std::vector<double> aod;        // φ_k, rad
  std::vector<double> aoa;        // θ_k, rad
  std::vector<double> distances;  // d_k, km
};

/// Pathloss in dB: 32.5 + 20log10(f_c) + 10β·log10(d) + A·d + ξ, d in km.
double pathloss_db(const LinkBudget& link, double d_km, double xi_db = 0.0);

/// α = 10^{-l/10} for the given distance and shadowing.
double pathloss_gain(const LinkBudget& link, double d_km, double xi_db = 0.0);

/// Uniform half-space placement φ_m = (π/K)(m − ⌊(K−1)/2⌋), m = 0..K−1, with
/// θ = mod(π + φ, 2π) and every cell at distance d.
Placement place_uniform(int k, double d_km);

/// Placement with AoDs drawn uniformly on [-π/2, π/2).
Placement place_random(int k, double d_km, Rng& rng);

/// Throws DegenerateError when two AoDs map to the same Vandermonde node.
void check_distinct(const Placement& placement);

struct LosChannel {
  std::vector<CMatrix> matrices;  // K matrices, N×M
  std::vector<double> pathlosses;  // α_k
};

/// H_k = sqrt(α_k)·a_N(φ_k)·a_M(θ_k)^H with optional per-link shadowing [dB].
LosChannel los_channel(const Placement& placement, int n, int m,
                       const LinkBudget& link,
                       std::span<const double> shadowing_db = {});

/// Same, with shadowing drawn N(0, σ_ξ²) per link.
LosChannel los_channel(const Placement& placement, int n, int m,
                       const LinkBudget& link, Rng& rng);

/// BS → cluster → small-cell path length for a cluster at distance d_cl whose
/// mean AoD is offset by `phi_bar` from the LoS direction.
double nlos_distance(double d_cl, double d_k, double phi_bar);

/// LoS probability p(d) as a function of distance.
struct LosProbabilityModel {
  enum class Kind { exponential, constant };
  Kind kind = Kind::exponential;
  double d0 = 0.05;     // km, p = 1 below d0
  double scale = 0.15;  // km, decay length
  double value = 1.0;   // used by Kind::constant

  double probability(double d_km) const;

  static LosProbabilityModel always() { return {Kind::constant, 0, 0, 1.0}; }
  static LosProbabilityModel never() { return {Kind::constant, 0, 0, 0.0}; }
};

/// Bernoulli draw with success probability model.probability(d).
bool los_indicator(double d_km, const LosProbabilityModel& model, Rng& rng);

/// Parameters of the clustered channel.
struct ClusterConfig {
  int n_cl = 3;
  int n_r = 10;
  double angle_spread = 5.0 * kPi / 180.0;  // rad, Laplacian scale
  double d_cl_min = 0.3;                    // fraction of d_k
  double d_cl_max = 0.7;                    // fraction of d_k
  LosProbabilityModel los;
  bool shadowing = false;        // draw ξ per cluster
  bool truncate_angles = false;  // clamp ray angles to [-π/2, π/2]
};

struct Ray {
  double aod = 0.0;
  double aoa = 0.0;
  Complex amplitude;  // sqrt of the ray gain, complex small-scale factor included
};

struct Cluster {
  double mean_aod = 0.0;
  double mean_aoa = 0.0;
  double d_cl = 0.0;      // km, BS to cluster
  double distance = 0.0;  // km, total path length
  double pathloss_db = 0.0;
  std::vector<Ray> rays;
};

/// Random geometry of one link. Independent of the array sizes, so one draw
/// can be realized for any (N, M).
struct LinkGeometry {
  double aod_los = 0.0;
  double aoa_los = 0.0;
  double distance = 0.0;
  double los_pathloss = 0.0;  // α_k of the direct path
  bool los = false;
  std::vector<Cluster> clusters;
  int rays_per_cluster = 1;
};

struct NlosGeometry {
  std::vector<LinkGeometry> links;
};

struct NlosChannel {
  std::vector<CMatrix> matrices;  // K matrices, N×M
  NlosGeometry geometry;

  std::vector<bool> los_flags() const;
  /// Pathloss of the direct path of each link; the normalization reference
  /// used by large-scale power control.
  std::vector<double> reference_pathlosses() const;
};

NlosGeometry draw_nlos_geometry(const Placement& placement, const LinkBudget& link,
                                const ClusterConfig& cfg, Rng& rng);

/// Build the N×M matrices of a drawn geometry.
NlosChannel realize(const NlosGeometry& geometry, int n, int m);

/// draw_nlos_geometry followed by realize.
NlosChannel nlos_channel(const Placement& placement, int n, int m,
                         const LinkBudget& link, const ClusterConfig& cfg, Rng& rng);

/// Conditional mean of ‖H_k‖_F² given the geometry:
/// M·N·(mean cluster gain + I_LoS·α_k).
double expected_frobenius_sq(const LinkGeometry& link, int n, int m);

/// Text matrix format: first line "N M K", then for every k, N lines of M
/// complex tokens "(re,im)", row-major, 17 significant digits.
void write_matrices(std::ostream& os, std::span<const CMatrix> matrices);
std::vector<CMatrix> read_matrices(std::istream& is);

}  // namespace mmwee
