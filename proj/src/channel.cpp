// SPDX-License-Identifier: Apache-2.0

#include "mmwee/channel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace mmwee {

namespace {

double los_aoa(double aod) {
  const double t = std::fmod(kPi + aod, 2.0 * kPi);
  return t < 0.0 ? t + 2.0 * kPi : t;
}

Complex complex_normal(Rng& rng) {
  std::normal_distribution<double> half(0.0, std::sqrt(0.5));
  const double re = half(rng);
  const double im = half(rng);
  return {re, im};
}

}  // namespace

double pathloss_db(const LinkBudget& link, double d_km, double xi_db) {
  if (!(d_km > 0.0)) throw DomainError("pathloss_db: distance must be > 0");
  return 32.5 + 20.0 * std::log10(link.f_c) + 10.0 * link.beta * std::log10(d_km) +
         link.a_absorption * d_km + xi_db;
}

double pathloss_gain(const LinkBudget& link, double d_km, double xi_db) {
  return std::pow(10.0, -pathloss_db(link, d_km, xi_db) / 10.0);
}

Placement place_uniform(int k, double d_km) {
  if (k < 1) throw DomainError("place_uniform: k must be >= 1");
  if (!(d_km > 0.0)) throw DomainError("place_uniform: distance must be > 0");
  Placement p;
  p.k = k;
  const int offset = (k - 1) / 2;
  for (int m = 0; m < k; ++m) {
    const double phi = kPi / k * (m - offset);
    p.aod.push_back(phi);
    p.aoa.push_back(los_aoa(phi));
    p.distances.push_back(d_km);
  }
  return p;
}

Placement place_random(int k, double d_km, Rng& rng) {
  if (k < 1) throw DomainError("place_random: k must be >= 1");
  std::uniform_real_distribution<double> angle(-0.5 * kPi, 0.5 * kPi);
  Placement p;
  p.k = k;
  for (int m = 0; m < k; ++m) {
    const double phi = angle(rng);
    p.aod.push_back(phi);
    p.aoa.push_back(los_aoa(phi));
    p.distances.push_back(d_km);
  }
  return p;
}

void check_distinct(const Placement& placement) {
  if (placement.k >= 2) node_separation(placement.aod);
}

LosChannel los_channel(const Placement& placement, int n, int m,
                       const LinkBudget& link, std::span<const double> shadowing_db) {
  if (n < 1 || m < 1) throw DomainError("los_channel: n, m must be >= 1");
  if (!shadowing_db.empty() &&
      shadowing_db.size() != static_cast<std::size_t>(placement.k)) {
    throw DomainError("los_channel: one shadowing value per link required");
  }
  check_distinct(placement);
  LosChannel ch;
  for (int k = 0; k < placement.k; ++k) {
    const double xi = shadowing_db.empty() ? 0.0 : shadowing_db[k];
    const double alpha = pathloss_gain(link, placement.distances[k], xi);
    const CVector a_n = steering_vector(n, placement.aod[k]);
    const CVector a_m = steering_vector(m, placement.aoa[k]);
    ch.matrices.push_back(std::sqrt(alpha) * a_n * a_m.adjoint());
    ch.pathlosses.push_back(alpha);
  }
  return ch;
}

LosChannel los_channel(const Placement& placement, int n, int m,
                       const LinkBudget& link, Rng& rng) {
  std::normal_distribution<double> shadow(0.0, link.sigma_xi);
  std::vector<double> xi(placement.k);
  for (double& x : xi) x = shadow(rng);
  return los_channel(placement, n, m, link, xi);
}

double nlos_distance(double d_cl, double d_k, double phi_bar) {
  if (!(d_cl > 0.0) || !(d_k > 0.0)) {
    throw DomainError("nlos_distance: distances must be > 0");
  }
  const double x = d_cl * std::sin(phi_bar);
  const double y = d_k - d_cl * std::cos(phi_bar);
  return d_cl + std::sqrt(x * x + y * y);
}

double LosProbabilityModel::probability(double d_km) const {
  if (kind == Kind::constant) return std::clamp(value, 0.0, 1.0);
  return std::min(1.0, std::exp(-(d_km - d0) / scale));
}

bool los_indicator(double d_km, const LosProbabilityModel& model, Rng& rng) {
  if (!(d_km > 0.0)) throw DomainError("los_indicator: distance must be > 0");
  const double p = model.probability(d_km);
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  std::bernoulli_distribution draw(p);
  return draw(rng);
}

std::vector<bool> NlosChannel::los_flags() const {
  std::vector<bool> flags;
  for (const auto& l : geometry.links) flags.push_back(l.los);
  return flags;
}

std::vector<double> NlosChannel::reference_pathlosses() const {
  std::vector<double> alphas;
  for (const auto& l : geometry.links) alphas.push_back(l.los_pathloss);
  return alphas;
}

NlosGeometry draw_nlos_geometry(const Placement& placement, const LinkBudget& link,
                                const ClusterConfig& cfg, Rng& rng) {
  if (cfg.n_cl < 0) throw ConfigError("n_cl", "must be >= 0");
  if (cfg.n_r < 1) throw ConfigError("n_r", "must be >= 1");
  if (cfg.angle_spread < 0.0) throw ConfigError("angle_spread", "must be >= 0");
  if (!(cfg.d_cl_min > 0.0) || cfg.d_cl_max < cfg.d_cl_min) {
    throw ConfigError("d_cl_min", "need 0 < d_cl_min <= d_cl_max");
  }
  std::uniform_real_distribution<double> angle(-0.5 * kPi, 0.5 * kPi);
  std::uniform_real_distribution<double> frac(cfg.d_cl_min, cfg.d_cl_max);
  std::normal_distribution<double> shadow(0.0, link.sigma_xi);

  auto clamp_angle = [&](double a) {
    return cfg.truncate_angles ? std::clamp(a, -0.5 * kPi, 0.5 * kPi) : a;
  };

  NlosGeometry geo;
  for (int k = 0; k < placement.k; ++k) {
    LinkGeometry lg;
    lg.aod_los = placement.aod[k];
    lg.aoa_los = placement.aoa[k];
    lg.distance = placement.distances[k];
    lg.los_pathloss = pathloss_gain(link, lg.distance);
    lg.los = los_indicator(lg.distance, cfg.los, rng);
    lg.rays_per_cluster = cfg.n_r;
    for (int i = 0; i < cfg.n_cl; ++i) {
      Cluster c;
      c.mean_aod = angle(rng);
      c.mean_aoa = angle(rng);
      c.d_cl = frac(rng) * lg.distance;
      c.distance = nlos_distance(c.d_cl, lg.distance, c.mean_aod - lg.aod_los);
      const double xi = cfg.shadowing ? shadow(rng) : 0.0;
      c.pathloss_db = pathloss_db(link, c.distance, xi);
      const double amp = std::pow(10.0, -c.pathloss_db / 20.0);
      for (int j = 0; j < cfg.n_r; ++j) {
        Ray r;
        r.aod = clamp_angle(sample_laplacian(c.mean_aod, cfg.angle_spread, rng));
        r.aoa = clamp_angle(sample_laplacian(c.mean_aoa, cfg.angle_spread, rng));
        r.amplitude = amp * complex_normal(rng);
        c.rays.push_back(r);
      }
      lg.clusters.push_back(std::move(c));
    }
    geo.links.push_back(std::move(lg));
  }
  return geo;
}

NlosChannel realize(const NlosGeometry& geometry, int n, int m) {
  if (n < 1 || m < 1) throw DomainError("realize: n, m must be >= 1");
  NlosChannel ch;
  ch.geometry = geometry;
  for (const auto& lg : geometry.links) {
    CMatrix h = CMatrix::Zero(n, m);
    std::size_t ray_count = 0;
    for (const auto& c : lg.clusters) ray_count += c.rays.size();
    if (ray_count > 0) {
      const double norm = 1.0 / std::sqrt(static_cast<double>(ray_count));
      for (const auto& c : lg.clusters) {
        for (const auto& r : c.rays) {
          h.noalias() += (norm * r.amplitude) * steering_vector(n, r.aod) *
                         steering_vector(m, r.aoa).adjoint();
        }
      }
    }
    if (lg.los) {
      h.noalias() += std::sqrt(lg.los_pathloss) * steering_vector(n, lg.aod_los) *
                     steering_vector(m, lg.aoa_los).adjoint();
    }
    ch.matrices.push_back(std::move(h));
  }
  return ch;
}

NlosChannel nlos_channel(const Placement& placement, int n, int m,
                         const LinkBudget& link, const ClusterConfig& cfg, Rng& rng) {
  return realize(draw_nlos_geometry(placement, link, cfg, rng), n, m);
}

double expected_frobenius_sq(const LinkGeometry& link, int n, int m) {
  double cluster_gain = 0.0;
  if (!link.clusters.empty()) {
    for (const auto& c : link.clusters) cluster_gain += std::pow(10.0, -c.pathloss_db / 10.0);
    cluster_gain /= static_cast<double>(link.clusters.size());
  }
  const double los = link.los ? link.los_pathloss : 0.0;
  return static_cast<double>(n) * m * (cluster_gain + los);
}

void write_matrices(std::ostream& os, std::span<const CMatrix> matrices) {
  const Eigen::Index rows = matrices.empty() ? 0 : matrices.front().rows();
  const Eigen::Index cols = matrices.empty() ? 0 : matrices.front().cols();
  os << rows << ' ' << cols << ' ' << matrices.size() << '\n';
  const auto old_precision = os.precision(17);
  for (const auto& h : matrices) {
    if (h.rows() != rows || h.cols() != cols) {
      throw DomainError("write_matrices: all matrices must share one shape");
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (c > 0) os << ' ';
        os << '(' << h(r, c).real() << ',' << h(r, c).imag() << ')';
      }
      os << '\n';
    }
  }
  os.precision(old_precision);
}

std::vector<CMatrix> read_matrices(std::istream& is) {
  Eigen::Index rows = 0, cols = 0;
  std::size_t count = 0;
  if (!(is >> rows >> cols >> count) || rows < 0 || cols < 0) {
    throw DomainError("read_matrices: malformed header");
  }
  std::vector<CMatrix> out;
  for (std::size_t k = 0; k < count; ++k) {
    CMatrix h(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        Complex z;
        if (!(is >> z)) throw DomainError("read_matrices: malformed entry");
        h(r, c) = z;
      }
    }
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace mmwee
