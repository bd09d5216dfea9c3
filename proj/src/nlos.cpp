// SPDX-License-Identifier: Apache-2.0

#include "mmwee/nlos.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace mmwee {

std::vector<double> link_sinrs(std::span<const CMatrix> normalized, const PrecoderSet& pset,
                               double p_sym, double noise_power) {
  const CMatrix g = combined_gains(normalized, pset.combiners, pset.precoder());
  const Eigen::Index k = g.rows();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> sinr(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    const double useful = std::norm(g(i, i)) * p_sym;
    double leak = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (j != i) leak += std::norm(g(i, j));
    }
    double denom = leak * p_sym + noise_power * pset.combiners[i].squaredNorm();
    // Interference-free and noiseless: precision-limited floor.
    if (denom == 0.0) denom = useful * eps * eps;
    sinr[i] = denom > 0.0 ? useful / denom : 0.0;
  }
  return sinr;
}

std::vector<CMatrix> normalize_channel(const NlosChannel& channel) {
  std::vector<CMatrix> out;
  out.reserve(channel.matrices.size());
  for (std::size_t k = 0; k < channel.matrices.size(); ++k) {
    out.push_back(channel.matrices[k] / std::sqrt(channel.geometry.links[k].los_pathloss));
  }
  return out;
}

namespace {

// Channel of an (n, m) array: the leading block of a larger realization,
// since steering vectors of shorter arrays are prefixes of longer ones.
std::vector<CMatrix> leading_blocks(std::span<const CMatrix> full, int n, int m) {
  std::vector<CMatrix> out;
  out.reserve(full.size());
  for (const auto& h : full) out.push_back(h.topLeftCorner(n, m));
  return out;
}

TrialOutcome evaluate_blocks(const EeProblem& pr, std::span<const CMatrix> h, int m, int n,
                             PrecoderMode mode) {
  TrialOutcome out;
  const double p = pr.link.gamma * pr.agg.noise_power;
  const double p_sym = p / n;

  PrecoderSet pset;
  try {
    if (mode == PrecoderMode::fully_digital) {
      pset = fully_digital_zf(h, digital_combiners(h));
      const double fro = pset.f_rf.norm();
      pset.f_rf *= std::sqrt(static_cast<double>(n) * pr.k) / fro;
    } else {
      pset = hybrid_svd(h);
    }
  } catch (const DegenerateError&) {
    out.feasible = false;
    return out;
  }

  double rate = 0.0;
  for (double s : link_sinrs(h, pset, p_sym, pr.agg.noise_power)) {
    rate += std::log2(1.0 + s);
  }
  rate *= pr.link.bandwidth;

  const PowerBreakdown b =
      mode == PrecoderMode::fully_digital
          ? total_consumed_power_digital(m, n, pr.k, pr.hw, pr.link, rate, pr.fe_scale)
          : assemble_power(m, n, pr.k, pr.agg, pr.hw, pr.link, rate);
  out.throughput = rate;
  out.power = b.total;
  out.ee = rate / b.total;
  return out;
}

}  // namespace

TrialOutcome evaluate_trial(const EeProblem& pr, const NlosGeometry& geometry, int m, int n,
                            PrecoderMode mode) {
  if (n < pr.k) return {0.0, 0.0, 0.0, false};
  const std::vector<CMatrix> h = normalize_channel(realize(geometry, n, m));
  return evaluate_blocks(pr, h, m, n, mode);
}

const NlosPoint& NlosSurface::best() const {
  const NlosPoint* best = nullptr;
  for (std::size_t in = 0; in < n_values.size(); ++in) {
    for (std::size_t im = 0; im < m_values.size(); ++im) {
      const NlosPoint& p = at(im, in);
      if (best == nullptr || p.mean_ee > best->mean_ee) best = &p;
    }
  }
  if (best == nullptr) throw InfeasibleError("NlosSurface::best: empty surface");
  return *best;
}

NlosSurface ee_surface_nlos(const EeProblem& pr, const NlosSurfaceConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("trials", "must be >= 1");
  NlosSurface surf;
  surf.m_values = cfg.m_range.values();
  surf.n_values = cfg.n_range.values();
  surf.trials = cfg.trials;
  if (surf.m_values.front() < 1 || surf.n_values.front() < 1) {
    throw ConfigError("range", "antenna counts must be >= 1");
  }

  const Placement placement = place_uniform(pr.k, pr.link.d);
  const std::size_t n_points = surf.m_values.size() * surf.n_values.size();
  const auto trials = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialOutcome> outcomes(trials * n_points);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      Rng rng = make_stream(cfg.seed, t);
      const NlosGeometry geo = draw_nlos_geometry(placement, pr.link, cfg.cluster, rng);
      const std::vector<CMatrix> full =
          normalize_channel(realize(geo, surf.n_values.back(), surf.m_values.back()));
      std::size_t idx = t * n_points;
      for (int m : surf.m_values) {
        for (int n : surf.n_values) {
          outcomes[idx++] = n < pr.k ? TrialOutcome{0.0, 0.0, 0.0, false}
                                     : evaluate_blocks(pr, leading_blocks(full, n, m), m, n,
                                                       cfg.mode);
        }
      }
    }
  };
  unsigned threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  surf.points.reserve(n_points);
  std::size_t p = 0;
  for (int m : surf.m_values) {
    for (int n : surf.n_values) {
      NlosPoint pt;
      pt.m = m;
      pt.n = n;
      double sum = 0.0, sum_rate = 0.0, sum_power = 0.0;
      for (std::size_t t = 0; t < trials; ++t) {
        const TrialOutcome& o = outcomes[t * n_points + p];
        sum += o.ee;
        sum_rate += o.throughput;
        sum_power += o.power;
        if (!o.feasible) ++pt.infeasible_trials;
      }
      pt.mean_ee = sum / cfg.trials;
      pt.mean_throughput = sum_rate / cfg.trials;
      pt.mean_power = sum_power / cfg.trials;
      double ss = 0.0;
      for (std::size_t t = 0; t < trials; ++t) {
        const double d = outcomes[t * n_points + p].ee - pt.mean_ee;
        ss += d * d;
      }
      pt.std_ee = cfg.trials > 1 ? std::sqrt(ss / (cfg.trials - 1)) : 0.0;
      pt.std_error = pt.std_ee / std::sqrt(static_cast<double>(cfg.trials));
      surf.points.push_back(pt);
      ++p;
    }
  }
  return surf;
}

}  // namespace mmwee
