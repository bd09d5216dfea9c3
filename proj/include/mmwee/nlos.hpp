// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo EE surfaces over clustered NLoS channels for the hybrid (SVD
// eigenmode + ZF) and fully-digital (ZF) transceivers.

#pragma once

#include <cstdint>
#include <vector>

#include "mmwee/channel.hpp"
#include "mmwee/eeopt.hpp"
#include "mmwee/precoding.hpp"

namespace mmwee {

struct NlosSurfaceConfig {
  ClusterConfig cluster;
  int trials = 100;
  std::uint64_t seed = 1;
  PrecoderMode mode = PrecoderMode::hybrid_svd;
  IntRange m_range{1, 30, 1};
  IntRange n_range{10, 70, 1};
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Per-link SINR of a precoder set on a channel whose links are already
/// normalized by their reference pathloss:
/// |g_kk|²·p_sym / (Σ_{j≠k}|g_kj|²·p_sym + σ²‖w_k‖²), p_sym the per-stream power.
std::vector<double> link_sinrs(std::span<const CMatrix> normalized, const PrecoderSet& pset,
                               double p_sym, double noise_power);

/// Divides every H_k by sqrt(reference pathloss of link k).
std::vector<CMatrix> normalize_channel(const NlosChannel& channel);

struct TrialOutcome {
  double ee = 0.0;
  double throughput = 0.0;
  double power = 0.0;
  bool feasible = true;
};

/// EE of one drawn geometry at (M, N). Hybrid uses the hybrid power model,
/// fully digital its own. Infeasible ZF (N < K or rank loss) gives EE = 0.
TrialOutcome evaluate_trial(const EeProblem& pr, const NlosGeometry& geometry, int m, int n,
                            PrecoderMode mode);

struct NlosPoint {
  int m = 0;
  int n = 0;
  double mean_ee = 0.0;
  double std_ee = 0.0;
  double std_error = 0.0;  // std_ee / sqrt(trials)
  double mean_throughput = 0.0;
  double mean_power = 0.0;
  int infeasible_trials = 0;
};

struct NlosSurface {
  std::vector<int> m_values;
  std::vector<int> n_values;
  std::vector<NlosPoint> points;  // row-major: m outer, n inner
  int trials = 0;

  const NlosPoint& at(std::size_t im, std::size_t in) const {
    return points[im * n_values.size() + in];
  }
  /// Largest mean EE; ties go to the smallest N, then the smallest M.
  const NlosPoint& best() const;
};

/// Trial t uses the stream make_stream(seed, t) for its whole geometry, which
/// is shared by every grid point. Results do not depend on the thread count.
NlosSurface ee_surface_nlos(const EeProblem& pr, const NlosSurfaceConfig& cfg);

}  // namespace mmwee
