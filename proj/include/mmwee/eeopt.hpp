// SPDX-License-Identifier: Apache-2.0
//
// Energy-efficiency objective over the antenna counts (M at each small cell,
// N at the BS), Lambert-W closed-form per-variable optima, the alternating
// optimizer and exhaustive oracles.

#pragma once

#include <vector>

#include "mmwee/powermodel.hpp"

namespace mmwee {

/// Raised when no grid point satisfies N >= μ_K.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fixed optimization instance: K, hardware, link and the derived constants.
struct EeProblem {
  int k = 10;
  HardwareProfile hw;
  LinkBudget link;
  double lambda = 1.0;
  double fe_scale = 1.0;    // multiplies p_fe_sc and p_fe_bs
  PowerAggregates agg;      // with fe_scale applied
  double p_fix_bar = 0.0;   // P̄_FIX = p_RF + P_FIX + η^{-1}P_x + P_LP
  int mu_k = 1;

  static EeProblem make(int k, const SystemProfile& profile, double lambda = 1.0,
                        double fe_scale = 1.0);
};

/// B·K·log2(1 + γ·M·N).
double throughput(double m, double n, int k, double gamma, double bandwidth);

/// Optimization surrogate: throughput / (P̄_FIX + p_FE^SC·M + p_FE^BS·N).
/// Excludes the coding/backhaul term, which leaves the argmax unchanged.
double ee_objective(const EeProblem& pr, double m, double n);

/// Reported EE including the coding/backhaul term.
double reported_ee(const EeProblem& pr, double m, double n);

struct EEPoint {
  int m = 0;
  int n = 0;
  double ee = 0.0;          // bit/J, coding/backhaul included
  double throughput = 0.0;  // bit/s
  PowerBreakdown breakdown;
};

EEPoint evaluate(const EeProblem& pr, int m, int n);

/// Continuous maximizer x* of the surrogate in M for fixed N.
double continuous_optimal_m(const EeProblem& pr, int n);
/// Integer optimum ⌊x*⌉ (both neighbours of x* checked), clamped to >= 1.
int optimal_m_given_n(const EeProblem& pr, int n);

/// Continuous maximizer z* in N for fixed M, before the μ_K floor.
double continuous_optimal_n(const EeProblem& pr, int m);
/// Integer optimum ⌊max(z*, μ_K)⌉ (both neighbours checked), never below μ_K.
int optimal_n_given_m(const EeProblem& pr, int m);

/// Large-ratio approximation (P̄_FIX + p_FE^BS·N)/(e·p_FE^SC) of x*.
double approx_m_large_ratio(const EeProblem& pr, int n);

/// ξ = (p_RF + P_FIX + (2B/L_BS)K²)/p_FE^SC; the N-side variant divides by p_FE^BS.
double corollary_xi_m(const EeProblem& pr);
double corollary_xi_n(const EeProblem& pr);

/// ⌊ξ + (p_FE^BS/p_FE^SC)·N⌉.
int corollary_approx_m(const EeProblem& pr, int n);
/// ⌊max(ξ + (p_FE^SC/p_FE^BS)·M, μ_K)⌉.
int corollary_approx_n(const EeProblem& pr, int m);

struct TraceStep {
  int m = 0;
  int n = 0;
  double ee = 0.0;  // surrogate objective
};

struct OptimizerTrace {
  std::vector<TraceStep> iterations;  // one entry per half-step
  bool converged = false;
  int iterations_count = 0;  // full M/N sweeps
};

struct OptimizeResult {
  EEPoint point;
  OptimizerTrace trace;
};

/// Alternates the M and N closed forms from N = max(init_n, μ_K) until the
/// integer pair repeats or `max_iterations` sweeps have run.
OptimizeResult sequential_optimize(const EeProblem& pr, int init_n = 0,
                                   int max_iterations = 100);

/// Exhaustive argmax over 1 <= M <= m_max, μ_K <= N <= n_max. Ties go to the
/// smallest N, then the smallest M. With `include_cbh` the reported EE is
/// maximized instead of the surrogate.
EEPoint grid_search(const EeProblem& pr, int m_max, int n_max, bool include_cbh = false);

struct IntRange {
  int first = 1;
  int last = 1;
  int step = 1;

  std::vector<int> values() const;
};

struct Surface {
  std::vector<int> m_values;
  std::vector<int> n_values;
  std::vector<EEPoint> points;  // row-major: m outer, n inner

  const EEPoint& at(std::size_t im, std::size_t in) const {
    return points[im * n_values.size() + in];
  }
};

/// Dense evaluation of the reported EE over the grid.
Surface ee_surface(const EeProblem& pr, const IntRange& m_range, const IntRange& n_range);

/// Largest reported EE among points with N >= μ_K, same tie-break as grid_search.
const EEPoint& surface_max(const Surface& s, int mu_k);

nlohmann::json to_json(const EEPoint& p);
nlohmann::json to_json(const OptimizerTrace& t);

}  // namespace mmwee
