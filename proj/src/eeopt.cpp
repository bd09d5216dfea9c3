// SPDX-License-Identifier: Apache-2.0

#include "mmwee/eeopt.hpp"

#include <algorithm>
#include <cmath>

#include "mmwee/mathcore.hpp"

namespace mmwee {

namespace {

constexpr double kE = 2.718281828459045;

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

// Integer maximizer of a strictly quasi-concave function whose continuous
// maximizer is `x`: the better of ⌊x⌋ and ⌈x⌉, both clamped to >= lo.
template <typename F>
int best_neighbour(double x, int lo, F&& objective) {
  const double clamped = std::max(x, static_cast<double>(lo));
  const int rounded = std::max(round_half_up(clamped), lo);
  const int lower = std::max(static_cast<int>(std::floor(clamped)), lo);
  const int upper = std::max(static_cast<int>(std::ceil(clamped)), lo);
  int best = rounded;
  double best_val = objective(rounded);
  for (int c : {lower, upper}) {
    const double v = objective(c);
    if (v > best_val) {
      best = c;
      best_val = v;
    }
  }
  return best;
}

// Continuous maximizer of log(1 + a·x)/(c + slope·x) over x > 0 in closed form,
// with a = γ·other and c the constant part of the denominator.
double lambert_maximizer(double gamma, double other, double c, double slope) {
  const double ratio = gamma * other * c / slope;  // γ·c1/c2
  const double w = lambert_w0((ratio - 1.0) / kE);
  return (std::exp(w + 1.0) - 1.0) / (gamma * other);
}

}  // namespace

EeProblem EeProblem::make(int k, const SystemProfile& profile, double lambda,
                          double fe_scale) {
  if (k < 1) throw ConfigError("k", "must be >= 1");
  if (!(lambda >= 1.0)) throw ConfigError("lambda", "must be >= 1");
  if (!(fe_scale > 0.0)) throw ConfigError("fe_scale", "must be > 0");
  validate(profile);
  EeProblem pr;
  pr.k = k;
  pr.hw = profile.hardware;
  pr.link = profile.link;
  pr.lambda = lambda;
  pr.fe_scale = fe_scale;
  pr.agg = aggregates(pr.hw, pr.link, k);
  pr.agg.p_fe_sc *= fe_scale;
  pr.agg.p_fe_bs *= fe_scale;
  pr.mu_k = min_bs_antennas(k, lambda);
  const PowerBreakdown base = assemble_power(0, 0, k, pr.agg, pr.hw, pr.link, 0.0);
  pr.p_fix_bar = base.total;
  return pr;
}

double throughput(double m, double n, int k, double gamma, double bandwidth) {
  return bandwidth * k * std::log2(1.0 + gamma * m * n);
}

double ee_objective(const EeProblem& pr, double m, double n) {
  const double rate = throughput(m, n, pr.k, pr.link.gamma, pr.link.bandwidth);
  return rate / (pr.p_fix_bar + pr.agg.p_fe_sc * m + pr.agg.p_fe_bs * n);
}

double reported_ee(const EeProblem& pr, double m, double n) {
  const double rate = throughput(m, n, pr.k, pr.link.gamma, pr.link.bandwidth);
  const double power = pr.p_fix_bar + pr.agg.p_fe_sc * m + pr.agg.p_fe_bs * n +
                       traffic_cost(pr.hw) * rate;
  return rate / power;
}

EEPoint evaluate(const EeProblem& pr, int m, int n) {
  EEPoint p;
  p.m = m;
  p.n = n;
  p.throughput = throughput(m, n, pr.k, pr.link.gamma, pr.link.bandwidth);
  p.breakdown = assemble_power(m, n, pr.k, pr.agg, pr.hw, pr.link, p.throughput);
  p.ee = p.throughput / p.breakdown.total;
  return p;
}

double continuous_optimal_m(const EeProblem& pr, int n) {
  if (n < 1) throw DomainError("optimal_m_given_n: n must be >= 1");
  return lambert_maximizer(pr.link.gamma, n, pr.p_fix_bar + pr.agg.p_fe_bs * n,
                           pr.agg.p_fe_sc);
}

int optimal_m_given_n(const EeProblem& pr, int n) {
  const double x = continuous_optimal_m(pr, n);
  return best_neighbour(x, 1, [&](int m) { return ee_objective(pr, m, n); });
}

double continuous_optimal_n(const EeProblem& pr, int m) {
  if (m < 1) throw DomainError("optimal_n_given_m: m must be >= 1");
  return lambert_maximizer(pr.link.gamma, m, pr.p_fix_bar + pr.agg.p_fe_sc * m,
                           pr.agg.p_fe_bs);
}

int optimal_n_given_m(const EeProblem& pr, int m) {
  const double z = continuous_optimal_n(pr, m);
  return best_neighbour(z, pr.mu_k, [&](int n) { return ee_objective(pr, m, n); });
}

double approx_m_large_ratio(const EeProblem& pr, int n) {
  return (pr.p_fix_bar + pr.agg.p_fe_bs * n) / (kE * pr.agg.p_fe_sc);
}

namespace {

double corollary_numerator(const EeProblem& pr) {
  return pr.agg.p_rf + pr.hw.p_fix +
         2.0 * pr.link.bandwidth / pr.hw.l_bs * static_cast<double>(pr.k) * pr.k;
}

}  // namespace

double corollary_xi_m(const EeProblem& pr) { return corollary_numerator(pr) / pr.agg.p_fe_sc; }

double corollary_xi_n(const EeProblem& pr) { return corollary_numerator(pr) / pr.agg.p_fe_bs; }

int corollary_approx_m(const EeProblem& pr, int n) {
  return std::max(1, round_half_up(corollary_xi_m(pr) + pr.agg.p_fe_bs / pr.agg.p_fe_sc * n));
}

int corollary_approx_n(const EeProblem& pr, int m) {
  const double z = corollary_xi_n(pr) + pr.agg.p_fe_sc / pr.agg.p_fe_bs * m;
  return round_half_up(std::max(z, static_cast<double>(pr.mu_k)));
}

OptimizeResult sequential_optimize(const EeProblem& pr, int init_n, int max_iterations) {
  OptimizeResult res;
  int n = std::max(init_n, pr.mu_k);
  int m = 0;
  for (int it = 0; it < max_iterations; ++it) {
    const int prev_m = m;
    const int prev_n = n;
    m = optimal_m_given_n(pr, n);
    res.trace.iterations.push_back({m, n, ee_objective(pr, m, n)});
    n = optimal_n_given_m(pr, m);
    res.trace.iterations.push_back({m, n, ee_objective(pr, m, n)});
    res.trace.iterations_count = it + 1;
    if (m == prev_m && n == prev_n) {
      res.trace.converged = true;
      break;
    }
  }
  res.point = evaluate(pr, m, n);
  return res;
}

EEPoint grid_search(const EeProblem& pr, int m_max, int n_max, bool include_cbh) {
  if (m_max < 1 || n_max < pr.mu_k) {
    throw InfeasibleError("grid_search: empty feasible set (need m_max >= 1 and n_max >= " +
                          std::to_string(pr.mu_k) + ")");
  }
  int best_m = 1;
  int best_n = pr.mu_k;
  double best = -1.0;
  for (int n = pr.mu_k; n <= n_max; ++n) {
    for (int m = 1; m <= m_max; ++m) {
      const double v = include_cbh ? reported_ee(pr, m, n) : ee_objective(pr, m, n);
      if (v > best) {
        best = v;
        best_m = m;
        best_n = n;
      }
    }
  }
  return evaluate(pr, best_m, best_n);
}

std::vector<int> IntRange::values() const {
  if (step < 1 || last < first) throw ConfigError("range", "empty or invalid range");
  std::vector<int> v;
  for (int x = first; x <= last; x += step) v.push_back(x);
  return v;
}

Surface ee_surface(const EeProblem& pr, const IntRange& m_range, const IntRange& n_range) {
  Surface s;
  s.m_values = m_range.values();
  s.n_values = n_range.values();
  if (s.m_values.front() < 1 || s.n_values.front() < 1) {
    throw ConfigError("range", "antenna counts must be >= 1");
  }
  s.points.reserve(s.m_values.size() * s.n_values.size());
  for (int m : s.m_values) {
    for (int n : s.n_values) s.points.push_back(evaluate(pr, m, n));
  }
  return s;
}

const EEPoint& surface_max(const Surface& s, int mu_k) {
  const EEPoint* best = nullptr;
  // Same ordering as grid_search: N ascending, then M ascending.
  for (std::size_t in = 0; in < s.n_values.size(); ++in) {
    if (s.n_values[in] < mu_k) continue;
    for (std::size_t im = 0; im < s.m_values.size(); ++im) {
      const EEPoint& p = s.at(im, in);
      if (best == nullptr || p.ee > best->ee) best = &p;
    }
  }
  if (best == nullptr) throw InfeasibleError("surface_max: no point with N >= mu_K");
  return *best;
}

nlohmann::json to_json(const EEPoint& p) {
  return {{"m", p.m},
          {"n", p.n},
          {"ee", p.ee},
          {"throughput", p.throughput},
          {"breakdown", to_json(p.breakdown)}};
}

nlohmann::json to_json(const OptimizerTrace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.iterations) steps.push_back({{"m", s.m}, {"n", s.n}, {"ee", s.ee}});
  return {{"iterations", steps},
          {"converged", t.converged},
          {"iterations_count", t.iterations_count}};
}

}  // namespace mmwee
