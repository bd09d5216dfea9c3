// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "mmwee/eeopt.hpp"
#include "mmwee/mathcore.hpp"
#include "oracles.hpp"

using namespace mmwee;

namespace {

// Surrogate EE written out from the component formulas, without EeProblem.
double surrogate_oracle(const SystemProfile& sp, int k, double fe_scale, double m, double n) {
  const HardwareProfile& hw = sp.hardware;
  const LinkBudget& l = sp.link;
  const double sigma2 = l.bandwidth * l.n0 * l.nf;
  const double loss_db =
      32.5 + 20.0 * std::log10(l.f_c) + 10.0 * l.beta * std::log10(l.d) + l.a_absorption * l.d;
  const double abar = std::pow(10.0, loss_db / 10.0);
  const double px = l.gamma * sigma2 * k * abar;
  const double p_rf = k * (hw.p_dc + hw.p_adc + hw.p_combiner + hw.p_uc + hw.p_dac);
  const double p_lp = l.bandwidth * k * (2.0 * k - 1.0) / hw.l_bs;
  const double fe_sc = fe_scale * k * (hw.p_lna + hw.p_ps);
  const double fe_bs = fe_scale * (k * hw.p_ps + hw.p_hpa + hw.p_combiner);
  const double rate = l.bandwidth * k * std::log2(1.0 + l.gamma * m * n);
  return rate / (hw.p_fix + p_rf + px / hw.eta + p_lp + fe_sc * m + fe_bs * n);
}

SystemProfile perturbed(Rng& rng) {
  std::uniform_real_distribution<double> f(0.5, 1.5);
  SystemProfile sp = default_profile();
  HardwareProfile& hw = sp.hardware;
  for (double* x : {&hw.p_lna, &hw.p_hpa, &hw.p_dc, &hw.p_uc, &hw.p_adc, &hw.p_dac,
                    &hw.p_combiner, &hw.p_ps, &hw.l_bs, &hw.p_fix}) {
    *x *= f(rng);
  }
  sp.link.gamma *= f(rng);
  return sp;
}

}  // namespace

TEST_SUITE("eeopt") {

TEST_CASE("EeProblem validation and derived constants") {
  const SystemProfile sp = default_profile();
  CHECK_THROWS_AS(EeProblem::make(0, sp), ConfigError);
  CHECK_THROWS_AS(EeProblem::make(10, sp, 0.5), ConfigError);
  CHECK_THROWS_AS(EeProblem::make(10, sp, 1.0, 0.0), ConfigError);
  const EeProblem pr = EeProblem::make(10, sp);
  CHECK(pr.mu_k == 21);
  CHECK(pr.p_fix_bar == doctest::Approx(50.0 + 4.258 + 1.9 + 7.4e-5 / 0.375).epsilon(1e-3));
  const EeProblem scaled = EeProblem::make(10, sp, 1.0, 0.1);
  CHECK(scaled.agg.p_fe_sc == doctest::Approx(0.069));
  CHECK(scaled.agg.p_fe_bs == doctest::Approx(0.04575));
  CHECK(scaled.agg.p_rf == pr.agg.p_rf);
  CHECK(scaled.p_fix_bar == pr.p_fix_bar);
}

TEST_CASE("objective matches the component formulas") {
  const SystemProfile sp = default_profile();
  for (int k : {1, 4, 10}) {
    for (double fe : {1.0, 0.1}) {
      const EeProblem pr = EeProblem::make(k, sp, 1.0, fe);
      for (int m : {1, 7, 40}) {
        for (int n : {k, 30, 200}) {
          CHECK(ee_objective(pr, m, n) ==
                doctest::Approx(surrogate_oracle(sp, k, fe, m, n)).epsilon(1e-12));
        }
      }
    }
  }
  CHECK(throughput(19, 32, 10, 1.0, 2e9) == doctest::Approx(2e10 * std::log2(609.0)));
}

TEST_CASE("evaluate reports the traffic-inclusive EE") {
  const EeProblem pr = EeProblem::make(10, default_profile());
  const EEPoint p = evaluate(pr, 19, 32);
  CHECK(p.ee == doctest::Approx(p.throughput / p.breakdown.total).epsilon(1e-14));
  CHECK(p.ee == doctest::Approx(reported_ee(pr, 19, 32)).epsilon(1e-12));
  CHECK(1.0 / p.ee == doctest::Approx(1.0 / ee_objective(pr, 19, 32) + 1.15e-9).epsilon(1e-12));
}

TEST_CASE("continuous optima are stationary points") {
  const EeProblem pr = EeProblem::make(10, default_profile());
  for (int n : {21, 32, 100, 400}) {
    const double x = continuous_optimal_m(pr, n);
    const double g = oracle::golden_max(1e-3, 5000.0, [&](double m) { return ee_objective(pr, m, n); });
    CHECK(x == doctest::Approx(g).epsilon(1e-6));
  }
  for (int m : {1, 19, 150}) {
    const double z = continuous_optimal_n(pr, m);
    const double g = oracle::golden_max(1e-3, 5000.0, [&](double n) { return ee_objective(pr, m, n); });
    CHECK(z == doctest::Approx(g).epsilon(1e-6));
  }
}

TEST_CASE("closed forms equal the 1-D grid argmax under perturbed constants") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const SystemProfile sp = perturbed(rng);
    for (int k : {2, 5, 10}) {
      const EeProblem pr = EeProblem::make(k, sp);
      for (int n : {pr.mu_k, 2 * pr.mu_k, 90}) {
        const int lemma = optimal_m_given_n(pr, n);
        const int grid = oracle::argmax_1d(1, 3000, [&](int m) { return ee_objective(pr, m, n); });
        CAPTURE(t);
        CAPTURE(k);
        CAPTURE(n);
        const bool exact = lemma == grid;
        const bool tie = std::abs(lemma - grid) == 1 &&
                         std::abs(ee_objective(pr, lemma, n) - ee_objective(pr, grid, n)) /
                                 ee_objective(pr, grid, n) < 1e-9;
        CHECK((exact || tie));
      }
      for (int m : {1, 10, 60}) {
        const int lemma = optimal_n_given_m(pr, m);
        const int grid =
            oracle::argmax_1d(pr.mu_k, 3000, [&](int n) { return ee_objective(pr, m, n); });
        const bool exact = lemma == grid;
        const bool tie = std::abs(lemma - grid) == 1 &&
                         std::abs(ee_objective(pr, m, lemma) - ee_objective(pr, m, grid)) /
                                 ee_objective(pr, m, grid) < 1e-9;
        CHECK((exact || tie));
        CHECK(lemma >= pr.mu_k);
      }
    }
  }
}

TEST_CASE("optimal M is non-decreasing in N") {
  const EeProblem pr = EeProblem::make(10, default_profile());
  int prev = 0;
  for (int n = pr.mu_k; n <= 500; ++n) {
    const int m = optimal_m_given_n(pr, n);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("N optimum respects the antenna floor") {
  const EeProblem pr = EeProblem::make(10, default_profile(), 4.0);
  CHECK(pr.mu_k == 82);
  CHECK(optimal_n_given_m(pr, 1) >= 82);
}

TEST_CASE("large-ratio approximation and corollary structure") {
  const EeProblem pr = EeProblem::make(10, default_profile());
  CHECK(approx_m_large_ratio(pr, 32) ==
        doctest::Approx((pr.p_fix_bar + pr.agg.p_fe_bs * 32) / (std::exp(1.0) * pr.agg.p_fe_sc)));
  CHECK(approx_m_large_ratio(pr, 64) > approx_m_large_ratio(pr, 32));
  const double num = pr.agg.p_rf + pr.hw.p_fix + 2.0 * 2e9 / pr.hw.l_bs * 100.0;
  CHECK(corollary_xi_m(pr) == doctest::Approx(num / pr.agg.p_fe_sc));
  CHECK(corollary_xi_n(pr) == doctest::Approx(num / pr.agg.p_fe_bs));
  int prev = 0;
  for (int n = 21; n < 300; n += 9) {
    const int m = corollary_approx_m(pr, n);
    CHECK(m >= prev);
    prev = m;
  }
  CHECK(corollary_approx_n(pr, 1) >= pr.mu_k);
  CHECK(corollary_approx_n(pr, 50) > corollary_approx_n(pr, 10));
}

TEST_CASE("sequential optimizer trace is monotone and converges") {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const SystemProfile sp = t == 0 ? default_profile() : perturbed(rng);
    for (int k : {1, 2, 5, 10, 20}) {
      const OptimizeResult r = sequential_optimize(EeProblem::make(k, sp));
      CHECK(r.trace.converged);
      CHECK(r.trace.iterations_count <= 100);
      for (std::size_t i = 1; i < r.trace.iterations.size(); ++i) {
        CHECK(r.trace.iterations[i].ee >= r.trace.iterations[i - 1].ee * (1.0 - 1e-15));
      }
    }
  }
}

TEST_CASE("sequential optimum agrees with the exhaustive grid") {
  for (int k : {2, 5, 10}) {
    const EeProblem pr = EeProblem::make(k, default_profile());
    const EEPoint seq = sequential_optimize(pr).point;
    const EEPoint grid = grid_search(pr, 400, 400);
    CAPTURE(k);
    CHECK(seq.ee == doctest::Approx(grid.ee).epsilon(1e-3));
    // Local optimality of the grid result.
    const double best = ee_objective(pr, grid.m, grid.n);
    for (auto [dm, dn] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const int m = grid.m + dm, n = grid.n + dn;
      if (m >= 1 && n >= pr.mu_k) CHECK(ee_objective(pr, m, n) <= best);
    }
  }
}

TEST_CASE("grid_search edge cases") {
  const EeProblem pr = EeProblem::make(10, default_profile());
  const EEPoint corner = grid_search(pr, 1, pr.mu_k);
  CHECK(corner.m == 1);
  CHECK(corner.n == pr.mu_k);
  CHECK_THROWS_AS(grid_search(pr, 10, pr.mu_k - 1), InfeasibleError);
  CHECK_THROWS_AS(grid_search(pr, 0, 100), InfeasibleError);
}

TEST_CASE("traffic term leaves the grid argmax unchanged") {
  for (int k : {2, 5, 10}) {
    const EeProblem pr = EeProblem::make(k, default_profile());
    const EEPoint a = grid_search(pr, 300, 300, false);
    const EEPoint b = grid_search(pr, 300, 300, true);
    CHECK(a.m == b.m);
    CHECK(a.n == b.n);
  }
}

TEST_CASE("surface") {
  const EeProblem pr = EeProblem::make(10, default_profile());
  const Surface s = ee_surface(pr, {1, 60, 1}, {10, 80, 1});
  CHECK(s.points.size() == 60 * 71);
  CHECK(s.at(3, 5).m == 4);
  CHECK(s.at(3, 5).n == 15);
  const EEPoint& best = surface_max(s, pr.mu_k);
  const EEPoint grid = grid_search(pr, 60, 80);
  CHECK(best.m == grid.m);
  CHECK(best.n == grid.n);
  // Unimodal along each axis through the optimum.
  std::size_t im = best.m - 1, in = best.n - 10;
  for (std::size_t i = 1; i <= im; ++i) CHECK(s.at(i, in).ee > s.at(i - 1, in).ee);
  for (std::size_t i = im + 1; i < s.m_values.size(); ++i) CHECK(s.at(i, in).ee < s.at(i - 1, in).ee);
  for (std::size_t j = 1; j <= in; ++j) CHECK(s.at(im, j).ee > s.at(im, j - 1).ee);
  for (std::size_t j = in + 1; j < s.n_values.size(); ++j) CHECK(s.at(im, j).ee < s.at(im, j - 1).ee);
  CHECK_THROWS_AS(ee_surface(pr, {5, 4, 1}, {10, 20, 1}), ConfigError);
  CHECK_THROWS_AS(surface_max(ee_surface(pr, {1, 3, 1}, {1, 5, 1}), pr.mu_k), InfeasibleError);
}

TEST_CASE("halving the bandwidth rescales EE consistently") {
  SystemProfile half = default_profile();
  half.link.bandwidth /= 2.0;
  const EeProblem a = EeProblem::make(10, default_profile());
  const EeProblem b = EeProblem::make(10, half);
  for (auto [m, n] : {std::pair{1, 21}, {19, 32}, {50, 120}}) {
    const EEPoint pa = evaluate(a, m, n);
    const EEPoint pb = evaluate(b, m, n);
    CHECK(pb.throughput == doctest::Approx(pa.throughput / 2.0).epsilon(1e-14));
    CHECK(pb.ee == doctest::Approx(pb.throughput / pb.breakdown.total).epsilon(1e-14));
    // Bandwidth enters the power through σ², P_LP and P_C/BH.
    const double power_b = pa.breakdown.p_fix + pa.breakdown.p_rf + pa.breakdown.p_fe_total +
                           pa.breakdown.p_tx_over_eta / 2.0 + pa.breakdown.p_lp / 2.0 +
                           pa.breakdown.p_cbh / 2.0;
    CHECK(pb.breakdown.total == doctest::Approx(power_b).epsilon(1e-12));
  }
}

TEST_CASE("IntRange") {
  CHECK(IntRange{3, 9, 3}.values() == std::vector<int>{3, 6, 9});
  CHECK(IntRange{3, 10, 3}.values() == std::vector<int>{3, 6, 9});
  CHECK_THROWS_AS((IntRange{3, 2, 1}.values()), ConfigError);
  CHECK_THROWS_AS((IntRange{1, 2, 0}.values()), ConfigError);
}

TEST_CASE("json for points and traces") {
  const EeProblem pr = EeProblem::make(10, default_profile());
  const OptimizeResult r = sequential_optimize(pr);
  const nlohmann::json p = to_json(r.point);
  CHECK(p.at("m").get<int>() == r.point.m);
  CHECK(p.at("n").get<int>() == r.point.n);
  CHECK(p.contains("breakdown"));
  const nlohmann::json t = to_json(r.trace);
  CHECK(t.at("converged").get<bool>());
  CHECK(t.at("iterations").size() == r.trace.iterations.size());
}

}  // TEST_SUITE
