// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "mmwee/channel.hpp"
#include "mmwee/eeopt.hpp"
#include "mmwee/powermodel.hpp"
#include "oracles.hpp"

using namespace mmwee;

TEST_SUITE("powermodel") {

TEST_CASE("transmit_power_approx") {
  CHECK(transmit_power_approx(1.0, 0, 5.0, 10, 1).watts == 0.0);
  const SystemProfile sp = default_profile();
  const PowerAggregates agg = aggregates(sp.hardware, sp.link, 10);
  const TransmitPower t = transmit_power_approx(agg.noise_power, 10, agg.mean_inv_pathloss, 21, 21);
  CHECK(t.watts == doctest::Approx(3.17e-11 * 10 * std::pow(10.0, 5.3687)).epsilon(0.01));
  CHECK(t.watts == doctest::Approx(7.4e-5).epsilon(0.01));
  CHECK_FALSE(t.below_floor);
  CHECK(transmit_power_approx(2e-11, 3, 7.0, 5, 5).watts ==
        doctest::Approx(2.0 * transmit_power_approx(1e-11, 3, 7.0, 5, 5).watts));
  CHECK(transmit_power_approx(1.0, 10, 1.0, 20, 21).below_floor);
}

TEST_CASE("transmit_power_exact") {
  // Orthogonal columns: roots-of-unity nodes with N = K.
  std::vector<double> aod;
  for (int i = 0; i < 4; ++i) {
    double s = 2.0 * i / 4;
    if (s >= 1.0) s -= 2.0;
    aod.push_back(std::asin(s));
  }
  const std::vector<double> alpha{1e-5, 2e-5, 5e-6, 1e-6};
  const double p = 3e-11;
  double inv_sum = 0.0;
  for (double a : alpha) inv_sum += 1.0 / a;
  CHECK(transmit_power_exact(p, alpha, vandermonde(aod, 4)) ==
        doctest::Approx(p * inv_sum).epsilon(1e-12));
  const std::vector<double> one{2e-5};
  CHECK(transmit_power_exact(p, one, vandermonde(std::vector<double>{0.4}, 17)) ==
        doctest::Approx(p / 2e-5).epsilon(1e-12));
  const std::vector<double> two{1e-5, 1e-5};
  CHECK_THROWS_AS(transmit_power_exact(p, two, CMatrix::Ones(5, 2)), DegenerateError);
}

TEST_CASE("transmit power exact versus approximation at N = 4 mu_K") {
  const LinkBudget link;
  const Placement pl = place_uniform(10, 0.15);
  const int mu = min_bs_antennas(10);
  const int n = 4 * mu;
  const LosChannel ch = los_channel(pl, n, 1, link);
  const double p = 3e-11;
  const double approx = transmit_power_approx(p, 10, 1.0 / ch.pathlosses[0], n, mu).watts;
  CHECK(transmit_power_exact(p, ch.pathlosses, vandermonde(pl.aod, n)) / approx ==
        doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("kantorovich_bound") {
  for (int n : {1, 8, 64}) {
    const CMatrix p = static_cast<double>(n) * CMatrix::Identity(5, 5);
    CHECK(kantorovich_bound(p) == doctest::Approx(1.0 / n).epsilon(1e-14));
    CHECK(kantorovich_bound(p) == doctest::Approx(p.inverse()(0, 0).real()).epsilon(1e-14));
  }
  Rng rng(99);
  std::uniform_real_distribution<double> ang(-kPi / 2, kPi / 2);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> a(10);
    for (double& x : a) x = ang(rng);
    const CMatrix f = vandermonde(a, 64);
    const CMatrix gram = f.adjoint() * f;
    if (oracle::condition(gram) > 1e12) continue;
    const CMatrix inv = gram.inverse();
    const double bound = kantorovich_bound(gram);
    for (int k = 0; k < 10; ++k) CHECK(inv(k, k).real() <= bound * (1.0 + 1e-9));
    ++checked;
  }
  CHECK(checked > 900);
  // Increasing in κ at fixed diagonal: P = diag(x, 2−x) with x → 2.
  double prev = 0.0;
  for (double x = 1.0; x < 1.99; x += 0.05) {
    CMatrix p = CMatrix::Zero(2, 2);
    p(0, 0) = x;
    p(1, 1) = 2.0 - x;
    // Rotate so that the diagonal stays constant at 1.
    CMatrix q(2, 2);
    q << 1.0, 1.0, 1.0, -1.0;
    q /= std::sqrt(2.0);
    const CMatrix r = q * p * q.adjoint();
    const double b = kantorovich_bound(r);
    CHECK(b >= prev);
    prev = b;
  }
  CMatrix indef = CMatrix::Identity(2, 2);
  indef(1, 1) = -1.0;
  CHECK_THROWS_AS(kantorovich_bound(indef), DomainError);
}

TEST_CASE("linear_processing_power") {
  CHECK(linear_processing_power(2e9, 10, 20e9) == doctest::Approx(19.0).epsilon(1e-14));
  CHECK(linear_processing_power(2e9, 0, 20e9) == 0.0);
  CHECK(linear_processing_power(2e9, 1, 20e9) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(linear_processing_power(2e9, 10, 200e9) == doctest::Approx(1.9).epsilon(1e-14));
}

TEST_CASE("coding_backhaul_power") {
  const HardwareProfile hw;
  CHECK(coding_backhaul_power(1e9, hw) == doctest::Approx(1.15).epsilon(1e-12));
  CHECK(coding_backhaul_power(0.0, hw) == 0.0);
  CHECK(coding_backhaul_power(185e9, hw) == doctest::Approx(212.75).epsilon(1e-12));
}

TEST_CASE("total_consumed_power at the reference point") {
  const SystemProfile sp = default_profile();
  const double rate = throughput(19, 32, 10, 1.0, 2e9);
  const PowerBreakdown b = total_consumed_power(19, 32, 10, sp.hardware, sp.link, rate);
  CHECK(b.total == doctest::Approx(290.0).epsilon(0.15));
  const double sum =
      b.p_tx_over_eta + b.p_fix + b.p_rf + b.p_fe_total + b.p_lp + b.p_ce + b.p_cbh;
  CHECK(b.total == doctest::Approx(sum).epsilon(1e-14));
  CHECK(b.percentages.sum() == doctest::Approx(100.0).epsilon(1e-3));
  CHECK(b.circuit_shares().sum() == doctest::Approx(100.0).epsilon(1e-3));
  CHECK(b.p_ce == 0.0);
  CHECK(b.p_fe_total == doctest::Approx(0.69 * 19 + 0.4575 * 32).epsilon(1e-12));

  const PowerBreakdown zero = total_consumed_power(0, 0, 10, sp.hardware, sp.link, rate);
  CHECK(zero.p_fe_total == 0.0);
  CHECK(zero.total == doctest::Approx(50.0 + 4.258 + 1.9 + zero.p_tx_over_eta + zero.p_cbh)
                          .epsilon(1e-12));
}

TEST_CASE("total_consumed_power is affine and increasing in M and N") {
  const SystemProfile sp = default_profile();
  auto total = [&](int m, int n) {
    return total_consumed_power(m, n, 6, sp.hardware, sp.link, 1e10).total;
  };
  for (int m = 1; m < 60; m += 7) {
    for (int n = 1; n < 90; n += 11) {
      CHECK(total(m + 1, n) > total(m, n));
      CHECK(total(m, n + 1) > total(m, n));
      CHECK(total(m + 2, n) - total(m + 1, n) ==
            doctest::Approx(total(m + 1, n) - total(m, n)).epsilon(1e-9));
      CHECK(total(m, n + 2) - total(m, n + 1) ==
            doctest::Approx(total(m, n + 1) - total(m, n)).epsilon(1e-9));
    }
  }
}

TEST_CASE("breakdown shares are invariant under uniform scaling of power constants") {
  const SystemProfile sp = default_profile();
  const double c = 3.7;
  HardwareProfile hw = sp.hardware;
  for (double* f : {&hw.p_lna, &hw.p_hpa, &hw.p_dc, &hw.p_uc, &hw.p_adc, &hw.p_dac,
                    &hw.p_combiner, &hw.p_ps, &hw.p_fix, &hw.l_cod, &hw.l_dec, &hw.l_bh}) {
    *f *= c;
  }
  hw.l_bs /= c;
  hw.l_sc /= c;
  LinkBudget link = sp.link;
  link.n0 *= c;
  const PowerBreakdown a = total_consumed_power(13, 40, 8, sp.hardware, sp.link, 5e10);
  const PowerBreakdown b = total_consumed_power(13, 40, 8, hw, link, 5e10);
  CHECK(b.total == doctest::Approx(c * a.total).epsilon(1e-12));
  CHECK(b.percentages.fix == doctest::Approx(a.percentages.fix).epsilon(1e-12));
  CHECK(b.percentages.fe == doctest::Approx(a.percentages.fe).epsilon(1e-12));
  CHECK(b.percentages.rf == doctest::Approx(a.percentages.rf).epsilon(1e-12));
  CHECK(b.percentages.lp == doctest::Approx(a.percentages.lp).epsilon(1e-12));
  CHECK(b.percentages.cbh == doctest::Approx(a.percentages.cbh).epsilon(1e-12));
  CHECK(b.percentages.tx == doctest::Approx(a.percentages.tx).epsilon(1e-12));
}

TEST_CASE("fully-digital power model") {
  const SystemProfile sp = default_profile();
  const HardwareProfile& hw = sp.hardware;
  const PowerBreakdown b = total_consumed_power_digital(3, 24, 10, hw, sp.link, 1e10);
  CHECK(b.p_rf == doctest::Approx(10 * (hw.p_dc + hw.p_adc + hw.p_combiner) +
                                  24 * (hw.p_uc + hw.p_dac)));
  CHECK(b.p_fe_total == doctest::Approx(10 * 3 * (hw.p_lna + hw.p_ps) +
                                        24 * (hw.p_hpa + hw.p_combiner)));
  CHECK(b.p_lp == doctest::Approx(2e9 * 24 * 19 / hw.l_bs));
  CHECK(b.percentages.sum() == doctest::Approx(100.0).epsilon(1e-3));
  const PowerBreakdown s = total_consumed_power_digital(3, 24, 10, hw, sp.link, 1e10, 0.1);
  CHECK(s.p_fe_total == doctest::Approx(0.1 * b.p_fe_total));
  CHECK(s.p_rf == b.p_rf);
  CHECK_THROWS_AS(total_consumed_power_digital(1, 1, 0, hw, sp.link, 0.0), ConfigError);
}

TEST_CASE("breakdown serialization order") {
  const SystemProfile sp = default_profile();
  const PowerBreakdown b = total_consumed_power(2, 30, 4, sp.hardware, sp.link, 3e9);
  const std::vector<std::string> want{"p_tx_over_eta", "p_fix", "p_rf", "p_fe_total",
                                      "p_lp",          "p_ce",  "p_cbh", "total"};
  CHECK(breakdown_fields() == want);
  const std::vector<double> v = breakdown_values(b);
  CHECK(v.back() == b.total);
  CHECK(v[3] == b.p_fe_total);
  const nlohmann::json j = to_json(b);
  CHECK(j.at("p_lp").get<double>() == b.p_lp);
  CHECK(j.at("percentages").at("fix").get<double>() == b.percentages.fix);
}

}  // TEST_SUITE
