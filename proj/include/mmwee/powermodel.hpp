// SPDX-License-Identifier: Apache-2.0
//
// Total consumed power: amplified transmit power, fixed site power,
// transceiver chains, linear processing and traffic-dependent costs.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "mmwee/sysparams.hpp"

namespace mmwee {

/// Shares of the circuit categories, in percent.
struct PowerShares {
  double tx = 0.0;
  double fix = 0.0;
  double rf = 0.0;
  double fe = 0.0;
  double lp = 0.0;
  double ce = 0.0;
  double cbh = 0.0;

  double sum() const { return tx + fix + rf + fe + lp + ce + cbh; }
};

struct PowerBreakdown {
  double p_tx_over_eta = 0.0;  // η^{-1}·P_x
  double p_fix = 0.0;
  double p_rf = 0.0;
  double p_fe_total = 0.0;
  double p_lp = 0.0;
  double p_ce = 0.0;  // channel estimation; zero for a static network
  double p_cbh = 0.0;
  double total = 0.0;
  PowerShares percentages;  // over `total`

  /// Everything but the traffic-dependent coding/backhaul term.
  double circuit_without_cbh() const { return total - p_cbh; }

  /// Shares over circuit_without_cbh(); cbh share is zero.
  PowerShares circuit_shares() const;
};

/// Transmit power P·K·ᾱ, valid once N >= μ_K.
struct TransmitPower {
  double watts = 0.0;
  bool below_floor = false;  // N < μ_K: approximation outside its regime
};

TransmitPower transmit_power_approx(double p, int k, double mean_inv_pathloss, int n,
                                    int mu_k);

/// N·P·Σ_k α_k^{-1}·[(F_RF^H F_RF)^{-1}]_kk for one realization.
/// Throws DegenerateError if the Gram matrix is singular.
double transmit_power_exact(double p, std::span<const double> pathlosses,
                            const CMatrix& f_rf);

/// (κ + 1/κ + 2)/(4·min_k[P]_kk), κ = cond₂(P); an upper bound on every
/// diagonal entry of P^{-1}. Throws DomainError when P is not positive definite.
double kantorovich_bound(const CMatrix& gram);

/// B·K(2K−1)/L_BS.
double linear_processing_power(double bandwidth, int k, double l_bs);

/// (L_C + L_D + L_BH)·throughput.
double coding_backhaul_power(double throughput, const HardwareProfile& hw);

/// Hybrid architecture from precomputed aggregates:
/// P_FIX + p_RF + η^{-1}P_x + P_LP + p_FE^SC·M + p_FE^BS·N + P_C/BH.
PowerBreakdown assemble_power(int m, int n, int k, const PowerAggregates& agg,
                              const HardwareProfile& hw, const LinkBudget& link,
                              double throughput);

/// assemble_power with aggregates(hw, link, k).
PowerBreakdown total_consumed_power(int m, int n, int k, const HardwareProfile& hw,
                                    const LinkBudget& link, double throughput);

/// Fully-digital BS with one RF chain per antenna; small-cell side unchanged.
/// `fe_scale` multiplies the front-end category only.
PowerBreakdown total_consumed_power_digital(int m, int n, int k, const HardwareProfile& hw,
                                            const LinkBudget& link, double throughput,
                                            double fe_scale = 1.0);

/// Field names in serialization order.
const std::vector<std::string>& breakdown_fields();

/// Values matching breakdown_fields().
std::vector<double> breakdown_values(const PowerBreakdown& b);

nlohmann::json to_json(const PowerBreakdown& b);

}  // namespace mmwee
