// SPDX-License-Identifier: Apache-2.0

#include "mmwee/powermodel.hpp"

#include <algorithm>
#include <cmath>

#include "mmwee/mathcore.hpp"

namespace mmwee {

namespace {

PowerShares shares_over(const PowerBreakdown& b, double denom, bool with_cbh) {
  PowerShares s;
  if (!(denom > 0.0)) return s;
  const double f = 100.0 / denom;
  s.tx = b.p_tx_over_eta * f;
  s.fix = b.p_fix * f;
  s.rf = b.p_rf * f;
  s.fe = b.p_fe_total * f;
  s.lp = b.p_lp * f;
  s.ce = b.p_ce * f;
  s.cbh = with_cbh ? b.p_cbh * f : 0.0;
  return s;
}

void finish(PowerBreakdown& b) {
  b.total = b.p_tx_over_eta + b.p_fix + b.p_rf + b.p_fe_total + b.p_lp + b.p_ce + b.p_cbh;
  b.percentages = shares_over(b, b.total, true);
}

double nominal_transmit_power(int n, int k, const HardwareProfile& hw,
                              const LinkBudget& link) {
  const PowerAggregates agg = aggregates(hw, link, k);
  const double p = link.gamma * agg.noise_power;
  return transmit_power_approx(p, k, agg.mean_inv_pathloss, n, 0).watts;
}

}  // namespace

PowerShares PowerBreakdown::circuit_shares() const {
  return shares_over(*this, circuit_without_cbh(), false);
}

TransmitPower transmit_power_approx(double p, int k, double mean_inv_pathloss, int n,
                                    int mu_k) {
  return {p * k * mean_inv_pathloss, n < mu_k};
}

double transmit_power_exact(double p, std::span<const double> pathlosses,
                            const CMatrix& f_rf) {
  const auto k = static_cast<Eigen::Index>(pathlosses.size());
  if (f_rf.cols() != k) throw DomainError("transmit_power_exact: shape mismatch");
  const CMatrix gram = f_rf.adjoint() * f_rf;
  const Eigen::FullPivLU<CMatrix> lu(gram);
  if (!lu.isInvertible()) throw DegenerateError("transmit_power_exact: singular Gram matrix");
  const CMatrix inv = lu.inverse();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) acc += inv(i, i).real() / pathlosses[i];
  return static_cast<double>(f_rf.rows()) * p * acc;
}

double kantorovich_bound(const CMatrix& gram) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) {
    throw DomainError("kantorovich_bound: square matrix required");
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const RVector& ev = eig.eigenvalues();
  if (!(ev[0] > 0.0)) throw DomainError("kantorovich_bound: matrix not positive definite");
  const double kappa = ev[ev.size() - 1] / ev[0];
  const double min_diag = gram.diagonal().real().minCoeff();
  return (kappa + 1.0 / kappa + 2.0) / (4.0 * min_diag);
}

double linear_processing_power(double bandwidth, int k, double l_bs) {
  if (k < 0) throw DomainError("linear_processing_power: k must be >= 0");
  if (k == 0) return 0.0;
  return bandwidth * k * (2.0 * k - 1.0) / l_bs;
}

double coding_backhaul_power(double throughput, const HardwareProfile& hw) {
  if (throughput < 0.0) throw DomainError("coding_backhaul_power: negative throughput");
  return traffic_cost(hw) * throughput;
}

PowerBreakdown assemble_power(int m, int n, int k, const PowerAggregates& agg,
                              const HardwareProfile& hw, const LinkBudget& link,
                              double throughput) {
  if (m < 0 || n < 0) throw DomainError("total_consumed_power: m, n must be >= 0");
  PowerBreakdown b;
  const double p = link.gamma * agg.noise_power;
  b.p_tx_over_eta = transmit_power_approx(p, k, agg.mean_inv_pathloss, n, 0).watts / hw.eta;
  b.p_fix = hw.p_fix;
  b.p_rf = agg.p_rf;
  b.p_fe_total = agg.p_fe_sc * m + agg.p_fe_bs * n;
  b.p_lp = linear_processing_power(link.bandwidth, k, hw.l_bs);
  b.p_ce = 0.0;
  b.p_cbh = coding_backhaul_power(throughput, hw);
  finish(b);
  return b;
}

PowerBreakdown total_consumed_power(int m, int n, int k, const HardwareProfile& hw,
                                    const LinkBudget& link, double throughput) {
  return assemble_power(m, n, k, aggregates(hw, link, k), hw, link, throughput);
}

PowerBreakdown total_consumed_power_digital(int m, int n, int k, const HardwareProfile& hw,
                                            const LinkBudget& link, double throughput,
                                            double fe_scale) {
  if (m < 0 || n < 0) throw DomainError("total_consumed_power_digital: m, n must be >= 0");
  if (k < 1) throw ConfigError("k", "must be >= 1");
  PowerBreakdown b;
  b.p_tx_over_eta = nominal_transmit_power(n, k, hw, link) / hw.eta;
  b.p_fix = hw.p_fix;
  b.p_rf = k * (hw.p_dc + hw.p_adc + hw.p_combiner) + n * (hw.p_uc + hw.p_dac);
  b.p_fe_total = fe_scale * (k * (hw.p_lna + hw.p_ps) * m + n * (hw.p_hpa + hw.p_combiner));
  b.p_lp = link.bandwidth * n * (2.0 * k - 1.0) / hw.l_bs;
  b.p_ce = 0.0;
  b.p_cbh = coding_backhaul_power(throughput, hw);
  finish(b);
  return b;
}

const std::vector<std::string>& breakdown_fields() {
  static const std::vector<std::string> fields = {
      "p_tx_over_eta", "p_fix", "p_rf", "p_fe_total", "p_lp", "p_ce", "p_cbh", "total"};
  return fields;
}

std::vector<double> breakdown_values(const PowerBreakdown& b) {
  return {b.p_tx_over_eta, b.p_fix, b.p_rf, b.p_fe_total, b.p_lp, b.p_ce, b.p_cbh, b.total};
}

nlohmann::json to_json(const PowerBreakdown& b) {
  nlohmann::json j = nlohmann::json::object();
  const auto& names = breakdown_fields();
  const auto values = breakdown_values(b);
  for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = values[i];
  const PowerShares s = b.percentages;
  j["percentages"] = {{"tx", s.tx},  {"fix", s.fix}, {"rf", s.rf}, {"fe", s.fe},
                      {"lp", s.lp},  {"ce", s.ce},   {"cbh", s.cbh}};
  return j;
}

}  // namespace mmwee
