// SPDX-License-Identifier: Apache-2.0
//
// Hardware and link-budget constants for the 60 GHz backhaul network, and the
// aggregate power coefficients derived from them. All values are SI units.

#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mmwee/types.hpp"

namespace mmwee {

/// Per-device circuit powers and efficiencies.
struct HardwareProfile {
  double p_lna = 0.039;        // W, low-noise amplifier
  double p_hpa = 0.138;        // W, high-power amplifier
  double p_dc = 0.0473;        // W, down-conversion stage
  double p_uc = 0.049;         // W, up-conversion stage
  double p_adc = 0.200;        // W, ADC pair
  double p_dac = 0.110;        // W, DAC pair
  double p_combiner = 0.0195;  // W, RF combiner
  double p_ps = 0.030;         // W, phase shifter
  double l_bs = 200e9;         // flop/W at the BS (see README, "Calibration")
  double l_sc = 5e9;           // flop/W at the small cells
  double l_cod = 0.1e-9;       // W per bit/s, coding
  double l_dec = 0.8e-9;       // W per bit/s, decoding
  double l_bh = 0.25e-9;       // W per bit/s, backhaul
  double p_fix = 50.0;         // W, site fixed power
  double eta = 0.375;          // PA efficiency
  double coherence_time = 10.0;  // s

  bool operator==(const HardwareProfile&) const = default;
};

/// Propagation and traffic parameters.
struct LinkBudget {
  double f_c = 60.0;             // GHz
  double bandwidth = 2e9;        // Hz
  double n0 = 3.981071705534973e-21;  // W/Hz (-174 dBm/Hz)
  double nf = 3.981071705534973;      // linear (6 dB)
  double beta = 2.2;             // pathloss exponent
  double a_absorption = 25.0;    // dB/km
  double sigma_xi = 2.8284271247461903;  // dB, shadowing std (variance 8 dB²)
  double d = 0.15;               // km
  double gamma = 1.0;            // target SNR, linear (0 dB)

  bool operator==(const LinkBudget&) const = default;
};

struct SystemProfile {
  HardwareProfile hardware;
  LinkBudget link;

  bool operator==(const SystemProfile&) const = default;
};

/// Aggregate coefficients of the transceiver-chain power p_RF + p_FE^SC·M + p_FE^BS·N.
struct PowerAggregates {
  double p_rf = 0.0;               // W, RF chains at both ends
  double p_fe_sc = 0.0;            // W per small-cell antenna (all K cells)
  double p_fe_bs = 0.0;            // W per BS antenna
  double noise_power = 0.0;        // W, σ² = B·N0·NF
  double mean_inv_pathloss = 0.0;  // ᾱ = E{1/α}
};

/// Reference 60 GHz profile with P_FIX = 50 W and γ = 0 dB.
SystemProfile default_profile();

/// Throws ConfigError naming the first invalid field.
void validate(const HardwareProfile& hw);
void validate(const LinkBudget& link);
inline void validate(const SystemProfile& p) {
  validate(p.hardware);
  validate(p.link);
}

/// Aggregates for K small cells, with ᾱ evaluated deterministically at the
/// nominal distance and zero shadowing.
PowerAggregates aggregates(const HardwareProfile& hw, const LinkBudget& link, int k);

/// Monte Carlo estimate of ᾱ = E{10^{l/10}} over log-normal shadowing at the
/// nominal distance.
double mean_inv_pathloss_mc(const LinkBudget& link, int samples, Rng& rng);

/// L_B = L_C + L_D + L_BH, W per bit/s.
inline double traffic_cost(const HardwareProfile& hw) {
  return hw.l_cod + hw.l_dec + hw.l_bh;
}

double db_to_linear(double db);
double linear_to_db(double lin);
double dbm_to_watt(double dbm);

/// JSON object with one key per field name. `profile_from_json` starts from
/// the defaults, overrides the keys present and rejects unknown keys.
nlohmann::json to_json(const SystemProfile& profile);
SystemProfile profile_from_json(const nlohmann::json& j);
SystemProfile load_profile(const std::string& path);

/// True if `key` is a HardwareProfile or LinkBudget field name.
bool is_profile_key(const std::string& key);

}  // namespace mmwee
