// SPDX-License-Identifier: Apache-2.0

#include "mmwee/sysparams.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "mmwee/channel.hpp"

namespace mmwee {

namespace {

template <typename T>
using FieldMap = std::map<std::string, double T::*>;

const FieldMap<HardwareProfile>& hardware_fields() {
  static const FieldMap<HardwareProfile> fields = {
      {"p_lna", &HardwareProfile::p_lna},
      {"p_hpa", &HardwareProfile::p_hpa},
      {"p_dc", &HardwareProfile::p_dc},
      {"p_uc", &HardwareProfile::p_uc},
      {"p_adc", &HardwareProfile::p_adc},
      {"p_dac", &HardwareProfile::p_dac},
      {"p_combiner", &HardwareProfile::p_combiner},
      {"p_ps", &HardwareProfile::p_ps},
      {"l_bs", &HardwareProfile::l_bs},
      {"l_sc", &HardwareProfile::l_sc},
      {"l_cod", &HardwareProfile::l_cod},
      {"l_dec", &HardwareProfile::l_dec},
      {"l_bh", &HardwareProfile::l_bh},
      {"p_fix", &HardwareProfile::p_fix},
      {"eta", &HardwareProfile::eta},
      {"coherence_time", &HardwareProfile::coherence_time},
  };
  return fields;
}

const FieldMap<LinkBudget>& link_fields() {
  static const FieldMap<LinkBudget> fields = {
      {"f_c", &LinkBudget::f_c},
      {"bandwidth", &LinkBudget::bandwidth},
      {"n0", &LinkBudget::n0},
      {"nf", &LinkBudget::nf},
      {"beta", &LinkBudget::beta},
      {"a_absorption", &LinkBudget::a_absorption},
      {"sigma_xi", &LinkBudget::sigma_xi},
      {"d", &LinkBudget::d},
      {"gamma", &LinkBudget::gamma},
  };
  return fields;
}

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
double dbm_to_watt(double dbm) { return 1e-3 * db_to_linear(dbm); }

SystemProfile default_profile() { return SystemProfile{}; }

void validate(const HardwareProfile& hw) {
  for (const auto& [key, field] : hardware_fields()) {
    const double v = hw.*field;
    require(std::isfinite(v), key.c_str(), "must be finite");
    require(v >= 0.0, key.c_str(), "must be >= 0");
  }
  require(hw.eta > 0.0 && hw.eta <= 1.0, "eta", "must lie in (0, 1]");
  require(hw.l_bs > 0.0, "l_bs", "must be > 0");
  require(hw.l_sc > 0.0, "l_sc", "must be > 0");
}

void validate(const LinkBudget& link) {
  for (const auto& [key, field] : link_fields()) {
    require(std::isfinite(link.*field), key.c_str(), "must be finite");
  }
  require(link.f_c > 0.0, "f_c", "must be > 0");
  require(link.bandwidth > 0.0, "bandwidth", "must be > 0");
  require(link.n0 > 0.0, "n0", "must be > 0");
  require(link.nf >= 1.0, "nf", "must be >= 1 (linear)");
  require(link.beta > 0.0, "beta", "must be > 0");
  require(link.a_absorption >= 0.0, "a_absorption", "must be >= 0");
  require(link.sigma_xi >= 0.0, "sigma_xi", "must be >= 0");
  require(link.d > 0.0, "d", "must be > 0");
  require(link.gamma > 0.0, "gamma", "must be > 0");
}

PowerAggregates aggregates(const HardwareProfile& hw, const LinkBudget& link, int k) {
  if (k < 1) throw ConfigError("k", "must be >= 1");
  PowerAggregates agg;
  agg.p_rf = k * (hw.p_dc + hw.p_adc + hw.p_combiner + hw.p_uc + hw.p_dac);
  agg.p_fe_sc = k * (hw.p_lna + hw.p_ps);
  agg.p_fe_bs = k * hw.p_ps + hw.p_hpa + hw.p_combiner;
  agg.noise_power = link.bandwidth * link.n0 * link.nf;
  agg.mean_inv_pathloss = 1.0 / pathloss_gain(link, link.d);
  return agg;
}

double mean_inv_pathloss_mc(const LinkBudget& link, int samples, Rng& rng) {
  if (samples < 1) throw DomainError("mean_inv_pathloss_mc: samples must be >= 1");
  std::normal_distribution<double> shadow(0.0, link.sigma_xi);
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    acc += db_to_linear(pathloss_db(link, link.d, shadow(rng)));
  }
  return acc / samples;
}

nlohmann::json to_json(const SystemProfile& profile) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, field] : hardware_fields()) j[key] = profile.hardware.*field;
  for (const auto& [key, field] : link_fields()) j[key] = profile.link.*field;
  return j;
}

SystemProfile profile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "profile must be a JSON object");
  SystemProfile p = default_profile();
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw ConfigError(key, "must be a number");
    if (auto it = hardware_fields().find(key); it != hardware_fields().end()) {
      p.hardware.*(it->second) = value.get<double>();
    } else if (auto lt = link_fields().find(key); lt != link_fields().end()) {
      p.link.*(lt->second) = value.get<double>();
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  validate(p);
  return p;
}

SystemProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", e.what());
  }
  return profile_from_json(j);
}

bool is_profile_key(const std::string& key) {
  return hardware_fields().count(key) > 0 || link_fields().count(key) > 0;
}

}  // namespace mmwee
