// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mmwee {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Random engine used everywhere a draw is made. Passed explicitly, never global.
using Rng = std::mt19937_64;

/// Engine for one independent Monte Carlo stream. The same (seed, stream)
/// pair always yields the same sequence, independent of thread scheduling.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Geometry or matrix that makes an operation ill-posed (coincident nodes,
/// singular channel, zero matrix).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value. `key()` names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace mmwee
