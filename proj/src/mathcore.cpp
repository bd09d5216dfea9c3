// SPDX-License-Identifier: Apache-2.0

#include "mmwee/mathcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmwee {

namespace {

constexpr double kInvE = 0.36787944117144233;  // exp(-1)

double lambert_initial_guess(double x) {
  if (x < -0.32) {
    // Series about the branch point x = -1/e.
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * x + 1.0)));
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (x < 3.0) return std::log1p(x);
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

double lambert_w0(double x) {
  if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
  // A few ulps of slack so that a computed -1/e is accepted.
  if (x < -kInvE - 4.0 * std::numeric_limits<double>::epsilon()) {
    throw DomainError("lambert_w0: argument below -1/e");
  }
  if (x <= -kInvE) return -1.0;
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w = lambert_initial_guess(x);
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return std::max(w, -1.0);
}

CVector steering_vector(int n, double angle, double spacing) {
  if (n < 1) throw DomainError("steering_vector: n must be >= 1");
  const double phase = 2.0 * kPi * spacing * std::sin(angle);
  CVector a(n);
  for (int i = 0; i < n; ++i) a[i] = std::polar(1.0, phase * i);
  return a;
}

NodeSet NodeSet::from_angles(std::span<const double> angles, double spacing) {
  NodeSet set;
  set.angles.assign(angles.begin(), angles.end());
  set.nodes.reserve(angles.size());
  for (double a : angles) {
    set.nodes.push_back(std::polar(1.0, 2.0 * kPi * spacing * std::sin(a)));
  }
  return set;
}

double node_separation(std::span<const double> angles, double spacing) {
  if (angles.size() < 2) {
    throw DomainError("node_separation: needs at least two angles");
  }
  const NodeSet set = NodeSet::from_angles(angles, spacing);
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < set.nodes.size(); ++j) {
    for (std::size_t k = j + 1; k < set.nodes.size(); ++k) {
      delta = std::min(delta, std::abs(set.nodes[j] - set.nodes[k]));
    }
  }
  if (delta <= 0.0) {
    throw DegenerateError("node_separation: coincident nodes (delta = 0)");
  }
  return delta;
}

double uniform_separation_closed_form(int k) {
  if (k < 1) throw DomainError("uniform_separation_closed_form: k must be >= 1");
  return 2.0 * std::abs(std::sin(0.5 * kPi * std::sin(kPi / k)));
}

CMatrix vandermonde(std::span<const double> angles, int n, double spacing) {
  if (n < 1) throw DomainError("vandermonde: n must be >= 1");
  CMatrix f(n, static_cast<Eigen::Index>(angles.size()));
  for (std::size_t k = 0; k < angles.size(); ++k) {
    f.col(static_cast<Eigen::Index>(k)) = steering_vector(n, angles[k], spacing);
  }
  return f;
}

double vandermonde_condition(std::span<const double> angles, int n,
                             double spacing) {
  const auto k = static_cast<int>(angles.size());
  if (k < 1) throw DomainError("vandermonde_condition: empty angle list");
  if (n < k) throw DomainError("vandermonde_condition: requires n >= K");
  const CMatrix f = vandermonde(angles, n, spacing);
  const Eigen::BDCSVD<CMatrix> svd(f);
  const RVector& s = svd.singularValues();
  const double smax = s[0];
  const double smin = s[s.size() - 1];
  const double tol = smax * std::numeric_limits<double>::epsilon() * std::max(n, k);
  if (!(smin > tol)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

double condition_bound(int k, int n, double delta) {
  if (k < 1 || n < 1) throw DomainError("condition_bound: k, n must be >= 1");
  if (k == 1) return 1.0;
  if (!(delta > 0.0)) throw DomainError("condition_bound: delta must be > 0");
  const double c = (2.0 / delta) * (k - 1) / static_cast<double>(n);
  if (c >= 1.0) {
    throw DomainError("condition_bound: requires n > 2(K-1)/delta");
  }
  return (1.0 + c) / (1.0 - c);
}

int min_bs_antennas(int k, double lambda) {
  if (k < 1) throw DomainError("min_bs_antennas: k must be >= 1");
  if (!(lambda >= 1.0)) throw DomainError("min_bs_antennas: lambda must be >= 1");
  const double floor_val = 2.0 * lambda / (kPi * kPi) * static_cast<double>(k) * k;
  return std::max(static_cast<int>(std::ceil(floor_val)), k);
}

double sample_laplacian(double mean, double spread, Rng& rng) {
  if (spread < 0.0) throw DomainError("sample_laplacian: spread must be >= 0");
  if (spread == 0.0) return mean;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double u = 0.0;
  do {
    u = uniform(rng);
  } while (u == 0.0);
  const double centred = u - 0.5;
  const double sign = centred < 0.0 ? -1.0 : 1.0;
  return mean - spread * sign * std::log(1.0 - 2.0 * std::abs(centred));
}

}  // namespace mmwee
