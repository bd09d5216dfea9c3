// SPDX-License-Identifier: Apache-2.0
//
// Scalar special functions, ULA array manifolds and conditioning of the
// Vandermonde RF precoder.

#pragma once

#include <span>
#include <vector>

#include "mmwee/types.hpp"

namespace mmwee {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultSpacing = 0.5;

/// Principal branch W0 of the Lambert W function, w·e^w = x, for x >= -1/e.
/// Halley iteration; absolute error below 1e-12. Throws DomainError below -1/e.
double lambert_w0(double x);

/// ULA response of `n` elements at `angle` [rad]; entry i is
/// exp(j·2π·spacing·sin(angle)·i).
CVector steering_vector(int n, double angle, double spacing = kDefaultSpacing);

/// Vandermonde nodes z_k = exp(j·2π·spacing·sin(angle_k)) of a set of AoDs.
struct NodeSet {
  std::vector<Complex> nodes;
  std::vector<double> angles;

  static NodeSet from_angles(std::span<const double> angles,
                             double spacing = kDefaultSpacing);
};

/// Worst-case node separation δ = min_{j≠k} |z_j − z_k|.
/// Requires at least two angles; throws DegenerateError if two nodes coincide.
double node_separation(std::span<const double> angles,
                       double spacing = kDefaultSpacing);

/// Closed-form separation 2|sin((π/2)·sin(π/K))| of the two nodes adjacent to
/// broadside in the uniform half-space placement. Approaches π²/K for large K.
double uniform_separation_closed_form(int k);

/// The N×K matrix [F]_{n,k} = z_k^n, n = 0..N-1.
CMatrix vandermonde(std::span<const double> angles, int n,
                    double spacing = kDefaultSpacing);

/// Exact 2-norm condition number of the N×K Vandermonde matrix via full SVD.
/// Returns +infinity when the smallest singular value is numerically zero.
double vandermonde_condition(std::span<const double> angles, int n,
                             double spacing = kDefaultSpacing);

/// Upper bound (1 + c)/(1 − c), c = (2/δ)(K−1)/N, on the Vandermonde condition
/// number for unit-modulus nodes. Throws DomainError when N <= 2(K−1)/δ.
double condition_bound(int k, int n, double delta);

/// Minimum BS antenna count μ_K = max(⌈(2λ/π²)K²⌉, K).
int min_bs_antennas(int k, double lambda = 1.0);

/// One Laplacian draw with location `mean` and scale `spread` (inverse CDF).
/// spread == 0 returns `mean`; negative spread throws DomainError.
double sample_laplacian(double mean, double spread, Rng& rng);

}  // namespace mmwee
