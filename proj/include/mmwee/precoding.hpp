// SPDX-License-Identifier: Apache-2.0
//
// Hybrid (analog RF + ZF baseband) and fully-digital precoders/combiners.

#pragma once

#include <span>
#include <vector>

#include "mmwee/channel.hpp"

namespace mmwee {

enum class PrecoderMode { hybrid_los, hybrid_svd, fully_digital };

const char* to_string(PrecoderMode mode);

struct PrecoderSet {
  CMatrix f_rf;                  // N×K (fully digital: the full precoder F)
  CMatrix f_bb;                  // K×K (fully digital: identity)
  std::vector<CVector> combiners;  // K vectors of length M
  PrecoderMode mode = PrecoderMode::hybrid_los;

  /// F_RF·F_BB.
  CMatrix precoder() const { return f_rf * f_bb; }

  /// x = F_RF·F_BB·s. Fully digital rescales x so that ‖x‖ = ‖s‖.
  CVector transmit(const CVector& s) const;
};

struct RfStage {
  CMatrix f_rf;
  std::vector<CVector> combiners;
};

/// H̄^H = (1/N)·D^{1/2}·(F_RF^H F_RF) together with D = diag(α).
struct EffectiveChannel {
  CMatrix h_bar;
  RVector pathlosses;
};

/// Analog stage matched to the LoS directions: f_k = a_N(φ_k), w_k = a_M(θ_k).
RfStage rf_stage_los(const Placement& placement, int n, int m);

EffectiveChannel effective_channel(const CMatrix& f_rf, std::span<const double> pathlosses,
                                   int n);

/// F_BB = (H̄^H)^{-1}. Throws DegenerateError when cond(H̄^H) >= 1e12.
CMatrix zf_baseband(const EffectiveChannel& eff);

/// Full hybrid design for a LoS channel.
PrecoderSet hybrid_los(const Placement& placement, const LosChannel& channel, int n,
                       int m);

/// w_k^H H_k^H F_RF F_BB e_j: useful gain for j == k, leakage otherwise.
Complex end_to_end_gain(std::span<const CMatrix> channel, const PrecoderSet& pset, int k,
                        int j);
inline Complex end_to_end_gain(const LosChannel& channel, const PrecoderSet& pset, int k) {
  return end_to_end_gain(channel.matrices, pset, k, k);
}

/// Dominant singular pair of every H_k^H: f_rf column k = top right singular
/// vector (length N), combiner k = top left singular vector (length M).
/// Each vector's largest-magnitude entry is made real positive.
/// Throws DegenerateError on an all-zero channel.
RfStage svd_rf_stage(std::span<const CMatrix> channel);

/// Entrywise x/|x|; exact zeros map to 1.
CMatrix project_unit_modulus(const CMatrix& x);
CVector project_unit_modulus(const CVector& x);

/// Hybrid design for a general channel: SVD eigenmodes projected onto unit
/// modulus, then F_BB = G^{-1}·diag(G) with G[j,k] = w_j^H H_j^H f_rf,k.
PrecoderSet hybrid_svd(std::span<const CMatrix> channel);

/// Top left singular vectors of every H_k^H, unit norm.
std::vector<CVector> digital_combiners(std::span<const CMatrix> channel);

/// F = H̃^† with H̃ the K×N matrix of rows w_k^H H_k^H (complete orthogonal
/// decomposition, pivot cutoff 1e-12 relative). Throws DegenerateError when H̃ has rank < K.
PrecoderSet fully_digital_zf(std::span<const CMatrix> channel,
                             std::span<const CVector> combiners);

/// K×K matrix G[j,k] = w_j^H H_j^H f_k of combined channel and precoder columns.
CMatrix combined_gains(std::span<const CMatrix> channel, std::span<const CVector> combiners,
                       const CMatrix& precoder);

/// Moore–Penrose pseudo-inverse with singular values below cutoff·σ_max dropped.
/// `rank` receives the number of retained singular values when non-null.
CMatrix pseudo_inverse(const CMatrix& a, double cutoff = 1e-12, int* rank = nullptr);

}  // namespace mmwee
