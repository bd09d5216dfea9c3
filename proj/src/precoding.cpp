// SPDX-License-Identifier: Apache-2.0

#include "mmwee/precoding.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mmwee {

namespace {

constexpr double kMaxCondition = 1e12;

struct SingularPair {
  double sigma = 0.0;
  CVector u;  // left, length rows
  CVector v;  // right, length cols
};

// Dominant singular pair via the Hermitian eigendecomposition of the smaller
// Gram matrix.
SingularPair dominant_singular_pair(const CMatrix& a) {
  SingularPair p;
  if (a.rows() <= a.cols()) {
    const CMatrix gram = a * a.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
    const Eigen::Index top = gram.rows() - 1;
    p.sigma = std::sqrt(std::max(eig.eigenvalues()[top], 0.0));
    p.u = eig.eigenvectors().col(top);
    p.v = p.sigma > 0.0 ? CVector(a.adjoint() * p.u / p.sigma) : CVector::Zero(a.cols());
  } else {
    const CMatrix gram = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
    const Eigen::Index top = gram.rows() - 1;
    p.sigma = std::sqrt(std::max(eig.eigenvalues()[top], 0.0));
    p.v = eig.eigenvectors().col(top);
    p.u = p.sigma > 0.0 ? CVector(a * p.v / p.sigma) : CVector::Zero(a.rows());
  }
  return p;
}

// Rotates `x` so that its largest-magnitude entry is real positive.
CVector fix_phase(const CVector& x) {
  Eigen::Index idx = 0;
  x.cwiseAbs().maxCoeff(&idx);
  const double mag = std::abs(x[idx]);
  if (mag == 0.0) return x;
  return x * (std::conj(x[idx]) / mag);
}

double condition_number(const CMatrix& a) {
  const Eigen::JacobiSVD<CMatrix> svd(a);
  const RVector& s = svd.singularValues();
  const double smin = s[s.size() - 1];
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

}  // namespace

const char* to_string(PrecoderMode mode) {
  switch (mode) {
    case PrecoderMode::hybrid_los: return "hybrid-los";
    case PrecoderMode::hybrid_svd: return "hybrid-svd";
    case PrecoderMode::fully_digital: return "fully-digital";
  }
  return "unknown";
}

CVector PrecoderSet::transmit(const CVector& s) const {
  CVector x = f_rf * (f_bb * s);
  if (mode == PrecoderMode::fully_digital) {
    const double nx = x.norm();
    if (nx > 0.0) x *= s.norm() / nx;
  }
  return x;
}

RfStage rf_stage_los(const Placement& placement, int n, int m) {
  check_distinct(placement);
  RfStage rf;
  rf.f_rf = vandermonde(placement.aod, n);
  for (int k = 0; k < placement.k; ++k) {
    rf.combiners.push_back(steering_vector(m, placement.aoa[k]));
  }
  return rf;
}

EffectiveChannel effective_channel(const CMatrix& f_rf, std::span<const double> pathlosses,
                                   int n) {
  const auto k = static_cast<Eigen::Index>(pathlosses.size());
  if (f_rf.cols() != k) throw DomainError("effective_channel: shape mismatch");
  EffectiveChannel eff;
  eff.pathlosses = Eigen::Map<const RVector>(pathlosses.data(), k);
  const CMatrix gram = f_rf.adjoint() * f_rf;
  eff.h_bar = (eff.pathlosses.cwiseSqrt().asDiagonal() * gram) / static_cast<double>(n);
  return eff;
}

CMatrix zf_baseband(const EffectiveChannel& eff) {
  const double cond = condition_number(eff.h_bar);
  if (!(cond < kMaxCondition)) {
    throw DegenerateError("zf_baseband: singular effective channel, condition number " +
                          std::to_string(cond));
  }
  return eff.h_bar.fullPivLu().inverse();
}

PrecoderSet hybrid_los(const Placement& placement, const LosChannel& channel, int n,
                       int m) {
  RfStage rf = rf_stage_los(placement, n, m);
  PrecoderSet p;
  p.f_bb = zf_baseband(effective_channel(rf.f_rf, channel.pathlosses, n));
  p.f_rf = std::move(rf.f_rf);
  p.combiners = std::move(rf.combiners);
  p.mode = PrecoderMode::hybrid_los;
  return p;
}

Complex end_to_end_gain(std::span<const CMatrix> channel, const PrecoderSet& pset, int k,
                        int j) {
  const CVector column = pset.f_rf * pset.f_bb.col(j);
  const CVector& w = pset.combiners.at(k);
  return w.dot(channel[k].adjoint() * column);
}

RfStage svd_rf_stage(std::span<const CMatrix> channel) {
  if (channel.empty()) throw DomainError("svd_rf_stage: empty channel");
  const Eigen::Index n = channel.front().rows();
  RfStage rf;
  rf.f_rf.resize(n, static_cast<Eigen::Index>(channel.size()));
  for (std::size_t k = 0; k < channel.size(); ++k) {
    if (channel[k].rows() != n) throw DomainError("svd_rf_stage: shape mismatch");
    if (channel[k].isZero(0.0)) {
      throw DegenerateError("svd_rf_stage: zero channel matrix for link " +
                            std::to_string(k));
    }
    const SingularPair p = dominant_singular_pair(channel[k].adjoint());
    rf.f_rf.col(static_cast<Eigen::Index>(k)) = fix_phase(p.v);
    rf.combiners.push_back(fix_phase(p.u));
  }
  return rf;
}

CMatrix project_unit_modulus(const CMatrix& x) {
  return x.unaryExpr([](const Complex& z) {
    const double mag = std::abs(z);
    return mag == 0.0 ? Complex(1.0, 0.0) : z / mag;
  });
}

CVector project_unit_modulus(const CVector& x) {
  return project_unit_modulus(CMatrix(x)).col(0);
}

CMatrix combined_gains(std::span<const CMatrix> channel, std::span<const CVector> combiners,
                       const CMatrix& precoder) {
  const auto k = static_cast<Eigen::Index>(channel.size());
  if (static_cast<Eigen::Index>(combiners.size()) != k || precoder.cols() != k) {
    throw DomainError("combined_gains: shape mismatch");
  }
  CMatrix g(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const CVector row = channel[j] * combiners[j];  // (w_j^H H_j^H)^H
    g.row(j) = row.adjoint() * precoder;
  }
  return g;
}

PrecoderSet hybrid_svd(std::span<const CMatrix> channel) {
  RfStage rf = svd_rf_stage(channel);
  PrecoderSet p;
  p.mode = PrecoderMode::hybrid_svd;
  p.f_rf = project_unit_modulus(rf.f_rf);
  for (const auto& w : rf.combiners) p.combiners.push_back(project_unit_modulus(w));
  const CMatrix g = combined_gains(channel, p.combiners, p.f_rf);
  const double cond = condition_number(g);
  if (!(cond < kMaxCondition)) {
    throw DegenerateError("hybrid_svd: singular effective channel, condition number " +
                          std::to_string(cond));
  }
  p.f_bb = g.fullPivLu().inverse() * g.diagonal().asDiagonal();
  return p;
}

std::vector<CVector> digital_combiners(std::span<const CMatrix> channel) {
  return svd_rf_stage(channel).combiners;
}

CMatrix pseudo_inverse(const CMatrix& a, double cutoff, int* rank) {
  const Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  const double threshold = s.size() > 0 ? cutoff * s[0] : 0.0;
  RVector inv = RVector::Zero(s.size());
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > threshold) {
      inv[i] = 1.0 / s[i];
      ++r;
    }
  }
  if (rank != nullptr) *rank = r;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

PrecoderSet fully_digital_zf(std::span<const CMatrix> channel,
                             std::span<const CVector> combiners) {
  const auto k = static_cast<Eigen::Index>(channel.size());
  if (k == 0 || static_cast<Eigen::Index>(combiners.size()) != k) {
    throw DomainError("fully_digital_zf: one combiner per link required");
  }
  const Eigen::Index n = channel.front().rows();
  CMatrix h_tilde(k, n);
  for (Eigen::Index j = 0; j < k; ++j) {
    h_tilde.row(j) = (channel[j] * combiners[j]).adjoint();
  }
  int rank = 0;
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod;
  cod.setThreshold(1e-12);
  cod.compute(h_tilde);
  rank = static_cast<int>(cod.rank());
  if (rank < k) {
    throw DegenerateError("fully_digital_zf: combined channel has rank " +
                          std::to_string(rank) + " < K = " + std::to_string(k));
  }
  PrecoderSet p;
  p.mode = PrecoderMode::fully_digital;
  p.f_rf = cod.pseudoInverse();
  p.f_bb = CMatrix::Identity(k, k);
  p.combiners.assign(combiners.begin(), combiners.end());
  return p;
}

}  // namespace mmwee
