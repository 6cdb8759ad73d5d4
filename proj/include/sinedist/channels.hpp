#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sinedist/linalg.hpp"
#include "sinedist/states.hpp"

namespace sinedist {

// Operation in Kraus form {E_mu}: rho -> sum_mu E_mu rho E_mu^dagger.
// Validation requires the effect sum_mu E_mu^dagger E_mu to satisfy
// 0 <= effect <= 1; trace preservation (effect == identity) is detected
// rather than demanded, so trace-decreasing operations are first class.
template <typename T = double>
class KrausChannelT {
 public:
  static constexpr T kValidationTol = T(1e-9);

  explicit KrausChannelT(std::vector<ComplexMatrix<T>> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) fail(Errc::InvalidChannel, "channel: no Kraus operators");
    const Eigen::Index d = kraus_.front().rows();
    if (d < 1) fail(Errc::InvalidChannel, "channel: empty Kraus operator");
    effect_ = ComplexMatrix<T>::Zero(d, d);
    for (std::size_t mu = 0; mu < kraus_.size(); ++mu) {
      const auto& e = kraus_[mu];
      if (e.rows() != d || e.cols() != d)
        fail(Errc::InvalidChannel,
             "channel: Kraus operator " + std::to_string(mu) + " is not " + std::to_string(d) +
                 "x" + std::to_string(d));
      effect_ += e.adjoint() * e;
    }
    effect_ = ((effect_ + effect_.adjoint()) / T(2)).eval();
    if (!is_effect(effect_, kValidationTol))
      fail(Errc::InvalidChannel, "channel: effect violates 0 <= sum E^dagger E <= 1");
    trace_preserving_ =
        (effect_ - ComplexMatrix<T>::Identity(d, d)).cwiseAbs().maxCoeff() <= kValidationTol;
  }

  Eigen::Index dim() const { return kraus_.front().rows(); }
  std::size_t size() const { return kraus_.size(); }
  const std::vector<ComplexMatrix<T>>& kraus() const { return kraus_; }
  // sum_mu E_mu^dagger E_mu; the success probability on rho is its overlap tr(effect rho).
  const ComplexMatrix<T>& effect() const { return effect_; }
  bool trace_preserving() const { return trace_preserving_; }

 private:
  std::vector<ComplexMatrix<T>> kraus_;
  ComplexMatrix<T> effect_;
  bool trace_preserving_ = false;
};

using KrausChannel = KrausChannelT<double>;

// Measurement {A_mu}: Hermitian, positive semidefinite, summing to identity.
template <typename T = double>
class PovmT {
 public:
  static constexpr T kValidationTol = T(1e-9);

  explicit PovmT(std::vector<ComplexMatrix<T>> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) fail(Errc::InvalidPovm, "povm: no elements");
    const Eigen::Index d = elements_.front().rows();
    if (d < 1) fail(Errc::InvalidPovm, "povm: empty element");
    ComplexMatrix<T> sum = ComplexMatrix<T>::Zero(d, d);
    for (std::size_t mu = 0; mu < elements_.size(); ++mu) {
      const auto& a = elements_[mu];
      if (a.rows() != d || a.cols() != d)
        fail(Errc::InvalidPovm, "povm: element " + std::to_string(mu) + " is not " +
                                    std::to_string(d) + "x" + std::to_string(d));
      if (!is_hermitian(a, kValidationTol))
        fail(Errc::InvalidPovm, "povm: element " + std::to_string(mu) + " is not Hermitian");
      if (hermitian_eig(a).eigenvalues.minCoeff() < -kValidationTol)
        fail(Errc::InvalidPovm, "povm: element " + std::to_string(mu) + " is not positive");
      sum += a;
    }
    if ((sum - ComplexMatrix<T>::Identity(d, d)).cwiseAbs().maxCoeff() > kValidationTol)
      fail(Errc::InvalidPovm, "povm: elements do not sum to identity");
  }

  Eigen::Index dim() const { return elements_.front().rows(); }
  std::size_t size() const { return elements_.size(); }
  const std::vector<ComplexMatrix<T>>& elements() const { return elements_; }

 private:
  std::vector<ComplexMatrix<T>> elements_;
};

using Povm = PovmT<double>;

// sum_mu E_mu rho E_mu^dagger.  Trace <= 1, with equality iff the channel is
// trace preserving, so the result is a plain matrix rather than a density
// matrix.
template <typename T>
ComplexMatrix<T> apply(const KrausChannelT<T>& channel, const DensityMatrixT<T>& rho) {
  if (channel.dim() != rho.dim())
    fail(Errc::DimensionMismatch, "apply: channel dim " + std::to_string(channel.dim()) +
                                      " vs state dim " + std::to_string(rho.dim()));
  ComplexMatrix<T> out = ComplexMatrix<T>::Zero(rho.dim(), rho.dim());
  for (const auto& e : channel.kraus()) out += e * rho.matrix() * e.adjoint();
  return ((out + out.adjoint()) / T(2)).eval();
}

// tr(effect rho): the probability that the operation happens at all.
template <typename T>
T success_prob(const KrausChannelT<T>& channel, const DensityMatrixT<T>& rho) {
  if (channel.dim() != rho.dim())
    fail(Errc::DimensionMismatch, "success_prob: channel dim " + std::to_string(channel.dim()) +
                                      " vs state dim " + std::to_string(rho.dim()));
  return Eigen::numext::real((channel.effect() * rho.matrix()).trace());
}

// The single-operator sub-operation {E_mu}.
template <typename T>
KrausChannelT<T> branch(const KrausChannelT<T>& channel, std::size_t mu) {
  if (mu >= channel.size())
    fail(Errc::IndexOutOfRange, "branch: index " + std::to_string(mu) + " out of range for " +
                                    std::to_string(channel.size()) + " operators");
  return KrausChannelT<T>({channel.kraus()[mu]});
}

// Tensor each Kraus operator with an identity ancilla: E_mu -> E_mu (x) 1.
template <typename T>
KrausChannelT<T> extend(const KrausChannelT<T>& channel, Eigen::Index dim_ancilla) {
  if (dim_ancilla < 1) fail(Errc::DimensionMismatch, "extend: ancilla dimension < 1");
  const ComplexMatrix<T> eye = ComplexMatrix<T>::Identity(dim_ancilla, dim_ancilla);
  std::vector<ComplexMatrix<T>> kraus;
  kraus.reserve(channel.size());
  for (const auto& e : channel.kraus()) kraus.push_back(kron(e, eye));
  return KrausChannelT<T>(std::move(kraus));
}

// Outcome distribution p_mu = tr(A_mu rho).
template <typename T>
RealVector<T> povm_probs(const PovmT<T>& povm, const DensityMatrixT<T>& rho) {
  if (povm.dim() != rho.dim())
    fail(Errc::DimensionMismatch, "povm_probs: povm dim " + std::to_string(povm.dim()) +
                                      " vs state dim " + std::to_string(rho.dim()));
  RealVector<T> probs(static_cast<Eigen::Index>(povm.size()));
  for (std::size_t mu = 0; mu < povm.size(); ++mu)
    probs(static_cast<Eigen::Index>(mu)) =
        Eigen::numext::real((povm.elements()[mu] * rho.matrix()).trace());
  return probs;
}

// The trace-preserving channel with Kraus operators sqrt(A_mu), whose branch
// probabilities reproduce the measurement's outcome distribution.  The square
// root clamps at the povm validation tolerance so any accepted element is
// accepted here too.
template <typename T>
KrausChannelT<T> povm_to_channel(const PovmT<T>& povm) {
  std::vector<ComplexMatrix<T>> kraus;
  kraus.reserve(povm.size());
  for (const auto& a : povm.elements()) kraus.push_back(psd_sqrt(a, PovmT<T>::kValidationTol));
  return KrausChannelT<T>(std::move(kraus));
}

namespace detail {
template <typename T>
void require_nondegenerate(const StatePairThetaT<T>& pair, const char* where) {
  if (std::cos(2 * pair.theta) < T(1e-12))
    fail(Errc::DegeneratePair,
         std::string(where) + ": states coincide at theta = pi/4, no distinguishing operation");
}
}  // namespace detail

// Single Kraus operator |0><0| embedded in the pair's dimension.  On the
// parametrized pair its success probabilities differ by exactly the sine
// distance cos(2 theta), meeting the single-operation bound with equality.
template <typename T>
KrausChannelT<T> bound_saturating_channel(const StatePairThetaT<T>& pair) {
  detail::require_nondegenerate(pair, "bound_saturating_channel");
  const Eigen::Index d = pair.x.dim();
  ComplexMatrix<T> e = ComplexMatrix<T>::Zero(d, d);
  e(0, 0) = T(1);
  return KrausChannelT<T>({std::move(e)});
}

// Two-outcome measurement {|0><0|, |1><1|} in Kraus form.  On the
// parametrized pair the summed branch-probability differences reach
// 2 cos(2 theta), twice the sine distance, meeting the branch-sum bound
// with equality.
template <typename T>
KrausChannelT<T> branch_sum_saturating_channel(const StatePairThetaT<T>& pair) {
  detail::require_nondegenerate(pair, "branch_sum_saturating_channel");
  const Eigen::Index d = pair.x.dim();
  ComplexMatrix<T> e0 = ComplexMatrix<T>::Zero(d, d);
  ComplexMatrix<T> e1 = ComplexMatrix<T>::Zero(d, d);
  e0(0, 0) = T(1);
  e1(1, 1) = T(1);
  return KrausChannelT<T>({std::move(e0), std::move(e1)});
}

// Random operation: between 1 and dim^2 Gaussian operators, rescaled so the
// effect's top eigenvalue lands at a random value in (0, 1] -- exactly 1
// about half the time, so the boundary of the allowed interval is exercised.
inline KrausChannel random_channel(Eigen::Index dim, Rng& rng) {
  const std::uint64_t count = 1 + rng.below(static_cast<std::uint64_t>(dim * dim));
  std::vector<CMatrix> kraus;
  kraus.reserve(count);
  CMatrix effect = CMatrix::Zero(dim, dim);
  for (std::uint64_t mu = 0; mu < count; ++mu) {
    kraus.push_back(ginibre(dim, dim, rng));
    effect += kraus.back().adjoint() * kraus.back();
  }
  const double top = hermitian_eig(((effect + effect.adjoint()) / 2.0).eval()).eigenvalues(0);
  const double target = rng.below(2) == 0 ? 1.0 : rng.uniform(0.05, 1.0);
  const double scale = std::sqrt(target / top);
  for (auto& e : kraus) e *= scale;
  return KrausChannel(std::move(kraus));
}

inline KrausChannel random_channel(Eigen::Index dim, std::uint64_t seed) {
  Rng rng = Rng(seed).derive("random_channel");
  return random_channel(dim, rng);
}

// Random trace-preserving operation: the Kraus operators are dim x dim
// slices of a Haar-distributed isometry (the thin Q factor of a Gaussian
// (dim * count) x dim matrix), so sum E^dagger E = Q^dagger Q = identity by
// construction.
inline KrausChannel random_tp_channel(Eigen::Index dim, Rng& rng) {
  const Eigen::Index count = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(dim * dim)));
  const CMatrix g = ginibre(dim * count, dim, rng);
  const CMatrix q =
      Eigen::HouseholderQR<CMatrix>(g).householderQ() * CMatrix::Identity(dim * count, dim);
  std::vector<CMatrix> kraus;
  kraus.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index k = 0; k < count; ++k) kraus.push_back(q.block(k * dim, 0, dim, dim));
  return KrausChannel(std::move(kraus));
}

inline KrausChannel random_tp_channel(Eigen::Index dim, std::uint64_t seed) {
  Rng rng = Rng(seed).derive("random_tp_channel");
  return random_tp_channel(dim, rng);
}

// Random measurement: positive elements B_mu = G G^dagger normalized by the
// inverse square root of their sum, so completeness holds by construction.
inline Povm random_povm(Eigen::Index dim, std::size_t outcomes, Rng& rng) {
  if (outcomes < 1) fail(Errc::InvalidPovm, "random_povm: need at least one outcome");
  std::vector<CMatrix> raw;
  raw.reserve(outcomes);
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (std::size_t mu = 0; mu < outcomes; ++mu) {
    const CMatrix g = ginibre(dim, dim, rng);
    raw.push_back(g * g.adjoint());
    sum += raw.back();
  }
  const auto eig = hermitian_eig(((sum + sum.adjoint()) / 2.0).eval());
  if (eig.eigenvalues(eig.eigenvalues.size() - 1) <= 0)
    fail(Errc::NotPositive, "random_povm: singular element sum");
  const CMatrix inv_root = eig.eigenvectors *
                           eig.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() *
                           eig.eigenvectors.adjoint();
  std::vector<CMatrix> elements;
  elements.reserve(outcomes);
  for (const auto& b : raw) {
    CMatrix a = inv_root * b * inv_root;
    elements.push_back(((a + a.adjoint()) / 2.0).eval());
  }
  return Povm(std::move(elements));
}

inline Povm random_povm(Eigen::Index dim, std::size_t outcomes, std::uint64_t seed) {
  Rng rng = Rng(seed).derive("random_povm");
  return random_povm(dim, outcomes, rng);
}

}  // namespace sinedist
