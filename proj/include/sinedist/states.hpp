#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sinedist/linalg.hpp"
#include "sinedist/rng.hpp"

namespace sinedist {

// Unit vector in a finite-dimensional complex Hilbert space.  Global phase
// is physically meaningless; nothing here canonicalizes it except where a
// deterministic representative is needed (see purify).
template <typename T = double>
class PureStateT {
public:
  explicit PureStateT(ComplexVector<T> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() < 1) fail(Errc::InvalidState, "pure state: empty amplitude vector");
    const T n = amps_.norm();
    if (!(std::abs(n - T(1)) <= T(1e-10)))
      fail(Errc::InvalidState,
           "pure state: norm is " + std::to_string(double(n)) + ", expected 1 within 1e-10");
  }

  static PureStateT normalized(const ComplexVector<T>& v) {
    const T n = v.norm();
    if (!(n > T(0))) fail(Errc::InvalidState, "pure state: cannot normalize the zero vector");
    return PureStateT(ComplexVector<T>(v / n));
  }

  static PureStateT basis(Eigen::Index dim, Eigen::Index k) {
    if (k < 0 || k >= dim) fail(Errc::IndexOutOfRange, "basis: index out of range");
    ComplexVector<T> v = ComplexVector<T>::Zero(dim);
    v(k) = std::complex<T>(1, 0);
    return PureStateT(std::move(v));
  }

  Eigen::Index dim() const { return amps_.size(); }
  const ComplexVector<T>& amplitudes() const { return amps_; }

  ComplexMatrix<T> projector() const { return amps_ * amps_.adjoint(); }

  std::complex<T> overlap(const PureStateT& other) const {
    if (other.dim() != dim())
      fail(Errc::DimensionMismatch, "overlap: dimensions " + std::to_string(dim()) + " vs " +
                                        std::to_string(other.dim()));
    return amps_.adjoint() * other.amps_;
  }

private:
  ComplexVector<T> amps_;
};

using PureState = PureStateT<double>;

// Hermitian, unit-trace, positive-semidefinite operator.  Construction
// validates all three invariants so nothing downstream has to.
template <typename T = double>
class DensityMatrixT {
public:
  explicit DensityMatrixT(ComplexMatrix<T> m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
      fail(Errc::InvalidState, "density matrix: not square");
    const T herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm <= T(1e-10)))
      fail(Errc::InvalidState, "density matrix: max |M - M^dagger| entry is " +
                                   std::to_string(double(herm)) + ", expected Hermitian within 1e-10");
    const T tr = Eigen::numext::real(m_.trace());
    if (!(std::abs(tr - T(1)) <= T(1e-10)))
      fail(Errc::InvalidState, "density matrix: trace is " + std::to_string(double(tr)) +
                                   ", expected 1 within 1e-10");
    auto eig = hermitian_eig(m_);
    const T wmin = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (!(wmin >= T(-1e-10)))
      fail(Errc::InvalidState, "density matrix: eigenvalue " + std::to_string(double(wmin)) +
                                   " below -1e-10, not positive semidefinite");
  }

  static DensityMatrixT pure(const PureStateT<T>& x) { return DensityMatrixT(x.projector()); }

  static DensityMatrixT maximally_mixed(Eigen::Index dim) {
    return DensityMatrixT(ComplexMatrix<T>(ComplexMatrix<T>::Identity(dim, dim) / T(dim)));
  }

  // Hermitizes and rescales to unit trace before validating.  Meant for
  // operator expressions that are density matrices up to roundoff, e.g. the
  // output of a trace-preserving channel.
  static DensityMatrixT normalized(const ComplexMatrix<T>& m) {
    ComplexMatrix<T> h = (m + m.adjoint()) / T(2);
    const T tr = Eigen::numext::real(h.trace());
    if (!(std::abs(tr) > T(1e-12)))
      fail(Errc::InvalidState, "density matrix: trace too small to normalize");
    return DensityMatrixT(ComplexMatrix<T>(h / tr));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix<T>& matrix() const { return m_; }

private:
  ComplexMatrix<T> m_;
};

using DensityMatrix = DensityMatrixT<double>;

// Pure state on system x ancilla whose reduction to the system factor is a
// prescribed mixed state.
template <typename T = double>
struct PurificationT {
  PureStateT<T> state;
  Eigen::Index dim_system;
  Eigen::Index dim_ancilla;

  // Amplitudes reshaped with the system index as the row.
  ComplexMatrix<T> coefficient_matrix() const {
    ComplexMatrix<T> c(dim_system, dim_ancilla);
    for (Eigen::Index i = 0; i < dim_system; ++i)
      for (Eigen::Index k = 0; k < dim_ancilla; ++k)
        c(i, k) = state.amplitudes()(i * dim_ancilla + k);
    return c;
  }

  ComplexMatrix<T> reduced_system() const {
    return partial_trace(state.projector(), dim_system, dim_ancilla, Subsystem::First);
  }
};

using Purification = PurificationT<double>;

// Schmidt-form purification: sum_j sqrt(w_j) |a_j> (x) |e_j> with {a_j, w_j}
// the spectral decomposition of the input and the ancilla fixed to the
// standard basis.  The ancilla copy has the same dimension as the system.
// The global phase is normalized so the first nonvanishing amplitude is
// real positive, making the output a deterministic function of the input.
template <typename T = double>
PurificationT<T> purify(const DensityMatrixT<T>& sigma) {
  const Eigen::Index d = sigma.dim();
  auto eig = hermitian_eig(sigma.matrix());
  // Rank-deficient inputs come back with rounding noise in place of their
  // zero eigenvalues; square roots would inflate that noise to sqrt(eps)-sized
  // Schmidt coefficients, so weights below the noise floor are dropped, the
  // same cutoff psd_sqrt applies.
  const T top = std::max(eig.eigenvalues(0), T(0));
  const T noise_floor = top * T(4 * d) * std::numeric_limits<T>::epsilon();
  ComplexVector<T> amps = ComplexVector<T>::Zero(d * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const T w = eig.eigenvalues(j);
    if (w <= noise_floor) continue;
    const T root = std::sqrt(w);
    for (Eigen::Index i = 0; i < d; ++i) amps(i * d + j) += root * eig.eigenvectors(i, j);
  }
  amps /= amps.norm();
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const T mag = std::abs(amps(i));
    if (mag > T(1e-12)) {
      amps *= std::conj(amps(i)) / mag;
      break;
    }
  }
  return PurificationT<T>{PureStateT<T>(std::move(amps)), d, d};
}

// Two pure states with a real overlap controlled by one angle:
//   x = cos(theta) e_0 + sin(theta) e_1,   y = sin(theta) e_0 + cos(theta) e_1,
// so <x|y> = sin(2 theta).  The workhorse configuration for studying how
// operations tell nearly parallel states apart.
template <typename T = double>
struct StatePairThetaT {
  T theta;
  PureStateT<T> x;
  PureStateT<T> y;
};

using StatePairTheta = StatePairThetaT<double>;

template <typename T = double>
StatePairThetaT<T> make_pair(T theta, Eigen::Index dim = 2) {
  const T two_theta = 2 * theta;
  if (!(two_theta >= T(0)) || !(two_theta <= T(1.5707963267948966192313216916398)))
    fail(Errc::ThetaOutOfRange,
         "make_pair: 2*theta = " + std::to_string(double(two_theta)) + " outside [0, pi/2]");
  if (dim < 2) fail(Errc::DimensionMismatch, "make_pair: dimension must be at least 2");
  ComplexVector<T> vx = ComplexVector<T>::Zero(dim);
  ComplexVector<T> vy = ComplexVector<T>::Zero(dim);
  vx(0) = std::cos(theta);
  vx(1) = std::sin(theta);
  vy(0) = std::sin(theta);
  vy(1) = std::cos(theta);
  return StatePairThetaT<T>{theta, PureStateT<T>(std::move(vx)), PureStateT<T>(std::move(vy))};
}

// ---- Random ensembles -----------------------------------------------------
//
// All generators consume an explicit Rng (or a bare seed, from which a
// per-generator stream is derived) and hold no hidden state.

inline CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

inline CMatrix random_hermitian(Eigen::Index dim, Rng& rng) {
  CMatrix g = ginibre(dim, dim, rng);
  return (g + g.adjoint()) / 2.0;
}

// Normalized Ginibre construction: G G^dagger / tr(G G^dagger) with G of
// shape dim x rank, which pins the rank of the result.
inline DensityMatrixT<double> random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  if (rank < 1 || rank > dim)
    fail(Errc::BadRank, "random_density: rank " + std::to_string(rank) +
                            " outside [1, " + std::to_string(dim) + "]");
  const CMatrix g = ginibre(dim, rank, rng);
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = (m + m.adjoint()) / 2.0;
  return DensityMatrixT<double>(std::move(m));
}

inline DensityMatrixT<double> random_density(Eigen::Index dim, Eigen::Index rank,
                                             std::uint64_t seed) {
  Rng rng = Rng(seed).derive("random_density");
  return random_density(dim, rank, rng);
}

inline PureStateT<double> random_pure(Eigen::Index dim, Rng& rng) {
  return PureStateT<double>::normalized(ginibre(dim, 1, rng).col(0));
}

inline PureStateT<double> random_pure(Eigen::Index dim, std::uint64_t seed) {
  Rng rng = Rng(seed).derive("random_pure");
  return random_pure(dim, rng);
}

// Haar-distributed unitary: QR of a square Ginibre matrix with the phases
// of the diagonal of R absorbed into Q.
inline CMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  const CMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= mag > 0 ? rjj / mag : std::complex<double>(1, 0);
  }
  return q;
}

inline CMatrix random_unitary(Eigen::Index dim, std::uint64_t seed) {
  Rng rng = Rng(seed).derive("random_unitary");
  return random_unitary(dim, rng);
}

}  // namespace sinedist
