#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "sinedist/linalg.hpp"
#include "sinedist/rng.hpp"
#include "sinedist/states.hpp"

namespace sinedist {

namespace detail {
template <typename T>
T clamp01(T v) {
  return std::min(std::max(v, T(0)), T(1));
}
}  // namespace detail

// Angle between rays: arccos |<x|y>|, in [0, pi/2].
template <typename T>
T angle_pure(const PureStateT<T>& x, const PureStateT<T>& y) {
  const T ov = detail::clamp01(std::abs(x.overlap(y)));
  return std::acos(ov);
}

// sqrt(1 - |<x|y>|^2), evaluated from the overlap itself rather than by an
// arccos/sin round trip.
template <typename T>
T sine_pure(const PureStateT<T>& x, const PureStateT<T>& y) {
  const T ov = detail::clamp01(std::abs(x.overlap(y)));
  return std::sqrt(std::max(T(0), T(1) - ov * ov));
}

// Uhlmann fidelity, evaluated as the squared trace norm of
// sqrt(sigma) * sqrt(rho).  Summing singular values keeps every term
// accurate to machine precision: the equivalent eigenvalue form would take
// square roots of the product's near-zero eigenvalues, whose rounding noise
// of order eps inflates to sqrt(eps) and breaks the symmetry of the result
// in the two arguments at that scale.
template <typename T>
T fidelity(const DensityMatrixT<T>& sigma, const DensityMatrixT<T>& rho) {
  if (sigma.dim() != rho.dim())
    fail(Errc::DimensionMismatch, "fidelity: dimensions " + std::to_string(sigma.dim()) +
                                      " vs " + std::to_string(rho.dim()));
  const ComplexMatrix<T> product = psd_sqrt(sigma.matrix()) * psd_sqrt(rho.matrix());
  Eigen::JacobiSVD<ComplexMatrix<T>> svd(product);
  const T sum = svd.singularValues().sum();
  return detail::clamp01(sum * sum);
}

// Fidelity against a pure reference collapses to an expectation value.
template <typename T>
T fidelity_pure_ref(const PureStateT<T>& x, const DensityMatrixT<T>& rho) {
  if (x.dim() != rho.dim())
    fail(Errc::DimensionMismatch, "fidelity_pure_ref: dimensions " + std::to_string(x.dim()) +
                                      " vs " + std::to_string(rho.dim()));
  const std::complex<T> v = (x.amplitudes().adjoint() * rho.matrix() * x.amplitudes())(0, 0);
  return detail::clamp01(Eigen::numext::real(v));
}

template <typename T>
T sine_distance(const DensityMatrixT<T>& sigma, const DensityMatrixT<T>& rho) {
  return std::sqrt(std::max(T(0), T(1) - fidelity(sigma, rho)));
}

// The four closeness measures that are monotone functions of one another.
template <typename T = double>
struct DistanceReportT {
  T fidelity;  // in [0, 1]
  T sine;      // sqrt(1 - fidelity), in [0, 1]
  T angle;     // arccos sqrt(fidelity), in [0, pi/2]
  T bures;     // sqrt(2 - 2 sqrt(fidelity)), in [0, sqrt(2)]
};

using DistanceReport = DistanceReportT<double>;

template <typename T>
DistanceReportT<T> distance_report(const DensityMatrixT<T>& sigma, const DensityMatrixT<T>& rho) {
  const T f = fidelity(sigma, rho);
  const T root = std::sqrt(f);
  DistanceReportT<T> rep;
  rep.fidelity = f;
  rep.sine = std::sqrt(std::max(T(0), T(1) - f));
  rep.angle = std::acos(detail::clamp01(root));
  rep.bures = std::sqrt(std::max(T(0), T(2) - 2 * root));
  return rep;
}

struct PurificationSearchResult {
  double value = 0;      // best squared overlap found; a lower bound on the fidelity
  bool converged = false;  // every restart refined its step below the floor
  int sweeps = 0;        // refinement sweeps spent in total
};

// Independent cross-check of the fidelity: directly search the variational
// characterization max_V |<X| (1 (x) V) |Y>|^2 over ancilla unitaries V,
// with X, Y the fixed Schmidt-form purifications.  Random restarts plus
// greedy refinement over Givens/phase perturbations of V; never touches the
// sandwich-eigenvalue path that fidelity() uses.  Small dimensions only.
inline PurificationSearchResult fidelity_purification_search(const DensityMatrixT<double>& sigma,
                                                             const DensityMatrixT<double>& rho,
                                                             int iterations, std::uint64_t seed) {
  if (sigma.dim() != rho.dim())
    fail(Errc::DimensionMismatch, "fidelity_purification_search: dimension mismatch");
  const Eigen::Index d = sigma.dim();
  if (d > 6)
    fail(Errc::DimensionOverflow,
         "fidelity_purification_search: dimension " + std::to_string(d) + " exceeds 6");
  if (iterations < 1) fail(Errc::IndexOutOfRange, "fidelity_purification_search: iterations < 1");

  const CMatrix xc = purify(sigma).coefficient_matrix();
  const CMatrix yc = purify(rho).coefficient_matrix();
  // <X|(1 (x) V)|Y> contracts to an entrywise sum against A = X^dagger Y.
  const CMatrix a = xc.adjoint() * yc;
  const auto objective = [&a](const CMatrix& v) {
    return std::norm((a.array() * v.array()).sum());
  };

  Rng rng = Rng(seed).derive("fidelity_purification_search");
  constexpr int kRestarts = 4;
  constexpr double kStepFloor = 1e-8;

  PurificationSearchResult result;
  result.converged = true;
  for (int restart = 0; restart < kRestarts; ++restart) {
    CMatrix v = restart == 0 ? CMatrix(CMatrix::Identity(d, d)) : random_unitary(d, rng);
    double best = objective(v);
    double step = 0.8;
    int sweep = 0;
    for (; sweep < iterations && step >= kStepFloor; ++sweep) {
      bool improved = false;
      const double c = std::cos(step), s = std::sin(step);
      const std::complex<double> phase(std::cos(step), std::sin(step));
      // Plane rotations, both a real and an imaginary pivot phase.
      for (Eigen::Index p = 0; p < d; ++p) {
        for (Eigen::Index q = p + 1; q < d; ++q) {
          for (int kind = 0; kind < 4; ++kind) {
            const double ss = (kind & 1) ? -s : s;
            const std::complex<double> u =
                (kind & 2) ? std::complex<double>(0, 1) : std::complex<double>(1, 0);
            CMatrix w = v;
            w.col(p) = c * v.col(p) - ss * std::conj(u) * v.col(q);
            w.col(q) = ss * u * v.col(p) + c * v.col(q);
            const double val = objective(w);
            if (val > best) {
              best = val;
              v = std::move(w);
              improved = true;
            }
          }
        }
        // Diagonal phase twists.
        for (int sign = 0; sign < 2; ++sign) {
          CMatrix w = v;
          w.col(p) *= sign ? std::conj(phase) : phase;
          const double val = objective(w);
          if (val > best) {
            best = val;
            v = std::move(w);
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (step >= kStepFloor) result.converged = false;
    result.sweeps += sweep;
    result.value = std::max(result.value, best);
  }
  result.value = detail::clamp01(result.value);
  return result;
}

}  // namespace sinedist
