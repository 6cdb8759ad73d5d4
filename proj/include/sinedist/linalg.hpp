#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "sinedist/errors.hpp"

namespace sinedist {

template <typename T>
using ComplexMatrix = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using ComplexVector = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;
template <typename T>
using RealVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using CMatrix = ComplexMatrix<double>;
using CVector = ComplexVector<double>;

// Default tolerances; every entry point that depends on one takes it as a
// parameter with these values.
inline constexpr double kEigTol = 1e-10;
inline constexpr double kClampTol = 1e-10;
inline constexpr double kCompareTol = 1e-9;

// The eigensolver is meant for the small dense operators this library works
// with; larger inputs are rejected rather than ground through.
inline constexpr Eigen::Index kMaxEigDim = 64;
inline constexpr Eigen::Index kKronDimCap = 4096;

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kEigTol) {
  if (m.rows() != m.cols()) return false;
  if (m.rows() == 0) return true;
  return (m.derived() - m.derived().adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Eigensystem of a Hermitian matrix: eigenvalues sorted descending,
// eigenvector columns orthonormal, A = V diag(w) V^†.
template <typename Scalar>
struct HermEigT {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  RealVector<Real> eigenvalues;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;
};

using HermEig = HermEigT<std::complex<double>>;

// Cyclic Jacobi diagonalization for Hermitian matrices.  Each rotation
// annihilates one off-diagonal pair with a unitary 2x2 block; cycling over
// all pairs drives the off-diagonal mass to zero unconditionally.  Plenty
// for the dimensions this library handles, and free of any dependence on an
// external solver's iteration order.
template <typename Derived>
HermEigT<typename Derived::Scalar> hermitian_eig(const Eigen::MatrixBase<Derived>& m,
                                                 double tol = kEigTol) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (m.rows() != m.cols())
    fail(Errc::NotSquare, "hermitian_eig: matrix is " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
  const Eigen::Index n = m.rows();
  if (n > kMaxEigDim)
    fail(Errc::DimensionOverflow,
         "hermitian_eig: dimension " + std::to_string(n) + " exceeds cap " +
             std::to_string(kMaxEigDim));

  Mat a = m;
  if (n > 0) {
    const Real herm_dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm_dev <= tol))
      fail(Errc::NotHermitian,
           "hermitian_eig: max |A - A^dagger| entry is " + std::to_string(double(herm_dev)));
  }
  a = ((a + a.adjoint()) / Real(2)).eval();

  Mat v = Mat::Identity(n, n);

  const Real scale = n > 0 ? std::max(Real(1), a.cwiseAbs().maxCoeff()) : Real(1);
  const Real stop = scale * Real(n) * Eigen::NumTraits<Real>::epsilon() * Real(4);
  const Real skip = stop / Real(4 * std::max<Eigen::Index>(n, 1));
  const int max_sweeps = 64;

  auto off_norm = [&a, n]() {
    Real sum = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) sum += Eigen::numext::abs2(a(p, q));
    return std::sqrt(Real(2) * sum);
  };

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= stop) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Real r = Eigen::numext::abs(a(p, q));
        if (!(r > skip)) continue;

        const Real app = Eigen::numext::real(a(p, p));
        const Real aqq = Eigen::numext::real(a(q, q));
        const Scalar u = a(p, q) / r;  // phase of the pivot entry
        const Real tau = (aqq - app) / (2 * r);
        const Real t =
            (tau >= Real(0) ? Real(1) : Real(-1)) / (std::abs(tau) + std::sqrt(1 + tau * tau));
        const Real c = Real(1) / std::sqrt(1 + t * t);
        const Real s = t * c;

        // A <- J^† A J with J = I except J(p,p)=J(q,q)=c, J(p,q)=s*u,
        // J(q,p)=-s*conj(u).
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(p, k);
          const Scalar akq = a(q, k);
          a(p, k) = c * akp - s * u * akq;
          a(q, k) = s * Eigen::numext::conj(u) * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * Eigen::numext::conj(u) * akq;
          a(k, q) = s * u * akp + c * akq;
        }
        // The rotation zeroes the pivot pair by construction; write the
        // closed-form block to squash residual roundoff.
        a(p, p) = Scalar(app - t * r);
        a(q, q) = Scalar(aqq + t * r);
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * Eigen::numext::conj(u) * vkq;
          v(k, q) = s * u * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > scale * tol)
    fail(Errc::ConvergenceFailure,
         "hermitian_eig: off-diagonal norm " + std::to_string(double(off_norm())) +
             " after " + std::to_string(max_sweeps) + " sweeps");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&a](Eigen::Index i, Eigen::Index j) {
    return Eigen::numext::real(a(i, i)) > Eigen::numext::real(a(j, j));
  });

  HermEigT<Scalar> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = Eigen::numext::real(a(order[k], order[k]));
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

// V diag(sqrt(max(w,0))) V^† for Hermitian positive semidefinite input.
// Eigenvalues within clamp_tol of zero are treated as exact zeros; anything
// more negative is a genuine contract violation.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> psd_sqrt(
    const Eigen::MatrixBase<Derived>& m, double clamp_tol = kClampTol) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  auto eig = hermitian_eig(m);
  // Eigenvalues that are zero in exact arithmetic come back as rounding noise
  // of order eps * ||m||.  Taking their square root would turn that noise into
  // sqrt(eps)-sized matrix entries, so everything below a small multiple of
  // the noise floor is truncated to zero outright.
  const Real top = std::max(eig.eigenvalues(0), Real(0));
  const Real noise_floor =
      top * Real(4 * eig.eigenvalues.size()) * std::numeric_limits<Real>::epsilon();
  RealVector<Real> roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const Real w = eig.eigenvalues(i);
    if (w < -Real(clamp_tol))
      fail(Errc::NotPositive, "psd_sqrt: eigenvalue " + std::to_string(double(w)) +
                                  " below -" + std::to_string(clamp_tol));
    roots(i) = w > noise_floor ? std::sqrt(w) : Real(0);
  }
  Mat r = eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
  return ((r + r.adjoint()) / Real(2)).eval();
}

// Kronecker product; the result dimension is capped so runaway tensor
// extensions fault loudly instead of exhausting memory.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
    Eigen::Index dim_cap = kKronDimCap) {
  using Mat = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > dim_cap || cols > dim_cap)
    fail(Errc::DimensionOverflow, "kron: product dimension " + std::to_string(rows) + "x" +
                                      std::to_string(cols) + " exceeds cap " +
                                      std::to_string(dim_cap));
  Mat out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b.derived();
  return out;
}

enum class Subsystem { First, Second };

// Trace over one tensor factor of an operator on a dim_first * dim_second
// space; `keep` names the factor that survives.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> partial_trace(
    const Eigen::MatrixBase<Derived>& m, Eigen::Index dim_first, Eigen::Index dim_second,
    Subsystem keep) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (dim_first < 1 || dim_second < 1 || m.rows() != m.cols() ||
      m.rows() != dim_first * dim_second)
    fail(Errc::DimensionMismatch,
         "partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
             std::to_string(m.cols()) + ", expected square of dimension " +
             std::to_string(dim_first * dim_second));

  if (keep == Subsystem::First) {
    Mat out = Mat::Zero(dim_first, dim_first);
    for (Eigen::Index i = 0; i < dim_first; ++i)
      for (Eigen::Index j = 0; j < dim_first; ++j)
        for (Eigen::Index k = 0; k < dim_second; ++k)
          out(i, j) += m(i * dim_second + k, j * dim_second + k);
    return out;
  }
  Mat out = Mat::Zero(dim_second, dim_second);
  for (Eigen::Index k = 0; k < dim_second; ++k)
    for (Eigen::Index l = 0; l < dim_second; ++l)
      for (Eigen::Index i = 0; i < dim_first; ++i)
        out(k, l) += m(i * dim_second + k, i * dim_second + l);
  return out;
}

// True when 0 <= t <= 1 as an operator, judged through eigenvalue bounds.
template <typename Derived>
bool is_effect(const Eigen::MatrixBase<Derived>& t, double tol = kCompareTol) {
  if (t.rows() != t.cols() || !is_hermitian(t, tol)) return false;
  auto eig = hermitian_eig(((t.derived() + t.derived().adjoint()) / 2).eval());
  const Eigen::Index n = eig.eigenvalues.size();
  if (n == 0) return true;
  return eig.eigenvalues(n - 1) >= -tol && eig.eigenvalues(0) <= 1 + tol;
}

}  // namespace sinedist
