#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "sinedist/metrics.hpp"
#include "sinedist/states.hpp"

using namespace sinedist;

namespace {

Errc thrown_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error to be thrown");
  return Errc::IoError;
}

// Closed form for a pair of qubit states: F = tr(sigma rho) + 2 sqrt(det sigma det rho).
double qubit_fidelity(const DensityMatrix& sigma, const DensityMatrix& rho) {
  const double cross = (sigma.matrix() * rho.matrix()).trace().real();
  const double dets = sigma.matrix().determinant().real() * rho.matrix().determinant().real();
  return cross + 2.0 * std::sqrt(std::max(dets, 0.0));
}

}  // namespace

TEST_CASE("fidelity matches the qubit closed form") {
  Rng rng(31);
  // Full-rank pairs: there the determinants are well conditioned, so the
  // closed form itself is trustworthy at the checked tolerance.  A projector
  // stored in floating point has determinant ~1e-17 instead of 0, and the
  // 2 sqrt(det det) term would turn that into 1e-9 of oracle noise.
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix sigma = random_density(2, 2, rng);
    const DensityMatrix rho = random_density(2, 2, rng);
    CHECK(std::abs(fidelity(sigma, rho) - qubit_fidelity(sigma, rho)) <= 1e-12);
  }
  // Rank-one against mixed: the exact closed form is the expectation value,
  // with no determinant in sight.
  for (int trial = 0; trial < 50; ++trial) {
    const PureState x = random_pure(2, rng);
    const DensityMatrix rho = random_density(2, 2, rng);
    const double expected = (x.amplitudes().adjoint() * rho.matrix() * x.amplitudes())(0, 0).real();
    CHECK(std::abs(fidelity(DensityMatrix::pure(x), rho) - expected) <= 1e-12);
  }
}

TEST_CASE("fidelity of pure states is the squared overlap") {
  Rng rng(32);
  for (Eigen::Index dim : {2, 3, 5}) {
    const PureState x = random_pure(dim, rng);
    const PureState y = random_pure(dim, rng);
    const double expected = std::norm(x.overlap(y));
    CHECK(std::abs(fidelity(DensityMatrix::pure(x), DensityMatrix::pure(y)) - expected) <= 1e-12);
    CHECK(std::abs(fidelity_pure_ref(x, DensityMatrix::pure(y)) - expected) <= 1e-12);
  }
}

TEST_CASE("fidelity of commuting states is the classical overlap of spectra") {
  // Diagonal states: F = (sum_i sqrt(p_i q_i))^2.
  CMatrix a = CMatrix::Zero(3, 3), b = CMatrix::Zero(3, 3);
  a.diagonal() << 0.5, 0.3, 0.2;
  b.diagonal() << 0.1, 0.6, 0.3;
  double root_sum = 0;
  for (int i = 0; i < 3; ++i) root_sum += std::sqrt(a(i, i).real() * b(i, i).real());
  CHECK(std::abs(fidelity(DensityMatrix(a), DensityMatrix(b)) - root_sum * root_sum) <= 1e-12);
}

TEST_CASE("fidelity is symmetric to machine precision, including rank-deficient pairs") {
  Rng rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.below(5));
    const DensityMatrix sigma = random_density(dim, 1 + static_cast<Eigen::Index>(rng.below(dim)), rng);
    const DensityMatrix rho = random_density(dim, 1 + static_cast<Eigen::Index>(rng.below(dim)), rng);
    CHECK(std::abs(fidelity(sigma, rho) - fidelity(rho, sigma)) <= 1e-12);
  }
}

TEST_CASE("fidelity is unitarily invariant and bounded") {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.below(3));
    const DensityMatrix sigma = random_density(dim, dim, rng);
    const DensityMatrix rho = random_density(dim, 1 + static_cast<Eigen::Index>(rng.below(dim)), rng);
    const CMatrix u = random_unitary(dim, rng);
    const DensityMatrix us = DensityMatrix::normalized(u * sigma.matrix() * u.adjoint());
    const DensityMatrix ur = DensityMatrix::normalized(u * rho.matrix() * u.adjoint());
    const double f = fidelity(sigma, rho);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(std::abs(fidelity(us, ur) - f) <= 1e-10);
  }
}

TEST_CASE("fidelity recognizes identical and orthogonal states") {
  const DensityMatrix mm = DensityMatrix::maximally_mixed(4);
  CHECK(std::abs(fidelity(mm, mm) - 1.0) <= 1e-12);
  CHECK(std::abs(fidelity(DensityMatrix::pure(PureState::basis(2, 0)),
                          DensityMatrix::pure(PureState::basis(2, 1)))) <= 1e-12);
  CHECK(thrown_code([&] {
          (void)fidelity(mm, DensityMatrix::maximally_mixed(3));
        }) == Errc::DimensionMismatch);
  CHECK(thrown_code([&] {
          (void)fidelity_pure_ref(PureState::basis(2, 0), DensityMatrix::maximally_mixed(3));
        }) == Errc::DimensionMismatch);
}

TEST_CASE("the report's four measures are the advertised functions of fidelity") {
  Rng rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.below(4));
    const DensityMatrix sigma = random_density(dim, 1 + static_cast<Eigen::Index>(rng.below(dim)), rng);
    const DensityMatrix rho = random_density(dim, 1 + static_cast<Eigen::Index>(rng.below(dim)), rng);
    const DistanceReport rep = distance_report(sigma, rho);
    CHECK(rep.fidelity == fidelity(sigma, rho));
    CHECK(std::abs(rep.sine - std::sqrt(1.0 - rep.fidelity)) <= 1e-15);
    CHECK(std::abs(rep.angle - std::acos(std::sqrt(rep.fidelity))) <= 1e-15);
    CHECK(std::abs(rep.bures - std::sqrt(2.0 - 2.0 * std::sqrt(rep.fidelity))) <= 1e-15);
    // The sine distance is literally the sine of the angle.
    CHECK(std::abs(rep.sine - std::sin(rep.angle)) <= 1e-14);
    CHECK(rep.sine == sine_distance(sigma, rho));
  }
}

TEST_CASE("pure-state angle helpers match the general path") {
  Rng rng(36);
  const PureState x = random_pure(3, rng);
  const PureState y = random_pure(3, rng);
  const double f = std::norm(x.overlap(y));
  CHECK(std::abs(sine_pure(x, y) - std::sqrt(1 - f)) <= 1e-12);
  CHECK(std::abs(angle_pure(x, y) - std::acos(std::sqrt(f))) <= 1e-12);
}

TEST_CASE("nearby states give a tiny distance and far entries force a large one") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.below(3));
    const DensityMatrix sigma = random_density(dim, dim, rng);

    // A perturbation at the 1e-16 entry scale keeps the distance tiny...
    CMatrix wiggle = sigma.matrix();
    wiggle(0, 0) += 1e-16;
    const DensityMatrix close = DensityMatrix::normalized(wiggle);
    const double d_close = sine_distance(sigma, close);
    CHECK(d_close <= 1e-7);
    // ...and a tiny distance really does pin every matrix entry.
    CHECK((sigma.matrix() - close.matrix()).cwiseAbs().maxCoeff() <= 1e-5);

    // Conversely, states that differ in some entry by 0.01 are measurably far.
    const DensityMatrix other = random_density(dim, dim, rng);
    if ((sigma.matrix() - other.matrix()).cwiseAbs().maxCoeff() >= 1e-2)
      CHECK(sine_distance(sigma, other) > 1e-7);
  }
}

TEST_CASE("the variational search reproduces the spectral fidelity") {
  Rng rng(38);
  for (int trial = 0; trial < 9; ++trial) {
    const Eigen::Index dim = 2 + trial % 3;
    const DensityMatrix sigma = random_density(dim, 1 + static_cast<Eigen::Index>(rng.below(dim)), rng);
    const DensityMatrix rho = random_density(dim, 1 + static_cast<Eigen::Index>(rng.below(dim)), rng);
    const double direct = fidelity(sigma, rho);
    const PurificationSearchResult res = fidelity_purification_search(sigma, rho, 2500, 700 + trial);
    CHECK(res.converged);
    CHECK(res.sweeps > 0);
    // The search maximizes over a subset of purifications, so beyond the
    // optimizer tolerance it can only fall short of the true fidelity.
    CHECK(res.value <= direct + 1e-9);
    CHECK(std::abs(res.value - direct) <= 1e-6);
  }
}

TEST_CASE("the variational search is seed-deterministic and validates inputs") {
  const DensityMatrix sigma = random_density(3, 2, std::uint64_t{81});
  const DensityMatrix rho = random_density(3, 3, std::uint64_t{82});
  const auto a = fidelity_purification_search(sigma, rho, 300, 5);
  const auto b = fidelity_purification_search(sigma, rho, 300, 5);
  CHECK(a.value == b.value);
  CHECK(a.sweeps == b.sweeps);

  CHECK(thrown_code([&] {
          (void)fidelity_purification_search(sigma, DensityMatrix::maximally_mixed(2), 100, 1);
        }) == Errc::DimensionMismatch);
  CHECK(thrown_code([] {
          (void)fidelity_purification_search(DensityMatrix::maximally_mixed(7),
                                             DensityMatrix::maximally_mixed(7), 100, 1);
        }) == Errc::DimensionOverflow);
  CHECK(thrown_code([&] {
          (void)fidelity_purification_search(sigma, rho, 0, 1);
        }) == Errc::IndexOutOfRange);
}
