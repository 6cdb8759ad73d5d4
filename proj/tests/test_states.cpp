#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

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

}  // namespace

TEST_CASE("Rng streams are deterministic and tag-separated") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  Rng base(42);
  Rng s1 = base.derive(1);
  Rng s2 = base.derive(2);
  Rng named = base.derive("stream");
  CHECK(s1.uniform() != s2.uniform());
  CHECK(s1.uniform() != named.uniform());

  // seed_state replays the remainder of a stream.
  Rng c(7);
  c.uniform();
  c.uniform();
  Rng replay(c.seed_state());
  CHECK(replay.uniform() == c.uniform());
  CHECK(replay.uniform() == c.uniform());
}

TEST_CASE("Rng draws land in the documented ranges") {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng.below(7) < 7);
    const double v = rng.uniform(2.0, 3.0);
    CHECK(v >= 2.0);
    CHECK(v <= 3.0);
    CHECK(std::isfinite(rng.normal()));
  }
}

TEST_CASE("pure states validate their norm") {
  CVector good(2);
  good << 1.0, 0.0;
  CHECK_NOTHROW(PureState{good});

  CVector bad(2);
  bad << 1.0, 1.0;
  CHECK(thrown_code([&] { PureState{CVector(bad)}; }) == Errc::InvalidState);
  CHECK_NOTHROW(PureState::normalized(bad));
  CHECK(PureState::normalized(bad).amplitudes()(0).real() == doctest::Approx(std::sqrt(0.5)));

  CHECK(thrown_code([] { PureState::normalized(CVector::Zero(3)); }) == Errc::InvalidState);
  CHECK(thrown_code([] { PureState::basis(2, 5); }) == Errc::IndexOutOfRange);
}

TEST_CASE("pure state overlap and projector agree") {
  const PureState x = PureState::basis(3, 0);
  const PureState y = PureState::normalized((CVector(3) << 1, 1, 0).finished());
  CHECK(std::abs(x.overlap(y) - std::complex<double>(std::sqrt(0.5), 0)) <= 1e-15);
  CHECK(std::abs(x.projector().trace() - 1.0) <= 1e-15);
  CHECK(thrown_code([&] { (void)x.overlap(PureState::basis(2, 0)); }) == Errc::DimensionMismatch);
}

TEST_CASE("density matrices validate Hermiticity, trace, and positivity") {
  CHECK_NOTHROW(DensityMatrix::maximally_mixed(3));

  CMatrix not_herm(2, 2);
  not_herm << 0.5, 0.3, 0.0, 0.5;
  CHECK(thrown_code([&] { DensityMatrix{CMatrix(not_herm)}; }) == Errc::InvalidState);

  CMatrix off_trace = 0.7 * CMatrix::Identity(2, 2);
  CHECK(thrown_code([&] { DensityMatrix{CMatrix(off_trace)}; }) == Errc::InvalidState);

  CMatrix indefinite(2, 2);
  indefinite << 1.5, 0, 0, -0.5;
  CHECK(thrown_code([&] { DensityMatrix{CMatrix(indefinite)}; }) == Errc::InvalidState);

  // normalized() forgives scale and roundoff-level asymmetry.
  const DensityMatrix fixed = DensityMatrix::normalized(3.0 * CMatrix::Identity(2, 2));
  CHECK(std::abs(fixed.matrix()(0, 0).real() - 0.5) <= 1e-15);
}

TEST_CASE("one-angle pairs expose the advertised overlap") {
  for (double theta : {0.1, 0.35, 0.7}) {
    const StatePairTheta pair = make_pair(theta);
    const double overlap = pair.x.overlap(pair.y).real();
    CHECK(overlap == doctest::Approx(std::sin(2 * theta)).epsilon(1e-14));
  }
  // Padding dimensions leaves the overlap untouched.
  const StatePairTheta padded = make_pair(0.3, 5);
  CHECK(padded.x.dim() == 5);
  CHECK(padded.x.overlap(padded.y).real() == doctest::Approx(std::sin(0.6)).epsilon(1e-14));

  CHECK(thrown_code([] { make_pair(-0.1); }) == Errc::ThetaOutOfRange);
  CHECK(thrown_code([] { make_pair(1.0); }) == Errc::ThetaOutOfRange);
  CHECK(thrown_code([] { make_pair(0.3, 1); }) == Errc::DimensionMismatch);
}

TEST_CASE("purification reduces back to the state it came from") {
  Rng rng(11);
  for (Eigen::Index dim : {2, 3, 5}) {
    const DensityMatrix sigma = random_density(dim, 1 + static_cast<Eigen::Index>(rng.below(dim)), rng);
    const Purification p = purify(sigma);
    CHECK(p.dim_system == dim);
    CHECK(p.dim_ancilla == dim);
    CHECK(std::abs(p.state.amplitudes().norm() - 1.0) <= 1e-12);
    CHECK((p.reduced_system() - sigma.matrix()).cwiseAbs().maxCoeff() <= 1e-12);

    // The coefficient matrix is the other route to the same reduction.
    const CMatrix c = p.coefficient_matrix();
    CHECK((c * c.adjoint() - sigma.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("purify is deterministic") {
  const DensityMatrix sigma = random_density(3, 2, std::uint64_t{55});
  const Purification p1 = purify(sigma);
  const Purification p2 = purify(sigma);
  CHECK((p1.state.amplitudes() - p2.state.amplitudes()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random densities are valid states of the requested rank") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.below(4));
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng.below(dim));
    const DensityMatrix rho = random_density(dim, rank, rng);
    CHECK(std::abs(rho.matrix().trace().real() - 1.0) <= 1e-12);
    const auto eig = hermitian_eig(rho.matrix());
    Eigen::Index positive = 0;
    for (Eigen::Index i = 0; i < dim; ++i)
      if (eig.eigenvalues(i) > 1e-12) ++positive;
    CHECK(positive <= rank);
  }
}

TEST_CASE("seeded generator overloads reproduce their streams") {
  const DensityMatrix a = random_density(3, 2, std::uint64_t{99});
  const DensityMatrix b = random_density(3, 2, std::uint64_t{99});
  CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() == 0.0);
  const DensityMatrix c = random_density(3, 2, std::uint64_t{100});
  CHECK((a.matrix() - c.matrix()).cwiseAbs().maxCoeff() > 0.0);

  const PureState x = random_pure(4, std::uint64_t{3});
  const PureState y = random_pure(4, std::uint64_t{3});
  CHECK((x.amplitudes() - y.amplitudes()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random unitaries are unitary") {
  Rng rng(17);
  for (Eigen::Index dim : {2, 3, 6}) {
    const CMatrix u = random_unitary(dim, rng);
    CHECK((u.adjoint() * u - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const CMatrix u1 = random_unitary(3, std::uint64_t{21});
  const CMatrix u2 = random_unitary(3, std::uint64_t{21});
  CHECK((u1 - u2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ginibre matrices have roughly standard moments") {
  Rng rng(19);
  const CMatrix g = ginibre(40, 40, rng);
  double mean = 0, second = 0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      mean += g(i, j).real() + g(i, j).imag();
      second += std::norm(g(i, j));
    }
  const double n = static_cast<double>(g.size());
  CHECK(std::abs(mean / (2 * n)) <= 0.05);        // entry components have mean 0
  CHECK(std::abs(second / n - 2.0) <= 0.15);      // E|g|^2 = 2 for unit-variance parts
}
