// Spectral factorizations: closed-form 2x2 oracles, the deterministic
// sign/phase conventions, reconstruction, ordering, and gap diagnostics.

#include "doctest.h"

#include "pfm/rng.hpp"
#include "pfm/samplers.hpp"
#include "pfm/spectral.hpp"

#include <cmath>

using namespace pfm;

TEST_SUITE("spectral") {

TEST_CASE("svd of a permuted diagonal matrix") {
  Matrix a(2, 2);
  a << 0, 2,
       3, 0;
  const Svd dec = svd(a);
  CHECK(dec.singular_values[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(dec.singular_values[1] == doctest::Approx(2.0).epsilon(1e-14));
  // Left vectors e2, e1 already satisfy the positive-dominant-entry rule.
  CHECK(std::abs(dec.left(1, 0) - 1.0) < 1e-14);
  CHECK(std::abs(dec.left(0, 1) - 1.0) < 1e-14);
  CHECK(std::abs(dec.right(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(dec.right(1, 1) - 1.0) < 1e-14);
  CHECK(dec.min_gap == doctest::Approx(1.0));
  CHECK_FALSE(dec.near_degenerate);
}

TEST_CASE("svd sign convention pushes the flip into the right factor") {
  Matrix a(2, 2);
  a << -3, 0,
        0, 2;
  const Svd dec = svd(a);
  // Dominant entry of each left vector is positive; the sign of the negative
  // singular direction moves into the right factor.
  CHECK(dec.left(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dec.right(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  const Matrix recon =
      dec.left * dec.singular_values.asDiagonal() * dec.right.transpose();
  CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("rectangular svd with a full left factor") {
  Pcg64 rng(1u, 0u);
  Matrix a(5, 3);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 5; ++i) a(i, j) = rng.normal();

  const Svd dec = svd(a, /*full_left=*/true);
  REQUIRE(dec.left.rows() == 5);
  REQUIRE(dec.left.cols() == 3);
  REQUIRE(dec.right.rows() == 3);
  REQUIRE(dec.left_full.rows() == 5);
  REQUIRE(dec.left_full.cols() == 5);

  CHECK((dec.left.transpose() * dec.left - Matrix::Identity(3, 3))
            .cwiseAbs().maxCoeff() < 1e-12);
  CHECK((dec.right.transpose() * dec.right - Matrix::Identity(3, 3))
            .cwiseAbs().maxCoeff() < 1e-12);
  CHECK((dec.left_full.transpose() * dec.left_full - Matrix::Identity(5, 5))
            .cwiseAbs().maxCoeff() < 1e-12);
  CHECK((dec.left_full.leftCols(3) - dec.left).cwiseAbs().maxCoeff() == 0.0);

  CHECK(dec.singular_values[0] >= dec.singular_values[1]);
  CHECK(dec.singular_values[1] >= dec.singular_values[2]);
  const Matrix recon =
      dec.left * dec.singular_values.asDiagonal() * dec.right.transpose();
  CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(svd(Matrix(a.transpose())), InvalidInput);  // k < r
}

TEST_CASE("svd flags tied singular values") {
  const Svd dec = svd(Matrix::Identity(3, 3));
  CHECK(dec.min_gap == doctest::Approx(0.0));
  CHECK(dec.near_degenerate);
}

TEST_CASE("symmetric eigendecomposition closed form") {
  Matrix a(2, 2);
  a << 2, 1,
       1, 2;
  const SymEig dec = sym_eig(a);
  CHECK(dec.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(dec.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  const double s = 1.0 / std::sqrt(2.0);
  // Ties in magnitude resolve to the lowest index, which is made positive.
  CHECK(dec.vectors(0, 0) == doctest::Approx(s).epsilon(1e-12));
  CHECK(dec.vectors(1, 0) == doctest::Approx(s).epsilon(1e-12));
  CHECK(dec.vectors(0, 1) == doctest::Approx(s).epsilon(1e-12));
  CHECK(dec.vectors(1, 1) == doctest::Approx(-s).epsilon(1e-12));
  const Matrix recon = dec.vectors * dec.eigenvalues.asDiagonal() *
                       dec.vectors.transpose();
  CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("symmetric eigendecomposition input checks") {
  Matrix bad(2, 2);
  bad << 0, 1,
         0, 0;
  CHECK_THROWS_AS(sym_eig(bad), InvalidInput);

  // Asymmetry below the tolerance is symmetrized away, not rejected.
  Matrix tiny(2, 2);
  tiny << 1.0, 0.5 + 1e-12,
          0.5, 2.0;
  CHECK_NOTHROW(sym_eig(tiny));

  const SymEig id = sym_eig(Matrix::Identity(3, 3));
  CHECK(id.near_degenerate);
}

TEST_CASE("hermitian eigendecomposition closed form") {
  const Complex i(0.0, 1.0);
  CMatrix a(2, 2);
  a << 1.0, -i,
       i, 1.0;
  const HermEig dec = herm_eig(a);
  CHECK(dec.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(dec.eigenvalues[1] == doctest::Approx(0.0).scale(1.0));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(dec.vectors(0, 0) - Complex(s, 0.0)) < 1e-12);
  CHECK(std::abs(dec.vectors(1, 0) - Complex(0.0, s)) < 1e-12);
  CHECK(std::abs(dec.vectors(0, 1) - Complex(s, 0.0)) < 1e-12);
  CHECK(std::abs(dec.vectors(1, 1) - Complex(0.0, -s)) < 1e-12);
  const CMatrix recon = dec.vectors *
                        dec.eigenvalues.cast<Complex>().asDiagonal() *
                        dec.vectors.adjoint();
  CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("hermitian phase convention is deterministic") {
  // Build A from an eigenbasis whose columns carry arbitrary phases; the
  // decomposition must rotate each returned vector so its dominant entry is
  // real and positive.
  Pcg64 rng(9u, 0u);
  const CMatrix u = random_unitary(3, rng);
  Vector lam(3);
  lam << 5.0, 2.0, -1.0;
  CMatrix twisted = u;
  twisted.col(0) *= std::polar(1.0, 1.1);
  twisted.col(1) *= std::polar(1.0, -2.3);
  const CMatrix a =
      twisted * lam.cast<Complex>().asDiagonal() * twisted.adjoint();

  const HermEig dec = herm_eig(a);
  for (int j = 0; j < 3; ++j) {
    int arg = 0;
    dec.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    const Complex dominant = dec.vectors(arg, j);
    CHECK(dominant.real() > 0.0);
    CHECK(std::abs(dominant.imag()) < 1e-12 * dominant.real());
  }
  const CMatrix recon = dec.vectors *
                        dec.eigenvalues.cast<Complex>().asDiagonal() *
                        dec.vectors.adjoint();
  CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermitian input checks") {
  const Complex i(0.0, 1.0);
  CMatrix bad(2, 2);
  bad << 1.0, i,
         i, 1.0;
  CHECK_THROWS_AS(herm_eig(bad), InvalidInput);

  const HermEig id = herm_eig(CMatrix::Identity(3, 3));
  CHECK(id.near_degenerate);
}

}  // TEST_SUITE
