#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "pstchain/chain_model.hpp"
#include "pstchain/dynamics.hpp"
#include "pstchain/linalg.hpp"

using namespace pstchain;

TEST_SUITE("linalg") {
TEST_CASE("two-site block") {
  RealMatrix h(2, 2);
  h << 0, 1, 1, 0;
  const auto d = decompose(h);
  CHECK(d.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("single-excitation PST ladder has spacing 2 J0") {
  ChainSpec spec;
  spec.n_sites = 6;
  const auto d = decompose(build_block(spec, pst_couplings(6), 1));
  for (int k = 0; k + 1 < 6; ++k) CHECK(std::abs(d.eigenvalues(k + 1) - d.eigenvalues(k) - 2.0) < 1e-9);
}

TEST_CASE("random symmetric matrices agree with a reference solver") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 30;
    RealMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(gen);
    const auto d = decompose(a);
    const RealMatrix recon = d.eigenvectors * d.eigenvalues.asDiagonal() * d.eigenvectors.transpose();
    CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<RealMatrix> ref(a);
    CHECK((ref.eigenvalues() - d.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("complex Hermitian input") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix a(4, 4);
    for (int i = 0; i < 4; ++i) {
      a(i, i) = u(gen);
      for (int j = 0; j < i; ++j) {
        a(i, j) = Complex(u(gen), u(gen));
        a(j, i) = std::conj(a(i, j));
      }
    }
    const auto e = jacobi_eigen(a);
    const ComplexMatrix recon = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    CHECK((recon - a).cwiseAbs().maxCoeff() < 1e-10);
  }
}
}
