#include <doctest.h>

#include <cmath>

#include "pstchain/chain_model.hpp"
#include "pstchain/dense_oracle.hpp"
#include "pstchain/errors.hpp"

using namespace pstchain;

TEST_SUITE("chain_model") {
TEST_CASE("energy scale") {
  CHECK(j0_from_jmax(6, 1.0) == doctest::Approx(1.0 / 3.0));
  CHECK(j0_from_jmax(2, 1.0) == doctest::Approx(1.0));
  CHECK(j0_from_jmax(3, 1.0) == doctest::Approx(M_SQRT1_2));
  for (int n = 2; n <= 15; ++n) {
    const auto p = pst_couplings(n);
    const double largest = *std::max_element(p.nearest.begin(), p.nearest.end());
    CHECK(largest * j0_from_jmax(n, 2.5) == doctest::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("PST couplings") {
  const auto p = pst_couplings(6);
  const std::vector<double> expected{std::sqrt(5.0), std::sqrt(8.0), 3.0, std::sqrt(8.0), std::sqrt(5.0)};
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(p.nearest[i] == doctest::Approx(expected[i]));
  CHECK(pst_couplings(2).nearest == std::vector<double>{1.0});
  for (int n = 2; n <= 20; ++n) {
    const auto q = pst_couplings(n).nearest;
    CHECK(std::equal(q.begin(), q.end(), q.rbegin()));
  }
}

TEST_CASE("averaged next-nearest couplings") {
  CHECK(nnn_averaged(pst_couplings(6), 0.01).next_nearest[0] == doctest::Approx(0.01 * (std::sqrt(5.0) + std::sqrt(8.0)) / 2));
  CHECK(nnn_averaged(pst_couplings(8), 0.12).next_nearest[0] == doctest::Approx(0.3666).epsilon(1e-3));
  for (double j : nnn_averaged(pst_couplings(7), 0.0).next_nearest) CHECK(j == 0.0);
}

TEST_CASE("dipole couplings match point dipoles placed on a line") {
  // Sites on a line with nearest-neighbour distance R_i = J_i^{-1/3}; a 1/R^3
  // interaction then reproduces the PST couplings and fixes the i, i+2 ones.
  for (int n : {5, 8, 11}) {
    const auto p = pst_couplings(n);
    std::vector<double> x{0.0};
    for (double j : p.nearest) x.push_back(x.back() + std::cbrt(1.0 / j));
    const auto dip = nnn_dipole(n);
    for (int i = 0; i + 2 < n; ++i)
      CHECK(dip.next_nearest[static_cast<std::size_t>(i)] == doctest::Approx(1.0 / std::pow(x[i + 2] - x[i], 3)).epsilon(1e-12));
    CHECK(std::equal(dip.next_nearest.begin(), dip.next_nearest.end(), dip.next_nearest.rbegin(),
                     [](double a, double b) { return std::abs(a - b) < 1e-14; }));
  }
  const auto d8 = nnn_dipole(8);
  CHECK(d8.next_nearest[0] == doctest::Approx(0.37728193).epsilon(1e-7));
  const double ratio = d8.next_nearest[0] / ((d8.nearest[0] + d8.nearest[1]) / 2);
  CHECK(ratio == doctest::Approx(0.123).epsilon(0.01));
}

TEST_CASE("tunnelling couplings") {
  const auto calibrated = default_tunnelling(1.0);
  const auto result = nnn_tunnelling(8, 1.0, calibrated);
  double ratio = 0.0;
  for (std::size_t i = 0; i < result.profile.next_nearest.size(); ++i)
    ratio = std::max(ratio, result.profile.next_nearest[i] / result.profile.nearest[i]);
  CHECK(ratio >= 0.5e-4);
  CHECK(ratio <= 2e-4);
  for (double r : result.geometry.residuals) CHECK(r < 1e-9);

  // With t = P R exp(-kappa R) the geometry depends on kappa / P alone through x = kappa R.
  const auto max_ratio = [](const CouplingProfile& prof) {
    double r = 0.0;
    for (std::size_t i = 0; i < prof.next_nearest.size(); ++i) r = std::max(r, prof.next_nearest[i] / prof.nearest[i]);
    return r;
  };
  SUBCASE("ratio falls as kappa R grows") {
    double previous = INFINITY;
    for (double scale : {1.0, 2.0, 5.0, 20.0, 100.0}) {
      const auto res = nnn_tunnelling(8, 1.0, {1.0, 1.0, scale * calibrated.prefactor});
      const double r = max_ratio(res.profile);
      CHECK(r < previous);
      previous = r;
    }
  }
  SUBCASE("kappa at fixed kappa / P rescales lengths only") {
    const auto base = nnn_tunnelling(8, 1.0, {1.0, 1.0, 10 * calibrated.prefactor});
    for (double kappa : {1.2, 1.5, 2.0, 2.5}) {
      const auto res = nnn_tunnelling(8, 1.0, {1.0, kappa, kappa * 10 * calibrated.prefactor});
      CHECK(max_ratio(res.profile) == doctest::Approx(max_ratio(base.profile)).epsilon(1e-8));
      CHECK(res.geometry.distances[0] * kappa == doctest::Approx(base.geometry.distances[0]).epsilon(1e-10));
    }
  }
  SUBCASE("only 4 t^2 / u matters") {
    const auto a = nnn_tunnelling(8, 1.0, {1.0, 1.0, calibrated.prefactor});
    const auto b = nnn_tunnelling(8, 1.0, {1e6, 1.0, calibrated.prefactor * 1e3});
    for (std::size_t i = 0; i < a.geometry.distances.size(); ++i)
      CHECK(a.geometry.distances[i] == doctest::Approx(b.geometry.distances[i]).epsilon(1e-10));
  }
  CHECK_THROWS_AS(nnn_tunnelling(8, 1.0, {1.0, 1.0, 1e-3}), ConfigError);
}

TEST_CASE("spec validation") {
  ChainSpec spec;
  spec.n_sites = 6;
  spec.perturbations = {SiteEnergies{0.1, {}}};
  CHECK_THROWS_WITH_AS(spec.validate(), doctest::Contains("J0|Jmax"), ConfigError);
  spec.epsilon_scale = EnergyScale::J0;
  CHECK_NOTHROW(spec.validate());
  spec.perturbations.push_back(NnnAveraged{0.1});
  spec.perturbations.push_back(NnnDipole{});
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.perturbations = {ExcitationInteraction{0.1}, ExcitationInteraction{0.2}};
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("block contents") {
  ChainSpec spec;
  spec.n_sites = 6;
  const auto b1 = build_block(spec, pst_couplings(6), 1);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const double expected = std::abs(i - j) == 1 ? std::sqrt(double(std::min(i, j) + 1) * (5 - std::min(i, j))) : 0.0;
      CHECK(b1.matrix(i, j) == doctest::Approx(expected));
    }

  spec.perturbations = {ExcitationInteraction{0.1}};
  const auto b3 = build_block(spec, pst_couplings(6), 3);
  CHECK(b3.matrix(*b3.basis.index_of(parse_ket("111000")), *b3.basis.index_of(parse_ket("111000"))) == doctest::Approx(0.2));
  CHECK(b3.matrix(*b3.basis.index_of(parse_ket("101010")), *b3.basis.index_of(parse_ket("101010"))) == 0.0);
  const auto b2 = build_block(spec, pst_couplings(6), 2);
  CHECK(b2.matrix(*b2.basis.index_of(parse_ket("110000")), *b2.basis.index_of(parse_ket("110000"))) == doctest::Approx(0.1));
  CHECK(b2.matrix(*b2.basis.index_of(parse_ket("101000")), *b2.basis.index_of(parse_ket("101000"))) == 0.0);

  SUBCASE("next-nearest entry matches the projected full-space operator") {
    ChainSpec s;
    s.n_sites = 6;
    s.perturbations = {NnnAveraged{0.05}};
    const auto profile = coupling_profile(s);
    const auto block = build_block(s, profile, 2);
    const RealMatrix full = oracle::full_hamiltonian(6, profile, {}, 0.0);
    const BasisMask a = parse_ket("100100"), b = parse_ket("100001");
    CHECK(block.matrix(*block.basis.index_of(a), *block.basis.index_of(b)) == doctest::Approx(full(a, b)));
    CHECK(full(a, b) == doctest::Approx(0.05 * (profile.nearest[3] + profile.nearest[4]) / 2));
  }
}

TEST_CASE("site energies and their reference scale") {
  ChainSpec spec;
  spec.n_sites = 6;
  spec.j_max = 1.0;
  spec.perturbations = {SiteEnergies{0.2, {0.5, 1.0, 0.0, 0.25, 0.75, 1.0}}};
  spec.epsilon_scale = EnergyScale::J0;
  CHECK(site_energies(spec)[1] == doctest::Approx(0.2));
  spec.epsilon_scale = EnergyScale::Jmax;
  CHECK(site_energies(spec)[1] == doctest::Approx(0.2 * 3.0));  // J_max / J0 = 3 at N = 6
}

TEST_CASE("noise") {
  ChainSpec spec;
  spec.n_sites = 5;
  spec.perturbations = {RandomNoise{0.1}};
  const auto profile = pst_couplings(5);
  Rng a(42, 3, Rng::noise_purpose(2)), b(42, 3, Rng::noise_purpose(2));
  const auto x = build_block(spec, profile, 2, &a).matrix;
  const auto y = build_block(spec, profile, 2, &b).matrix;
  CHECK(x == y);
  CHECK((x - x.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) CHECK(x(i, i) == 0.0);
  CHECK_THROWS_AS(build_block(spec, profile, 2), DomainError);
}
}
