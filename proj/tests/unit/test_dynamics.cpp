#include <doctest.h>

#include <cmath>

#include "pstchain/dense_oracle.hpp"
#include "pstchain/dynamics.hpp"
#include "pstchain/errors.hpp"
#include "pstchain/metrics.hpp"

using namespace pstchain;

namespace {
ChainSpec plain(int n) {
  ChainSpec spec;
  spec.n_sites = n;
  return spec;
}
}  // namespace

TEST_SUITE("dynamics") {
TEST_CASE("two-site exchange") {
  const auto chain = prepare_all_sectors(plain(2));
  const auto psi = SparseState::basis_state(2, parse_ket("10"));
  for (double tau : {0.1, 0.25, 0.5}) {
    const double expected = std::pow(std::sin(M_PI * tau), 2);
    CHECK(fidelity_basis(propagate(psi, chain, tau), parse_ket("01")) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("mirroring and revival") {
  const auto chain6 = prepare_all_sectors(plain(6));
  CHECK(fidelity_basis(propagate(SparseState::basis_state(6, parse_ket("110000")), chain6, 0.5), parse_ket("000011")) >
        1 - 1e-9);
  const auto chain8 = prepare_all_sectors(plain(8));
  for (BasisMask m = 0; m < 256; m += 7)
    CHECK(fidelity_basis(propagate(SparseState::basis_state(8, m), chain8, 1.0), m) > 1 - 1e-9);
}

TEST_CASE("propagation composes") {
  ChainSpec spec = plain(5);
  spec.perturbations = {NnnAveraged{0.1}, ExcitationInteraction{0.2}};
  const auto chain = prepare_all_sectors(spec);
  SparseState psi = plus_on_ends(5);
  const auto once = oracle::to_dense(propagate(psi, chain, 0.7));
  const auto twice = oracle::to_dense(propagate(propagate(psi, chain, 0.3), chain, 0.4));
  CHECK((once - twice).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("series on the unperturbed chain") {
  const auto chain = prepare_all_sectors(plain(6));
  const auto psi = SparseState::basis_state(6, parse_ket("110000"));
  const auto series =
      evolve_series(psi, chain, TimeGrid::uniform(3.0), {fidelity_observer("twin", parse_ket("000011")), norm_observer()});
  CHECK(series.size() == 3001);
  for (double centre : {0.5, 1.5, 2.5}) {
    const auto p = find_peak(series, "twin", centre, 0.1);
    CHECK(p.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(p.tau_star == doctest::Approx(centre).epsilon(1e-6));
  }
  for (double v : series.column("norm")) CHECK(std::abs(v - 1.0) < 1e-10);

  const auto one = evolve_series(psi, chain, TimeGrid::single(0.0), {fidelity_observer("self", parse_ket("110000"))});
  CHECK(one.rows.at(0).at(0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("long uniform grid keeps the norm") {
  ChainSpec spec = plain(6);
  spec.perturbations = {RandomNoise{0.1}};
  const auto chain = prepare_all_sectors(spec, 5, 2);
  const auto series = evolve_series(bell_first_pair(6), chain, TimeGrid::uniform(4.999), {norm_observer()});
  CHECK(series.size() == 5000);
  for (double v : series.column("norm")) CHECK(std::abs(v - 1.0) < 1e-10);
}

TEST_CASE("trajectories") {
  const auto chain = prepare_all_sectors(plain(4));
  Trajectory t;
  const auto psi = SparseState::basis_state(4, parse_ket("1000"));
  t.add_segment(0.0, psi, chain);
  t.add_segment(0.2, SparseState::basis_state(4, parse_ket("0100")), chain);
  CHECK(fidelity_basis(t.state_at(0.1), parse_ket("1000")) ==
        doctest::Approx(fidelity_basis(propagate(psi, chain, 0.1), parse_ket("1000"))));
  CHECK(fidelity_basis(t.state_at(0.2), parse_ket("0100")) == doctest::Approx(1.0));
  CHECK_THROWS(t.state_at(-0.1));
}

TEST_CASE("missing sector") {
  const std::vector<int> only_one{1};
  const auto chain = prepare_chain(plain(4), only_one);
  CHECK_THROWS_AS(propagate(SparseState::basis_state(4, parse_ket("1100")), chain, 0.1), DomainError);
}

TEST_CASE("grids") {
  const auto g = TimeGrid::uniform(1.0, 10);
  CHECK(g.tau.size() == 11);
  CHECK(g.tau.back() == doctest::Approx(1.0));
  TimeGrid bad;
  bad.tau = {0.2, 0.1};
  CHECK_THROWS(evolve_series(SparseState::basis_state(2, 1), prepare_all_sectors(plain(2)), bad, {}));
}
}
