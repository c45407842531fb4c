#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pstchain/errors.hpp"
#include "pstchain/experiments.hpp"
#include "pstchain/rng.hpp"

using namespace pstchain;

TEST_SUITE("experiments") {
TEST_CASE("random streams are reproducible and distinct") {
  Rng a(1, 2, 3), b(1, 2, 3), c(1, 3, 3), d(1, 2, 4);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(Rng(1, 2, 3).uniform() != c.uniform());
  CHECK(Rng(1, 2, 3).uniform() != d.uniform());

  // Frozen stream: mt19937_64 seeded by seed_seq{0, 0, 0, 0, 0, 0}.
  std::seed_seq seq{0u, 0u, 0u, 0u, 0u, 0u};
  std::mt19937_64 ref(seq);
  Rng zero(0, 0, 0);
  for (int i = 0; i < 5; ++i) CHECK(zero.uniform() == static_cast<double>(ref() >> 11) * 0x1.0p-53);
}

TEST_CASE("realization reduction") {
  const auto s = run_realizations(4, [](std::uint64_t k) { return double(k); });
  CHECK(s.mean == doctest::Approx(1.5));
  CHECK(s.standard_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  const auto constant = run_realizations(50, [](std::uint64_t) { return 0.7; });
  CHECK(constant.standard_error < 1e-15);

  const auto task = [](std::uint64_t k) { return Rng(9, k).uniform(); };
  const auto one = run_realizations(64, task, 1);
  const auto four = run_realizations(64, task, 4);
  CHECK(one.mean == four.mean);
  CHECK(one.standard_error == four.standard_error);
}

TEST_CASE("standard error shrinks like 1/sqrt(n)") {
  const auto task = [](std::uint64_t k) { return Rng(17, k).uniform(); };
  const double sd = std::sqrt(1.0 / 12.0);
  for (int n : {50, 200, 800}) {
    const auto s = run_realizations(n, task);
    CHECK(s.standard_error == doctest::Approx(sd / std::sqrt(double(n))).epsilon(0.3));
  }
}

TEST_CASE("noise-free scenarios run once") {
  ChainSpec chain;
  chain.n_sites = 6;
  chain.perturbations = {RandomNoise{0.0}};
  const auto s = run_scenario(family_scenario(Family::Unentangled110, chain), 200, 0);
  CHECK(s.n_realizations == 1);
  CHECK(s.mean == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("noisy first peak") {
  ChainSpec chain;
  chain.n_sites = 6;
  chain.perturbations = {RandomNoise{0.1}};
  Scenario sc;
  sc.chain = chain;
  sc.initial = SparseState::basis_state(6, parse_ket("110000"));
  sc.observable = ObservableSpec::fidelity(parse_ket("000011"));
  sc.tau = 0.5;
  sc.refine_peak = true;
  const auto s = run_scenario(sc, 200, 0);
  CHECK(s.mean >= 0.99);
  CHECK(s.mean <= 1.0);
  CHECK(s.standard_error > 0.0);
}

TEST_CASE("gamma-epsilon scan") {
  ScanOptions opt{20, 3, 2};
  const auto scan = scan_gamma_epsilon({0.0, 0.1, 0.2}, {0.0, 0.2}, opt);
  REQUIRE(scan.points.size() == 6);
  CHECK(scan.points[0].summary.mean == doctest::Approx(1.0).epsilon(1e-8));
  for (const auto& p : scan.points) CHECK(p.summary.mean >= 0.9);
  CHECK(scan.points[2].summary.mean <= scan.points[0].summary.mean + 1e-12);
  CHECK(scan.points[4].summary.mean <= scan.points[2].summary.mean + 1e-12);

  const auto again = scan_gamma_epsilon({0.0, 0.1, 0.2}, {0.0, 0.2}, {20, 3, 1});
  for (std::size_t i = 0; i < scan.points.size(); ++i) CHECK(scan.points[i].summary.mean == again.points[i].summary.mean);
}

TEST_CASE("chain-length scans") {
  const ScanOptions opt{10, 0, 1};
  for (Family f : {Family::Unentangled110, Family::BellType1, Family::GateType2}) {
    const auto zero = scan_chain_length(f, ScanPerturbation::NnnAveraged, {0.0}, 4, 9, opt);
    for (const auto& p : zero.points) CHECK(p.summary.mean > 1 - 1e-8);
  }
  const auto small = scan_chain_length(Family::Unentangled110, ScanPerturbation::NnnAveraged, {0.01}, 4, 15, opt);
  double previous = 1.0;
  for (const auto& p : small.points) {
    CHECK(p.summary.mean >= 0.98);
    CHECK(p.summary.mean < previous);
    previous = p.summary.mean;
  }
  const auto gate = scan_chain_length(Family::GateType2, ScanPerturbation::NnnAveraged, {0.05}, 12, 15, opt);
  for (const auto& p : gate.points) CHECK(p.summary.mean >= 0.90);
}

TEST_CASE("decay fit") {
  std::vector<DecayPoint> pts;
  for (int n = 4; n <= 15; ++n)
    for (double p : {0.01, 0.05, 0.1}) pts.push_back({n, p, std::exp(-n * p * p / (0.21 * 0.21))});
  const auto fit = fit_decay(pts);
  CHECK(fit.p0 == doctest::Approx(0.21).epsilon(1e-6));
  CHECK(fit.residual_rms < 1e-12);

  auto scaled = pts;
  for (auto& p : scaled) p.p *= 3.0;
  CHECK(fit_decay(scaled).p0 == doctest::Approx(3.0 * fit.p0).epsilon(1e-14));

  std::vector<DecayPoint> low{{4, 0.1, 0.01}, {5, 0.1, 0.02}, {6, 0.1, 0.03}, {7, 0.1, 0.5}};
  CHECK_THROWS_AS(fit_decay(low), NumericError);
  const auto below = std::count_if(pts.begin(), pts.end(), [](const DecayPoint& p) { return p.value < 0.05; });
  CHECK(below > 0);
  CHECK(fit_decay(pts, 0.05).points_excluded == below);
  CHECK(fit_decay(pts, 0.0).points_excluded == 0);
}
}
