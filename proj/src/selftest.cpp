#include "pstchain/selftest.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "pstchain/chain_model.hpp"
#include "pstchain/dense_oracle.hpp"
#include "pstchain/dynamics.hpp"
#include "pstchain/experiments.hpp"
#include "pstchain/injection.hpp"
#include "pstchain/metrics.hpp"

namespace pstchain {

namespace {

// Scenario generator; draws come from a purpose far away from the simulator's.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed, 0, 1000) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(rng_.uniform() * (hi - lo + 1)); }
  bool coin(double p = 0.5) { return rng_.uniform() < p; }

  // Noise-free spec mixing every deterministic perturbation family.
  ChainSpec chain(int n_min, int n_max) {
    ChainSpec spec;
    spec.n_sites = integer(n_min, n_max);
    spec.j_max = uniform(0.5, 2.0);
    if (coin()) spec.perturbations.push_back(ExcitationInteraction{uniform(0.0, 0.3)});
    if (spec.n_sites >= 3) {
      const int nnn = integer(0, 2);
      if (nnn == 1) spec.perturbations.push_back(NnnAveraged{uniform(0.0, 0.2)});
      if (nnn == 2) spec.perturbations.push_back(NnnDipole{});
    }
    if (coin()) {
      SiteEnergies s{uniform(0.0, 0.5), {}};
      for (int i = 0; i < spec.n_sites; ++i) s.d.push_back(uniform(0.0, 1.0));
      spec.perturbations.push_back(s);
      spec.epsilon_scale = coin() ? EnergyScale::J0 : EnergyScale::Jmax;
    }
    return spec;
  }

  SparseState state(int n_sites, int n_registers) {
    SparseState s(n_sites, n_registers);
    const BasisMask chain_dim = BasisMask{1} << n_sites;
    const BasisMask reg_dim = BasisMask{1} << n_registers;
    const int terms = integer(1, 8);
    for (int t = 0; t < terms; ++t) {
      const auto chain = static_cast<BasisMask>(rng_.uniform() * chain_dim);
      const auto reg = static_cast<BasisMask>(rng_.uniform() * reg_dim);
      s.add(chain, reg, Complex(uniform(-1, 1), uniform(-1, 1)));
    }
    if (s.norm_squared() == 0.0) s.set(0, 0, 1.0);
    s.normalize();
    return s;
  }

  Eigen::Matrix4cd density() {
    Eigen::Matrix4cd a;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = Complex(uniform(-1, 1), uniform(-1, 1));
    Eigen::Matrix4cd rho = a * a.adjoint();
    return rho / rho.trace().real();
  }

 private:
  Rng rng_;
};

// Site energies in units of J0, computed straight from the spec fields.
std::vector<double> oracle_site_energies(const ChainSpec& spec) {
  std::vector<double> e;
  if (const auto* s = spec.find<SiteEnergies>()) {
    const double n = spec.n_sites;
    const double j0 = spec.n_sites % 2 == 0 ? 2.0 * spec.j_max / n : 2.0 * spec.j_max / (n * std::sqrt(1.0 - 1.0 / (n * n)));
    const double scale = spec.epsilon_scale == EnergyScale::Jmax ? spec.j_max / j0 : 1.0;
    for (double d : s->d) e.push_back(s->epsilon * scale * d);
  }
  return e;
}

RealMatrix oracle_hamiltonian(const ChainSpec& spec) {
  const auto* inter = spec.find<ExcitationInteraction>();
  return oracle::full_hamiltonian(spec.n_sites, coupling_profile(spec), oracle_site_energies(spec),
                                  inter ? inter->gamma : 0.0);
}

double max_abs(const ComplexVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Same amplitudes in the full space; the empty state maps to zero.
double distance(const SparseState& s, const ComplexVector& psi) { return max_abs(oracle::to_dense(s) - psi); }

void track(CheckResult& r, double deviation) {
  ++r.cases;
  r.worst = std::max(r.worst, std::isfinite(deviation) ? deviation : INFINITY);
}

}  // namespace

CheckResult check_block_oracle(int scenarios, std::uint64_t seed, int max_sites) {
  CheckResult r{"block assembly vs full-space operator", 0, 0.0, 1e-12};
  Sampler sample(seed);
  for (int s = 0; s < scenarios; ++s) {
    const ChainSpec spec = sample.chain(2, max_sites);
    const auto profile = coupling_profile(spec);
    const RealMatrix full = oracle_hamiltonian(spec);
    RealMatrix assembled = RealMatrix::Zero(full.rows(), full.cols());
    for (int k = 0; k <= spec.n_sites; ++k) {
      const auto block = build_block(spec, profile, k);
      for (std::size_t i = 0; i < block.basis.size(); ++i)
        for (std::size_t j = 0; j < block.basis.size(); ++j)
          assembled(block.basis[i], block.basis[j]) =
              block.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    track(r, (assembled - full).cwiseAbs().maxCoeff());
  }
  return r;
}

CheckResult check_evolution_oracle(int scenarios, std::uint64_t seed, int max_sites) {
  CheckResult r{"sector-wise evolution vs dense propagator", 0, 0.0, 1e-10};
  Sampler sample(seed);
  for (int s = 0; s < scenarios; ++s) {
    const ChainSpec spec = sample.chain(2, max_sites);
    const int n_reg = sample.integer(0, 2);
    const SparseState psi = sample.state(spec.n_sites, n_reg);
    const double tau = sample.uniform(0.0, 3.0);
    const PreparedChain chain = prepare_all_sectors(spec);
    const ComplexVector expected = oracle::evolve(oracle_hamiltonian(spec), oracle::to_dense(psi), n_reg, tau);
    track(r, distance(propagate(psi, chain, tau), expected));
  }
  return r;
}

CheckResult check_partial_trace_oracle(int scenarios, std::uint64_t seed, int max_sites) {
  CheckResult r{"two-site partial trace vs dense trace", 0, 0.0, 1e-10};
  Sampler sample(seed);
  for (int s = 0; s < scenarios; ++s) {
    const int n = sample.integer(2, max_sites);
    const int n_reg = sample.integer(0, 2);
    const SparseState psi = sample.state(n, n_reg);
    const int a = sample.integer(1, n);
    int b = sample.integer(1, n - 1);
    if (b >= a) ++b;
    const auto rho = reduce_two_sites(psi, a, b).rho;
    const auto expected = oracle::partial_trace(oracle::to_dense(psi), n + n_reg, a - 1, b - 1);
    track(r, (rho - expected).cwiseAbs().maxCoeff());
  }
  return r;
}

CheckResult check_injection_oracle(int scenarios, std::uint64_t seed, int max_sites) {
  CheckResult r{"Rabi and partial-SWAP unitaries vs dense gates", 0, 0.0, 1e-10};
  Sampler sample(seed);
  for (int s = 0; s < scenarios; ++s) {
    const int n = sample.integer(2, max_sites);
    const int n_reg = sample.integer(1, 2);
    const SparseState psi = sample.state(n, n_reg);
    const ComplexVector dense = oracle::to_dense(psi);
    const int site = sample.integer(1, n);

    const double theta = sample.uniform(0.0, M_PI), phi = sample.uniform(-M_PI, M_PI);
    track(r, distance(apply_rabi(psi, site, theta, phi), oracle::rabi(dense, n + n_reg, site - 1, theta, phi)));

    const int reg = sample.integer(0, n_reg - 1);
    const double refl = sample.coin(0.25) ? 0.0 : sample.uniform(0.0, 1.0);
    track(r, distance(swap_inject(psi, site, reg, refl), oracle::partial_swap(dense, n + n_reg, site - 1, n + reg, refl)));
  }
  return r;
}

CheckResult check_measurement_oracle(int scenarios, std::uint64_t seed, int max_sites) {
  CheckResult r{"site and register measurements vs dense projectors", 0, 0.0, 1e-10};
  Sampler sample(seed);
  for (int s = 0; s < scenarios; ++s) {
    const int n = sample.integer(2, max_sites);
    const int n_reg = sample.integer(1, 2);
    const SparseState psi = sample.state(n, n_reg);
    const ComplexVector dense = oracle::to_dense(psi);
    const bool on_register = sample.coin();
    const int qubit = on_register ? n + sample.integer(0, n_reg - 1) : sample.integer(0, n - 1);
    const MeasurementPair got = on_register ? measure_register(psi, qubit - n) : measure_site(psi, qubit + 1);
    double worst = 0.0;
    for (int outcome : {0, 1}) {
      const ComplexVector projected = oracle::project(dense, n + n_reg, qubit, outcome);
      const double p = projected.squaredNorm();
      worst = std::max(worst, std::abs(got[outcome].probability - p));
      if (p > 1e-12) worst = std::max(worst, distance(got[outcome].post_state, projected / std::sqrt(p)));
      else if (!got[outcome].empty && got[outcome].probability > 1e-12) worst = INFINITY;
    }
    track(r, worst);
  }
  return r;
}

CheckResult check_werner_concurrence(int points) {
  CheckResult r{"Werner-state concurrence", 0, 0.0, 1e-10};
  Eigen::Vector4cd singlet(0, M_SQRT1_2, -M_SQRT1_2, 0);
  for (int i = 0; i < points; ++i) {
    const double p = points == 1 ? 0.5 : static_cast<double>(i) / (points - 1);
    TwoQubitDensity d;
    d.rho = p * singlet * singlet.adjoint() + (1.0 - p) / 4.0 * Eigen::Matrix4cd::Identity();
    track(r, std::abs(concurrence(d) - std::max(0.0, (3.0 * p - 1.0) / 2.0)));
  }
  return r;
}

CheckResult check_pure_concurrence(int states, std::uint64_t seed) {
  CheckResult r{"pure-state concurrence 2|ad - bc|", 0, 0.0, 1e-10};
  Sampler sample(seed);
  for (int i = 0; i < states; ++i) {
    Eigen::Vector4cd v;
    for (int k = 0; k < 4; ++k) v(k) = Complex(sample.uniform(-1, 1), sample.uniform(-1, 1));
    v.normalize();
    TwoQubitDensity d;
    d.rho = v * v.adjoint();
    track(r, std::abs(concurrence(d) - 2.0 * std::abs(v(0) * v(3) - v(1) * v(2))));
  }
  return r;
}

CheckResult check_mixed_concurrence(int states, std::uint64_t seed) {
  CheckResult r{"mixed-state concurrence vs general eigensolver", 0, 0.0, 1e-7};
  Sampler sample(seed);
  for (int i = 0; i < states; ++i) {
    TwoQubitDensity d;
    d.rho = sample.density();
    track(r, std::abs(concurrence(d) - oracle::concurrence_direct(d.rho)));
  }
  return r;
}

CheckResult check_eof_monotone(int points) {
  CheckResult r{"EoF monotone in concurrence", 0, 0.0, 0.0};
  double prev = eof_from_concurrence(0.0);
  for (int i = 1; i < points; ++i) {
    const double e = eof_from_concurrence(static_cast<double>(i) / (points - 1));
    track(r, std::max(0.0, prev - e));
    prev = e;
  }
  track(r, std::abs(eof_from_concurrence(1.0) - 1.0));
  return r;
}

CheckResult check_pst_mirroring(int n_max) {
  CheckResult r{"unperturbed mirroring and revival", 0, 0.0, 1e-8};
  for (int n = 2; n <= n_max; ++n) {
    ChainSpec spec;
    spec.n_sites = n;
    const std::vector<int> sectors{0, 1, 2};
    const PreparedChain chain = prepare_chain(spec, sectors);
    for (int k = 0; k <= 2; ++k) {
      const auto basis = enumerate_basis(n, k);
      for (BasisMask m : basis.masks()) {
        const SparseState psi = SparseState::basis_state(n, m);
        track(r, 1.0 - fidelity_basis(propagate(psi, chain, 0.5), mirror_mask(m, n)));
        track(r, 1.0 - fidelity_basis(propagate(psi, chain, 1.0), m));
      }
    }
  }
  return r;
}

CheckResult check_basis_counts(int n_max) {
  CheckResult r{"sector sizes, ordering and mirror involution", 0, 0.0, 0.0};
  for (int n = 1; n <= n_max; ++n) {
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
      const auto basis = enumerate_basis(n, k);
      double bad = std::abs(static_cast<double>(basis.size()) - binom);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (popcount(basis[i]) != k || (i && basis[i - 1] >= basis[i])) bad += 1.0;
        if (mirror_mask(mirror_mask(basis[i], n), n) != basis[i]) bad += 1.0;
        if (basis.index_of(basis[i]) != i) bad += 1.0;
      }
      track(r, bad);
      binom = binom * (n - k) / (k + 1);
    }
  }
  return r;
}

CheckResult check_noise_structure(int scenarios, std::uint64_t seed) {
  CheckResult r{"noise keeps blocks symmetric with the clean sparsity", 0, 0.0, 0.0};
  Sampler sample(seed);
  for (int s = 0; s < scenarios; ++s) {
    ChainSpec spec = sample.chain(2, 8);
    ChainSpec noisy = spec;
    noisy.perturbations.push_back(RandomNoise{sample.uniform(0.01, 0.2)});
    const auto profile = coupling_profile(spec);
    const int k = sample.integer(0, spec.n_sites);
    Rng rng(seed, static_cast<std::uint64_t>(s), Rng::noise_purpose(k));
    const auto clean = build_block(spec, profile, k).matrix;
    const auto dirty = build_block(noisy, profile, k, &rng).matrix;
    double bad = (dirty - dirty.transpose()).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < clean.rows(); ++i)
      for (Eigen::Index j = 0; j < clean.cols(); ++j)
        if ((clean(i, j) == 0.0) != (dirty(i, j) == clean(i, j))) bad += 1.0;
    track(r, bad);
  }
  return r;
}

CheckResult check_unitarity(int scenarios, std::uint64_t seed) {
  CheckResult r{"norm preservation and SWAP round trip", 0, 0.0, 1e-10};
  Sampler sample(seed);
  for (int s = 0; s < scenarios; ++s) {
    ChainSpec spec = sample.chain(2, 8);
    spec.perturbations.push_back(RandomNoise{0.1});
    const PreparedChain chain = prepare_all_sectors(spec, seed, static_cast<std::uint64_t>(s));
    const SparseState psi = sample.state(spec.n_sites, 1);
    track(r, std::abs(propagate(psi, chain, sample.uniform(0.0, 4.0)).norm_squared() - 1.0));
    const int site = sample.integer(1, spec.n_sites);
    const SparseState back = swap_inject(swap_inject(psi, site, 0), site, 0);
    track(r, max_abs(oracle::to_dense(back) - oracle::to_dense(psi)));
  }
  return r;
}

CheckResult check_fit_recovery() {
  CheckResult r{"decay-law fit recovers p0", 0, 0.0, 1e-10};
  for (double p0 : {0.21, 0.63, 3.0}) {
    std::vector<DecayPoint> points;
    for (int n = 4; n <= 15; ++n)
      for (double p : {0.2 * p0, 0.35 * p0, 0.5 * p0})
        points.push_back({n, p, std::exp(-n * p * p / (p0 * p0))});
    track(r, std::abs(fit_decay(points).p0 - p0) / p0);
  }
  return r;
}

std::vector<CheckResult> run_selftest() {
  return {
      check_basis_counts(12),
      check_pst_mirroring(8),
      check_block_oracle(50, 11),
      check_evolution_oracle(50, 12),
      check_partial_trace_oracle(50, 13),
      check_injection_oracle(50, 14),
      check_measurement_oracle(50, 15),
      check_noise_structure(30, 16),
      check_unitarity(30, 17),
      check_werner_concurrence(20),
      check_pure_concurrence(100, 18),
      check_mixed_concurrence(100, 19),
      check_eof_monotone(1001),
      check_fit_recovery(),
  };
}

int print_report(const std::vector<CheckResult>& results, std::ostream& out) {
  int failures = 0;
  for (const auto& c : results) {
    failures += c.passed() ? 0 : 1;
    out << fmt::format("{} {:<55} cases={:<5} worst={:.3e} tol={:.1e}\n", c.passed() ? "PASS" : "FAIL", c.name, c.cases,
                       c.worst, c.tolerance);
  }
  return failures;
}

}  // namespace pstchain
