#include "pstchain/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pstchain/errors.hpp"

namespace pstchain {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double tunnelling_coupling(double r, double u, double kappa, double prefactor) {
  const double t = prefactor * r * std::exp(-kappa * r);
  return 4.0 * t * t / u;
}

double max_nnn_ratio(const CouplingProfile& p) {
  double best = 0.0;
  for (std::size_t i = 0; i < p.next_nearest.size(); ++i)
    best = std::max(best, p.next_nearest[i] / p.nearest[i]);
  return best;
}

}  // namespace

void ChainSpec::validate() const {
  if (n_sites < 2 || n_sites > kMaxSites) throw ConfigError("n: chain length must lie in [2, 24]");
  if (!(j_max > 0.0)) throw ConfigError("j_max: must be positive");

  int nnn_models = 0;
  int counts[std::variant_size_v<Perturbation>] = {};
  for (const auto& p : perturbations) {
    if (++counts[p.index()] > 1) throw ConfigError("perturbations: duplicate perturbation family");
    std::visit(Overloaded{
                   [&](const SiteEnergies& s) {
                     if (!(s.epsilon >= 0.0)) throw ConfigError("epsilon: must be >= 0");
                     if (!epsilon_scale)
                       throw ConfigError("epsilon_scale_ref: required (J0|Jmax) with epsilon");
                     if (!s.d.empty() && s.d.size() != static_cast<std::size_t>(n_sites))
                       throw ConfigError("site_d: needs one entry per site");
                     for (double d : s.d)
                       if (!(d >= 0.0 && d <= 1.0)) throw ConfigError("site_d: entries must lie in [0,1]");
                   },
                   [](const ExcitationInteraction& e) {
                     if (!(e.gamma >= 0.0)) throw ConfigError("gamma: must be >= 0");
                   },
                   [&](const NnnAveraged& a) {
                     ++nnn_models;
                     if (!(a.delta >= 0.0)) throw ConfigError("delta: must be >= 0");
                   },
                   [&](const NnnDipole&) {
                     ++nnn_models;
                     if (n_sites < 3) throw ConfigError("nnn_dipole: needs n >= 3");
                   },
                   [&](const NnnTunnelling& t) {
                     ++nnn_models;
                     if (!(t.u > 0.0) || !(t.kappa > 0.0) || !(t.prefactor >= 0.0))
                       throw ConfigError("tunnel_*: u, kappa must be positive, prefactor >= 0");
                   },
                   [](const RandomNoise& r) {
                     if (!(r.eta >= 0.0)) throw ConfigError("eta: must be >= 0");
                   },
               },
               p);
  }
  if (nnn_models > 1) throw ConfigError("perturbations: at most one next-nearest model");
}

double ChainSpec::j0() const { return j0_from_jmax(n_sites, j_max); }

bool ChainSpec::is_stochastic() const {
  if (const auto* s = find<SiteEnergies>(); s && s->d.empty() && s->epsilon > 0.0) return true;
  if (const auto* r = find<RandomNoise>(); r && r->eta > 0.0) return true;
  return false;
}

double j0_from_jmax(int n_sites, double j_max) {
  if (n_sites < 2) throw DomainError("j0_from_jmax: n must be >= 2");
  const double n = n_sites;
  if (n_sites % 2 == 0) return 2.0 * j_max / n;
  return 2.0 * j_max / (n * std::sqrt(1.0 - 1.0 / (n * n)));
}

CouplingProfile pst_couplings(int n_sites) {
  if (n_sites < 2) throw DomainError("pst_couplings: n must be >= 2");
  CouplingProfile p;
  p.nearest.reserve(static_cast<std::size_t>(n_sites - 1));
  for (int i = 1; i < n_sites; ++i) p.nearest.push_back(std::sqrt(double(i) * double(n_sites - i)));
  return p;
}

CouplingProfile nnn_averaged(CouplingProfile profile, double delta) {
  if (!(delta >= 0.0)) throw DomainError("nnn_averaged: delta must be >= 0");
  profile.next_nearest.clear();
  for (std::size_t i = 0; i + 1 < profile.nearest.size(); ++i)
    profile.next_nearest.push_back(delta * (profile.nearest[i] + profile.nearest[i + 1]) / 2.0);
  return profile;
}

CouplingProfile nnn_dipole(int n_sites) {
  if (n_sites < 3) throw DomainError("nnn_dipole: n must be >= 3");
  CouplingProfile p = pst_couplings(n_sites);
  const double n = n_sites;
  for (int i = 1; i <= n_sites - 2; ++i) {
    // Distances scale as J^{-1/3}; the i..i+2 distance is the sum of two bonds.
    const double a = std::pow(double(i) * (n - i), -1.0 / 6.0);
    const double b = std::pow(double(i + 1) * (n - i - 1), -1.0 / 6.0);
    p.next_nearest.push_back(std::pow(a + b, -3.0));
  }
  return p;
}

TunnellingResult nnn_tunnelling(int n_sites, double j_max, const NnnTunnelling& params) {
  if (n_sites < 3) throw DomainError("nnn_tunnelling: n must be >= 3");
  if (!(params.u > 0.0 && params.kappa > 0.0 && params.prefactor > 0.0))
    throw ConfigError("nnn_tunnelling: u, kappa and prefactor must be positive");

  const double j0 = j0_from_jmax(n_sites, j_max);
  TunnellingResult out;
  out.profile = pst_couplings(n_sites);

  const double lo0 = 1.0 / params.kappa;
  const double hi0 = 50.0 / params.kappa;
  for (std::size_t i = 0; i < out.profile.nearest.size(); ++i) {
    const double target = j0 * out.profile.nearest[i];
    auto g = [&](double r) {
      return tunnelling_coupling(r, params.u, params.kappa, params.prefactor) - target;
    };
    double lo = lo0, hi = hi0;
    if (!(g(lo) >= 0.0 && g(hi) <= 0.0))
      throw ConfigError("nnn_tunnelling: no bracket on the decreasing branch for bond " +
                        std::to_string(i + 1));
    while (hi - lo > 1e-12 * hi) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) > 0.0 ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    out.geometry.distances.push_back(r);
    out.geometry.residuals.push_back(std::abs(g(r)) / target);
  }

  const auto& d = out.geometry.distances;
  for (std::size_t i = 0; i + 1 < d.size(); ++i)
    out.profile.next_nearest.push_back(
        tunnelling_coupling(d[i] + d[i + 1], params.u, params.kappa, params.prefactor) / j0);
  return out;
}

NnnTunnelling calibrate_tunnelling(int n_sites, double j_max, double target_ratio, double u,
                                   double kappa) {
  if (!(target_ratio > 0.0)) throw DomainError("calibrate_tunnelling: ratio must be positive");
  // The peak of 4 t^2/u sits at R = 1/kappa; the prefactor must lift it above J_max.
  const double j_peak_per_p2 = tunnelling_coupling(1.0 / kappa, u, kappa, 1.0);
  double lo = std::sqrt(j_max / j_peak_per_p2) * (1.0 + 1e-9);
  auto ratio = [&](double prefactor) {
    return max_nnn_ratio(nnn_tunnelling(n_sites, j_max, {u, kappa, prefactor}).profile);
  };
  double hi = 2.0 * lo;
  while (ratio(hi) > target_ratio) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e150) throw NumericError("calibrate_tunnelling: target ratio unreachable");
  }
  if (ratio(lo) < target_ratio) throw NumericError("calibrate_tunnelling: target ratio too large");
  while (hi - lo > 1e-13 * hi) {
    const double mid = std::sqrt(lo * hi);
    (ratio(mid) > target_ratio ? lo : hi) = mid;
  }
  return {u, kappa, std::sqrt(lo * hi)};
}

NnnTunnelling default_tunnelling(double j_max) { return calibrate_tunnelling(8, j_max, 1e-4); }

CouplingProfile coupling_profile(const ChainSpec& spec) {
  if (const auto* a = spec.find<NnnAveraged>()) return nnn_averaged(pst_couplings(spec.n_sites), a->delta);
  if (spec.find<NnnDipole>()) return nnn_dipole(spec.n_sites);
  if (const auto* t = spec.find<NnnTunnelling>()) {
    NnnTunnelling params = *t;
    if (params.prefactor == 0.0) params = calibrate_tunnelling(8, spec.j_max, 1e-4, t->u, t->kappa);
    return nnn_tunnelling(spec.n_sites, spec.j_max, params).profile;
  }
  return pst_couplings(spec.n_sites);
}

ChainSpec realize(const ChainSpec& spec, Rng& rng) {
  ChainSpec out = spec;
  for (auto& p : out.perturbations) {
    if (auto* s = std::get_if<SiteEnergies>(&p); s && s->d.empty()) {
      s->d.resize(static_cast<std::size_t>(spec.n_sites));
      for (double& d : s->d) d = rng.uniform();
    }
  }
  return out;
}

std::vector<double> site_energies(const ChainSpec& spec) {
  std::vector<double> eps(static_cast<std::size_t>(spec.n_sites), 0.0);
  const auto* s = spec.find<SiteEnergies>();
  if (!s || s->epsilon == 0.0) return eps;
  if (s->d.size() != eps.size())
    throw DomainError("site_energies: disorder d_i not drawn; call realize() first");
  const double scale =
      spec.epsilon_scale.value_or(EnergyScale::J0) == EnergyScale::J0 ? 1.0 : spec.j_max / spec.j0();
  for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = s->epsilon * scale * s->d[i];
  return eps;
}

HamiltonianBlock build_block(const ChainSpec& spec, const CouplingProfile& profile, int n_exc,
                             Rng* noise_rng) {
  const int n = spec.n_sites;
  if (profile.nearest.size() != static_cast<std::size_t>(n - 1))
    throw DomainError("build_block: coupling profile does not match chain length");

  HamiltonianBlock block{enumerate_basis(n, n_exc), {}};
  const auto& basis = block.basis;
  const auto dim = static_cast<Eigen::Index>(basis.size());
  block.matrix = RealMatrix::Zero(dim, dim);
  auto& h = block.matrix;

  const auto eps = site_energies(spec);
  const auto* inter = spec.find<ExcitationInteraction>();
  const double gamma = inter ? inter->gamma : 0.0;

  auto hop = [&](Eigen::Index col, BasisMask m, BasisMask pair, double j) {
    const BasisMask both = m & pair;
    if (j == 0.0 || both == 0 || both == pair) return;
    const auto row = basis.index_of(m ^ pair);
    h(static_cast<Eigen::Index>(*row), col) += j;
  };

  for (Eigen::Index k = 0; k < dim; ++k) {
    const BasisMask m = basis[static_cast<std::size_t>(k)];
    double diag = 0.0;
    for (int i = 0; i < n; ++i)
      if ((m >> i) & 1U) diag += eps[static_cast<std::size_t>(i)];
    diag += gamma * popcount(m & (m >> 1));
    h(k, k) = diag;

    for (int i = 0; i + 1 < n; ++i) hop(k, m, BasisMask{3} << i, profile.nearest[static_cast<std::size_t>(i)]);
    for (std::size_t i = 0; i < profile.next_nearest.size(); ++i)
      hop(k, m, BasisMask{5} << i, profile.next_nearest[i]);
  }

  if (const auto* noise = spec.find<RandomNoise>(); noise && noise->eta > 0.0) {
    if (!noise_rng) throw DomainError("build_block: RandomNoise requires an Rng");
    for (Eigen::Index l = 0; l < dim; ++l) {
      for (Eigen::Index m = l; m < dim; ++m) {
        if (h(l, m) == 0.0) continue;
        const double shift = noise->eta * noise_rng->uniform();
        h(l, m) += shift;
        if (m != l) h(m, l) += shift;
      }
    }
  }
  return block;
}

}  // namespace pstchain
