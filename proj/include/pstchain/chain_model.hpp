#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "pstchain/basis.hpp"
#include "pstchain/linalg.hpp"
#include "pstchain/rng.hpp"

namespace pstchain {

/// Reference energy for on-site disorder: eps_i = epsilon * J0 * d_i or
/// eps_i = epsilon * J_max * d_i.
enum class EnergyScale { J0, Jmax };

/// On-site energies eps_i |1><1|_i. An empty `d` is drawn flat in [0,1) per
/// realization.
struct SiteEnergies {
  double epsilon = 0.0;
  std::vector<double> d;
};

/// gamma * J0 for every pair of excited neighbours.
struct ExcitationInteraction {
  double gamma = 0.0;
};

/// J_{i,i+2} = delta * (J_{i,i+1} + J_{i+1,i+2}) / 2.
struct NnnAveraged {
  double delta = 0.0;
};

/// Next-nearest couplings of 1/R^3 interacting sites placed to realize the
/// PST profile.
struct NnnDipole {};

/// Tunnelling coupling 4 t(R)^2 / u with t(R) = prefactor * R * exp(-kappa R).
/// prefactor == 0 selects the N = 8, ratio 1e-4 calibration for the given
/// u and kappa.
struct NnnTunnelling {
  double u = 1.0;
  double kappa = 1.0;
  double prefactor = 0.0;
};

/// eta * J0 * d_{l,m} added to every non-zero Hamiltonian entry.
struct RandomNoise {
  double eta = 0.0;
};

using Perturbation = std::variant<SiteEnergies, ExcitationInteraction, NnnAveraged, NnnDipole,
                                  NnnTunnelling, RandomNoise>;

struct ChainSpec {
  int n_sites = 2;
  double j_max = 1.0;
  std::vector<Perturbation> perturbations;
  std::optional<EnergyScale> epsilon_scale;

  /// Throws ConfigError on an inconsistent device description.
  void validate() const;
  double j0() const;
  bool is_stochastic() const;

  template <typename T>
  const T* find() const {
    for (const auto& p : perturbations)
      if (const auto* hit = std::get_if<T>(&p)) return hit;
    return nullptr;
  }
};

/// Couplings in units of J0.
struct CouplingProfile {
  std::vector<double> nearest;       // J_{i,i+1}, i = 1..N-1
  std::vector<double> next_nearest;  // J_{i,i+2}, i = 1..N-2, empty when absent
};

double j0_from_jmax(int n_sites, double j_max);

CouplingProfile pst_couplings(int n_sites);
CouplingProfile nnn_averaged(CouplingProfile profile, double delta);
CouplingProfile nnn_dipole(int n_sites);

struct TunnellingGeometry {
  std::vector<double> distances;  // R_i between sites i and i+1
  std::vector<double> residuals;  // relative residual of each root
};

struct TunnellingResult {
  TunnellingGeometry geometry;
  CouplingProfile profile;
};

TunnellingResult nnn_tunnelling(int n_sites, double j_max, const NnnTunnelling& params);

/// Chooses the prefactor so that max_i J_{i,i+2}/J_{i,i+1} equals
/// `target_ratio` for an n_sites chain.
NnnTunnelling calibrate_tunnelling(int n_sites, double j_max, double target_ratio, double u = 1.0,
                                   double kappa = 1.0);

/// Calibration at N = 8, ratio 1e-4, u = kappa = 1.
NnnTunnelling default_tunnelling(double j_max);

/// PST profile plus the next-nearest model named in the spec, if any.
CouplingProfile coupling_profile(const ChainSpec& spec);

/// Copy of `spec` with every undrawn SiteEnergies::d filled from `rng`
/// (one draw per site, site 1 first).
ChainSpec realize(const ChainSpec& spec, Rng& rng);

/// eps_i / J0 for every site; requires drawn d.
std::vector<double> site_energies(const ChainSpec& spec);

struct HamiltonianBlock {
  SubspaceBasis basis;
  RealMatrix matrix;  // units of J0
};

/// Hamiltonian restricted to the n_exc sector. `noise_rng` is required when
/// the spec carries RandomNoise; the draws for l <= m run row by row over
/// the upper triangle, skipping zero entries.
HamiltonianBlock build_block(const ChainSpec& spec, const CouplingProfile& profile, int n_exc,
                             Rng* noise_rng = nullptr);

}  // namespace pstchain
