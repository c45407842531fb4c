#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pstchain/chain_model.hpp"
#include "pstchain/metrics.hpp"
#include "pstchain/state.hpp"

namespace pstchain {

struct Summary {
  double mean = 0.0;
  double standard_error = 0.0;
  int n_realizations = 0;
};

/// Evaluates `task(realization)` for realizations 0..n_real-1 and reduces in
/// index order, so the result does not depend on `threads`.
Summary run_realizations(int n_real, const std::function<double(std::uint64_t)>& task, int threads = 1);

struct ObservableSpec {
  enum class Kind { Fidelity, Eof };
  Kind kind = Kind::Fidelity;
  BasisMask target = 0;
  int site_a = 1;
  int site_b = 2;

  static ObservableSpec fidelity(BasisMask target) { return {Kind::Fidelity, target, 1, 2}; }
  static ObservableSpec entanglement(int a, int b) { return {Kind::Eof, 0, a, b}; }

  double operator()(const SparseState& state) const;
};

/// One initial state, one observable, read at `tau` or at the refined
/// maximum within tau +- half_width.
struct Scenario {
  ChainSpec chain;
  SparseState initial{2};
  ObservableSpec observable;
  double tau = 1.0;
  bool refine_peak = false;
  double half_width = 0.1;
};

double evaluate_scenario(const Scenario& scenario, std::uint64_t seed, std::uint64_t realization);

/// Deterministic scenarios are evaluated once.
Summary run_scenario(const Scenario& scenario, int n_real, std::uint64_t seed, int threads = 1);

enum class Family { Unentangled110, BellType1, GateType2 };
enum class ScanPerturbation { NnnAveraged, SiteEnergies };

/// |110..0> fidelity at tau = 1; Bell(1,2) EoF of (1,2) at tau = 1;
/// |+>_1 |+>_N EoF of (1,N) at tau = 0.5.
Scenario family_scenario(Family family, const ChainSpec& chain);

struct ScanPoint {
  std::vector<double> coords;
  Summary summary;
};

struct ScanResult {
  std::vector<std::string> axes;
  std::vector<ScanPoint> points;
};

struct ScanOptions {
  int n_realizations = 200;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Revival fidelity of |111000> on a 6-site chain at the refined peak near
/// tau = 1, with eps_i = epsilon * J0 * d_i. Axes: gamma, epsilon.
ScanResult scan_gamma_epsilon(const std::vector<double>& gamma_grid, const std::vector<double>& epsilon_grid,
                              const ScanOptions& options = {}, int n_sites = 6);

/// Axes: n, p. Site energies use eps_i = epsilon * J_max * d_i.
ScanResult scan_chain_length(Family family, ScanPerturbation perturbation, const std::vector<double>& values,
                             int n_min, int n_max, const ScanOptions& options = {});

struct DecayPoint {
  int n = 0;
  double p = 0.0;
  double value = 0.0;
};

struct FitResult {
  double p0 = 0.0;
  double residual_rms = 0.0;
  int points_used = 0;
  int points_excluded = 0;
};

/// Least squares through the origin of -ln(value) against n p^2, i.e. the
/// law value = exp(-n p^2 / p0^2). Points below `floor` are excluded.
FitResult fit_decay(const std::vector<DecayPoint>& points, double floor = 0.05);

std::vector<DecayPoint> decay_points(const ScanResult& scan);

}  // namespace pstchain
