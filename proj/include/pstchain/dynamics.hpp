#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pstchain/chain_model.hpp"
#include "pstchain/linalg.hpp"
#include "pstchain/state.hpp"

namespace pstchain {

// Time is measured in units of the revival period t_S = pi/J0 (hbar = 1), so
// an eigenvalue E (units of J0) picks up the phase exp(-i pi E tau).

struct SpectralDecomposition {
  RealVector eigenvalues;   // ascending, units of J0
  RealMatrix eigenvectors;  // orthonormal columns
};

/// Throws NumericError if the reconstruction or orthogonality residual
/// exceeds 1e-10.
SpectralDecomposition decompose(const HamiltonianBlock& block);
SpectralDecomposition decompose(const RealMatrix& symmetric);

struct PreparedSector {
  HamiltonianBlock block;
  SpectralDecomposition spectrum;
};

/// Diagonalized Hamiltonian blocks of one device realization.
class PreparedChain {
 public:
  explicit PreparedChain(int n_sites) : n_sites_(n_sites) {}

  int n_sites() const { return n_sites_; }
  bool has_sector(int n_exc) const { return sectors_.count(n_exc) != 0; }
  const PreparedSector& sector(int n_exc) const;
  void add_sector(PreparedSector sector);

 private:
  int n_sites_;
  std::map<int, PreparedSector> sectors_;
};

/// Builds and diagonalizes the requested sectors. Site disorder is drawn
/// from Rng(seed, realization, kSiteEnergies); matrix noise of sector n from
/// Rng(seed, realization, noise_purpose(n)).
PreparedChain prepare_chain(const ChainSpec& spec, std::span<const int> sectors, std::uint64_t seed = 0,
                            std::uint64_t realization = 0);

/// Sectors 0..n_sites.
PreparedChain prepare_all_sectors(const ChainSpec& spec, std::uint64_t seed = 0, std::uint64_t realization = 0);

/// State expanded in the eigenbasis of every populated (sector, register)
/// block; evaluation at any time is a single matrix-vector product per block.
class SpectralState {
 public:
  SpectralState(const SparseState& initial, const PreparedChain& chain);

  SparseState at(double dtau) const;
  int n_sites() const { return n_sites_; }
  int n_registers() const { return n_registers_; }

 private:
  struct Block {
    const PreparedSector* sector;
    BasisMask reg;
    ComplexVector coefficients;
  };
  int n_sites_;
  int n_registers_;
  std::vector<Block> blocks_;
};

SparseState propagate(const SparseState& state, const PreparedChain& chain, double dtau);

/// Piecewise free evolution; each segment starts from a state fixed at its
/// start time (e.g. after an injection or a measurement).
class Trajectory {
 public:
  void add_segment(double start_tau, const SparseState& state, const PreparedChain& chain);
  SparseState state_at(double tau) const;
  bool empty() const { return segments_.empty(); }
  double start() const;

 private:
  struct Segment {
    double start;
    SpectralState state;
  };
  std::vector<Segment> segments_;
};

struct TimeGrid {
  std::vector<double> tau;  // units of t_S
  int steps_per_period = 1000;

  /// Points k / steps_per_period for k covering [t_start, t_max].
  static TimeGrid uniform(double t_max, int steps_per_period = 1000, double t_start = 0.0);
  static TimeGrid single(double tau);
};

using StateObserver = std::function<double(const SparseState&)>;

struct Observer {
  std::string name;
  StateObserver fn;
};

struct TimeSeries {
  std::vector<std::string> columns;
  std::vector<double> tau;
  std::vector<std::vector<double>> rows;

  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
  std::size_t size() const { return tau.size(); }
};

TimeSeries record(const Trajectory& trajectory, const TimeGrid& grid, const std::vector<Observer>& observers);

TimeSeries evolve_series(const SparseState& initial, const PreparedChain& chain, const TimeGrid& grid,
                         const std::vector<Observer>& observers);

}  // namespace pstchain
