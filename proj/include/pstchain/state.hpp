#pragma once

#include <complex>
#include <map>
#include <set>
#include <utility>

#include "pstchain/basis.hpp"

namespace pstchain {

using Complex = std::complex<double>;

/// (chain occupation, register occupation) pair addressing one amplitude.
struct StateKey {
  BasisMask chain = 0;
  BasisMask reg = 0;
  auto operator<=>(const StateKey&) const = default;
};

inline constexpr double kPruneTolerance = 1e-15;

/// Pure state of a chain plus a bank of static one-qubit registers, stored
/// as a sparse amplitude map. It may span several excitation sectors.
class SparseState {
 public:
  using Map = std::map<StateKey, Complex>;

  explicit SparseState(int n_sites, int n_registers = 0);

  /// |m> with all registers empty.
  static SparseState basis_state(int n_sites, BasisMask chain);

  int n_sites() const { return n_sites_; }
  int n_registers() const { return n_registers_; }
  const Map& amplitudes() const { return amps_; }
  bool empty() const { return amps_.empty(); }

  Complex amplitude(BasisMask chain, BasisMask reg = 0) const;
  void set(BasisMask chain, BasisMask reg, Complex value);
  void add(BasisMask chain, BasisMask reg, Complex value);

  double norm_squared() const;
  /// Scales to unit norm; throws DomainError on a zero state.
  void normalize();
  void prune(double tolerance = kPruneTolerance);

  /// Appends a register holding alpha|0> + beta|1>; returns its index.
  int add_register(Complex alpha, Complex beta);

  /// Excitation numbers of the chain part present in the support.
  std::set<int> sectors() const;

 private:
  int n_sites_;
  int n_registers_;
  Map amps_;
};

/// Product state: each listed site holds alpha|0> + beta|1>, all other
/// sites are empty.
SparseState product_on_sites(int n_sites, const std::map<int, std::pair<Complex, Complex>>& site_states);

/// (|10..0> + |01..0>)/sqrt(2).
SparseState bell_first_pair(int n_sites);

/// |+>_1 (x) |0..0> (x) |+>_N.
SparseState plus_on_ends(int n_sites);

}  // namespace pstchain
