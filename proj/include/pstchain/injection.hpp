#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "pstchain/chain_model.hpp"
#include "pstchain/dynamics.hpp"
#include "pstchain/metrics.hpp"
#include "pstchain/state.hpp"

namespace pstchain {

// Injection events are instantaneous unitaries acting between stretches of
// free chain evolution. Registers are one-qubit ancillas created on demand
// and never evolve on their own.

/// Single-site rotation exp(-i theta/2 (cos phi X + sin phi Y)).
struct RabiPulse {
  double theta = M_PI;
  double phi = 0.0;
};

/// (Partial) SWAP between a register and a chain site; `reflection` is the
/// amplitude left behind in the register.
struct SwapRegister {
  double reflection = 0.0;
};

using InjectionMethod = std::variant<RabiPulse, SwapRegister>;

struct NoCorrection {};
/// Projective measurement of a chain site at a global time, keeping the
/// "excitation present" branch.
struct MeasureSiteAt {
  int site = 1;
  double tau = 1.0;
};
/// Measurement of the injecting register right after the SWAP, keeping the
/// "register empty" branch.
struct MeasureRegisterImmediately {};

using Correction = std::variant<NoCorrection, MeasureSiteAt, MeasureRegisterImmediately>;

/// alpha|0> + beta|1> handed to the chain by a SWAP injection.
struct Payload {
  Complex alpha{0.0, 0.0};
  Complex beta{1.0, 0.0};
};

struct ProtocolConfig {
  ChainSpec chain;
  int first_site = 1;
  int second_site = 2;
  double delay = 0.0;  // units of t_S, measured from the first injection
  InjectionMethod method = SwapRegister{};
  Correction correction = NoCorrection{};
  Payload payload;
  /// false keeps every measurement branch as a weighted mixture.
  bool conditioned = true;
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;

  /// Throws ConfigError on out-of-range sites, negative delay, bad payload
  /// or a correction the method cannot use.
  void validate() const;
};

struct MeasurementOutcome {
  int outcome = 0;
  double probability = 0.0;
  SparseState post_state;  // renormalized; empty when probability is 0
  bool empty = false;
};

struct MeasurementPair {
  MeasurementOutcome one;
  MeasurementOutcome zero;
  const MeasurementOutcome& operator[](int outcome) const { return outcome ? one : zero; }
};

SparseState apply_rabi(const SparseState& state, int site, double theta, double phi = 0.0);

/// Partial SWAP on (site, register): |0,1> -> sqrt(1-r^2)|1,0> + r|0,1>,
/// |1,0> -> sqrt(1-r^2)|0,1> + r|1,0>, |00> and |11> untouched.
SparseState swap_inject(const SparseState& state, int site, int register_index, double reflection = 0.0);

MeasurementPair measure_site(const SparseState& state, int site);
MeasurementPair measure_register(const SparseState& state, int register_index);

struct WeightedBranch {
  double weight = 1.0;
  Trajectory trajectory;
};

struct ProtocolRun {
  std::shared_ptr<const PreparedChain> chain;
  std::vector<WeightedBranch> branches;
  BasisMask target = 0;  // both injection sites excited
  BasisMask twin = 0;
  double error_weight = 0.0;      // weight outside the intended sector right after injection
  double kept_probability = 1.0;  // probability of the conditioned outcomes
  TimeSeries series;

  /// Branch-weighted fidelity of a chain basis state.
  double fidelity(BasisMask mask, double tau) const;
};

/// First excitation at first_site at tau = 0, second at second_site after
/// `delay`, optional correction, then free evolution on `grid`. Columns:
/// target, twin, vacuum, error_weight.
ProtocolRun run_delayed_pair(const ProtocolConfig& config, const TimeGrid& grid);

enum class InjectionKind { Rabi, Swap };

struct DelaySweepOptions {
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;
};

/// |+> injected on site 1 at tau = 0 and on site N after `delay`; EoF of
/// (1, N) at its first peak. SWAP injections are confirmed by an immediate
/// register measurement; Rabi injections use theta = pi/2 with no
/// correction.
PeakReport run_type2_delay(const ChainSpec& chain, double delay, InjectionKind method,
                           const DelaySweepOptions& options = {});

/// Bell pair held by two registers moved into sites 1 and 2 by full SWAPs,
/// the second after `delay`. SWAP keeps the branch where both registers are
/// found empty; Rabi performs the same transfers with no measurement. EoF of
/// (N-1, N) at its first peak.
PeakReport run_bell_delay(const ChainSpec& chain, double delay, InjectionKind method,
                          const DelaySweepOptions& options = {});

}  // namespace pstchain
