#include "pstchain/runs.hpp"

#include "pstchain/errors.hpp"

namespace pstchain {

TimeSeries run_evolve(const RunConfig& config) {
  const SparseState initial = config.initial_state();
  const auto sectors = initial.sectors();
  const std::vector<int> wanted(sectors.begin(), sectors.end());
  const PreparedChain chain = prepare_chain(config.chain_spec(), wanted, config.seed, config.realization);
  return evolve_series(initial, chain, config.grid(), config.observers());
}

ProtocolRun run_inject(const RunConfig& config) { return run_delayed_pair(config.protocol(), config.grid()); }

Family parse_family(const std::string& name) {
  if (name == "unentangled") return Family::Unentangled110;
  if (name == "type1") return Family::BellType1;
  if (name == "type2") return Family::GateType2;
  throw ConfigError("family: expected unentangled|type1|type2, got '" + name + "'");
}

ScanResult run_scan(const RunConfig& config) {
  if (config.scan == "gamma_epsilon")
    return scan_gamma_epsilon(config.gamma_grid, config.epsilon_grid, config.scan_options(), config.scan_n);
  const auto perturbation =
      config.perturbation == "delta" ? ScanPerturbation::NnnAveraged : ScanPerturbation::SiteEnergies;
  return scan_chain_length(parse_family(config.family), perturbation, config.values, config.n_min, config.n_max,
                           config.scan_options());
}

}  // namespace pstchain
