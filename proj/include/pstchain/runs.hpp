#pragma once

#include "pstchain/config.hpp"
#include "pstchain/experiments.hpp"
#include "pstchain/injection.hpp"

namespace pstchain {

// One entry point per subcommand, shared by the CLI and the Python module.
TimeSeries run_evolve(const RunConfig& config);
ProtocolRun run_inject(const RunConfig& config);
ScanResult run_scan(const RunConfig& config);

Family parse_family(const std::string& name);

}  // namespace pstchain
