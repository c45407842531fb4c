#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace pstchain {

struct CheckResult {
  std::string name;
  int cases = 0;
  double worst = 0.0;  // largest deviation seen
  double tolerance = 0.0;
  bool passed() const { return cases > 0 && worst <= tolerance; }
};

// Comparisons against the dense full-space oracle on randomized chains of up
// to `max_sites` sites (with up to two registers).
CheckResult check_block_oracle(int scenarios, std::uint64_t seed, int max_sites = 8);
CheckResult check_evolution_oracle(int scenarios, std::uint64_t seed, int max_sites = 8);
CheckResult check_partial_trace_oracle(int scenarios, std::uint64_t seed, int max_sites = 8);
CheckResult check_injection_oracle(int scenarios, std::uint64_t seed, int max_sites = 8);
CheckResult check_measurement_oracle(int scenarios, std::uint64_t seed, int max_sites = 8);

// Metric kernels.
CheckResult check_werner_concurrence(int points);
CheckResult check_pure_concurrence(int states, std::uint64_t seed);
CheckResult check_mixed_concurrence(int states, std::uint64_t seed);
/// worst = largest decrease of EoF between consecutive points of a C grid.
CheckResult check_eof_monotone(int points);

// Model invariants.
/// 1 - fidelity of twin at tau = 0.5 and of self at tau = 1, worst over all
/// basis states with at most two excitations, N = 2..n_max.
CheckResult check_pst_mirroring(int n_max);
CheckResult check_basis_counts(int n_max);
/// Noisy blocks stay symmetric and keep the noise-free sparsity pattern.
CheckResult check_noise_structure(int scenarios, std::uint64_t seed);
/// Norm drift under noisy evolution and a full SWAP round trip.
CheckResult check_unitarity(int scenarios, std::uint64_t seed);
CheckResult check_fit_recovery();

std::vector<CheckResult> run_selftest();

/// One line per check; returns the number of failures.
int print_report(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace pstchain
