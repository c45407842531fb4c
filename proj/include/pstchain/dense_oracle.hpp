#pragma once

#include <Eigen/Dense>

#include "pstchain/chain_model.hpp"
#include "pstchain/linalg.hpp"
#include "pstchain/state.hpp"

// Brute-force reference implementation in the full 2^(N+R) space, built from
// Kronecker products of one-qubit operators and diagonalized with Eigen's own
// solvers. It shares no code path with the sector-wise simulator and is meant
// for N + R <= 10.
namespace pstchain::oracle {

/// Full-space index: chain mask in the low N bits, register mask above.
ComplexVector to_dense(const SparseState& state);
SparseState from_dense(const ComplexVector& psi, int n_sites, int n_registers);

/// Hamiltonian on the chain only (units of J0). `site_energy` holds eps_i/J0.
RealMatrix full_hamiltonian(int n_sites, const CouplingProfile& profile, const std::vector<double>& site_energy,
                            double gamma);

/// psi(tau) = exp(-i pi H tau) psi for H acting on the chain factor.
ComplexVector evolve(const RealMatrix& chain_hamiltonian, const ComplexVector& psi, int n_registers, double tau);

/// Single-qubit operator `op` on qubit q (0-based) of an n_qubits register.
ComplexMatrix embed(const Eigen::Matrix2cd& op, int qubit, int n_qubits);

ComplexVector rabi(const ComplexVector& psi, int n_qubits, int qubit, double theta, double phi);
ComplexVector partial_swap(const ComplexVector& psi, int n_qubits, int qubit_a, int qubit_b, double reflection);

/// Unnormalized projection onto `outcome` of one qubit.
ComplexVector project(const ComplexVector& psi, int n_qubits, int qubit, int outcome);

/// Reduced density of two qubits, basis |00>,|01>,|10>,|11> with qubit_a
/// first.
Eigen::Matrix4cd partial_trace(const ComplexVector& psi, int n_qubits, int qubit_a, int qubit_b);

/// Concurrence from the non-Hermitian product rho * rho~ via a general
/// complex eigensolver.
double concurrence_direct(const Eigen::Matrix4cd& rho);

}  // namespace pstchain::oracle
