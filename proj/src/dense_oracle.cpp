#include "pstchain/dense_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <cmath>

#include "pstchain/errors.hpp"

namespace pstchain::oracle {

namespace {

using Sparse = Eigen::SparseMatrix<Complex>;

Sparse kron(const Sparse& a, const Sparse& b) {
  std::vector<Eigen::Triplet<Complex>> t;
  for (int ka = 0; ka < a.outerSize(); ++ka)
    for (Sparse::InnerIterator ia(a, ka); ia; ++ia)
      for (int kb = 0; kb < b.outerSize(); ++kb)
        for (Sparse::InnerIterator ib(b, kb); ib; ++ib)
          t.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
  Sparse out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Sparse sparse_embed(const Eigen::Matrix2cd& op, int qubit, int n_qubits) {
  // Qubit 0 is the least significant bit, i.e. the rightmost Kronecker factor.
  Sparse identity(2, 2);
  identity.setIdentity();
  Sparse out(1, 1);
  out.insert(0, 0) = 1.0;
  for (int q = n_qubits - 1; q >= 0; --q) out = kron(out, q == qubit ? Sparse(op.sparseView()) : identity);
  return out;
}

Eigen::Matrix2cd raise() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 0) = 1.0;  // |1><0|
  return m;
}

Eigen::Matrix2cd lower() { return raise().transpose(); }

Eigen::Matrix2cd number() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 1) = 1.0;
  return m;
}

Eigen::Matrix2cd hole() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = 1.0;
  return m;
}

}  // namespace

ComplexVector to_dense(const SparseState& state) {
  const int n = state.n_sites();
  ComplexVector psi = ComplexVector::Zero(Eigen::Index{1} << (n + state.n_registers()));
  for (const auto& [k, a] : state.amplitudes())
    psi(static_cast<Eigen::Index>(k.chain) | (static_cast<Eigen::Index>(k.reg) << n)) = a;
  return psi;
}

SparseState from_dense(const ComplexVector& psi, int n_sites, int n_registers) {
  SparseState s(n_sites, n_registers);
  const Eigen::Index chain_mask = (Eigen::Index{1} << n_sites) - 1;
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    if (std::abs(psi(i)) >= kPruneTolerance)
      s.set(static_cast<BasisMask>(i & chain_mask), static_cast<BasisMask>(i >> n_sites), psi(i));
  return s;
}

ComplexMatrix embed(const Eigen::Matrix2cd& op, int qubit, int n_qubits) {
  return ComplexMatrix(sparse_embed(op, qubit, n_qubits));
}

RealMatrix full_hamiltonian(int n_sites, const CouplingProfile& profile, const std::vector<double>& site_energy,
                            double gamma) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Sparse h(dim, dim);
  const auto e = [&](const Eigen::Matrix2cd& op, int q) { return sparse_embed(op, q, n_sites); };
  auto hop = [&](int a, int b, double j) {
    h += j * (Sparse(e(raise(), a) * e(lower(), b)) + Sparse(e(lower(), a) * e(raise(), b)));
  };
  for (int i = 0; i + 1 < n_sites; ++i) hop(i, i + 1, profile.nearest[static_cast<std::size_t>(i)]);
  for (std::size_t i = 0; i < profile.next_nearest.size(); ++i)
    hop(static_cast<int>(i), static_cast<int>(i) + 2, profile.next_nearest[i]);
  for (int i = 0; i < n_sites; ++i)
    if (!site_energy.empty()) h += site_energy[static_cast<std::size_t>(i)] * e(number(), i);
  for (int i = 0; i + 1 < n_sites; ++i) h += gamma * Sparse(e(number(), i) * e(number(), i + 1));
  return ComplexMatrix(h).real();
}

ComplexVector evolve(const RealMatrix& chain_hamiltonian, const ComplexVector& psi, int n_registers, double tau) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(chain_hamiltonian);
  const RealMatrix& v = solver.eigenvectors();
  ComplexVector phase(v.cols());
  for (Eigen::Index k = 0; k < phase.size(); ++k) phase(k) = std::polar(1.0, -M_PI * solver.eigenvalues()(k) * tau);
  const ComplexMatrix u = v.cast<Complex>() * phase.asDiagonal() * v.transpose().cast<Complex>();

  const Eigen::Index dim = chain_hamiltonian.rows();
  ComplexVector out(psi.size());
  for (Eigen::Index r = 0; r < (Eigen::Index{1} << n_registers); ++r)
    out.segment(r * dim, dim) = u * psi.segment(r * dim, dim);
  return out;
}

ComplexVector rabi(const ComplexVector& psi, int n_qubits, int qubit, double theta, double phi) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  Eigen::Matrix2cd u;
  u << c, Complex(0, -1) * std::polar(s, -phi), Complex(0, -1) * std::polar(s, phi), c;
  return sparse_embed(u, qubit, n_qubits) * psi;
}

ComplexVector partial_swap(const ComplexVector& psi, int n_qubits, int qubit_a, int qubit_b, double reflection) {
  const double t = std::sqrt(1.0 - reflection * reflection);
  const auto e = [&](const Eigen::Matrix2cd& op, int q) { return sparse_embed(op, q, n_qubits); };
  const auto pair = [&](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) -> Sparse {
    return e(a, qubit_a) * e(b, qubit_b);
  };
  const Sparse u = pair(hole(), hole()) + pair(number(), number()) +
                   t * (pair(raise(), lower()) + pair(lower(), raise())) +
                   reflection * (pair(hole(), number()) + pair(number(), hole()));
  return u * psi;
}

ComplexVector project(const ComplexVector& psi, int n_qubits, int qubit, int outcome) {
  return sparse_embed(outcome ? number() : hole(), qubit, n_qubits) * psi;
}

Eigen::Matrix4cd partial_trace(const ComplexVector& psi, int n_qubits, int qubit_a, int qubit_b) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  // <i_a i_b| rho |j_a j_b> = <psi| (|j_a><i_a| (x) |j_b><i_b|) |psi>
  for (int ia = 0; ia < 2; ++ia)
    for (int ib = 0; ib < 2; ++ib)
      for (int ja = 0; ja < 2; ++ja)
        for (int jb = 0; jb < 2; ++jb) {
          Eigen::Matrix2cd pa = Eigen::Matrix2cd::Zero(), pb = Eigen::Matrix2cd::Zero();
          pa(ja, ia) = 1.0;
          pb(jb, ib) = 1.0;
          const Sparse op = sparse_embed(pa, qubit_a, n_qubits) * sparse_embed(pb, qubit_b, n_qubits);
          rho(2 * ia + ib, 2 * ja + jb) = psi.dot(op * psi);
        }
  return rho;
}

double concurrence_direct(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix2cd sy;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  Eigen::Matrix4cd yy;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) yy.block<2, 2>(2 * i, 2 * j) = sy(i, j) * sy;
  const Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(r);
  std::array<double, 4> lambda{};
  for (int k = 0; k < 4; ++k) lambda[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, solver.eigenvalues()(k).real()));
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

}  // namespace pstchain::oracle
