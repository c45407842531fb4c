#include "pstchain/state.hpp"

#include <cmath>

#include "pstchain/errors.hpp"

namespace pstchain {

SparseState::SparseState(int n_sites, int n_registers) : n_sites_(n_sites), n_registers_(n_registers) {
  if (n_sites < 1 || n_sites > kMaxSites) throw DomainError("SparseState: n_sites must lie in [1, 24]");
  if (n_registers < 0 || n_registers > 32) throw DomainError("SparseState: too many registers");
}

SparseState SparseState::basis_state(int n_sites, BasisMask chain) {
  SparseState s(n_sites);
  s.set(chain, 0, 1.0);
  return s;
}

Complex SparseState::amplitude(BasisMask chain, BasisMask reg) const {
  auto it = amps_.find({chain, reg});
  return it == amps_.end() ? Complex{} : it->second;
}

void SparseState::set(BasisMask chain, BasisMask reg, Complex value) {
  if (chain >> n_sites_ != 0 || (n_registers_ < 32 && reg >> n_registers_ != 0))
    throw DomainError("SparseState: key outside the chain/register range");
  if (std::abs(value) < kPruneTolerance)
    amps_.erase({chain, reg});
  else
    amps_[{chain, reg}] = value;
}

void SparseState::add(BasisMask chain, BasisMask reg, Complex value) {
  set(chain, reg, amplitude(chain, reg) + value);
}

double SparseState::norm_squared() const {
  double s = 0.0;
  for (const auto& [k, a] : amps_) s += std::norm(a);
  return s;
}

void SparseState::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) throw DomainError("SparseState: cannot normalize a zero state");
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& [k, a] : amps_) a *= inv;
}

void SparseState::prune(double tolerance) {
  std::erase_if(amps_, [&](const auto& kv) { return std::abs(kv.second) < tolerance; });
}

int SparseState::add_register(Complex alpha, Complex beta) {
  if (n_registers_ >= 32) throw DomainError("SparseState: register bank full");
  const int idx = n_registers_++;
  const BasisMask bit = BasisMask{1} << idx;
  Map next;
  for (const auto& [k, a] : amps_) {
    if (std::abs(a * alpha) >= kPruneTolerance) next[{k.chain, k.reg}] = a * alpha;
    if (std::abs(a * beta) >= kPruneTolerance) next[{k.chain, k.reg | bit}] = a * beta;
  }
  amps_ = std::move(next);
  return idx;
}

std::set<int> SparseState::sectors() const {
  std::set<int> out;
  for (const auto& [k, a] : amps_) out.insert(popcount(k.chain));
  return out;
}

SparseState product_on_sites(int n_sites, const std::map<int, std::pair<Complex, Complex>>& site_states) {
  SparseState s(n_sites);
  s.set(0, 0, 1.0);
  for (const auto& [site, ab] : site_states) {
    if (site < 1 || site > n_sites) throw DomainError("product_on_sites: site out of range");
    SparseState next(n_sites);
    for (const auto& [k, a] : s.amplitudes()) {
      next.add(k.chain, 0, a * ab.first);
      next.add(k.chain | site_bit(site), 0, a * ab.second);
    }
    s = std::move(next);
  }
  return s;
}

SparseState bell_first_pair(int n_sites) {
  if (n_sites < 2) throw DomainError("bell_first_pair: needs two sites");
  SparseState s(n_sites);
  s.set(site_bit(1), 0, M_SQRT1_2);
  s.set(site_bit(2), 0, M_SQRT1_2);
  return s;
}

SparseState plus_on_ends(int n_sites) {
  if (n_sites < 2) throw DomainError("plus_on_ends: needs two sites");
  const std::pair<Complex, Complex> plus{M_SQRT1_2, M_SQRT1_2};
  return product_on_sites(n_sites, {{1, plus}, {n_sites, plus}});
}

}  // namespace pstchain
