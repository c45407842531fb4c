#include "pstchain/basis.hpp"

#include <algorithm>
#include <bit>

#include "pstchain/errors.hpp"

namespace pstchain {

int popcount(BasisMask m) { return std::popcount(m); }

SubspaceBasis::SubspaceBasis(int n_sites, int n_exc, std::vector<BasisMask> masks)
    : n_sites_(n_sites), n_exc_(n_exc), masks_(std::move(masks)) {}

std::optional<std::size_t> SubspaceBasis::index_of(BasisMask m) const {
  auto it = std::lower_bound(masks_.begin(), masks_.end(), m);
  if (it == masks_.end() || *it != m) return std::nullopt;
  return static_cast<std::size_t>(it - masks_.begin());
}

SubspaceBasis enumerate_basis(int n_sites, int n_exc) {
  if (n_sites < 0 || n_sites > kMaxSites)
    throw DomainError("enumerate_basis: n_sites must lie in [0, 24]");
  if (n_exc < 0 || n_exc > n_sites)
    throw DomainError("enumerate_basis: n_exc must lie in [0, n_sites]");

  std::vector<BasisMask> masks;
  if (n_exc == 0) {
    masks.push_back(0);
    return SubspaceBasis(n_sites, n_exc, std::move(masks));
  }
  // Gosper's hack walks the fixed-popcount masks in ascending order.
  const std::uint64_t limit = std::uint64_t{1} << n_sites;
  std::uint64_t m = (std::uint64_t{1} << n_exc) - 1;
  while (m < limit) {
    masks.push_back(static_cast<BasisMask>(m));
    const std::uint64_t c = m & (~m + 1);
    const std::uint64_t r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return SubspaceBasis(n_sites, n_exc, std::move(masks));
}

BasisMask mirror_mask(BasisMask m, int n_sites) {
  BasisMask out = 0;
  for (int i = 0; i < n_sites; ++i)
    if ((m >> i) & 1U) out |= BasisMask{1} << (n_sites - 1 - i);
  return out;
}

BasisMask parse_ket(std::string_view ket) {
  if (ket.size() >= 2 && ket.front() == '|' && ket.back() == '>')
    ket = ket.substr(1, ket.size() - 2);
  if (ket.empty() || ket.size() > static_cast<std::size_t>(kMaxSites))
    throw DomainError("parse_ket: ket must have 1..24 sites");
  BasisMask m = 0;
  for (std::size_t i = 0; i < ket.size(); ++i) {
    if (ket[i] == '1')
      m |= BasisMask{1} << i;
    else if (ket[i] != '0')
      throw DomainError("parse_ket: invalid character in '" + std::string(ket) + "'");
  }
  return m;
}

std::string format_ket(BasisMask m, int n_sites) {
  std::string s(static_cast<std::size_t>(n_sites), '0');
  for (int i = 0; i < n_sites; ++i)
    if ((m >> i) & 1U) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

}  // namespace pstchain
