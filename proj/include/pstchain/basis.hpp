#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pstchain {

/// Occupation bitmask of a chain (or register bank). Site i (1-based) lives
/// in bit i-1; a set bit is an up spin, i.e. one excitation.
using BasisMask = std::uint32_t;

inline constexpr int kMaxSites = 24;

inline BasisMask site_bit(int site) { return BasisMask{1} << (site - 1); }

inline bool occupied(BasisMask m, int site) { return (m >> (site - 1)) & 1U; }

int popcount(BasisMask m);

/// Ascending list of all masks with a fixed number of excitations.
class SubspaceBasis {
 public:
  SubspaceBasis(int n_sites, int n_exc, std::vector<BasisMask> masks);

  int n_sites() const { return n_sites_; }
  int n_exc() const { return n_exc_; }
  std::size_t size() const { return masks_.size(); }
  const std::vector<BasisMask>& masks() const { return masks_; }
  BasisMask operator[](std::size_t i) const { return masks_[i]; }

  /// Position of `m` in the ascending order, if it belongs to the sector.
  std::optional<std::size_t> index_of(BasisMask m) const;

 private:
  int n_sites_;
  int n_exc_;
  std::vector<BasisMask> masks_;
};

SubspaceBasis enumerate_basis(int n_sites, int n_exc);

/// Site reflection i <-> N+1-i ("twin" of a basis state).
BasisMask mirror_mask(BasisMask m, int n_sites);

/// "110000" -> sites 1 and 2 excited. Site 1 is the leftmost character.
BasisMask parse_ket(std::string_view ket);
std::string format_ket(BasisMask m, int n_sites);

}  // namespace pstchain
