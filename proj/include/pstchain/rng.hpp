#pragma once

#include <cstdint>
#include <random>

namespace pstchain {

/// Reproducible flat-[0,1) stream.
///
/// Generator: std::mt19937_64 seeded through std::seed_seq with the 32-bit
/// halves of (master_seed, realization, purpose). Both engine and seed_seq
/// are fully specified by the C++ standard, so a given triple yields the same
/// sequence on every conforming platform. Doubles are formed from the top 53
/// bits of each draw.
///
/// Purposes used by the simulator: kSiteEnergies for the d_i of on-site
/// disorder, noise_purpose(n_exc) for the matrix noise of one sector.
class Rng {
 public:
  static constexpr std::uint64_t kSiteEnergies = 0;
  static constexpr std::uint64_t noise_purpose(int n_exc) {
    return 1 + static_cast<std::uint64_t>(n_exc);
  }

  explicit Rng(std::uint64_t master_seed, std::uint64_t realization = 0,
               std::uint64_t purpose = 0);

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t realization() const { return realization_; }

  /// Independent stream for another purpose within the same realization.
  Rng substream(std::uint64_t purpose) const { return Rng(master_seed_, realization_, purpose); }

 private:
  std::uint64_t master_seed_;
  std::uint64_t realization_;
  std::mt19937_64 engine_;
};

}  // namespace pstchain
