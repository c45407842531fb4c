#include "pstchain/rng.hpp"

namespace pstchain {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t realization, std::uint64_t purpose) {
  auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffULL); };
  auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(realization), hi(realization), lo(purpose), hi(purpose)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t master_seed, std::uint64_t realization, std::uint64_t purpose)
    : master_seed_(master_seed),
      realization_(realization),
      engine_(make_engine(master_seed, realization, purpose)) {}

}  // namespace pstchain
