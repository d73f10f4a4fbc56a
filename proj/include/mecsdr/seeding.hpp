// Deterministic seed derivation so every job and every rounding sample owns an
// independent random stream regardless of execution order.

#ifndef MECSDR_SEEDING_HPP
#define MECSDR_SEEDING_HPP

#include <cstdint>
#include <initializer_list>

namespace mecsdr {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k));
  return h;
}

}  // namespace mecsdr

#endif  // MECSDR_SEEDING_HPP
