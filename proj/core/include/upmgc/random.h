// Seed derivation. All randomness in the library flows from one master
// seed; stages draw independent streams from it via derive_seed.

#ifndef UPMGC_RANDOM_H_
#define UPMGC_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace upmgc {

using Rng = std::mt19937_64;

// Mixes `seed` with a stream label (splitmix64 finalizer over an FNV-1a
// hash of the label).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace upmgc

#endif  // UPMGC_RANDOM_H_
