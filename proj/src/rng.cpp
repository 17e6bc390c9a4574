// SPDX-License-Identifier: MIT
#include "shockld/rng.hpp"

namespace shockld {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SeedTree SeedTree::child(std::uint64_t tag) const { return SeedTree(mix64(root_ ^ mix64(tag + 0x5851f42d4c957f2dULL))); }

Engine SeedTree::stream(std::uint64_t index) const {
    const std::uint64_t a = mix64(root_);
    const std::uint64_t b = mix64(index ^ 0x2545f4914f6cdd1dULL);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Engine(seq);
}

}  // namespace shockld
