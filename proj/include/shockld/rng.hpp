// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <random>

namespace shockld {

using Engine = std::mt19937_64;

/// Deterministic seed derivation. A root seed plus a tag (estimator, sweep
/// point, ...) and a sample index always yield the same engine, independent of
/// how many samples are drawn or how work is split across threads.
class SeedTree {
public:
    explicit SeedTree(std::uint64_t root) : root_(root) {}

    std::uint64_t root() const { return root_; }
    /// Child tree for a labelled sub-computation.
    SeedTree child(std::uint64_t tag) const;
    /// Engine for sample `index` of this tree.
    Engine stream(std::uint64_t index) const;

private:
    std::uint64_t root_;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace shockld
