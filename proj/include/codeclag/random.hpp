#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace codeclag {

using Rng = std::mt19937_64;

/// Deterministic generator for a tuple of stream identifiers (seed, step,
/// candidate, ...). Independent of thread scheduling.
[[nodiscard]] Rng make_rng(std::initializer_list<std::uint64_t> stream);

/// Derives a child seed from a parent seed and a stream tag.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

}  // namespace codeclag
