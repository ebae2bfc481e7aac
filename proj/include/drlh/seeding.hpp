#pragma once

#include <cstdint>
#include <initializer_list>

namespace drlh {

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent generator seed from an ordered tuple of integers,
// e.g. (run_seed, item_id) or (run_seed, epoch, item_id). Order matters.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

}  // namespace drlh
