#pragma once

#include "drlh/dataset.hpp"
#include "drlh/environment.hpp"
#include "drlh/qnetwork.hpp"

#include <cstdint>
#include <vector>

namespace drlh {

struct EncodeTrace {
    std::vector<std::size_t> actions;
    BinaryCode code;
    bool terminated = false;
};

/// Greedy rollout of one item: reset with (run_seed, item_id), then follow
/// the eval-mode argmax action until terminate or the step cap.
EncodeTrace encode_item(const QNetwork& net, const Environment& env, std::span<const double> feature,
                        std::uint64_t item_id, std::uint64_t run_seed);

/// encode_item for every row of `data` (item_id = row index). Items are split
/// across `threads` workers; output is identical for any thread count.
/// Throws ArchitectureMismatch when the network does not fit the environment.
std::vector<BinaryCode> encode_dataset(const QNetwork& net, const Dataset& data, const Environment& env,
                                       std::uint64_t run_seed, unsigned threads = 1);

}  // namespace drlh
