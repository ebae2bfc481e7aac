#include "drlh/errors.hpp"
#include "drlh/trainer.hpp"

namespace drlh {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity)
{
    if (capacity == 0)
        throw InvalidArgument("replay buffer capacity must be positive");
    items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::push(Transition t)
{
    ++inserted_;
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
        return;
    }
    items_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const
{
    if (i >= items_.size())
        throw IndexOutOfRange("replay index " + std::to_string(i) + " of " + std::to_string(items_.size()));
    return items_[(head_ + i) % items_.size()];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t count, std::mt19937_64& rng) const
{
    if (items_.empty())
        throw InvalidArgument("cannot sample from an empty replay buffer");
    std::vector<std::size_t> out(count);
    const auto n = static_cast<std::uint64_t>(items_.size());
    for (auto& i : out)
        i = static_cast<std::size_t>(rng() % n);
    return out;
}

}  // namespace drlh
