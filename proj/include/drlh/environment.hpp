#pragma once

#include "drlh/codebook.hpp"
#include "drlh/hamming.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace drlh {

/// Number of past flip actions the state remembers.
inline constexpr std::size_t kHistoryDepth = 10;

struct EnvConfig {
    std::size_t eta = 0;      // terminate reward is positive iff d_pos <= eta
    double sigma = 5.0;       // magnitude of the terminate reward
    std::size_t max_steps = 0;  // episode step cap M

    /// eta = floor(R / 2), M = b.
    static EnvConfig defaults_for(const Codebook& book);
    /// Throws InvalidArgument unless 0 <= eta <= R, sigma > 0, M >= 1.
    void validate(const Codebook& book) const;
};

/// Agent state (f, e_t, h_t).
///
/// The 10 x b one-hot history matrix is held as one action index per row
/// (-1 for an all-zero row); row kHistoryDepth - 1 is the most recent flip.
struct State {
    std::shared_ptr<const std::vector<double>> feature;
    BinaryCode code;
    std::array<int, kHistoryDepth> history{};
    std::size_t step_index = 0;
    bool done = false;

    bool history_bit(std::size_t row, std::size_t column) const
    {
        return history[row] >= 0 && static_cast<std::size_t>(history[row]) == column;
    }

    friend bool operator==(const State& a, const State& b)
    {
        return *a.feature == *b.feature && a.code == b.code && a.history == b.history &&
               a.step_index == b.step_index && a.done == b.done;
    }
};

struct StepOutcome {
    State next_state;
    double reward = 0.0;
    bool done = false;
    std::size_t action_taken = 0;
    /// True only for the explicit terminate action; an episode cut off at the
    /// step cap is done but not terminated.
    bool terminated = false;
};

/// (d_pos - d_neg)(s_t) - (d_pos - d_neg)(s_t1).
double reward_flip(const State& s_t, const State& s_t1, const LabelSet& labels, const Codebook& book);

/// +sigma when d_pos(e_t) <= eta, -sigma otherwise.
double reward_terminate(const State& s_t, const EnvConfig& config, const LabelSet& labels, const Codebook& book);

/// The Hamming-cube MDP for one codebook. Immutable; every call is const and
/// independent, so one instance can serve concurrent episodes.
class Environment {
public:
    Environment(Codebook book, EnvConfig config, std::size_t feature_dim);

    const Codebook& codebook() const { return book_; }
    const EnvConfig& config() const { return config_; }
    std::size_t width() const { return book_.b; }
    std::size_t feature_dim() const { return feature_dim_; }
    std::size_t num_actions() const { return book_.b + 1; }
    std::size_t terminate_action() const { return book_.b; }
    /// d_f + 11 b.
    std::size_t state_dim() const { return feature_dim_ + (kHistoryDepth + 1) * book_.b; }

    /// Fresh state with e_0 drawn from a stream seeded by (run_seed, item_id).
    State reset(std::span<const double> feature, std::uint64_t item_id, std::uint64_t run_seed) const;
    State reset(std::shared_ptr<const std::vector<double>> feature, std::uint64_t item_id,
                std::uint64_t run_seed) const;
    /// Training-time variant seeded by (run_seed, epoch, item_id).
    State reset_for_epoch(std::shared_ptr<const std::vector<double>> feature, std::uint64_t item_id,
                          std::uint64_t run_seed, std::uint64_t epoch) const;

    /// State after `action` without computing a reward: a flip toggles the
    /// bit and records it in the history, terminate only marks the state
    /// done. Throws EpisodeAlreadyDone, ActionOutOfRange.
    State advance(const State& state, std::size_t action) const;

    /// Applies a flip (action < b) or terminate (action == b) and scores it.
    /// Throws EpisodeAlreadyDone, ActionOutOfRange.
    StepOutcome step(const State& state, std::size_t action, const LabelSet& labels) const;

    /// Rewards of every flip action from `state`, index k = flip of bit k.
    std::vector<double> flip_rewards(const State& state, const LabelSet& labels) const;

    /// Greedy demonstrator: the flip with the largest positive reward
    /// (smallest index on ties), or terminate when no flip has positive reward.
    std::size_t expert_action(const State& state, const LabelSet& labels) const;

    /// [f (d_f) | e_t (b) | h_t rows oldest..newest (10 b)].
    std::vector<double> encode_state_vector(const State& state) const;
    void encode_state_vector(const State& state, std::span<double> out) const;

private:
    State make_state(std::shared_ptr<const std::vector<double>> feature, std::uint64_t stream_seed) const;

    Codebook book_;
    EnvConfig config_;
    std::size_t feature_dim_;
};

}  // namespace drlh
