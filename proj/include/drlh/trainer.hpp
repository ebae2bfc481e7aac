#pragma once

#include "drlh/dataset.hpp"
#include "drlh/environment.hpp"
#include "drlh/qnetwork.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace drlh {

struct Transition {
    std::vector<double> state_vec;
    std::size_t action = 0;
    double reward = 0.0;
    std::vector<double> next_state_vec;
    /// Set only by the terminate action. Episodes cut off at the step cap
    /// are stored with done = false and bootstrap from the next state.
    bool done = false;
};

/// Fixed-capacity FIFO experience memory with uniform sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::uint64_t insertions() const { return inserted_; }

    /// i = 0 is the oldest retained transition.
    const Transition& at(std::size_t i) const;

    /// `count` indices drawn uniformly with replacement.
    std::vector<std::size_t> sample_indices(std::size_t count, std::mt19937_64& rng) const;

private:
    std::size_t capacity_;
    std::vector<Transition> items_;
    std::size_t head_ = 0;  // slot of the oldest item once full
    std::uint64_t inserted_ = 0;
};

/// Hyperparameters of the Q-learning driver and the environment it trains
/// in. Parsed from a flat `key = value` file; see TrainConfig::keys().
struct TrainConfig {
    std::size_t epochs = 25;
    double eps_start = 1.0;
    double eps_end = 0.1;
    std::size_t eps_decay_epochs = 15;
    double gamma = 0.9;
    std::size_t batch_size = 64;
    std::size_t buffer_capacity = 50000;
    double learning_rate = 0.05;
    std::size_t target_sync_interval = 500;
    double expert_prob = 0.5;
    std::uint64_t seed = 0;      // network init, shuffles, exploration, dropout
    std::uint64_t run_seed = 0;  // initial codes e_0
    std::vector<std::size_t> hidden = {64, 64};
    double dropout = 0.2;
    std::optional<std::size_t> eta;        // default floor(R / 2)
    double sigma = 5.0;
    std::optional<std::size_t> max_steps;  // default b

    /// Throws ConfigError.
    void validate() const;
    EnvConfig env_config(const Codebook& book) const;

    static const std::vector<std::string>& keys();
};

struct ParsedConfig {
    TrainConfig config;
    std::set<std::string> explicit_keys;
};

/// `key = value` lines; '#' starts a comment. Unknown keys, duplicate keys
/// and malformed values throw ConfigError naming the key.
ParsedConfig parse_train_config(std::istream& is);
ParsedConfig parse_train_config_file(const std::string& path);

/// Header lines for the training log: every key with its value, marked
/// "(default)" when it was not set explicitly.
std::string describe_config(const ParsedConfig& parsed, const Codebook& book);

/// Linear from eps_start at epoch 0 to eps_end at epoch eps_decay_epochs - 1,
/// then eps_end. Epochs are 0-based.
double epsilon_at(std::size_t epoch, const TrainConfig& config);

/// Everything select_action needs besides the network.
struct ActionContext {
    const Environment& env;
    const LabelSet& labels;
    double expert_prob;
};

/// Epsilon-greedy with guided exploration: with probability 1 - epsilon the
/// argmax of the eval-mode Q-values; otherwise the expert's action with
/// probability expert_prob, else a uniform action in [0, b].
std::size_t select_action(const QNetwork& net, const State& state, std::span<const double> state_vec,
                          double epsilon, const ActionContext& ctx, std::mt19937_64& rng);

/// r for done transitions, r + gamma * max_a Q_target(s', a) otherwise.
std::vector<double> q_target(std::span<const Transition* const> batch, const QNetwork& target, double gamma);

struct EpochLog {
    std::size_t epoch = 0;  // 1-based
    double epsilon = 0.0;
    double mean_reward = 0.0;
    double mean_length = 0.0;
    double mean_terminal_dpos = 0.0;
    double wall_seconds = 0.0;
};

/// `epoch  epsilon  mean_reward  mean_len  mean_terminal_dpos  wall_seconds`
/// tab-separated.
std::string format_epoch_log(const EpochLog& entry);

struct TrainResult {
    QNetwork net;
    std::vector<EpochLog> log;
    std::uint64_t updates = 0;
};

/// Deep Q-learning over the training items of `data` (all items are used;
/// pass a train subset). One episode per item per epoch in a seeded shuffle
/// order, one SGD step per environment step once the buffer holds a batch,
/// hard target-network sync every target_sync_interval updates. Rollouts and
/// updates run on the calling thread; results are a pure function of the
/// inputs. Each finished epoch is written to `log_stream` when given.
TrainResult run_training(const Dataset& data, const Codebook& book, const TrainConfig& config,
                         std::ostream* log_stream = nullptr);

}  // namespace drlh
