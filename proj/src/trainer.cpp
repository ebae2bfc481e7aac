#include "drlh/trainer.hpp"

#include "drlh/errors.hpp"
#include "drlh/margin.hpp"
#include "drlh/seeding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>

namespace drlh {

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Eigen::MatrixXd stack_columns(std::span<const Transition* const> batch, bool next)
{
    const auto& first = next ? batch.front()->next_state_vec : batch.front()->state_vec;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(first.size()), static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& v = next ? batch[i]->next_state_vec : batch[i]->state_vec;
        x.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(v.data(), x.rows());
    }
    return x;
}

}  // namespace

double epsilon_at(std::size_t epoch, const TrainConfig& config)
{
    if (epoch + 1 >= config.eps_decay_epochs)
        return config.eps_end;
    const double span = static_cast<double>(config.eps_decay_epochs - 1);
    return config.eps_start - static_cast<double>(epoch) * (config.eps_start - config.eps_end) / span;
}

std::size_t select_action(const QNetwork& net, const State& state, std::span<const double> state_vec,
                          double epsilon, const ActionContext& ctx, std::mt19937_64& rng)
{
    if (unit_uniform(rng) < epsilon) {
        if (unit_uniform(rng) < ctx.expert_prob)
            return ctx.env.expert_action(state, ctx.labels);
        return static_cast<std::size_t>(rng() % ctx.env.num_actions());
    }
    return argmax(net.forward(state_vec, Mode::eval));
}

std::vector<double> q_target(std::span<const Transition* const> batch, const QNetwork& target, double gamma)
{
    if (batch.empty())
        throw InvalidArgument("q_target needs a nonempty batch");
    std::vector<double> y(batch.size());
    bool any_open = false;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        y[i] = batch[i]->reward;
        any_open = any_open || !batch[i]->done;
    }
    if (!any_open)
        return y;
    const Eigen::MatrixXd q_next = target.forward_batch(stack_columns(batch, true), Mode::eval);
    for (std::size_t i = 0; i < batch.size(); ++i)
        if (!batch[i]->done)
            y[i] += gamma * q_next.col(static_cast<Eigen::Index>(i)).maxCoeff();
    return y;
}

std::string format_epoch_log(const EpochLog& e)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%zu\t%.6f\t%.6f\t%.6f\t%.6f\t%.3f", e.epoch, e.epsilon, e.mean_reward,
                  e.mean_length, e.mean_terminal_dpos, e.wall_seconds);
    return buf;
}

TrainResult run_training(const Dataset& data, const Codebook& book, const TrainConfig& config,
                         std::ostream* log_stream)
{
    config.validate();
    if (data.empty())
        throw InvalidArgument("training set is empty");
    data.validate(book.num_classes);

    const Environment env(book, config.env_config(book), data.dim);
    const auto specs = make_architecture(env.state_dim(), env.num_actions(), config.hidden, config.dropout);

    TrainResult result;
    result.net = QNetwork::init(specs, derive_seed({config.seed, 0x1417}));
    QNetwork target = result.net;
    ReplayBuffer buffer(config.buffer_capacity);

    std::vector<std::shared_ptr<const std::vector<double>>> features;
    features.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = data.row(i);
        features.push_back(std::make_shared<const std::vector<double>>(row.begin(), row.end()));
    }

    std::mt19937_64 explore_rng(derive_seed({config.seed, 0xE7}));
    std::mt19937_64 sample_rng(derive_seed({config.seed, 0x5A}));
    std::vector<const Transition*> batch(config.batch_size);
    const auto batch_size = static_cast<double>(config.batch_size);

    auto update = [&] {
        const auto idx = buffer.sample_indices(config.batch_size, sample_rng);
        for (std::size_t i = 0; i < idx.size(); ++i)
            batch[i] = &buffer.at(idx[i]);
        const auto y = q_target(batch, target, config.gamma);

        ForwardCache cache;
        const Eigen::MatrixXd q = result.net.forward_batch(stack_columns(batch, false), Mode::train,
                                                           derive_seed({config.seed, 0xD0, result.updates}), &cache);
        // Loss 0.5 * mean_i (Q(s_i, a_i) - y_i)^2 on the taken action only.
        Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(q.rows(), q.cols());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const auto a = static_cast<Eigen::Index>(batch[i]->action);
            const auto c = static_cast<Eigen::Index>(i);
            dq(a, c) = (q(a, c) - y[i]) / batch_size;
        }
        result.net.sgd_update(result.net.backward(cache, dq), config.learning_rate);
        ++result.updates;
        if (result.updates % config.target_sync_interval == 0)
            target = result.net;
    };

    std::vector<std::size_t> order(data.size());
    std::vector<double> state_vec(env.state_dim());
    const auto start = std::chrono::steady_clock::now();

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const double eps = epsilon_at(epoch, config);
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::mt19937_64 shuffle_rng(derive_seed({config.seed, 0x5F, epoch}));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle_rng() % i)]);

        double reward_sum = 0.0;
        double length_sum = 0.0;
        double dpos_sum = 0.0;
        for (auto item : order) {
            const LabelSet& labels = data.labels[item];
            const ActionContext ctx{env, labels, config.expert_prob};
            State state = env.reset_for_epoch(features[item], item, config.run_seed, epoch);
            double episode_reward = 0.0;
            std::size_t length = 0;
            while (!state.done) {
                env.encode_state_vector(state, state_vec);
                const auto action = select_action(result.net, state, state_vec, eps, ctx, explore_rng);
                StepOutcome out = env.step(state, action, labels);
                Transition t;
                t.state_vec = state_vec;
                t.action = action;
                t.reward = out.reward;
                t.next_state_vec = env.encode_state_vector(out.next_state);
                t.done = out.terminated;
                buffer.push(std::move(t));
                episode_reward += out.reward;
                ++length;
                state = std::move(out.next_state);
                if (buffer.size() >= config.batch_size)
                    update();
            }
            reward_sum += episode_reward;
            length_sum += static_cast<double>(length);
            dpos_sum += static_cast<double>(d_pos(state.code, labels, book));
        }

        EpochLog entry;
        entry.epoch = epoch + 1;
        entry.epsilon = eps;
        const auto n = static_cast<double>(data.size());
        entry.mean_reward = reward_sum / n;
        entry.mean_length = length_sum / n;
        entry.mean_terminal_dpos = dpos_sum / n;
        entry.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.log.push_back(entry);
        if (log_stream)
            *log_stream << format_epoch_log(entry) << '\n' << std::flush;
    }
    return result;
}

}  // namespace drlh
