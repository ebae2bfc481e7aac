#include "drlh/encoder.hpp"

#include "drlh/errors.hpp"

#include <thread>

namespace drlh {

EncodeTrace encode_item(const QNetwork& net, const Environment& env, std::span<const double> feature,
                        std::uint64_t item_id, std::uint64_t run_seed)
{
    EncodeTrace trace;
    State state = env.reset(feature, item_id, run_seed);
    std::vector<double> x(env.state_dim());
    while (!state.done) {
        env.encode_state_vector(state, x);
        const auto action = argmax(net.forward(x, Mode::eval));
        trace.actions.push_back(action);
        trace.terminated = action == env.terminate_action();
        state = env.advance(state, action);
    }
    trace.code = std::move(state.code);
    return trace;
}

std::vector<BinaryCode> encode_dataset(const QNetwork& net, const Dataset& data, const Environment& env,
                                       std::uint64_t run_seed, unsigned threads)
{
    if (net.input_dim() != env.state_dim() || net.output_dim() != env.num_actions())
        throw ArchitectureMismatch("network maps " + std::to_string(net.input_dim()) + " -> " +
                                   std::to_string(net.output_dim()) + " but the environment needs " +
                                   std::to_string(env.state_dim()) + " -> " + std::to_string(env.num_actions()));
    if (data.dim != env.feature_dim())
        throw DimensionMismatch("dataset d_f=" + std::to_string(data.dim) + " but environment expects " +
                                std::to_string(env.feature_dim()));

    std::vector<BinaryCode> codes(data.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            codes[i] = encode_item(net, env, data.row(i), i, run_seed).code;
    };
    if (threads <= 1 || data.size() < 2) {
        work(0, data.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (data.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(data.size(), b + chunk);
            if (b < e)
                pool.emplace_back(work, b, e);
        }
    }
    return codes;
}

}  // namespace drlh
