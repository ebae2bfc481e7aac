#include "drlh/environment.hpp"

#include "drlh/errors.hpp"
#include "drlh/margin.hpp"
#include "drlh/seeding.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace drlh {

EnvConfig EnvConfig::defaults_for(const Codebook& book)
{
    EnvConfig c;
    c.eta = book.radius / 2;
    c.sigma = 5.0;
    c.max_steps = book.b;
    return c;
}

void EnvConfig::validate(const Codebook& book) const
{
    if (eta > book.radius)
        throw InvalidArgument("eta=" + std::to_string(eta) + " exceeds the codebook radius " +
                              std::to_string(book.radius));
    if (!(sigma > 0.0))
        throw InvalidArgument("sigma must be positive");
    if (max_steps < 1)
        throw InvalidArgument("max_steps must be at least 1");
}

double reward_flip(const State& s_t, const State& s_t1, const LabelSet& labels, const Codebook& book)
{
    return class_margin(s_t.code, labels, book) - class_margin(s_t1.code, labels, book);
}

double reward_terminate(const State& s_t, const EnvConfig& config, const LabelSet& labels, const Codebook& book)
{
    return d_pos(s_t.code, labels, book) <= config.eta ? config.sigma : -config.sigma;
}

Environment::Environment(Codebook book, EnvConfig config, std::size_t feature_dim)
    : book_(std::move(book)), config_(config), feature_dim_(feature_dim)
{
    config_.validate(book_);
}

State Environment::make_state(std::shared_ptr<const std::vector<double>> feature, std::uint64_t stream_seed) const
{
    if (!feature || feature->size() != feature_dim_)
        throw DimensionMismatch("feature has " + std::to_string(feature ? feature->size() : 0) +
                                " entries, environment expects " + std::to_string(feature_dim_));
    std::mt19937_64 rng(stream_seed);
    State s;
    s.feature = std::move(feature);
    s.code = BinaryCode::random(book_.b, rng);
    s.history.fill(-1);
    return s;
}

State Environment::reset(std::span<const double> feature, std::uint64_t item_id, std::uint64_t run_seed) const
{
    return reset(std::make_shared<const std::vector<double>>(feature.begin(), feature.end()), item_id, run_seed);
}

State Environment::reset(std::shared_ptr<const std::vector<double>> feature, std::uint64_t item_id,
                         std::uint64_t run_seed) const
{
    return make_state(std::move(feature), derive_seed({run_seed, item_id}));
}

State Environment::reset_for_epoch(std::shared_ptr<const std::vector<double>> feature, std::uint64_t item_id,
                                   std::uint64_t run_seed, std::uint64_t epoch) const
{
    return make_state(std::move(feature), derive_seed({run_seed, epoch, item_id}));
}

State Environment::advance(const State& state, std::size_t action) const
{
    if (state.done)
        throw EpisodeAlreadyDone("step called on a finished episode");
    if (action > book_.b)
        throw ActionOutOfRange("action " + std::to_string(action) + " with b=" + std::to_string(book_.b));
    State next = state;
    if (action == terminate_action()) {
        // The terminate action is not recorded in the history.
        next.done = true;
        return next;
    }
    next.code.toggle(action);
    std::rotate(next.history.begin(), next.history.begin() + 1, next.history.end());
    next.history.back() = static_cast<int>(action);
    ++next.step_index;
    next.done = next.step_index >= config_.max_steps;
    return next;
}

StepOutcome Environment::step(const State& state, std::size_t action, const LabelSet& labels) const
{
    StepOutcome out;
    out.next_state = advance(state, action);
    out.action_taken = action;
    out.done = out.next_state.done;
    out.terminated = action == terminate_action();
    out.reward = out.terminated ? reward_terminate(state, config_, labels, book_)
                                : reward_flip(state, out.next_state, labels, book_);
    return out;
}

namespace {

// Flip rewards scaled by the negative-class count, as exact integers:
// count * (d_pos - d_pos') - (sum_neg - sum_neg').
std::vector<long long> scaled_flip_rewards(const BinaryCode& code, const LabelSet& labels, const Codebook& book,
                                           long long& neg_count)
{
    if (labels.empty())
        throw EmptyLabelSet("expert needs ground-truth labels");
    const std::size_t b = book.b;
    std::vector<std::size_t> dist(book.num_classes);
    for (std::size_t c = 0; c < book.num_classes; ++c)
        dist[c] = hamming_distance(code, book.codewords[c]);

    neg_count = static_cast<long long>(book.num_classes - labels.size());
    if (neg_count <= 0)
        throw NoNegativeClasses("labels cover every class");
    long long base_pos = std::numeric_limits<long long>::max();
    for (auto c : labels.classes())
        base_pos = std::min(base_pos, static_cast<long long>(dist.at(c)));

    std::vector<long long> out(b);
    for (std::size_t k = 0; k < b; ++k) {
        const bool bit = code.bit(k);
        long long pos = std::numeric_limits<long long>::max();
        long long neg_delta = 0;  // sum_neg' - sum_neg
        for (std::size_t c = 0; c < book.num_classes; ++c) {
            const long long step = book.codewords[c].bit(k) == bit ? 1 : -1;
            if (labels.contains(c))
                pos = std::min(pos, static_cast<long long>(dist[c]) + step);
            else
                neg_delta += step;
        }
        out[k] = neg_count * (base_pos - pos) + neg_delta;
    }
    return out;
}

}  // namespace

std::vector<double> Environment::flip_rewards(const State& state, const LabelSet& labels) const
{
    long long count = 0;
    const auto scaled = scaled_flip_rewards(state.code, labels, book_, count);
    std::vector<double> out(scaled.size());
    for (std::size_t k = 0; k < scaled.size(); ++k)
        out[k] = static_cast<double>(scaled[k]) / static_cast<double>(count);
    return out;
}

std::size_t Environment::expert_action(const State& state, const LabelSet& labels) const
{
    if (state.done)
        throw EpisodeAlreadyDone("expert asked about a finished episode");
    long long count = 0;
    const auto scaled = scaled_flip_rewards(state.code, labels, book_, count);
    std::size_t best = terminate_action();
    long long best_value = 0;
    for (std::size_t k = 0; k < scaled.size(); ++k) {
        if (scaled[k] > best_value) {
            best_value = scaled[k];
            best = k;
        }
    }
    return best;
}

std::vector<double> Environment::encode_state_vector(const State& state) const
{
    std::vector<double> out(state_dim());
    encode_state_vector(state, out);
    return out;
}

void Environment::encode_state_vector(const State& state, std::span<double> out) const
{
    if (out.size() != state_dim())
        throw DimensionMismatch("state buffer has " + std::to_string(out.size()) + " entries, expected " +
                                std::to_string(state_dim()));
    const std::size_t b = book_.b;
    std::copy(state.feature->begin(), state.feature->end(), out.begin());
    auto code_part = out.subspan(feature_dim_, b);
    for (std::size_t i = 0; i < b; ++i)
        code_part[i] = state.code.bit(i) ? 1.0 : 0.0;
    auto hist = out.subspan(feature_dim_ + b);
    std::fill(hist.begin(), hist.end(), 0.0);
    for (std::size_t r = 0; r < kHistoryDepth; ++r)
        if (state.history[r] >= 0)
            hist[r * b + static_cast<std::size_t>(state.history[r])] = 1.0;
}

}  // namespace drlh
