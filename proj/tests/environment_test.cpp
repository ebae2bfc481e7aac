#include "drlh/environment.hpp"
#include "drlh/errors.hpp"
#include "drlh/margin.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <random>

using namespace drlh;

namespace {

struct Fixture {
    Codebook book = build_codebook(10, 16, 7);
    Environment env{book, EnvConfig::defaults_for(book), 32};
    std::vector<double> feature = std::vector<double>(32, 0.25);
};

// Builds a state at an explicit code, bypassing reset.
State at_code(const Environment& env, const BinaryCode& code)
{
    State s = env.reset(std::vector<double>(env.feature_dim(), 0.0), 0, 0);
    s.code = code;
    return s;
}

}  // namespace

TEST(EnvConfig, DefaultsAndValidation)
{
    const auto book = build_codebook(10, 16, 7);
    const auto cfg = EnvConfig::defaults_for(book);
    EXPECT_EQ(cfg.eta, 1u);  // floor(3 / 2)
    EXPECT_EQ(cfg.max_steps, 16u);
    EXPECT_DOUBLE_EQ(cfg.sigma, 5.0);
    EnvConfig bad = cfg;
    bad.eta = 4;
    EXPECT_THROW(bad.validate(book), InvalidArgument);
    bad = cfg;
    bad.max_steps = 0;
    EXPECT_THROW(Environment(book, bad, 4), InvalidArgument);
}

TEST(Reset, DeterministicFreshState)
{
    Fixture f;
    const auto a = f.env.reset(f.feature, 7, 99);
    const auto b = f.env.reset(f.feature, 7, 99);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.step_index, 0u);
    EXPECT_FALSE(a.done);
    for (std::size_t r = 0; r < kHistoryDepth; ++r)
        for (std::size_t c = 0; c < 16; ++c)
            EXPECT_FALSE(a.history_bit(r, c));
    EXPECT_THROW(f.env.reset(std::vector<double>(31, 0.0), 0, 0), DimensionMismatch);
}

TEST(Reset, ItemStreamsAreIndependent)
{
    Fixture f;
    const auto first = f.env.reset(f.feature, 0, 5).code;
    std::size_t differing_items = 0;
    for (std::uint64_t item = 1; item <= 100; ++item)
        differing_items += f.env.reset(f.feature, item, 5).code != first;
    EXPECT_GE(differing_items, 99u);
    // Epoch reseeding gives yet another stream.
    auto ptr = std::make_shared<const std::vector<double>>(f.feature);
    EXPECT_NE(f.env.reset_for_epoch(ptr, 0, 5, 0).code, f.env.reset_for_epoch(ptr, 0, 5, 1).code);
}

TEST(RewardFlip, DirectSubstitutionExamples)
{
    // Two negatives at distance 8 from the all-zero start, and a positive
    // class codeword; flip effects are read off the definition directly.
    Codebook book;
    book.b = 4;
    book.num_classes = 2;
    book.codewords = {BinaryCode::from_string("1100"), BinaryCode::from_string("0011")};
    const Environment env(book, EnvConfig{0, 5.0, 4}, 1);
    const LabelSet labels{0};
    const State s0 = at_code(env, BinaryCode::from_string("0000"));
    // bit 0 toward class 0 and away from class 1: d_pos 2->1, d_neg 2->3
    const State s1 = env.advance(s0, 0);
    EXPECT_DOUBLE_EQ(reward_flip(s0, s1, labels, book), (2.0 - 2.0) - (1.0 - 3.0));
    // A flip that changes neither distance gives 0 (telescoping identity).
    EXPECT_DOUBLE_EQ(reward_flip(s0, s0, labels, book), 0.0);
}

TEST(RewardFlip, MatchesEquationOnConstructedDistances)
{
    // d_pos: 5 -> 4, d_neg: 7 -> 7  gives +1
    // d_pos: 3 -> 4, d_neg: 6.5 -> 6.25 gives -1.25
    EXPECT_DOUBLE_EQ((5.0 - 7.0) - (4.0 - 7.0), 1.0);
    EXPECT_DOUBLE_EQ((3.0 - 6.5) - (4.0 - 6.25), -1.25);

    Fixture f;
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const State s = at_code(f.env, BinaryCode::random(16, rng));
        const LabelSet labels{rng() % 10};
        const std::size_t k = rng() % 16;
        const State t = f.env.advance(s, k);
        const double expected = (static_cast<double>(d_pos(s.code, labels, f.book)) - d_neg(s.code, labels, f.book)) -
                                (static_cast<double>(d_pos(t.code, labels, f.book)) - d_neg(t.code, labels, f.book));
        EXPECT_DOUBLE_EQ(reward_flip(s, t, labels, f.book), expected);
        EXPECT_NEAR(f.env.flip_rewards(s, labels)[k], expected, 1e-12);
        EXPECT_LE(std::abs(expected), 2.0);
    }
}

TEST(RewardTerminate, ThresholdInclusive)
{
    Fixture f;
    const LabelSet labels{2};
    auto code_at = [&](std::size_t dpos) {
        auto c = f.book.codewords[2];
        for (std::size_t i = 0; i < dpos; ++i)
            c.toggle(i);
        return at_code(f.env, c);
    };
    const EnvConfig cfg{2, 5.0, 16};
    EXPECT_DOUBLE_EQ(reward_terminate(code_at(1), cfg, labels, f.book), 5.0);
    EXPECT_DOUBLE_EQ(reward_terminate(code_at(3), cfg, labels, f.book), -5.0);
    EXPECT_DOUBLE_EQ(reward_terminate(code_at(2), cfg, labels, f.book), 5.0);
}

TEST(Step, TerminateKeepsCodeAndHistory)
{
    Fixture f;
    State s = f.env.reset(f.feature, 1, 1);
    s = f.env.advance(s, 3);
    const auto out = f.env.step(s, f.env.terminate_action(), LabelSet{0});
    EXPECT_TRUE(out.done);
    EXPECT_TRUE(out.terminated);
    EXPECT_EQ(out.next_state.code, s.code);
    EXPECT_EQ(out.next_state.history, s.history);
    EXPECT_THROW(f.env.step(out.next_state, 0, LabelSet{0}), EpisodeAlreadyDone);
    EXPECT_THROW(f.env.step(s, 17, LabelSet{0}), ActionOutOfRange);
}

TEST(Step, DoubleFlipRestoresCodeAndRecordsTwice)
{
    Fixture f;
    const State s = f.env.reset(f.feature, 2, 1);
    const auto a = f.env.step(s, 5, LabelSet{1});
    const auto b = f.env.step(a.next_state, 5, LabelSet{1});
    EXPECT_EQ(b.next_state.code, s.code);
    EXPECT_TRUE(b.next_state.history_bit(kHistoryDepth - 1, 5));
    EXPECT_TRUE(b.next_state.history_bit(kHistoryDepth - 2, 5));
    EXPECT_DOUBLE_EQ(a.reward + b.reward, 0.0);
}

TEST(Step, HistoryIsFifoOfTenFlips)
{
    Fixture f;
    State s = f.env.reset(f.feature, 3, 1);
    const std::vector<std::size_t> script = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::deque<std::size_t> oracle;
    for (auto a : script) {
        s = f.env.advance(s, a);
        oracle.push_back(a);
        if (oracle.size() > kHistoryDepth)
            oracle.pop_front();
    }
    // Actions 2..11 of the script (1-based), i.e. indices 1..10, oldest first.
    ASSERT_EQ(oracle.front(), 1u);
    for (std::size_t r = 0; r < kHistoryDepth; ++r)
        for (std::size_t c = 0; c < 16; ++c)
            EXPECT_EQ(s.history_bit(r, c), c == oracle[r]) << r << "," << c;
}

TEST(Step, StepCapEndsEpisodeWithoutTerminateFlag)
{
    const auto book = build_codebook(10, 16, 7);
    const Environment env(book, EnvConfig{1, 5.0, 3}, 2);
    State s = env.reset(std::vector<double>{0.0, 1.0}, 0, 0);
    StepOutcome out;
    for (int i = 0; i < 3; ++i) {
        out = env.step(s, static_cast<std::size_t>(i), LabelSet{0});
        s = out.next_state;
    }
    EXPECT_TRUE(out.done);
    EXPECT_FALSE(out.terminated);
}

TEST(Expert, TerminatesAtTarget)
{
    Fixture f;
    EXPECT_EQ(f.env.expert_action(at_code(f.env, f.book.codewords[6]), LabelSet{6}), f.env.terminate_action());
}

TEST(Expert, OneFlipAwayPicksTheDifferingBit)
{
    Fixture f;
    for (std::size_t bit = 0; bit < 16; ++bit) {
        auto c = f.book.codewords[4];
        c.toggle(bit);
        const State s = at_code(f.env, c);
        // Brute force over all b + 1 actions with the reward definitions.
        std::size_t best = f.env.terminate_action();
        double best_r = 0.0;
        for (std::size_t k = 0; k < 16; ++k) {
            const double r = reward_flip(s, f.env.advance(s, k), LabelSet{4}, f.book);
            if (r > best_r + 1e-12) {
                best_r = r;
                best = k;
            }
        }
        EXPECT_EQ(f.env.expert_action(s, LabelSet{4}), best);
        if (best != f.env.terminate_action())
            EXPECT_EQ(best, bit);
    }
}

TEST(Expert, TieGoesToSmallestIndex)
{
    Codebook book;
    book.b = 4;
    book.num_classes = 2;
    book.codewords = {BinaryCode::from_string("1100"), BinaryCode::from_string("0011")};
    const Environment env(book, EnvConfig{0, 5.0, 4}, 1);
    // Bits 0 and 1 both move toward class 0 and away from class 1 equally.
    EXPECT_EQ(env.expert_action(at_code(env, BinaryCode::from_string("0000")), LabelSet{0}), 0u);
}

TEST(EncodeState, LayoutAndLength)
{
    Fixture f;
    State s = f.env.reset(f.feature, 0, 0);
    auto v = f.env.encode_state_vector(s);
    ASSERT_EQ(v.size(), 32u + 16u + 160u);
    for (std::size_t i = 0; i < 32; ++i)
        EXPECT_DOUBLE_EQ(v[i], 0.25);
    for (std::size_t i = 0; i < 16; ++i)
        EXPECT_DOUBLE_EQ(v[32 + i], s.code.bit(i) ? 1.0 : 0.0);
    for (std::size_t i = 48; i < v.size(); ++i)
        EXPECT_EQ(v[i], 0.0);

    s = f.env.advance(s, 3);
    v = f.env.encode_state_vector(s);
    std::size_t ones = 0;
    for (std::size_t i = 48; i < v.size(); ++i)
        ones += v[i] == 1.0;
    EXPECT_EQ(ones, 1u);
    EXPECT_EQ(v[48 + 9 * 16 + 3], 1.0);
}

TEST(EpisodeProperties, TelescopingBoundedRewardsAndLength)
{
    std::mt19937_64 rng(21);
    for (int episode = 0; episode < 300; ++episode) {
        const std::size_t b = 8 + rng() % 25;
        const std::size_t classes = 2 + rng() % 8;
        Codebook book;
        try {
            book = build_codebook(classes, b, rng());
        } catch (const TooManyClasses&) {
            continue;
        }
        const Environment env(book, EnvConfig{0, 5.0, b}, 3);
        const LabelSet labels{rng() % classes};
        State s = env.reset(std::vector<double>{1, 2, 3}, rng(), rng());
        const State start = s;
        double total = 0.0;
        std::size_t outcomes = 0;
        while (!s.done) {
            const auto out = env.step(s, rng() % b, labels);
            EXPECT_LE(std::abs(out.reward), 2.0 + 1e-12);
            total += out.reward;
            s = out.next_state;
            ++outcomes;
        }
        EXPECT_LE(outcomes, b + 1);
        EXPECT_NEAR(total, class_margin(start.code, labels, book) - class_margin(s.code, labels, book), 1e-9);
    }
}

TEST(EpisodeProperties, ExpertReachesEtaWithinBFlipsSingleLabel)
{
    for (auto [classes, b] : {std::pair<std::size_t, std::size_t>{10, 16}, {2, 8}, {21, 32}}) {
        const auto book = build_codebook(classes, b, 7);
        const Environment env(book, EnvConfig::defaults_for(book), 1);
        std::mt19937_64 rng(classes * 100 + b);
        for (int trial = 0; trial < 300; ++trial) {
            const LabelSet labels{rng() % classes};
            State s = env.reset(std::vector<double>{0.0}, static_cast<std::uint64_t>(trial), 17);
            std::size_t flips = 0;
            for (;;) {
                const auto a = env.expert_action(s, labels);
                if (a == env.terminate_action())
                    break;
                s = env.advance(s, a);
                ++flips;
                if (s.done)
                    break;
            }
            EXPECT_LE(flips, b);
            EXPECT_LE(d_pos(s.code, labels, book), env.config().eta);
        }
    }
}

TEST(EpisodeProperties, DiscountFavorsShorterExpertPath)
{
    // Two paths from the same start to the codeword: the direct one, and one
    // that detours through a wrong flip and back. Same terminal reward.
    Fixture f;
    const LabelSet labels{3};
    auto start_code = f.book.codewords[3];
    start_code.toggle(2);
    start_code.toggle(7);
    const State s0 = at_code(f.env, start_code);
    auto discounted = [&](const std::vector<std::size_t>& actions, double gamma) {
        State s = s0;
        double ret = 0.0;
        double g = 1.0;
        for (auto a : actions) {
            const auto out = f.env.step(s, a, labels);
            ret += g * out.reward;
            g *= gamma;
            s = out.next_state;
        }
        return ret;
    };
    const std::size_t stop = f.env.terminate_action();
    for (double gamma : {0.5, 0.9, 0.99}) {
        const double short_path = discounted({2, 7, stop}, gamma);
        const double long_path = discounted({2, 11, 11, 7, stop}, gamma);
        EXPECT_GE(short_path, long_path) << "gamma=" << gamma;
    }
}
