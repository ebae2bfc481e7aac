// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number ("acceptance 1 4 8").

#include "drlh/bch.hpp"
#include "drlh/codebook.hpp"
#include "drlh/encoder.hpp"
#include "drlh/environment.hpp"
#include "drlh/errors.hpp"
#include "drlh/margin.hpp"
#include "drlh/qnetwork.hpp"
#include "drlh/retrieval.hpp"
#include "drlh/sweep.hpp"
#include "drlh/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace drlh;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Exact codebook distances; C10/b16 also checked over the full (15, 5)
//    code by enumeration.
Outcome codebook_margin()
{
    const auto a = build_codebook(10, 16, 0);
    const BCHCode bch = build_bch(GaloisField(4), 3);
    std::vector<BinaryCode> all;
    for (std::uint64_t msg = 0; msg < (1u << bch.k); ++msg)
        all.push_back(bch.encode(msg));
    const std::size_t full = pairwise_min_distance(all, bch.n);
    const auto b = build_codebook(21, 32, 0);
    const bool ok = a.min_distance == 7 && a.radius == 3 && full == 7 && all.size() == 32 &&
                    b.min_distance == 15 && b.radius == 7 && pairwise_min_distance(b.codewords, b.core_length()) == 15;
    return {ok, fmt("C10/b16 D=%zu R=%zu (all 32 BCH(15,5) words: D=%zu); C21/b32 D=%zu R=%zu", a.min_distance,
                    a.radius, full, b.min_distance, b.radius)};
}

// 2. Flip rewards telescope to the margin difference.
Outcome telescoping()
{
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    std::size_t episodes = 0;
    while (episodes < 1000) {
        const std::size_t b = 4 + rng() % 61;
        const std::size_t classes = 2 + rng() % 20;
        Codebook book;
        try {
            book = build_codebook(classes, b, rng());
        } catch (const TooManyClasses&) {
            continue;
        }
        LabelSet labels{rng() % classes};
        if (rng() % 3 == 0 && classes > 2)
            labels = LabelSet{rng() % classes, rng() % classes};
        const Environment env(book, EnvConfig{0, 5.0, 1 + rng() % (2 * b)}, 1);
        State s = env.reset(std::vector<double>{0.0}, rng(), rng());
        const double start = class_margin(s.code, labels, book);
        double sum = 0.0;
        while (!s.done) {
            const auto out = env.step(s, rng() % b, labels);
            sum += out.reward;
            s = out.next_state;
        }
        worst = std::max(worst, std::abs(sum - (start - class_margin(s.code, labels, book))));
        ++episodes;
    }
    return {worst <= 1e-9, fmt("1000 episodes, max |sum r - (m0 - mT)| = %.3g", worst)};
}

// 3. Central differences on 208 -> 512 -> 512 -> 17 with fixed masks.
Outcome gradient_check()
{
    auto net = QNetwork::init(make_architecture(208, 17), 31);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(208);
    for (auto& v : x)
        v = u(rng);
    const std::uint64_t mask_seed = 99;
    Eigen::VectorXd dq(17);
    for (auto& v : dq)
        v = u(rng);

    ForwardCache cache;
    net.forward(x, Mode::train, mask_seed, &cache);
    const Gradients g = net.backward(cache, std::span<const double>(dq.data(), 17));
    auto objective = [&] { return net.forward(x, Mode::train, mask_seed).dot(dq); };

    const double h = 1e-5;
    double worst = 0.0;
    std::size_t probes = 0;
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        auto& layer = net.mutable_layers()[l];
        std::size_t taken = 0;
        while (taken < 20) {
            const bool bias = taken % 5 == 4;
            double* p;
            double analytic;
            if (bias) {
                const auto i = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(layer.biases.size()));
                p = &layer.biases(i);
                analytic = g.biases[l](i);
            } else {
                const auto r = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(layer.weights.rows()));
                const auto c = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(layer.weights.cols()));
                p = &layer.weights(r, c);
                analytic = g.weights[l](r, c);
            }
            const double saved = *p;
            *p = saved + h;
            const double up = objective();
            *p = saved - h;
            const double down = objective();
            *p = saved;
            const double numeric = (up - down) / (2 * h);
            // Dead units (dropped or relu-off) have zero gradient both ways.
            if (std::abs(numeric) < 1e-9 && analytic == 0.0) {
                ++taken;
                ++probes;
                continue;
            }
            worst = std::max(worst, std::abs(numeric - analytic) / std::max(std::abs(numeric), std::abs(analytic)));
            ++taken;
            ++probes;
        }
    }
    return {worst < 1e-4, fmt("%zu probes, max relative error %.3g", probes, worst)};
}

// 4. The greedy expert reaches d_pos <= eta within b flips.
Outcome expert_convergence()
{
    std::string detail;
    bool ok = true;
    for (auto [classes, b] : {std::pair<std::size_t, std::size_t>{2, 8}, {10, 16}}) {
        const auto book = build_codebook(classes, b, 3);
        const Environment env(book, EnvConfig::defaults_for(book), 1);
        std::mt19937_64 rng(b);
        std::size_t reached = 0;
        std::size_t max_flips = 0;
        for (int trial = 0; trial < 500; ++trial) {
            const LabelSet labels{rng() % classes};
            State s = env.reset(std::vector<double>{0.0}, static_cast<std::uint64_t>(trial), 11);
            std::size_t flips = 0;
            while (!s.done) {
                const auto a = env.expert_action(s, labels);
                if (a == env.terminate_action())
                    break;
                s = env.advance(s, a);
                ++flips;
            }
            max_flips = std::max(max_flips, flips);
            reached += flips <= b && d_pos(s.code, labels, book) <= env.config().eta;
        }
        ok = ok && reached == 500;
        detail += fmt("%sb=%zu C=%zu eta=%zu: %zu/500, max flips %zu", detail.empty() ? "" : "; ", b, classes,
                      env.config().eta, reached, max_flips);
    }
    return {ok, detail};
}

// 5. Trained greedy action vs value iteration on the 8 vertices of the
//    3-cube, both classes, fresh history.
Outcome policy_oracle()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto book = build_codebook(2, 3, 0);
    TrainConfig config;
    config.hidden = {64};
    config.epochs = 150;
    config.eps_decay_epochs = 100;
    config.seed = 5;
    const Environment env(book, config.env_config(book), 2);

    Dataset data;
    data.dim = 2;
    for (std::size_t i = 0; i < 64; ++i) {
        const std::size_t c = i % 2;
        data.features.push_back(c == 0 ? 1.0 : -1.0);
        data.features.push_back(c == 0 ? -1.0 : 1.0);
        data.labels.push_back(LabelSet{c});
        data.splits.push_back(Split::train);
    }
    const auto result = run_training(data, book, config);

    const double gamma = config.gamma;
    std::size_t agree = 0;
    std::size_t total = 0;
    for (std::size_t c = 0; c < 2; ++c) {
        const LabelSet labels{c};
        const std::vector<double> feature(data.row(c).begin(), data.row(c).end());
        auto state_at = [&](std::uint64_t v) {
            State s = env.reset(feature, 0, 0);
            for (std::size_t i = 0; i < 3; ++i)
                s.code.set(i, (v >> i) & 1u);
            return s;
        };
        // History-free value iteration over codes; terminate is absorbing.
        std::vector<double> value(8, 0.0);
        std::vector<std::vector<double>> q(8, std::vector<double>(4));
        for (int iter = 0; iter < 1000; ++iter) {
            for (std::uint64_t v = 0; v < 8; ++v) {
                const State s = state_at(v);
                for (std::size_t k = 0; k < 3; ++k)
                    q[v][k] = reward_flip(s, env.advance(s, k), labels, book) + gamma * value[v ^ (1u << k)];
                q[v][3] = reward_terminate(s, env.config(), labels, book);
            }
            for (std::uint64_t v = 0; v < 8; ++v)
                value[v] = *std::max_element(q[v].begin(), q[v].end());
        }
        for (std::uint64_t v = 0; v < 8; ++v) {
            const auto a = argmax(result.net.forward(env.encode_state_vector(state_at(v)), Mode::eval));
            agree += q[v][a] >= value[v] - 1e-9;
            ++total;
        }
    }
    const double rate = static_cast<double>(agree) / static_cast<double>(total);
    const double secs = seconds_since(t0);
    return {rate >= 0.95 && secs < 120,
            fmt("%zu/%zu (vertex, class) pairs pick an optimal action (%.1f%%), %.1f s", agree, total, 100 * rate,
                secs)};
}

struct Benchmark {
    Dataset train, query, db;
    Codebook book;
    TrainConfig config;
};

Benchmark benchmark_setup(std::uint64_t seed)
{
    SynthOptions o;  // C=10, 250 per class, d_f=32, spread 0.15, seed 1
    const auto data = synth_gaussian(o);
    Benchmark b;
    b.train = data.subset(Split::train);
    b.query = data.subset(Split::query);
    b.db = retrieval_database(data, true);
    b.book = build_codebook(10, 16, 7);
    b.config.seed = seed;
    return b;
}

QNetwork g_benchmark_net;  // seed-0 model reused by the M sweep

// 6. Synthetic benchmark under the default configuration, three seeds.
Outcome synthetic_benchmark()
{
    std::vector<double> maps;
    double slowest = 0.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto b = benchmark_setup(seed);
        const auto t0 = std::chrono::steady_clock::now();
        auto result = run_training(b.train, b.book, b.config);
        const Environment env(b.book, b.config.env_config(b.book), b.train.dim);
        const auto report = evaluate_retrieval(result.net, env, b.query, b.db, b.config.run_seed, b.db.size());
        slowest = std::max(slowest, seconds_since(t0));
        maps.push_back(report.map);
        std::fprintf(stderr, "  seed %llu: mAP %.4f\n", static_cast<unsigned long long>(seed), report.map);
        if (seed == 0)
            g_benchmark_net = std::move(result.net);
    }
    auto sorted = maps;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[1];

    // Random-code floor on the same query/database split.
    const auto b = benchmark_setup(0);
    std::mt19937_64 rng(77);
    std::vector<BinaryCode> qc, dc;
    for (std::size_t i = 0; i < b.query.size(); ++i)
        qc.push_back(BinaryCode::random(16, rng));
    for (std::size_t i = 0; i < b.db.size(); ++i)
        dc.push_back(BinaryCode::random(16, rng));
    const double floor = mean_average_precision(qc, b.query.labels, dc, b.db.labels, b.db.size()).map;

    const bool ok = median >= 0.85 && std::abs(floor - 0.10) <= 0.05 && slowest <= 600.0;
    return {ok, fmt("mAP per seed %.4f %.4f %.4f, median %.4f (>= 0.85); random floor %.4f; slowest run %.0f s",
                    maps[0], maps[1], maps[2], median, floor, slowest)};
}

// 7. mAP(M) non-decreasing and flat from 16 on; interior eta beats both ends.
Outcome sweep_shapes()
{
    const auto t0 = std::chrono::steady_clock::now();
    auto b = benchmark_setup(0);
    if (g_benchmark_net.layers().empty())
        g_benchmark_net = run_training(b.train, b.book, b.config).net;
    const auto base = b.config.env_config(b.book);
    const auto m_points =
        sweep_max_steps(g_benchmark_net, b.book, base, b.query, b.db, {1, 2, 4, 8, 16, 24, 32}, 0, b.db.size());
    bool monotone = true;
    bool flat = true;
    double at16 = 0.0;
    for (std::size_t i = 0; i < m_points.size(); ++i) {
        if (i > 0 && m_points[i].value <= 16)
            monotone = monotone && m_points[i].map >= m_points[i - 1].map;
        if (m_points[i].value == 16)
            at16 = m_points[i].map;
    }
    for (const auto& p : m_points)
        if (p.value > 16)
            flat = flat && std::abs(p.map - at16) <= 0.01;

    const auto eta_points = sweep_eta(b.train, b.query, b.db, b.book, b.config, {0, 1, 2, 3}, b.db.size());
    const double ends = std::max(eta_points.front().map, eta_points.back().map);
    const double interior = std::max(eta_points[1].map, eta_points[2].map);
    const bool eta_ok = interior > ends;
    const double secs = seconds_since(t0);

    std::string m_row, e_row;
    for (const auto& p : m_points)
        m_row += fmt(" %zu:%.4f", p.value, p.map);
    for (const auto& p : eta_points)
        e_row += fmt(" %zu:%.4f", p.value, p.map);
    return {monotone && flat && eta_ok && secs <= 45 * 60,
            fmt("M%s (monotone %s, flat %s); eta%s (interior %s); %.0f s", m_row.c_str(), monotone ? "yes" : "no",
                flat ? "yes" : "no", e_row.c_str(), eta_ok ? "wins" : "loses", secs)};
}

int shell(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Log lines minus the wall-clock column.
std::string strip_wall_clock(const std::string& log)
{
    std::istringstream is(log);
    std::string out;
    for (std::string line; std::getline(is, line);) {
        if (!line.empty() && line[0] != '#')
            line = line.substr(0, line.rfind('\t'));
        out += line + '\n';
    }
    return out;
}

// 8. Two CLI train + encode runs give identical bytes.
Outcome cli_determinism()
{
    const fs::path dir = fs::temp_directory_path() / "drlh_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cli = "'" DRLH_CLI_PATH "' --threads 1 ";
    const std::string in = "cd '" + dir.string() + "' && ";
    std::ofstream(dir / "run.cfg") << "epochs = 3\nhidden = 32,32\nseed = 11\nrun_seed = 4\n";
    bool ok = shell(in + cli + "synth --per-class 40 --seed 3 --out-prefix s > /dev/null") == 0 &&
              shell(in + cli + "codebook --classes 10 --bits 16 --seed 7 --out cb.txt > /dev/null") == 0;
    for (int run = 0; run < 2 && ok; ++run) {
        const std::string tag = std::to_string(run);
        ok = shell(in + cli + "train --features s.train.fv --labels s.train.labels --codebook cb.txt --config run.cfg" +
                   " --out-model m" + tag + ".bin --log log" + tag + ".txt") == 0 &&
             shell(in + cli + "encode --model m" + tag + ".bin --features s.query.fv --codebook cb.txt --seed 4" +
                   " --out q" + tag + ".codes") == 0;
    }
    if (!ok)
        return {false, "CLI invocation failed"};
    const bool logs = strip_wall_clock(slurp(dir / "log0.txt")) == strip_wall_clock(slurp(dir / "log1.txt"));
    const bool models = slurp(dir / "m0.bin") == slurp(dir / "m1.bin");
    const bool codes = slurp(dir / "q0.codes") == slurp(dir / "q1.codes");
    const bool nonempty = !slurp(dir / "q0.codes").empty() && slurp(dir / "m0.bin").size() > 8;
    fs::remove_all(dir);
    return {logs && models && codes && nonempty,
            fmt("logs %s (wall-clock column excluded), models %s, codes %s", logs ? "identical" : "differ",
                models ? "identical" : "differ", codes ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"BCH margin exact", codebook_margin},
        {"reward telescoping", telescoping},
        {"gradient finite differences", gradient_check},
        {"expert convergence", expert_convergence},
        {"policy matches value iteration", policy_oracle},
        {"synthetic end-to-end benchmark", synthetic_benchmark},
        {"sweep shapes (M, eta)", sweep_shapes},
        {"CLI determinism", cli_determinism},
    };
    std::set<std::size_t> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::strtoul(argv[i], nullptr, 10));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!selected.empty() && !selected.count(i + 1))
            continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
