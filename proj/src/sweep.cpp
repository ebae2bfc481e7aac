#include "drlh/sweep.hpp"

#include "drlh/encoder.hpp"

#include <cstdio>
#include <ostream>

namespace drlh {

RetrievalReport evaluate_retrieval(const QNetwork& net, const Environment& env, const Dataset& query,
                                   const Dataset& database, std::uint64_t run_seed, std::size_t top_k,
                                   unsigned threads)
{
    const auto q_codes = encode_dataset(net, query, env, run_seed, threads);
    const auto db_codes = encode_dataset(net, database, env, run_seed, threads);
    return mean_average_precision(q_codes, query.labels, db_codes, database.labels, top_k, threads);
}

std::vector<SweepPoint> sweep_max_steps(const QNetwork& net, const Codebook& book, const EnvConfig& base,
                                        const Dataset& query, const Dataset& database,
                                        const std::vector<std::size_t>& values, std::uint64_t run_seed,
                                        std::size_t top_k, unsigned threads)
{
    std::vector<SweepPoint> out;
    for (auto m : values) {
        EnvConfig cfg = base;
        cfg.max_steps = m;
        const Environment env(book, cfg, query.dim);
        out.push_back({m, evaluate_retrieval(net, env, query, database, run_seed, top_k, threads).map});
    }
    return out;
}

std::vector<SweepPoint> sweep_eta(const Dataset& train, const Dataset& query, const Dataset& database,
                                  const Codebook& book, const TrainConfig& config,
                                  const std::vector<std::size_t>& values, std::size_t top_k, unsigned threads,
                                  std::ostream* progress)
{
    std::vector<SweepPoint> out;
    for (auto eta : values) {
        TrainConfig cfg = config;
        cfg.eta = eta;
        if (progress)
            *progress << "# training with eta = " << eta << '\n';
        const auto trained = run_training(train, book, cfg, progress);
        const Environment env(book, cfg.env_config(book), train.dim);
        out.push_back({eta, evaluate_retrieval(trained.net, env, query, database, cfg.run_seed, top_k, threads).map});
    }
    return out;
}

std::string format_sweep_table(const std::string& param, const std::vector<SweepPoint>& points)
{
    std::string head = param;
    std::string row = "mAP";
    char buf[32];
    for (const auto& p : points) {
        head += '\t' + std::to_string(p.value);
        std::snprintf(buf, sizeof buf, "\t%.4f", p.map);
        row += buf;
    }
    return head + '\n' + row + '\n';
}

}  // namespace drlh
