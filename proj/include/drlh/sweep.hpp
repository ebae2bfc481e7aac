#pragma once

#include "drlh/codebook.hpp"
#include "drlh/dataset.hpp"
#include "drlh/environment.hpp"
#include "drlh/qnetwork.hpp"
#include "drlh/retrieval.hpp"
#include "drlh/trainer.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace drlh {

/// Encodes query and database with `net` and scores Hamming-ranking mAP.
RetrievalReport evaluate_retrieval(const QNetwork& net, const Environment& env, const Dataset& query,
                                   const Dataset& database, std::uint64_t run_seed, std::size_t top_k,
                                   unsigned threads = 1);

struct SweepPoint {
    std::size_t value = 0;
    double map = 0.0;
};

/// Re-encodes with each step cap M in `values`; the network is fixed.
std::vector<SweepPoint> sweep_max_steps(const QNetwork& net, const Codebook& book, const EnvConfig& base,
                                        const Dataset& query, const Dataset& database,
                                        const std::vector<std::size_t>& values, std::uint64_t run_seed,
                                        std::size_t top_k, unsigned threads = 1);

/// Retrains from scratch for each termination threshold eta in `values`
/// (same seeds every time) and evaluates with that eta.
std::vector<SweepPoint> sweep_eta(const Dataset& train, const Dataset& query, const Dataset& database,
                                  const Codebook& book, const TrainConfig& config,
                                  const std::vector<std::size_t>& values, std::size_t top_k, unsigned threads = 1,
                                  std::ostream* progress = nullptr);

/// Two tab-separated rows: the parameter values and the mAP for each.
std::string format_sweep_table(const std::string& param, const std::vector<SweepPoint>& points);

}  // namespace drlh
