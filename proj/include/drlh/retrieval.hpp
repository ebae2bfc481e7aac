#pragma once

#include "drlh/hamming.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace drlh {

struct RetrievalReport {
    double map = 0.0;
    std::vector<std::pair<std::size_t, double>> precision_at_k;
    std::vector<double> per_query_ap;
    std::size_t top_k = 0;
    std::vector<std::pair<std::string, std::string>> config;
};

/// Truncated average precision of one ranked list. `relevant[r]` tells
/// (nonzero) whether the item at rank r (0-based) is relevant; only the first top_k
/// ranks count. The sum of precision-at-hit is divided by
/// min(total_relevant, top_k); zero relevant items give AP 0.
double average_precision(std::span<const std::uint8_t> relevant, std::size_t total_relevant, std::size_t top_k);

/// Hamming-ranking mAP: each query ranks the database with
/// rank_by_distance, an item is relevant when it shares at least one class
/// with the query. Queries without relevant items contribute AP 0.
/// Throws WidthMismatch, InvalidArgument.
RetrievalReport mean_average_precision(std::span<const BinaryCode> query_codes,
                                       std::span<const LabelSet> query_labels,
                                       std::span<const BinaryCode> db_codes, std::span<const LabelSet> db_labels,
                                       std::size_t top_k, unsigned threads = 1);

/// Tab-separated `key<TAB>value` lines, then a "# per-query AP" block with
/// one `index<TAB>ap` line per query.
void write_report(std::ostream& os, const RetrievalReport& report);

}  // namespace drlh
