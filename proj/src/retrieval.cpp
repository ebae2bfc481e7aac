#include "drlh/retrieval.hpp"

#include "drlh/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <thread>

namespace drlh {

double average_precision(std::span<const std::uint8_t> relevant, std::size_t total_relevant, std::size_t top_k)
{
    const std::size_t denom = std::min(total_relevant, top_k);
    if (denom == 0)
        return 0.0;
    const std::size_t depth = std::min(top_k, relevant.size());
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < depth; ++r) {
        if (!relevant[r])
            continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
    return sum / static_cast<double>(denom);
}

RetrievalReport mean_average_precision(std::span<const BinaryCode> query_codes,
                                       std::span<const LabelSet> query_labels,
                                       std::span<const BinaryCode> db_codes, std::span<const LabelSet> db_labels,
                                       std::size_t top_k, unsigned threads)
{
    if (query_codes.empty() || db_codes.empty())
        throw InvalidArgument("retrieval needs nonempty query and database sets");
    if (query_codes.size() != query_labels.size() || db_codes.size() != db_labels.size())
        throw InvalidArgument("code and label counts differ");
    if (top_k == 0)
        throw InvalidArgument("top_k must be at least 1");
    const std::size_t width = query_codes.front().width();
    for (const auto& c : query_codes)
        if (c.width() != width)
            throw WidthMismatch("query codes have mixed widths");
    for (const auto& c : db_codes)
        if (c.width() != width)
            throw WidthMismatch("database width " + std::to_string(c.width()) + " vs query width " +
                                std::to_string(width));

    const std::size_t depth = std::min(top_k, db_codes.size());
    std::vector<std::size_t> ks;
    for (std::size_t k : {std::size_t{10}, std::size_t{100}, std::size_t{500}, std::size_t{1000}, depth})
        if (k <= depth && (ks.empty() || ks.back() < k))
            ks.push_back(k);

    const std::size_t nq = query_codes.size();
    RetrievalReport report;
    report.top_k = top_k;
    report.per_query_ap.assign(nq, 0.0);
    std::vector<std::vector<double>> precision(nq, std::vector<double>(ks.size(), 0.0));

    auto work = [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint8_t> rel_flags;
        for (std::size_t q = begin; q < end; ++q) {
            std::size_t total = 0;
            for (const auto& l : db_labels)
                total += l.intersects(query_labels[q]) ? 1 : 0;
            const auto order = rank_by_distance(query_codes[q], db_codes, depth);
            rel_flags.assign(order.size(), 0);
            for (std::size_t r = 0; r < order.size(); ++r)
                rel_flags[r] = db_labels[order[r]].intersects(query_labels[q]);
            report.per_query_ap[q] = average_precision(rel_flags, total, top_k);
            std::size_t hits = 0;
            std::size_t next = 0;
            for (std::size_t r = 0; r < order.size() && next < ks.size(); ++r) {
                hits += rel_flags[r] ? 1 : 0;
                while (next < ks.size() && ks[next] == r + 1) {
                    precision[q][next] = static_cast<double>(hits) / static_cast<double>(r + 1);
                    ++next;
                }
            }
        }
    };
    if (threads <= 1 || nq < 2) {
        work(0, nq);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (nq + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(nq, b + chunk);
            if (b < e)
                pool.emplace_back(work, b, e);
        }
    }

    // Serial reductions in query order keep the result thread-count independent.
    double sum = 0.0;
    for (double ap : report.per_query_ap)
        sum += ap;
    report.map = sum / static_cast<double>(nq);
    for (std::size_t j = 0; j < ks.size(); ++j) {
        double p = 0.0;
        for (std::size_t q = 0; q < nq; ++q)
            p += precision[q][j];
        report.precision_at_k.emplace_back(ks[j], p / static_cast<double>(nq));
    }
    return report;
}

void write_report(std::ostream& os, const RetrievalReport& report)
{
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.6f", v);
        return std::string(buf);
    };
    os << "map\t" << fmt(report.map) << '\n';
    os << "top_k\t" << report.top_k << '\n';
    os << "num_queries\t" << report.per_query_ap.size() << '\n';
    for (const auto& [k, p] : report.precision_at_k)
        os << "precision@" << k << '\t' << fmt(p) << '\n';
    for (const auto& [k, v] : report.config)
        os << "config." << k << '\t' << v << '\n';
    os << "# per-query AP\n";
    for (std::size_t q = 0; q < report.per_query_ap.size(); ++q)
        os << q << '\t' << fmt(report.per_query_ap[q]) << '\n';
}

}  // namespace drlh
