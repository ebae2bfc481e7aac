#pragma once

#include "drlh/hamming.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace drlh {

/// Per-class target codewords of width b built from a BCH code.
///
/// The first core_length() = min(bch_length, b) bits carry the BCH core;
/// when b > bch_length the remaining bits are seeded random padding. When
/// b < bch_length the leading (high-order message) positions were dropped
/// and min_distance was recomputed on what remains.
struct Codebook {
    std::size_t b = 0;
    std::size_t num_classes = 0;
    std::vector<BinaryCode> codewords;
    std::size_t bch_length = 0;
    std::size_t min_distance = 0;
    std::size_t radius = 0;
    std::uint64_t pad_seed = 0;

    // Construction details; zero when the codebook was read from a file.
    unsigned m = 0;
    std::size_t bch_k = 0;
    unsigned designed_t = 0;

    std::size_t core_length() const { return std::min(bch_length, b); }
    const BinaryCode& codeword(std::size_t c) const { return codewords.at(c); }
};

/// Builds a C-class codebook of width b (C >= 2, b >= 3).
///
/// Padding route: m = floor(log2(b + 1)) when m >= 3 and some t >= 1 gives
/// k >= ceil(log2 C); t is the largest such value and codewords are padded
/// with per-class seeded bits. Otherwise the truncation route searches the
/// smallest feasible m and a few larger ones, all feasible t, keeps the last
/// b bits of each codeword and picks the largest recomputed margin.
/// Throws TooManyClasses when no (m, t) gives 2^k >= C with a margin of at
/// least 3 over the core.
Codebook build_codebook(std::size_t num_classes, std::size_t b, std::uint64_t seed);

/// Exhaustive minimum pairwise distance over the first `prefix` bits.
std::size_t pairwise_min_distance(const std::vector<BinaryCode>& codes, std::size_t prefix);

/// Text form: header `# drlh-codebook v1 b=.. C=.. n=.. D=.. R=.. seed=..`
/// then one line of b characters per class.
void write_codebook(std::ostream& os, const Codebook& book);
Codebook read_codebook(std::istream& is);
void write_codebook_file(const std::string& path, const Codebook& book);
Codebook read_codebook_file(const std::string& path);

}  // namespace drlh
