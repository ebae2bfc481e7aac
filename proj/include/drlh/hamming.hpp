#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drlh {

/// A vertex of the b-dimensional Hamming cube, packed into 64-bit words.
///
/// Bit index 0 is the first character of the text form and the first flip
/// action; it lives in the least significant bit of words()[0]. Bits at
/// positions >= width() are always zero.
class BinaryCode {
public:
    BinaryCode() = default;
    explicit BinaryCode(std::size_t width);

    /// Parses a string over {0,1}; character i becomes bit i.
    static BinaryCode from_string(std::string_view bits);

    template <class Rng>
    static BinaryCode random(std::size_t width, Rng& rng)
    {
        BinaryCode c(width);
        for (auto& w : c.words_)
            w = static_cast<std::uint64_t>(rng());
        c.clear_tail();
        return c;
    }

    std::size_t width() const { return width_; }
    std::span<const std::uint64_t> words() const { return words_; }

    bool bit(std::size_t i) const;
    void set(std::size_t i, bool value);
    void toggle(std::size_t i);

    /// Bitwise XOR with a code of equal width. Throws WidthMismatch.
    BinaryCode& operator^=(const BinaryCode& other);

    /// Number of set bits.
    std::size_t weight() const;

    std::string to_string() const;

    friend bool operator==(const BinaryCode&, const BinaryCode&) = default;

private:
    void clear_tail();

    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

std::ostream& operator<<(std::ostream& os, const BinaryCode& code);

/// XOR + popcount over packed words. Throws WidthMismatch.
std::size_t hamming_distance(const BinaryCode& a, const BinaryCode& x);

/// Returns a copy of `code` with bit k toggled. Throws IndexOutOfRange.
BinaryCode flip_bit(const BinaryCode& code, std::size_t k);

/// Nonempty, sorted, duplicate-free set of class indices.
class LabelSet {
public:
    LabelSet() = default;
    /// Sorts and deduplicates. Throws EmptyLabelSet when `classes` is empty.
    explicit LabelSet(std::vector<std::size_t> classes);
    LabelSet(std::initializer_list<std::size_t> classes)
        : LabelSet(std::vector<std::size_t>(classes)) {}

    /// Parses "2,5". Throws EmptyLabelLine / FormatError.
    static LabelSet parse(std::string_view line);

    std::span<const std::size_t> classes() const { return classes_; }
    std::size_t size() const { return classes_.size(); }
    bool empty() const { return classes_.empty(); }
    bool contains(std::size_t c) const;
    bool intersects(const LabelSet& other) const;
    std::size_t max_class() const { return classes_.back(); }

    std::string to_string() const;

    friend bool operator==(const LabelSet&, const LabelSet&) = default;

private:
    std::vector<std::size_t> classes_;
};

/// Indices of the `top_k` database codes nearest to `query`, by ascending
/// Hamming distance with ties broken by ascending index. `top_k` is clamped
/// to the database size. With threads > 1 the distance pass is split across
/// workers; the result is identical to the serial one.
std::vector<std::size_t> rank_by_distance(const BinaryCode& query,
                                          std::span<const BinaryCode> database,
                                          std::size_t top_k,
                                          unsigned threads = 1);

// Code export: one line per item, width characters over {0,1}.
void write_codes(std::ostream& os, std::span<const BinaryCode> codes);
std::vector<BinaryCode> read_codes(std::istream& is);
void write_codes_file(const std::string& path, std::span<const BinaryCode> codes);
std::vector<BinaryCode> read_codes_file(const std::string& path);

}  // namespace drlh
