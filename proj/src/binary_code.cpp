#include "drlh/hamming.hpp"

#include "drlh/errors.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

namespace drlh {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t width) { return (width + kWordBits - 1) / kWordBits; }

}  // namespace

BinaryCode::BinaryCode(std::size_t width) : width_(width), words_(word_count(width), 0) {}

BinaryCode BinaryCode::from_string(std::string_view bits)
{
    BinaryCode c(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            c.set(i, true);
        else if (bits[i] != '0')
            throw FormatError("code character '" + std::string(1, bits[i]) + "' is not 0 or 1");
    }
    return c;
}

bool BinaryCode::bit(std::size_t i) const
{
    if (i >= width_)
        throw IndexOutOfRange("bit " + std::to_string(i) + " of width " + std::to_string(width_));
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
}

void BinaryCode::set(std::size_t i, bool value)
{
    if (i >= width_)
        throw IndexOutOfRange("bit " + std::to_string(i) + " of width " + std::to_string(width_));
    const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (value)
        words_[i / kWordBits] |= mask;
    else
        words_[i / kWordBits] &= ~mask;
}

void BinaryCode::toggle(std::size_t i)
{
    if (i >= width_)
        throw IndexOutOfRange("bit " + std::to_string(i) + " of width " + std::to_string(width_));
    words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits);
}

BinaryCode& BinaryCode::operator^=(const BinaryCode& other)
{
    if (width_ != other.width_)
        throw WidthMismatch(std::to_string(width_) + " vs " + std::to_string(other.width_));
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] ^= other.words_[i];
    return *this;
}

std::size_t BinaryCode::weight() const
{
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::string BinaryCode::to_string() const
{
    std::string s(width_, '0');
    for (std::size_t i = 0; i < width_; ++i)
        if (bit(i))
            s[i] = '1';
    return s;
}

void BinaryCode::clear_tail()
{
    const std::size_t used = width_ % kWordBits;
    if (used != 0 && !words_.empty())
        words_.back() &= (std::uint64_t{1} << used) - 1;
}

std::ostream& operator<<(std::ostream& os, const BinaryCode& code) { return os << code.to_string(); }

std::size_t hamming_distance(const BinaryCode& a, const BinaryCode& x)
{
    if (a.width() != x.width())
        throw WidthMismatch(std::to_string(a.width()) + " vs " + std::to_string(x.width()));
    const auto wa = a.words();
    const auto wx = x.words();
    std::size_t d = 0;
    for (std::size_t i = 0; i < wa.size(); ++i)
        d += static_cast<std::size_t>(std::popcount(wa[i] ^ wx[i]));
    return d;
}

BinaryCode flip_bit(const BinaryCode& code, std::size_t k)
{
    BinaryCode out = code;
    out.toggle(k);
    return out;
}

LabelSet::LabelSet(std::vector<std::size_t> classes) : classes_(std::move(classes))
{
    if (classes_.empty())
        throw EmptyLabelSet("a label set needs at least one class");
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
}

LabelSet LabelSet::parse(std::string_view line)
{
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.remove_suffix(1);
    if (line.empty())
        throw EmptyLabelLine("label line has no class indices");
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const auto comma = line.find(',', pos);
        auto tok = line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos);
        while (!tok.empty() && tok.front() == ' ')
            tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ')
            tok.remove_suffix(1);
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw FormatError("bad class index in label line '" + std::string(line) + "'");
        out.push_back(std::stoull(std::string(tok)));
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return LabelSet(std::move(out));
}

bool LabelSet::contains(std::size_t c) const
{
    return std::binary_search(classes_.begin(), classes_.end(), c);
}

bool LabelSet::intersects(const LabelSet& other) const
{
    auto i = classes_.begin();
    auto j = other.classes_.begin();
    while (i != classes_.end() && j != other.classes_.end()) {
        if (*i == *j)
            return true;
        if (*i < *j)
            ++i;
        else
            ++j;
    }
    return false;
}

std::string LabelSet::to_string() const
{
    std::string s;
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(classes_[i]);
    }
    return s;
}

std::vector<std::size_t> rank_by_distance(const BinaryCode& query,
                                          std::span<const BinaryCode> database,
                                          std::size_t top_k,
                                          unsigned threads)
{
    const std::size_t n = database.size();
    top_k = std::min(top_k, n);
    if (top_k == 0)
        return {};

    std::vector<std::uint32_t> dist(n);
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            dist[i] = static_cast<std::uint32_t>(hamming_distance(query, database[i]));
    };
    if (threads <= 1 || n < 4096) {
        fill(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(n, b + chunk);
            if (b < e)
                pool.emplace_back(fill, b, e);
        }
    }

    // Counting sort over the (width+1) possible distances keeps equal-distance
    // entries in index order.
    std::vector<std::size_t> bucket_start(query.width() + 2, 0);
    for (auto d : dist)
        ++bucket_start[d + 1];
    for (std::size_t d = 1; d < bucket_start.size(); ++d)
        bucket_start[d] += bucket_start[d - 1];
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[bucket_start[dist[i]]++] = i;
    order.resize(top_k);
    return order;
}

void write_codes(std::ostream& os, std::span<const BinaryCode> codes)
{
    for (const auto& c : codes)
        os << c.to_string() << '\n';
}

std::vector<BinaryCode> read_codes(std::istream& is)
{
    std::vector<BinaryCode> out;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        out.push_back(BinaryCode::from_string(line));
        if (out.back().width() != out.front().width())
            throw WidthMismatch("code file mixes widths " + std::to_string(out.front().width()) +
                                " and " + std::to_string(out.back().width()));
    }
    return out;
}

void write_codes_file(const std::string& path, std::span<const BinaryCode> codes)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    write_codes(os, codes);
    if (!os)
        throw IoError("write failed for '" + path + "'");
}

std::vector<BinaryCode> read_codes_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open '" + path + "'");
    return read_codes(is);
}

}  // namespace drlh
