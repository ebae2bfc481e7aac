#include "drlh/codebook.hpp"

#include "drlh/bch.hpp"
#include "drlh/errors.hpp"
#include "drlh/seeding.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace drlh {

namespace {

std::size_t bits_for_classes(std::size_t num_classes)
{
    return static_cast<std::size_t>(std::bit_width(num_classes - 1));
}

// Largest t in [1, n/2] with n - deg(g_t) >= need_k, or 0 when even t = 1
// fails. k is non-increasing in t, so bisect.
unsigned largest_feasible_t(const GaloisField& field, std::size_t need_k)
{
    const std::size_t n = field.order();
    auto feasible = [&](unsigned t) {
        const auto deg = bch_generator_degree(field, t);
        return deg < n && n - deg >= need_k;
    };
    if (!feasible(1))
        return 0;
    unsigned lo = 1;
    auto hi = static_cast<unsigned>(n / 2);
    while (lo < hi) {
        const unsigned mid = lo + (hi - lo + 1) / 2;
        if (feasible(mid))
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

std::vector<BinaryCode> encode_classes(const BCHCode& code, std::size_t num_classes)
{
    std::vector<BinaryCode> out;
    out.reserve(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c)
        out.push_back(code.encode(c));
    return out;
}

Codebook padded_codebook(const GaloisField& field, unsigned t, std::size_t num_classes, std::size_t b,
                         std::uint64_t seed)
{
    const BCHCode code = build_bch(field, t);
    Codebook book;
    book.b = b;
    book.num_classes = num_classes;
    book.bch_length = code.n;
    book.pad_seed = seed;
    book.m = code.m;
    book.bch_k = code.k;
    book.designed_t = t;

    for (const auto& core : encode_classes(code, num_classes)) {
        std::mt19937_64 rng(derive_seed({seed, book.codewords.size()}));
        BinaryCode cw(b);
        for (std::size_t i = 0; i < code.n; ++i)
            cw.set(i, core.bit(i));
        for (std::size_t i = code.n; i < b; ++i)
            cw.set(i, rng() & 1u);
        book.codewords.push_back(std::move(cw));
    }
    book.min_distance = pairwise_min_distance(book.codewords, book.core_length());
    book.radius = book.min_distance >= 1 ? (book.min_distance - 1) / 2 : 0;
    return book;
}

Codebook truncated_codebook(std::size_t num_classes, std::size_t b, std::uint64_t seed, std::size_t need_k)
{
    unsigned first_m = 0;
    for (unsigned m = 3; m <= 16; ++m) {
        const std::size_t n = (std::size_t{1} << m) - 1;
        if (n > b && largest_feasible_t(GaloisField(m), need_k) >= 1) {
            first_m = m;
            break;
        }
    }
    if (first_m == 0)
        throw TooManyClasses(std::to_string(num_classes) + " classes do not fit any BCH code");

    Codebook best;
    bool found = false;
    for (unsigned m = first_m; m <= std::min(16u, first_m + 2); ++m) {
        const GaloisField field(m);
        const unsigned t_max = largest_feasible_t(field, need_k);
        for (unsigned t = t_max; t >= 1; --t) {
            const BCHCode code = build_bch(field, t);
            std::vector<BinaryCode> cws;
            for (const auto& full : encode_classes(code, num_classes)) {
                BinaryCode cw(b);
                for (std::size_t i = 0; i < b; ++i)
                    cw.set(i, full.bit(code.n - b + i));
                cws.push_back(std::move(cw));
            }
            const std::size_t d = pairwise_min_distance(cws, b);
            if (!found || d > best.min_distance) {
                found = true;
                best.b = b;
                best.num_classes = num_classes;
                best.codewords = std::move(cws);
                best.bch_length = code.n;
                best.min_distance = d;
                best.radius = d >= 1 ? (d - 1) / 2 : 0;
                best.pad_seed = seed;
                best.m = m;
                best.bch_k = code.k;
                best.designed_t = t;
            }
        }
    }
    if (best.min_distance < 3)
        throw TooManyClasses(std::to_string(num_classes) + " classes in " + std::to_string(b) +
                             " bits leave no margin (best truncated distance " +
                             std::to_string(best.min_distance) + ")");
    return best;
}

}  // namespace

std::size_t pairwise_min_distance(const std::vector<BinaryCode>& codes, std::size_t prefix)
{
    if (codes.size() < 2)
        return prefix;
    std::vector<BinaryCode> cut;
    cut.reserve(codes.size());
    for (const auto& c : codes) {
        BinaryCode p(prefix);
        for (std::size_t i = 0; i < prefix; ++i)
            p.set(i, c.bit(i));
        cut.push_back(std::move(p));
    }
    std::size_t best = prefix;
    for (std::size_t i = 0; i < cut.size(); ++i)
        for (std::size_t j = i + 1; j < cut.size(); ++j)
            best = std::min(best, hamming_distance(cut[i], cut[j]));
    return best;
}

Codebook build_codebook(std::size_t num_classes, std::size_t b, std::uint64_t seed)
{
    if (num_classes < 2)
        throw InvalidArgument("a codebook needs at least 2 classes");
    if (b < 3)
        throw InvalidArgument("code width must be at least 3 bits");

    const std::size_t need_k = bits_for_classes(num_classes);
    // Sphere packing at radius 1: distance 3 needs C * (b + 1) <= 2^b.
    if (b < 64 && static_cast<double>(num_classes) * static_cast<double>(b + 1) > std::ldexp(1.0, static_cast<int>(b)))
        throw TooManyClasses(std::to_string(num_classes) + " classes cannot reach distance 3 in " +
                             std::to_string(b) + " bits");
    const auto m = static_cast<unsigned>(std::bit_width(b + 1) - 1);
    if (m >= 3 && m <= 16) {
        const GaloisField field(m);
        if (const unsigned t = largest_feasible_t(field, need_k); t >= 1)
            return padded_codebook(field, t, num_classes, b, seed);
    }
    return truncated_codebook(num_classes, b, seed, need_k);
}

void write_codebook(std::ostream& os, const Codebook& book)
{
    os << "# drlh-codebook v1 b=" << book.b << " C=" << book.num_classes << " n=" << book.bch_length
       << " D=" << book.min_distance << " R=" << book.radius << " seed=" << book.pad_seed << '\n';
    write_codes(os, book.codewords);
}

Codebook read_codebook(std::istream& is)
{
    std::string header;
    if (!std::getline(is, header))
        throw FormatError("empty codebook file");
    std::istringstream hs(header);
    std::string hash, magic, version;
    hs >> hash >> magic >> version;
    if (hash != "#" || magic != "drlh-codebook")
        throw BadMagic("codebook header must start with '# drlh-codebook'");
    if (version != "v1")
        throw FormatError("unsupported codebook version '" + version + "'");

    Codebook book;
    bool seen[6] = {};
    std::string field;
    while (hs >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos)
            throw FormatError("bad codebook header field '" + field + "'");
        const auto key = field.substr(0, eq);
        std::uint64_t value = 0;
        try {
            value = std::stoull(field.substr(eq + 1));
        } catch (const std::exception&) {
            throw FormatError("bad value in codebook header field '" + field + "'");
        }
        if (key == "b") { book.b = value; seen[0] = true; }
        else if (key == "C") { book.num_classes = value; seen[1] = true; }
        else if (key == "n") { book.bch_length = value; seen[2] = true; }
        else if (key == "D") { book.min_distance = value; seen[3] = true; }
        else if (key == "R") { book.radius = value; seen[4] = true; }
        else if (key == "seed") { book.pad_seed = value; seen[5] = true; }
        else throw FormatError("unknown codebook header field '" + key + "'");
    }
    for (bool s : seen)
        if (!s)
            throw FormatError("codebook header is missing a field");

    book.codewords = read_codes(is);
    if (book.codewords.size() != book.num_classes)
        throw FormatError("codebook header says C=" + std::to_string(book.num_classes) + " but file has " +
                          std::to_string(book.codewords.size()) + " codewords");
    for (const auto& cw : book.codewords)
        if (cw.width() != book.b)
            throw WidthMismatch("codeword width " + std::to_string(cw.width()) + " but header says b=" +
                                std::to_string(book.b));
    const auto d = pairwise_min_distance(book.codewords, book.core_length());
    if (d != book.min_distance || book.radius != (d >= 1 ? (d - 1) / 2 : 0))
        throw FormatError("codebook header D/R disagree with the codewords (measured D=" + std::to_string(d) + ")");
    return book;
}

void write_codebook_file(const std::string& path, const Codebook& book)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    write_codebook(os, book);
    if (!os)
        throw IoError("write failed for '" + path + "'");
}

Codebook read_codebook_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open '" + path + "'");
    return read_codebook(is);
}

}  // namespace drlh
