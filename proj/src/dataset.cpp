#include "drlh/dataset.hpp"

#include "drlh/errors.hpp"
#include "drlh/seeding.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>

namespace drlh {

namespace {

constexpr char kFeatureMagic[7] = {'D', 'R', 'L', 'H', 'F', 'V', '1'};

std::uint32_t read_u32(std::istream& is, const std::string& path)
{
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw HeaderMismatch("'" + path + "' ends inside the header");
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

void write_u32(std::ostream& os, std::uint32_t v)
{
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

// Box-Muller on the raw 64-bit stream; the standard distributions are
// implementation-defined and would make datasets library-dependent.
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
    double operator()()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace

std::size_t Dataset::num_classes() const
{
    std::size_t c = 0;
    for (const auto& l : labels)
        c = std::max(c, l.max_class() + 1);
    return c;
}

Dataset Dataset::select(std::span<const std::size_t> rows) const
{
    Dataset out;
    out.dim = dim;
    out.provenance = provenance;
    out.features.reserve(rows.size() * dim);
    for (auto r : rows) {
        if (r >= size())
            throw IndexOutOfRange("row " + std::to_string(r) + " of " + std::to_string(size()));
        const auto src = row(r);
        out.features.insert(out.features.end(), src.begin(), src.end());
        out.labels.push_back(labels[r]);
        out.splits.push_back(splits[r]);
    }
    return out;
}

Dataset Dataset::subset(Split split) const
{
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < size(); ++i)
        if (splits[i] == split)
            rows.push_back(i);
    return select(rows);
}

void Dataset::validate(std::size_t num_classes) const
{
    if (features.size() != size() * dim || splits.size() != size())
        throw HeaderMismatch("dataset arrays disagree on the item count");
    for (double v : features)
        if (!std::isfinite(v))
            throw FormatError("non-finite feature value");
    for (const auto& l : labels)
        if (l.max_class() >= num_classes)
            throw IndexOutOfRange("class " + std::to_string(l.max_class()) + " but only " +
                                  std::to_string(num_classes) + " classes");
}

Dataset retrieval_database(const Dataset& data, bool include_train)
{
    std::vector<std::size_t> rows;
    if (include_train)
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data.splits[i] == Split::train)
                rows.push_back(i);
    for (std::size_t i = 0; i < data.size(); ++i)
        if (data.splits[i] == Split::database)
            rows.push_back(i);
    return data.select(rows);
}

std::vector<LabelSet> load_labels(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open '" + path + "'");
    std::vector<LabelSet> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        try {
            out.push_back(LabelSet::parse(line));
        } catch (const EmptyLabelLine&) {
            // A trailing newline at end of file is not an item.
            if (is.peek() == std::char_traits<char>::eof() && line.find_first_not_of(" \r\t") == std::string::npos)
                break;
            throw EmptyLabelLine("'" + path + "' line " + std::to_string(line_no) + " is empty");
        }
    }
    return out;
}

Dataset load_features(const std::string& features_path)
{
    std::ifstream is(features_path, std::ios::binary);
    if (!is)
        throw IoError("cannot open '" + features_path + "'");
    char magic[7];
    if (!is.read(magic, 7) || std::memcmp(magic, kFeatureMagic, 7) != 0)
        throw BadMagic("'" + features_path + "' does not start with DRLHFV1");
    const std::uint32_t n = read_u32(is, features_path);
    const std::uint32_t d = read_u32(is, features_path);
    if (d == 0)
        throw HeaderMismatch("'" + features_path + "' declares d_f = 0");

    Dataset data;
    data.dim = d;
    data.provenance = features_path;
    const std::size_t count = static_cast<std::size_t>(n) * d;
    std::vector<unsigned char> raw(count * 4);
    if (!is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
        throw HeaderMismatch("'" + features_path + "' holds fewer than n*d_f = " + std::to_string(count) + " values");
    if (is.peek() != std::char_traits<char>::eof())
        throw HeaderMismatch("'" + features_path + "' has bytes beyond n*d_f values");
    data.features.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t u = static_cast<std::uint32_t>(raw[4 * i]) |
                                static_cast<std::uint32_t>(raw[4 * i + 1]) << 8 |
                                static_cast<std::uint32_t>(raw[4 * i + 2]) << 16 |
                                static_cast<std::uint32_t>(raw[4 * i + 3]) << 24;
        float f;
        std::memcpy(&f, &u, 4);
        data.features[i] = f;
    }
    data.labels.assign(n, LabelSet{});
    data.splits.assign(n, Split::train);
    return data;
}

Dataset load_features(const std::string& features_path, const std::string& labels_path)
{
    Dataset data = load_features(features_path);
    const auto n = data.size();
    data.labels = load_labels(labels_path);
    if (data.labels.size() != n)
        throw HeaderMismatch("feature file has n=" + std::to_string(n) + " items but '" + labels_path + "' has " +
                             std::to_string(data.labels.size()) + " label lines");
    return data;
}

void save_features(const std::string& path, const Dataset& data)
{
    if (data.size() > std::numeric_limits<std::uint32_t>::max() || data.dim > std::numeric_limits<std::uint32_t>::max())
        throw FormatError("dataset too large for the feature file header");
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    os.write(kFeatureMagic, 7);
    write_u32(os, static_cast<std::uint32_t>(data.size()));
    write_u32(os, static_cast<std::uint32_t>(data.dim));
    for (double v : data.features) {
        const auto f = static_cast<float>(v);
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        write_u32(os, u);
    }
    if (!os)
        throw IoError("write failed for '" + path + "'");
}

void save_labels(const std::string& path, const Dataset& data)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    for (const auto& l : data.labels)
        os << l.to_string() << '\n';
    if (!os)
        throw IoError("write failed for '" + path + "'");
}

std::vector<double> synth_centers(const SynthOptions& options)
{
    if (options.num_classes < 2 || options.dim < 2)
        throw InvalidArgument("synthetic data needs C >= 2 and d_f >= 2");
    Gaussian gauss(derive_seed({options.seed, 1}));
    std::vector<double> centers(options.num_classes * options.dim);
    for (std::size_t c = 0; c < options.num_classes; ++c) {
        double norm = 0.0;
        for (std::size_t j = 0; j < options.dim; ++j) {
            const double v = gauss();
            centers[c * options.dim + j] = v;
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (std::size_t j = 0; j < options.dim; ++j)
            centers[c * options.dim + j] = static_cast<float>(centers[c * options.dim + j] / norm);
    }
    return centers;
}

Dataset synth_gaussian(const SynthOptions& options)
{
    const auto centers = synth_centers(options);
    if (options.train_fraction < 0.0 || options.query_fraction < 0.0 ||
        options.train_fraction + options.query_fraction > 1.0)
        throw InvalidArgument("split fractions must be non-negative and sum to at most 1");

    Gaussian noise(derive_seed({options.seed, 2}));
    Dataset data;
    data.dim = options.dim;
    data.provenance = "synth_gaussian C=" + std::to_string(options.num_classes) +
                      " per_class=" + std::to_string(options.per_class) + " d_f=" + std::to_string(options.dim) +
                      " seed=" + std::to_string(options.seed);
    const auto n_train = static_cast<std::size_t>(std::llround(options.train_fraction * options.per_class));
    const auto n_query = static_cast<std::size_t>(std::llround(options.query_fraction * options.per_class));
    for (std::size_t c = 0; c < options.num_classes; ++c) {
        for (std::size_t i = 0; i < options.per_class; ++i) {
            for (std::size_t j = 0; j < options.dim; ++j) {
                const double v = centers[c * options.dim + j] + options.spread * noise();
                data.features.push_back(static_cast<float>(v));
            }
            data.labels.push_back(LabelSet{c});
            data.splits.push_back(i < n_train             ? Split::train
                                  : i < n_train + n_query ? Split::query
                                                          : Split::database);
        }
    }
    return data;
}

double nearest_center_accuracy(const Dataset& data, std::span<const double> centers)
{
    if (data.empty() || data.dim == 0 || centers.size() % data.dim != 0)
        throw DimensionMismatch("centers do not match the dataset dimension");
    const std::size_t num_centers = centers.size() / data.dim;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto x = data.row(i);
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < num_centers; ++c) {
            double d = 0.0;
            for (std::size_t j = 0; j < data.dim; ++j) {
                const double diff = x[j] - centers[c * data.dim + j];
                d += diff * diff;
            }
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        if (data.labels[i].contains(best))
            ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace drlh
