#pragma once

#include "drlh/hamming.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace drlh {

enum class Split { train, query, database };

/// Row-major feature matrix with one label set and split tag per item.
struct Dataset {
    std::size_t dim = 0;
    std::vector<double> features;  // size() * dim
    std::vector<LabelSet> labels;
    std::vector<Split> splits;
    std::string provenance;

    std::size_t size() const { return labels.size(); }
    bool empty() const { return labels.empty(); }
    std::span<const double> row(std::size_t i) const { return {features.data() + i * dim, dim}; }

    /// Largest class index + 1.
    std::size_t num_classes() const;

    /// Items with indices in `rows`, order kept.
    Dataset select(std::span<const std::size_t> rows) const;
    Dataset subset(Split split) const;
    /// Checks sizes, finite features and that every label is < num_classes.
    void validate(std::size_t num_classes) const;
};

/// Database for retrieval: the database split, preceded by the training split
/// when `include_train` (retrieval from the training pool).
Dataset retrieval_database(const Dataset& data, bool include_train);

/// Feature file: "DRLHFV1", u32 n, u32 d_f, then n*d_f float32, all
/// little-endian, row-major. Labels file: one comma-separated line per item.
/// Every item is tagged Split::train. Throws BadMagic, HeaderMismatch,
/// EmptyLabelLine, FormatError, IoError.
Dataset load_features(const std::string& features_path, const std::string& labels_path);
/// Features alone; every item gets an empty label set.
Dataset load_features(const std::string& features_path);
void save_features(const std::string& path, const Dataset& data);
void save_labels(const std::string& path, const Dataset& data);
std::vector<LabelSet> load_labels(const std::string& path);

struct SynthOptions {
    std::size_t num_classes = 10;
    std::size_t per_class = 250;
    std::size_t dim = 32;
    double spread = 0.15;
    std::uint64_t seed = 1;
    double train_fraction = 0.8;
    double query_fraction = 0.1;  // the remainder is the database split
};

/// Single-label Gaussian clusters around class centers drawn uniformly on the
/// unit sphere. Features are rounded to float32 so they survive a round trip
/// through the feature file unchanged. Items are class-major; within each
/// class the first train_fraction are train, the next query_fraction query,
/// the rest database.
Dataset synth_gaussian(const SynthOptions& options);

/// The class centers synth_gaussian(options) uses, row-major C x dim.
std::vector<double> synth_centers(const SynthOptions& options);

/// Fraction of items whose nearest center (Euclidean) belongs to one of
/// their classes.
double nearest_center_accuracy(const Dataset& data, std::span<const double> centers);

}  // namespace drlh
