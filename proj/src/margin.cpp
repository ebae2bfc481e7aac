#include "drlh/margin.hpp"

#include "drlh/errors.hpp"

#include <limits>

namespace drlh {

namespace {

void check_labels(const LabelSet& labels, const Codebook& book)
{
    if (labels.empty())
        throw EmptyLabelSet("d_pos needs at least one ground-truth class");
    if (labels.max_class() >= book.num_classes)
        throw IndexOutOfRange("class " + std::to_string(labels.max_class()) + " not in a " +
                              std::to_string(book.num_classes) + "-class codebook");
}

}  // namespace

std::size_t d_pos(const BinaryCode& code, const LabelSet& labels, const Codebook& book)
{
    check_labels(labels, book);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (auto c : labels.classes())
        best = std::min(best, hamming_distance(code, book.codewords[c]));
    return best;
}

double d_neg(const BinaryCode& code, const LabelSet& labels, const Codebook& book)
{
    check_labels(labels, book);
    std::size_t total = 0;
    std::size_t count = 0;
    for (std::size_t c = 0; c < book.num_classes; ++c) {
        if (labels.contains(c))
            continue;
        total += hamming_distance(code, book.codewords[c]);
        ++count;
    }
    if (count == 0)
        throw NoNegativeClasses("labels cover all " + std::to_string(book.num_classes) + " classes");
    return static_cast<double>(total) / static_cast<double>(count);
}

double class_margin(const BinaryCode& code, const LabelSet& labels, const Codebook& book)
{
    return static_cast<double>(d_pos(code, labels, book)) - d_neg(code, labels, book);
}

}  // namespace drlh
