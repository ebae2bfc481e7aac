#pragma once

#include "drlh/codebook.hpp"
#include "drlh/hamming.hpp"

namespace drlh {

/// Distance to the nearest ground-truth codeword. Throws EmptyLabelSet.
std::size_t d_pos(const BinaryCode& code, const LabelSet& labels, const Codebook& book);

/// Mean distance to the codewords of every class outside `labels`.
/// Throws NoNegativeClasses when the labels cover all classes.
double d_neg(const BinaryCode& code, const LabelSet& labels, const Codebook& book);

/// d_pos - d_neg, the quantity whose decrease the flip reward measures.
double class_margin(const BinaryCode& code, const LabelSet& labels, const Codebook& book);

}  // namespace drlh
