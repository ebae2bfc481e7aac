#pragma once

#include "drlh/galois_field.hpp"
#include "drlh/hamming.hpp"

#include <cstdint>

namespace drlh {

/// Narrow-sense binary BCH code of length n = 2^m - 1.
struct BCHCode {
    unsigned m = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    unsigned designed_t = 0;
    BinaryPolynomial generator;

    std::size_t designed_distance() const { return 2 * designed_t + 1; }

    /// Systematic encoding of the k-bit message whose bit j is the
    /// coefficient of x^j. The codeword polynomial is
    /// msg(x) x^(n-k) + (msg(x) x^(n-k) mod g(x)); codeword bit i holds the
    /// coefficient of x^(n-1-i), so message bits come first.
    BinaryCode encode(std::uint64_t message) const;
};

/// generator = lcm of the minimal polynomials of alpha^1 .. alpha^(2t).
/// Throws InvalidArgument for t < 1, DesignedDistanceTooLarge when
/// deg(generator) >= n.
BCHCode build_bch(const GaloisField& field, unsigned designed_t);

/// Degree of the generator for designed_t without building the code.
std::size_t bch_generator_degree(const GaloisField& field, unsigned designed_t);

/// Minimum distance by enumerating all 2^k codewords (minimum nonzero
/// weight, the code being linear). Requires k <= 24.
std::size_t exhaustive_min_distance(const BCHCode& code);

}  // namespace drlh
