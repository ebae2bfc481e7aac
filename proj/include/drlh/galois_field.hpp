#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace drlh {

/// Polynomial over GF(2), coefficients stored lowest degree first. The
/// highest stored coefficient is 1 unless the polynomial is zero (then the
/// coefficient vector is empty).
class BinaryPolynomial {
public:
    BinaryPolynomial() = default;
    explicit BinaryPolynomial(std::vector<std::uint8_t> coefficients);

    /// Bit i of `mask` is the coefficient of x^i.
    static BinaryPolynomial from_mask(std::uint64_t mask);
    static BinaryPolynomial monomial(std::size_t degree);

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    std::uint8_t coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
    const std::vector<std::uint8_t>& coefficients() const { return coeffs_; }

    BinaryPolynomial operator+(const BinaryPolynomial& o) const;
    BinaryPolynomial operator*(const BinaryPolynomial& o) const;
    /// Remainder of division by a nonzero divisor.
    BinaryPolynomial operator%(const BinaryPolynomial& divisor) const;
    BinaryPolynomial operator/(const BinaryPolynomial& divisor) const;

    /// e.g. "x^4 + x + 1".
    std::string to_string() const;

    friend bool operator==(const BinaryPolynomial&, const BinaryPolynomial&) = default;

private:
    void normalize();
    std::vector<std::uint8_t> coeffs_;
};

/// GF(2^m) with log/antilog tables over the primitive element alpha = 2.
class GaloisField {
public:
    using Element = std::uint32_t;

    /// Uses the fixed primitive polynomial for m (3 <= m <= 16).
    explicit GaloisField(unsigned m);
    /// Explicit primitive polynomial as a bitmask including the x^m term.
    /// Throws InvalidArgument if the polynomial is not primitive.
    GaloisField(unsigned m, std::uint32_t primitive_poly);

    /// The fixed primitive polynomial used for degree m.
    static std::uint32_t default_primitive_poly(unsigned m);

    unsigned m() const { return m_; }
    std::uint32_t primitive_poly() const { return poly_; }
    /// Number of nonzero elements, 2^m - 1.
    std::uint32_t order() const { return order_; }
    std::uint32_t size() const { return order_ + 1; }

    Element add(Element x, Element y) const { return x ^ y; }
    Element mul(Element x, Element y) const;
    Element inv(Element x) const;
    /// alpha^i for any i >= 0 (reduced mod 2^m - 1).
    Element alpha_pow(std::uint64_t i) const { return antilog_[i % order_]; }
    /// Discrete log base alpha of a nonzero element.
    std::uint32_t log(Element x) const;

    const std::vector<Element>& log_table() const { return log_; }
    const std::vector<Element>& antilog_table() const { return antilog_; }

private:
    unsigned m_;
    std::uint32_t poly_;
    std::uint32_t order_;
    std::vector<Element> log_;      // indexed by element, log_[0] unused
    std::vector<Element> antilog_;  // antilog_[i] = alpha^i, i < order_
};

/// Exponents {e * 2^i mod (2^m - 1)} sharing a minimal polynomial, ascending.
std::vector<std::uint32_t> cyclotomic_coset(const GaloisField& field, std::uint32_t exponent);

/// Minimal polynomial of alpha^exponent over GF(2), 1 <= exponent <= 2^m - 2.
BinaryPolynomial minimal_polynomial(const GaloisField& field, std::uint32_t exponent);

}  // namespace drlh
