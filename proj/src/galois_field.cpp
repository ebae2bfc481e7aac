#include "drlh/galois_field.hpp"

#include "drlh/errors.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace drlh {

BinaryPolynomial::BinaryPolynomial(std::vector<std::uint8_t> coefficients) : coeffs_(std::move(coefficients))
{
    for (auto& c : coeffs_)
        c &= 1u;
    normalize();
}

BinaryPolynomial BinaryPolynomial::from_mask(std::uint64_t mask)
{
    std::vector<std::uint8_t> c;
    for (; mask; mask >>= 1)
        c.push_back(static_cast<std::uint8_t>(mask & 1u));
    return BinaryPolynomial(std::move(c));
}

BinaryPolynomial BinaryPolynomial::monomial(std::size_t degree)
{
    std::vector<std::uint8_t> c(degree + 1, 0);
    c.back() = 1;
    return BinaryPolynomial(std::move(c));
}

void BinaryPolynomial::normalize()
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

BinaryPolynomial BinaryPolynomial::operator+(const BinaryPolynomial& o) const
{
    std::vector<std::uint8_t> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = coeff(i) ^ o.coeff(i);
    return BinaryPolynomial(std::move(c));
}

BinaryPolynomial BinaryPolynomial::operator*(const BinaryPolynomial& o) const
{
    if (is_zero() || o.is_zero())
        return {};
    std::vector<std::uint8_t> c(coeffs_.size() + o.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (!coeffs_[i])
            continue;
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
            c[i + j] ^= o.coeffs_[j];
    }
    return BinaryPolynomial(std::move(c));
}

namespace {

// Long division over GF(2); returns {quotient, remainder}.
std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> divmod(std::vector<std::uint8_t> rem,
                                                                       const std::vector<std::uint8_t>& div)
{
    if (div.empty())
        throw InvalidArgument("polynomial division by zero");
    const std::size_t dd = div.size() - 1;
    std::vector<std::uint8_t> quot(rem.size() >= div.size() ? rem.size() - dd : 0, 0);
    for (std::size_t i = rem.size(); i-- > dd;) {
        if (!rem[i])
            continue;
        quot[i - dd] = 1;
        for (std::size_t j = 0; j <= dd; ++j)
            rem[i - dd + j] ^= div[j];
    }
    return {std::move(quot), std::move(rem)};
}

}  // namespace

BinaryPolynomial BinaryPolynomial::operator%(const BinaryPolynomial& divisor) const
{
    return BinaryPolynomial(divmod(coeffs_, divisor.coeffs_).second);
}

BinaryPolynomial BinaryPolynomial::operator/(const BinaryPolynomial& divisor) const
{
    return BinaryPolynomial(divmod(coeffs_, divisor.coeffs_).first);
}

std::string BinaryPolynomial::to_string() const
{
    if (is_zero())
        return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        if (!coeffs_[static_cast<std::size_t>(i)])
            continue;
        if (!s.empty())
            s += " + ";
        if (i == 0)
            s += "1";
        else if (i == 1)
            s += "x";
        else
            s += "x^" + std::to_string(i);
    }
    return s;
}

std::uint32_t GaloisField::default_primitive_poly(unsigned m)
{
    static constexpr std::array<std::uint32_t, 17> table = {
        0,       0,      0,
        0xB,     // x^3 + x + 1
        0x13,    // x^4 + x + 1
        0x25,    // x^5 + x^2 + 1
        0x43,    // x^6 + x + 1
        0x89,    // x^7 + x^3 + 1
        0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
        0x211,   // x^9 + x^4 + 1
        0x409,   // x^10 + x^3 + 1
        0x805,   // x^11 + x^2 + 1
        0x1053,  // x^12 + x^6 + x^4 + x + 1
        0x201B,  // x^13 + x^4 + x^3 + x + 1
        0x4443,  // x^14 + x^10 + x^6 + x + 1
        0x8003,  // x^15 + x + 1
        0x1100B, // x^16 + x^12 + x^3 + x + 1
    };
    if (m < 3 || m > 16)
        throw InvalidArgument("extension degree m=" + std::to_string(m) + " outside [3, 16]");
    return table[m];
}

GaloisField::GaloisField(unsigned m) : GaloisField(m, default_primitive_poly(m)) {}

GaloisField::GaloisField(unsigned m, std::uint32_t primitive_poly)
    : m_(m), poly_(primitive_poly), order_((1u << m) - 1)
{
    if (m < 3 || m > 16)
        throw InvalidArgument("extension degree m=" + std::to_string(m) + " outside [3, 16]");
    if ((primitive_poly >> m) != 1u)
        throw InvalidArgument("primitive polynomial must have degree exactly m");

    log_.assign(order_ + 1, 0);
    antilog_.assign(order_, 0);
    std::vector<bool> seen(order_ + 1, false);
    Element x = 1;
    for (std::uint32_t i = 0; i < order_; ++i) {
        if (seen[x])
            throw InvalidArgument("polynomial is not primitive for m=" + std::to_string(m));
        seen[x] = true;
        antilog_[i] = x;
        log_[x] = i;
        x <<= 1;
        if (x & (1u << m))
            x ^= primitive_poly;
    }
    if (x != 1)
        throw InvalidArgument("polynomial is not primitive for m=" + std::to_string(m));
}

GaloisField::Element GaloisField::mul(Element x, Element y) const
{
    if (x == 0 || y == 0)
        return 0;
    return antilog_[(log_[x] + log_[y]) % order_];
}

GaloisField::Element GaloisField::inv(Element x) const
{
    if (x == 0)
        throw InvalidArgument("zero has no multiplicative inverse");
    return antilog_[(order_ - log_[x]) % order_];
}

std::uint32_t GaloisField::log(Element x) const
{
    if (x == 0 || x > order_)
        throw InvalidArgument("log of element outside the multiplicative group");
    return log_[x];
}

std::vector<std::uint32_t> cyclotomic_coset(const GaloisField& field, std::uint32_t exponent)
{
    std::set<std::uint32_t> coset;
    std::uint64_t e = exponent % field.order();
    while (coset.insert(static_cast<std::uint32_t>(e)).second)
        e = (e * 2) % field.order();
    return {coset.begin(), coset.end()};
}

BinaryPolynomial minimal_polynomial(const GaloisField& field, std::uint32_t exponent)
{
    if (exponent < 1 || exponent > field.order() - 1)
        throw InvalidArgument("minimal polynomial exponent " + std::to_string(exponent) + " out of range");

    // Expand prod_{j in coset} (x + alpha^j) with coefficients in GF(2^m);
    // the product is fixed by squaring, so every coefficient lands in {0, 1}.
    std::vector<GaloisField::Element> poly{1};
    for (auto j : cyclotomic_coset(field, exponent)) {
        const auto root = field.alpha_pow(j);
        std::vector<GaloisField::Element> next(poly.size() + 1, 0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] ^= poly[i];
            next[i] ^= field.mul(poly[i], root);
        }
        poly = std::move(next);
    }
    std::vector<std::uint8_t> coeffs(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly[i] > 1)
            throw InvalidArgument("minimal polynomial expansion left GF(2)");
        coeffs[i] = static_cast<std::uint8_t>(poly[i]);
    }
    return BinaryPolynomial(std::move(coeffs));
}

}  // namespace drlh
