#include "drlh/bch.hpp"

#include "drlh/errors.hpp"

#include <bit>
#include <set>

namespace drlh {

namespace {

// Representatives of the cyclotomic cosets hit by alpha^1 .. alpha^(2t).
// Exponent 0 (reached once 2t >= n) stands for the root 1, whose minimal
// polynomial is x + 1.
std::set<std::uint32_t> coset_leaders(const GaloisField& field, unsigned designed_t)
{
    std::set<std::uint32_t> covered;
    std::set<std::uint32_t> leaders;
    for (std::uint64_t e = 1; e <= 2 * static_cast<std::uint64_t>(designed_t); ++e) {
        const auto r = static_cast<std::uint32_t>(e % field.order());
        if (covered.count(r))
            continue;
        leaders.insert(r);
        if (r == 0)
            covered.insert(0);
        else
            for (auto c : cyclotomic_coset(field, r))
                covered.insert(c);
        if (covered.size() == field.order())
            break;
    }
    return leaders;
}

BinaryPolynomial leader_polynomial(const GaloisField& field, std::uint32_t leader)
{
    return leader == 0 ? BinaryPolynomial::from_mask(0b11) : minimal_polynomial(field, leader);
}

}  // namespace

std::size_t bch_generator_degree(const GaloisField& field, unsigned designed_t)
{
    std::size_t deg = 0;
    for (auto leader : coset_leaders(field, designed_t))
        deg += leader == 0 ? 1 : cyclotomic_coset(field, leader).size();
    return deg;
}

BCHCode build_bch(const GaloisField& field, unsigned designed_t)
{
    if (designed_t < 1)
        throw InvalidArgument("designed_t must be at least 1");

    // Distinct minimal polynomials are irreducible and pairwise coprime, so
    // their lcm is their product.
    BinaryPolynomial g = BinaryPolynomial::monomial(0);
    for (auto leader : coset_leaders(field, designed_t))
        g = g * leader_polynomial(field, leader);

    const std::size_t n = field.order();
    if (static_cast<std::size_t>(g.degree()) >= n)
        throw DesignedDistanceTooLarge("t=" + std::to_string(designed_t) + " leaves no message bits at n=" +
                                       std::to_string(n));
    BCHCode code;
    code.m = field.m();
    code.n = n;
    code.k = n - static_cast<std::size_t>(g.degree());
    code.designed_t = designed_t;
    code.generator = std::move(g);
    return code;
}

BinaryCode BCHCode::encode(std::uint64_t message) const
{
    if (k < 64 && (message >> k) != 0)
        throw InvalidArgument("message " + std::to_string(message) + " does not fit in k=" + std::to_string(k) +
                              " bits");
    const std::size_t parity = n - k;
    std::vector<std::uint8_t> shifted(n, 0);
    for (std::size_t j = 0; j < k && j < 64; ++j)
        shifted[parity + j] = static_cast<std::uint8_t>((message >> j) & 1u);
    const BinaryPolynomial msg(shifted);
    const BinaryPolynomial cw = msg + (msg % generator);

    BinaryCode out(n);
    for (std::size_t i = 0; i < n; ++i)
        if (cw.coeff(n - 1 - i))
            out.set(i, true);
    return out;
}

std::size_t exhaustive_min_distance(const BCHCode& code)
{
    if (code.k > 24)
        throw InvalidArgument("exhaustive enumeration limited to k <= 24");
    // Encoding is linear: build the basis once, then walk messages in Gray
    // code order so each codeword is one XOR away from the previous.
    std::vector<BinaryCode> basis;
    for (std::size_t j = 0; j < code.k; ++j)
        basis.push_back(code.encode(std::uint64_t{1} << j));

    BinaryCode current(code.n);
    std::size_t best = code.n;
    const std::uint64_t count = std::uint64_t{1} << code.k;
    for (std::uint64_t i = 1; i < count; ++i) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(i));
        current ^= basis[bit];
        best = std::min(best, current.weight());
    }
    return best;
}

}  // namespace drlh
