#include "drlh/seeding.hpp"

namespace drlh {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts)
{
    std::uint64_t h = 0x2545f4914f6cdd1dULL ^ parts.size();
    for (auto p : parts)
        h = splitmix64(h ^ splitmix64(p));
    return h;
}

}  // namespace drlh
