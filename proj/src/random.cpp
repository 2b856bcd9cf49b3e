#include "irsmec/random.hpp"

namespace irsmec {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// FNV-1a
std::uint64_t hash_label(std::string_view label)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

RandomStream::RandomStream(std::uint64_t key) : key_(key) {}

RandomStream::RandomStream(std::uint64_t seed, std::string_view label)
    : key_(mix64(mix64(seed + kGoldenGamma) ^ hash_label(label)))
{
}

RandomStream RandomStream::child(std::string_view label) const
{
    return RandomStream(mix64(key_ ^ hash_label(label)));
}

RandomStream RandomStream::child(std::string_view label, std::uint64_t index) const
{
    return RandomStream(mix64(mix64(key_ ^ hash_label(label)) + (index + 1) * kGoldenGamma));
}

RandomStream::result_type RandomStream::operator()()
{
    return mix64(key_ + (++counter_) * kGoldenGamma);
}

double RandomStream::normal()
{
    return normal_(*this);
}

}  // namespace irsmec
