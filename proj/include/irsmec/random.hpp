#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace irsmec {

/// Counter-based generator: output i is a SplitMix64 finalizer applied to
/// key + i * golden-gamma. Streams are identified by a 64-bit key, and child
/// streams are derived by hashing a label into the parent key, so two
/// differently labelled children never share state.
///
/// Satisfies UniformRandomBitGenerator, so it plugs into <random>
/// distributions.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::string_view label);

    /// Independent stream keyed on (this stream's key, label). Does not
    /// advance this stream.
    [[nodiscard]] RandomStream child(std::string_view label) const;
    [[nodiscard]] RandomStream child(std::string_view label, std::uint64_t index) const;

    result_type operator()();

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    [[nodiscard]] std::uint64_t key() const { return key_; }
    [[nodiscard]] std::uint64_t position() const { return counter_; }

    /// Standard normal draw. The distribution object is owned by the stream
    /// so that cached values are part of the stream state.
    double normal();

private:
    explicit RandomStream(std::uint64_t key);

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t mix64(std::uint64_t z);
std::uint64_t hash_label(std::string_view label);

}  // namespace irsmec
