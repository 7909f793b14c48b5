#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hieropt {

/// Deterministic seeded random stream. Identical (seed, stream_label, draw
/// index) yields identical output on every run; distinct labels under one
/// seed give independent streams. A stream is a value owned by exactly one
/// caller and advanced sequentially.
///
/// The generator is xoshiro256** seeded through splitmix64 so the sequence
/// does not depend on the standard library's distribution implementations.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view stream_label);

    std::uint64_t seed() const { return seed_; }
    const std::string& stream_label() const { return label_; }

    std::uint64_t next_u64();

    /// Uniform in [0, 1), 53-bit mantissa.
    double uniform();

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via the Marsaglia polar method (sqrt/log only, so the
    /// sequence is stable across libm variants that matter here).
    double gaussian();

private:
    std::uint64_t seed_;
    std::string label_;
    std::uint64_t state_[4];
};

}  // namespace hieropt
