#pragma once

#include <cstdint>
#include <cstddef>
#include <random>

namespace ovcyst {

// Seeded generator with distributions written out by hand so sequences are
// identical across standard library implementations. The engine itself is
// std::mt19937_64, whose output is fully specified.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on {0, ..., n - 1}; n must be positive.
    std::size_t index(std::size_t n);

    // Standard normal (Box-Muller, one draw per call).
    double normal();

    // Poisson(mean) by inversion; intended for small means.
    int poisson(double mean);

private:
    std::mt19937_64 engine_;
};

// Independent child seed for stream `stream` of `seed` (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ovcyst
